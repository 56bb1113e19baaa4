#pragma once

#include "surfvox/fusion.hpp"
#include "surfvox/geometry.hpp"

#include <map>
#include <span>
#include <vector>

namespace surfvox {

struct SurfaceCube {
  CubeIndex cube_index;
  Mask occ;
  double tau_used = 0.0;

  int side() const { return occ.side(); }
  std::size_t occupied() const;
};

struct ThresholdField {
  std::map<CubeIndex, double> tau;
  int iteration_count = 0;
  bool converged = false;
  std::vector<double> energy_history;  // total energy, index 0 = initial state
};

// Buckets the cube's voxels by rounded projected pixel in each view; the
// highest-p voxel of every bucket (ties to the smallest linear index) gets
// that view's vote. Views onto which no voxel projects in-frame are not
// counted. Throws NoViews for an empty view list.
VoteField ray_votes(const FusedCube& fused, std::span<const CameraView> views, const Cube& cube);

// occ = (votes >= gamma * views_seeing) && (p > tau).
SurfaceCube binarize_cube(const FusedCube& fused, const VoteField& votes, double tau, double gamma);

// Disagreements minus beta times agreements over the overlap box.
double psi(const SurfaceCube& a, const Cube& cube_a, const SurfaceCube& b, const Cube& cube_b,
           const VoxelBox& overlap_box, double beta);

struct ThresholdOptions {
  double gamma = 0.8;
  double beta = 6.0;
  std::vector<double> candidates;  // strictly ascending, within [0.5, 1)
  int max_sweeps = 10;
};

// Default candidate grid: `count` evenly spaced values in [0.5, 0.99].
std::vector<double> default_tau_candidates(int count = 50);

// Per-cube thresholds minimizing the overlap energy with face neighbors.
// `fused` holds the cubes that take part (with votes filled); lattice cubes
// missing from it are treated as absent. Each sweep updates the two lattice
// parity classes in turn, every cube against a snapshot of its neighbors, so
// the result does not depend on iteration order or thread count.
// Throws InvalidCandidates for an empty or malformed grid.
ThresholdField optimize_thresholds(std::span<const FusedCube> fused, const CubeLattice& lattice,
                                   const ThresholdOptions& options);

// Sum over cubes of E(tau_C) = sum over present face neighbors of psi.
double total_energy(std::span<const FusedCube> fused, const CubeLattice& lattice,
                    const std::map<CubeIndex, double>& tau, double gamma, double beta);

// Keeps occupied voxels that are the highest-p occupied voxel of their ray
// bucket in at least gamma of the views seeing the cube.
SurfaceCube thin(const SurfaceCube& surf, const FusedCube& fused, std::span<const CameraView> views,
                 const Cube& cube, double gamma);

}  // namespace surfvox
