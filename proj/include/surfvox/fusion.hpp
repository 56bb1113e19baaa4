#pragma once

#include "surfvox/geometry.hpp"
#include "surfvox/predictor.hpp"
#include "surfvox/weighting.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace surfvox {

// Ray-pooling votes: per voxel, the number of views in which it is the
// most confident voxel of its pixel bucket.
struct VoteField {
  Volume<std::uint16_t> votes;
  int views_seeing = 0;

  double fraction(std::size_t idx) const {
    return views_seeing > 0 ? static_cast<double>(votes[idx]) / views_seeing : 0.0;
  }
};

struct FusedCube {
  CubeIndex cube_index;
  Volume<double> p;
  Mask valid;  // at least one pair valid at the voxel
  std::vector<PairEntry> pair_set;
  VoteField votes;  // filled by ray_votes

  int side() const { return p.side(); }
};

// All pairs (i < j by view id) whose center patches are both on-frame.
// Throws TooFewViews for fewer than two views.
std::vector<ViewPair> enumerate_pairs(std::span<const CameraView> views, const Cube& cube);

// Keeps the n_v highest-weight entries (ties broken by smaller pair) and
// renormalizes their weights to sum to one.
std::vector<PairEntry> select_pairs(const PairWeighting& weighting, int n_v);

// Per-voxel weighted mean over pairs valid at that voxel. Weights are
// canonicalized relative to the largest and the pairs are summed in pair
// order, so rescaling or reordering the inputs does not change the output.
// Throws ShapeMismatch for inconsistent inputs and ZeroWeightSum for
// weights that are negative, non-finite, or sum to zero.
FusedCube fuse(std::span<const ProbabilityCube> prob_cubes, std::span<const double> weights);

}  // namespace surfvox
