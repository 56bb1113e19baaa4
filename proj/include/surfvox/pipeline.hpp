#pragma once

#include "surfvox/binarize.hpp"
#include "surfvox/config.hpp"
#include "surfvox/fusion.hpp"
#include "surfvox/scene_io.hpp"
#include "surfvox/weighting.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace surfvox {

struct Models {
  std::optional<WeightNet> net;  // heuristic scoring when absent
  GateModel gate;
};

Models load_models(const PipelineConfig& config);

// Candidate pairs of one cube with their geometry and appearance cues.
struct CubeCandidates {
  std::vector<ViewPair> pairs;
  std::vector<double> theta;
  std::vector<double> d;
  std::map<int, PatchEmbedding> embeddings;  // by view id
};

// `views` must have distinct ids.
CubeCandidates describe_cube(const Cube& cube, std::span<const CameraView> views);

// Distinct views of the selected pairs in id order. These are the views that
// vote during ray pooling.
std::vector<CameraView> pair_views(std::span<const CameraView> views, std::span<const PairEntry> pairs);

enum class CubeStatus { Fused, Rejected, NoPairs };

struct CubeOutcome {
  CubeIndex index;
  CubeStatus status = CubeStatus::NoPairs;
  std::size_t candidate_pairs = 0;
  std::optional<FusedCube> fused;  // votes filled when status is Fused
};

// Gate, weight, select, predict and fuse one cube. Reads only its inputs.
CubeOutcome process_cube(const Cube& cube, std::span<const CameraView> views, const PipelineConfig& config,
                         const Models& models);

// Ordered key=value lines.
class RunReport {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  std::optional<std::string> get(const std::string& key) const;
  std::string text() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

struct Reconstruction {
  CubeLattice lattice;
  std::vector<SurfaceCube> surfaces;  // fused cubes only, in lattice order
  std::vector<CubeIndex> rejected;
  std::string ply;
  RunReport report;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions are
// rethrown after all workers finish, lowest index first.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

Reconstruction reconstruct(std::span<const CameraView> views, const BBox& bbox, double voxel_size,
                           const PipelineConfig& config, const Models& models);

// Loads views and models, resolving voxel_size from the config, then the
// manifest, then the default.
Reconstruction reconstruct(const SceneManifest& scene, const PipelineConfig& config);

double resolve_voxel_size(const SceneManifest& scene, const PipelineConfig& config);

}  // namespace surfvox
