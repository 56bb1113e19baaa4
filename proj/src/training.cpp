#include "surfvox/training.hpp"

#include "surfvox/cvc.hpp"
#include "surfvox/error.hpp"
#include "surfvox/pipeline.hpp"
#include "surfvox/predictor.hpp"
#include "surfvox/scene_io.hpp"

#include <algorithm>
#include <map>

namespace surfvox {

namespace fs = std::filesystem;

TrainingScene load_training_scene(const fs::path& manifest_path) {
  const SceneManifest manifest = load_manifest(manifest_path);
  if (!manifest.gt_path) {
    throw Error(ErrorCode::EmptyGroundTruth, manifest_path.string() + " has no ground truth");
  }
  if (!manifest.voxel_size) throw Error(ErrorCode::InvalidConfig, manifest_path.string() + " has no voxel_size");
  TrainingScene scene;
  scene.views = load_views(manifest);
  scene.bbox = manifest.bbox;
  scene.voxel_size = *manifest.voxel_size;
  const auto grid = load_occgrid(*manifest.gt_path);
  for (const auto& g : grid.occupied()) scene.gt.insert(g);
  if (scene.gt.empty()) throw Error(ErrorCode::EmptyGroundTruth, manifest_path.string() + ": empty ground truth");
  return scene;
}

std::vector<fs::path> find_scene_manifests(const fs::path& dir) {
  std::vector<fs::path> out;
  if (fs::is_regular_file(dir / "scene.txt")) out.push_back(dir / "scene.txt");
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && fs::is_regular_file(entry.path() / "scene.txt")) {
        out.push_back(entry.path() / "scene.txt");
      }
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "no scene.txt found under " + dir.string());
  return out;
}

std::vector<PairSample> collect_pair_samples(const TrainingScene& scene, const PipelineConfig& config) {
  config.validate();
  const CubeLattice lattice = build_lattice(scene.bbox, scene.voxel_size, config.side, config.stride);
  std::vector<std::vector<PairSample>> per_cube(lattice.cubes.size());

  parallel_for(lattice.cubes.size(), config.threads, [&](std::size_t c) {
    const Cube& cube = lattice.cubes[c];
    Mask truth(cube.side, 0);
    std::size_t truth_count = 0;
    for (int i = 0; i < cube.side; ++i) {
      for (int j = 0; j < cube.side; ++j) {
        for (int k = 0; k < cube.side; ++k) {
          if (scene.gt.count(cube.global_voxel(i, j, k))) {
            truth(i, j, k) = 1;
            ++truth_count;
          }
        }
      }
    }
    if (truth_count == 0) return;

    const CubeCandidates cand = describe_cube(cube, scene.views);
    std::map<int, CvcVolume> cvcs;
    for (const auto& [id, emb] : cand.embeddings) {
      for (const auto& v : scene.views) {
        if (v.id == id) cvcs.emplace(id, build_cvc(cube, v));
      }
    }
    for (std::size_t p = 0; p < cand.pairs.size(); ++p) {
      const ViewPair pair = cand.pairs[p];
      const ProbabilityCube prob = predict_pair(cvcs.at(pair.first), cvcs.at(pair.second), config.predictor);
      std::size_t inter = 0;
      std::size_t uni = 0;
      for (std::size_t idx = 0; idx < prob.p.size(); ++idx) {
        const bool predicted = prob.valid[idx] && prob.p[idx] > config.tau;
        const bool actual = truth[idx] != 0;
        inter += (predicted && actual) ? 1 : 0;
        uni += (predicted || actual) ? 1 : 0;
      }
      PairSample s;
      s.cube_index = cube.index;
      s.pair = pair;
      s.theta = cand.theta[p];
      s.d = cand.d[p];
      s.e_i = cand.embeddings.at(pair.first).vec;
      s.e_j = cand.embeddings.at(pair.second).vec;
      s.iou = uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
      per_cube[c].push_back(s);
    }
  });

  std::vector<PairSample> out;
  for (auto& v : per_cube) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<WeightSample> weight_samples(std::span<const PairSample> pairs) {
  std::vector<WeightSample> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p.theta, p.d, p.e_i, p.e_j, p.iou});
  return out;
}

std::vector<GateSample> gate_samples(std::span<const PairSample> pairs, double min_iou) {
  std::vector<GateSample> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p.d, p.iou >= min_iou});
  return out;
}

}  // namespace surfvox
