#include "surfvox/pipeline.hpp"

#include "surfvox/cvc.hpp"
#include "surfvox/descriptor.hpp"
#include "surfvox/error.hpp"
#include "surfvox/numeric_text.hpp"
#include "surfvox/predictor.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <set>
#include <sstream>
#include <thread>

namespace surfvox {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string cube_name(const CubeIndex& c) {
  return "cube (" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

const CameraView& view_by_id(std::span<const CameraView> views, int id) {
  for (const auto& v : views) {
    if (v.id == id) return v;
  }
  throw Error(ErrorCode::InvalidConfig, "no view with id " + std::to_string(id));
}

CubeOutcome process_cube_unchecked(const Cube& cube, std::span<const CameraView> views,
                                   const PipelineConfig& config, const Models& models) {
  CubeOutcome out;
  out.index = cube.index;
  const CubeCandidates cand = describe_cube(cube, views);
  out.candidate_pairs = cand.pairs.size();
  if (cand.pairs.empty()) return out;

  if (!gate_cube(models.gate, cand.d, config.n_min)) {
    out.status = CubeStatus::Rejected;
    return out;
  }

  PairWeighting weighting;
  weighting.cube_index = cube.index;
  for (std::size_t p = 0; p < cand.pairs.size(); ++p) {
    PairEntry entry;
    entry.pair = cand.pairs[p];
    entry.theta = cand.theta[p];
    entry.d = cand.d[p];
    if (models.net) {
      entry.raw_score = raw_score(*models.net, entry.theta, entry.d, cand.embeddings.at(entry.pair.first).vec,
                                  cand.embeddings.at(entry.pair.second).vec);
    } else {
      entry.raw_score = heuristic_score(entry.theta, entry.d);
    }
    weighting.entries.push_back(entry);
  }
  normalize_weights(weighting);
  const std::vector<PairEntry> selected = select_pairs(weighting, config.n_v);

  std::map<int, CvcVolume> cvcs;
  for (const auto& e : selected) {
    for (int id : {e.pair.first, e.pair.second}) {
      if (!cvcs.count(id)) cvcs.emplace(id, build_cvc(cube, view_by_id(views, id)));
    }
  }
  std::vector<ProbabilityCube> probs;
  std::vector<double> weights;
  for (const auto& e : selected) {
    probs.push_back(predict_pair(cvcs.at(e.pair.first), cvcs.at(e.pair.second), config.predictor));
    weights.push_back(e.w);
  }
  FusedCube fused = fuse(probs, weights);
  fused.pair_set = selected;

  fused.votes = ray_votes(fused, pair_views(views, selected), cube);
  out.fused = std::move(fused);
  out.status = CubeStatus::Fused;
  return out;
}

}  // namespace

std::vector<CameraView> pair_views(std::span<const CameraView> views, std::span<const PairEntry> pairs) {
  std::set<int> ids;
  for (const auto& e : pairs) {
    ids.insert(e.pair.first);
    ids.insert(e.pair.second);
  }
  std::vector<CameraView> out;
  for (int id : ids) out.push_back(view_by_id(views, id));
  return out;
}

Models load_models(const PipelineConfig& config) {
  Models models;
  if (config.weights != "heuristic") models.net = load_weightnet(config.weights);
  if (config.gate != "default") models.gate = load_gate(config.gate);
  return models;
}

CubeCandidates describe_cube(const Cube& cube, std::span<const CameraView> views) {
  CubeCandidates out;
  if (views.size() < 2) return out;
  out.pairs = enumerate_pairs(views, cube);
  for (const auto& pair : out.pairs) {
    for (int id : {pair.first, pair.second}) {
      if (out.embeddings.count(id)) continue;
      const auto patch = extract_patch(cube, view_by_id(views, id));
      if (!patch) throw Error(ErrorCode::InvalidConfig, "patch of a paired view left the frame");
      out.embeddings.emplace(id, embed(*patch));
    }
  }
  for (const auto& pair : out.pairs) {
    out.theta.push_back(pair_angle(cube, view_by_id(views, pair.first), view_by_id(views, pair.second)));
    out.d.push_back(dissimilarity(out.embeddings.at(pair.first), out.embeddings.at(pair.second)));
  }
  return out;
}

CubeOutcome process_cube(const Cube& cube, std::span<const CameraView> views, const PipelineConfig& config,
                         const Models& models) {
  try {
    return process_cube_unchecked(cube, views, config, models);
  } catch (const Error& e) {
    throw Error(e.code(), cube_name(cube.index) + ": " + e.what());
  }
}

void RunReport::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : fields_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  fields_.emplace_back(key, value);
}

void RunReport::set(const std::string& key, double value) { set(key, format_double(value)); }

void RunReport::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

std::optional<std::string> RunReport::get(const std::string& key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string RunReport::text() const {
  std::string out;
  for (const auto& [k, v] : fields_) out += k + "=" + v + "\n";
  return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Reconstruction reconstruct(std::span<const CameraView> views, const BBox& bbox, double voxel_size,
                           const PipelineConfig& config, const Models& models) {
  config.validate();
  if (views.size() < 2) throw Error(ErrorCode::TooFewViews, "reconstruction needs at least two views");
  const auto t_start = Clock::now();
  Reconstruction rec;
  rec.lattice = build_lattice(bbox, voxel_size, config.side, config.stride);
  const auto& cubes = rec.lattice.cubes;

  auto t = Clock::now();
  std::vector<CubeOutcome> outcomes(cubes.size());
  parallel_for(cubes.size(), config.threads,
               [&](std::size_t i) { outcomes[i] = process_cube(cubes[i], views, config, models); });
  const double time_cubes = seconds_since(t);

  std::vector<FusedCube> fused;
  std::vector<std::size_t> fused_pos;
  long long no_pairs = 0;
  long long pairs_used = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (o.status == CubeStatus::Rejected) rec.rejected.push_back(o.index);
    if (o.status == CubeStatus::NoPairs) ++no_pairs;
    if (o.status == CubeStatus::Fused) {
      pairs_used += static_cast<long long>(o.fused->pair_set.size());
      fused.push_back(std::move(*o.fused));
      fused_pos.push_back(i);
    }
  }

  t = Clock::now();
  std::map<CubeIndex, double> tau;
  ThresholdField field;
  if (config.adaptive && !fused.empty()) {
    ThresholdOptions options;
    options.gamma = config.gamma;
    options.beta = config.beta;
    options.candidates = default_tau_candidates(config.tau_candidates);
    options.max_sweeps = config.max_sweeps;
    field = optimize_thresholds(fused, rec.lattice, options);
    tau = field.tau;
  } else {
    for (const auto& f : fused) tau[f.cube_index] = config.tau;
  }
  const double time_threshold = seconds_since(t);

  t = Clock::now();
  rec.surfaces.resize(fused.size());
  parallel_for(fused.size(), config.threads, [&](std::size_t i) {
    const FusedCube& f = fused[i];
    const Cube& cube = cubes[fused_pos[i]];
    try {
      SurfaceCube surf = binarize_cube(f, f.votes, tau.at(f.cube_index), config.gamma);
      if (config.thinning) {
        surf = thin(surf, f, pair_views(views, f.pair_set), cube, config.gamma);
      }
      rec.surfaces[i] = std::move(surf);
    } catch (const Error& e) {
      throw Error(e.code(), cube_name(cube.index) + ": " + e.what());
    }
  });
  const double time_binarize = seconds_since(t);

  t = Clock::now();
  rec.ply = write_ply(rec.surfaces, rec.lattice);
  const auto voxels = occupied_voxels(rec.surfaces, rec.lattice);
  const double time_output = seconds_since(t);

  RunReport& r = rec.report;
  r.set("cubes_total", static_cast<long long>(cubes.size()));
  r.set("cubes_fused", static_cast<long long>(fused.size()));
  r.set("cubes_rejected", static_cast<long long>(rec.rejected.size()));
  r.set("cubes_without_pairs", no_pairs);
  r.set("pairs_fused", pairs_used);
  r.set("voxels_occupied", static_cast<long long>(voxels.size()));
  r.set("status", voxels.empty() ? (fused.empty() ? std::string("all_cubes_skipped") : std::string("empty_surface"))
                                 : std::string("ok"));
  r.set("voxel_size", voxel_size);
  r.set("threshold_mode", std::string(config.adaptive ? "adaptive" : "fixed"));
  if (config.adaptive) {
    r.set("threshold_sweeps", static_cast<long long>(field.iteration_count));
    r.set("threshold_converged", std::string(field.converged ? "true" : "false"));
  }
  r.set("threads", static_cast<long long>(config.threads));
  r.set("seed", std::to_string(config.seed));
  r.set("time_cubes_s", time_cubes);
  r.set("time_threshold_s", time_threshold);
  r.set("time_binarize_s", time_binarize);
  r.set("time_output_s", time_output);
  r.set("time_total_s", seconds_since(t_start));
  return rec;
}

double resolve_voxel_size(const SceneManifest& scene, const PipelineConfig& config) {
  if (config.voxel_size) return *config.voxel_size;
  if (scene.voxel_size) return *scene.voxel_size;
  return kDefaultVoxelSize;
}

Reconstruction reconstruct(const SceneManifest& scene, const PipelineConfig& config) {
  config.validate();
  const auto views = load_views(scene);
  const Models models = load_models(config);
  return reconstruct(views, scene.bbox, resolve_voxel_size(scene, config), config, models);
}

}  // namespace surfvox
