#pragma once

#include "surfvox/predictor.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace surfvox {

struct PipelineConfig {
  int side = 32;
  int stride = 16;
  std::optional<double> voxel_size;  // unset: take it from the scene, else 0.03125
  double gamma = 0.8;
  double tau = 0.7;
  bool adaptive = false;
  double beta = 6.0;
  int tau_candidates = 50;
  int max_sweeps = 10;
  int n_v = 5;
  int n_min = 3;
  PredictorSpec predictor;
  std::string weights = "heuristic";  // or a weight-net model path
  std::string gate = "default";       // or a gate model path
  bool thinning = false;
  int threads = 1;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const PipelineConfig&) const;
};

inline constexpr double kDefaultVoxelSize = 0.03125;

// key=value lines; '#' starts a comment. Unknown or repeated keys and
// malformed values throw InvalidConfig.
PipelineConfig parse_config(std::istream& in);
void write_config(std::ostream& out, const PipelineConfig& config);
PipelineConfig load_config(const std::string& path);

}  // namespace surfvox
