#include "surfvox/config.hpp"

#include "surfvox/error.hpp"
#include "surfvox/numeric_text.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

namespace surfvox {

namespace {

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* expected) {
  throw Error(ErrorCode::InvalidConfig,
              "config key '" + key + "': expected " + expected + ", got '" + std::string(value) + "'");
}

double as_double(const std::string& key, std::string_view value) {
  const auto v = parse_double(value);
  if (!v || !std::isfinite(*v)) bad_value(key, value, "a finite number");
  return *v;
}

int as_int(const std::string& key, std::string_view value) {
  const auto v = parse_int(value);
  if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
    bad_value(key, value, "an integer");
  }
  return static_cast<int>(*v);
}

bool as_bool(const std::string& key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "true or false");
}

std::uint64_t as_seed(const std::string& key, std::string_view value) {
  std::uint64_t v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    bad_value(key, value, "a non-negative integer");
  }
  return v;
}

using Setter = std::function<void(PipelineConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"s", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.side = as_int(k, v); }},
      {"stride", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.stride = as_int(k, v); }},
      {"voxel_size",
       [](PipelineConfig& c, const std::string& k, std::string_view v) { c.voxel_size = as_double(k, v); }},
      {"gamma", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.gamma = as_double(k, v); }},
      {"tau", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.tau = as_double(k, v); }},
      {"adaptive",
       [](PipelineConfig& c, const std::string& k, std::string_view v) { c.adaptive = as_bool(k, v); }},
      {"beta", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.beta = as_double(k, v); }},
      {"tau_candidates",
       [](PipelineConfig& c, const std::string& k, std::string_view v) { c.tau_candidates = as_int(k, v); }},
      {"max_sweeps",
       [](PipelineConfig& c, const std::string& k, std::string_view v) { c.max_sweeps = as_int(k, v); }},
      {"n_v", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.n_v = as_int(k, v); }},
      {"n_min", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.n_min = as_int(k, v); }},
      {"predictor",
       [](PipelineConfig& c, const std::string&, std::string_view v) { c.predictor.kind = std::string(v); }},
      {"window",
       [](PipelineConfig& c, const std::string& k, std::string_view v) { c.predictor.window = as_int(k, v); }},
      {"sharpness",
       [](PipelineConfig& c, const std::string& k, std::string_view v) { c.predictor.sharpness = as_double(k, v); }},
      {"weights", [](PipelineConfig& c, const std::string&, std::string_view v) { c.weights = std::string(v); }},
      {"gate", [](PipelineConfig& c, const std::string&, std::string_view v) { c.gate = std::string(v); }},
      {"thinning",
       [](PipelineConfig& c, const std::string& k, std::string_view v) { c.thinning = as_bool(k, v); }},
      {"threads", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.threads = as_int(k, v); }},
      {"seed", [](PipelineConfig& c, const std::string& k, std::string_view v) { c.seed = as_seed(k, v); }},
  };
  return table;
}

}  // namespace

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (side < 2) fail("s must be >= 2");
  if (stride < 1 || stride > side) fail("stride must lie in [1, s]");
  if (voxel_size && !(*voxel_size > 0.0)) fail("voxel_size must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must lie in [0, 1]");
  if (!(tau >= 0.0 && tau < 1.0)) fail("tau must lie in [0, 1)");
  if (tau_candidates < 1) fail("tau_candidates must be positive");
  if (max_sweeps < 1) fail("max_sweeps must be positive");
  if (n_v < 1) fail("n_v must be positive");
  if (n_min < 0) fail("n_min must be non-negative");
  if (threads < 1) fail("threads must be positive");
  if (weights.empty()) fail("weights must be 'heuristic' or a model path");
  if (gate.empty()) fail("gate must be 'default' or a model path");
  lookup_predictor(predictor.kind);
  predictor.validate();
}

bool PipelineConfig::operator==(const PipelineConfig& o) const {
  return side == o.side && stride == o.stride && voxel_size == o.voxel_size && gamma == o.gamma &&
         tau == o.tau && adaptive == o.adaptive && beta == o.beta && tau_candidates == o.tau_candidates &&
         max_sweeps == o.max_sweeps && n_v == o.n_v && n_min == o.n_min &&
         predictor.kind == o.predictor.kind && predictor.window == o.predictor.window &&
         predictor.sharpness == o.predictor.sharpness && weights == o.weights && gate == o.gate &&
         thinning == o.thinning && threads == o.threads && seed == o.seed;
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    if (!seen.insert(key).second) throw Error(ErrorCode::InvalidConfig, "repeated config key '" + key + "'");
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

void write_config(std::ostream& out, const PipelineConfig& c) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  out << "s=" << c.side << '\n';
  out << "stride=" << c.stride << '\n';
  if (c.voxel_size) out << "voxel_size=" << format_double(*c.voxel_size) << '\n';
  out << "gamma=" << format_double(c.gamma) << '\n';
  out << "tau=" << format_double(c.tau) << '\n';
  out << "adaptive=" << b(c.adaptive) << '\n';
  out << "beta=" << format_double(c.beta) << '\n';
  out << "tau_candidates=" << c.tau_candidates << '\n';
  out << "max_sweeps=" << c.max_sweeps << '\n';
  out << "n_v=" << c.n_v << '\n';
  out << "n_min=" << c.n_min << '\n';
  out << "predictor=" << c.predictor.kind << '\n';
  out << "window=" << c.predictor.window << '\n';
  out << "sharpness=" << format_double(c.predictor.sharpness) << '\n';
  out << "weights=" << c.weights << '\n';
  out << "gate=" << c.gate << '\n';
  out << "thinning=" << b(c.thinning) << '\n';
  out << "threads=" << c.threads << '\n';
  out << "seed=" << c.seed << '\n';
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  return parse_config(in);
}

}  // namespace surfvox
