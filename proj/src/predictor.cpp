#include "surfvox/predictor.hpp"

#include "surfvox/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace surfvox {

namespace {

constexpr double kMinVariance = 1e-12;

void check_compatible(const CvcVolume& a, const CvcVolume& b) {
  if (a.cube_index != b.cube_index) {
    throw Error(ErrorCode::ShapeMismatch, "CVCs belong to different cubes");
  }
  if (a.side() != b.side() || a.valid.side() != a.side() || b.valid.side() != b.side()) {
    throw Error(ErrorCode::ShapeMismatch, "CVC sides differ");
  }
}

ProbabilityCube empty_result(const CvcVolume& a, const CvcVolume& b) {
  ProbabilityCube out;
  out.cube_index = a.cube_index;
  out.pair = make_pair_ordered(a.view_id, b.view_id);
  out.p = Volume<double>(a.side(), 0.0);
  out.valid = Mask(a.side(), 0);
  for (std::size_t idx = 0; idx < out.valid.size(); ++idx) {
    out.valid[idx] = (a.valid[idx] && b.valid[idx]) ? 1 : 0;
  }
  return out;
}

}  // namespace

void PredictorSpec::validate() const {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorCode::InvalidConfig, "predictor window must be an odd integer >= 1");
  }
  if (!(sharpness > 0.0) || !std::isfinite(sharpness)) {
    throw Error(ErrorCode::InvalidConfig, "predictor sharpness must be positive");
  }
}

ProbabilityCube ZnccPredictor::predict(const CvcVolume& a, const CvcVolume& b,
                                       const PredictorSpec& spec) const {
  spec.validate();
  check_compatible(a, b);
  ProbabilityCube out = empty_result(a, b);
  const Volume<double> ga = cvc_gray(a);
  const Volume<double> gb = cvc_gray(b);
  const int side = a.side();
  const int radius = spec.window / 2;
  const int window_voxels = spec.window * spec.window * spec.window;
  const int min_support = (window_voxels + 1) / 2;

  std::vector<double> wa;
  std::vector<double> wb;
  wa.reserve(window_voxels);
  wb.reserve(window_voxels);

  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      for (int k = 0; k < side; ++k) {
        const std::size_t idx = out.p.linear(i, j, k);
        if (!out.valid[idx]) continue;

        wa.clear();
        wb.clear();
        for (int di = std::max(0, i - radius); di <= std::min(side - 1, i + radius); ++di) {
          for (int dj = std::max(0, j - radius); dj <= std::min(side - 1, j + radius); ++dj) {
            for (int dk = std::max(0, k - radius); dk <= std::min(side - 1, k + radius); ++dk) {
              const std::size_t n = out.p.linear(di, dj, dk);
              if (!out.valid[n]) continue;
              wa.push_back(ga[n]);
              wb.push_back(gb[n]);
            }
          }
        }
        if (static_cast<int>(wa.size()) < min_support) continue;

        double mean_a = 0.0;
        double mean_b = 0.0;
        for (std::size_t t = 0; t < wa.size(); ++t) {
          mean_a += wa[t];
          mean_b += wb[t];
        }
        mean_a /= static_cast<double>(wa.size());
        mean_b /= static_cast<double>(wb.size());

        double cov = 0.0;
        double var_a = 0.0;
        double var_b = 0.0;
        for (std::size_t t = 0; t < wa.size(); ++t) {
          const double da = wa[t] - mean_a;
          const double db = wb[t] - mean_b;
          cov += da * db;
          var_a += da * da;
          var_b += db * db;
        }
        double z = 0.0;
        if (var_a > kMinVariance && var_b > kMinVariance) {
          z = std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
        }
        out.p[idx] = std::pow(0.5 * (z + 1.0), spec.sharpness);
      }
    }
  }
  return out;
}

ProbabilityCube ConstantHalfPredictor::predict(const CvcVolume& a, const CvcVolume& b,
                                               const PredictorSpec& /*spec*/) const {
  check_compatible(a, b);
  ProbabilityCube out = empty_result(a, b);
  for (std::size_t idx = 0; idx < out.p.size(); ++idx) {
    if (out.valid[idx]) out.p[idx] = 0.5;
  }
  return out;
}

namespace {

struct Registry {
  ZnccPredictor zncc;
  ConstantHalfPredictor constant_half;

  const Predictor* find(std::string_view kind) const {
    if (kind == zncc.name()) return &zncc;
    if (kind == constant_half.name()) return &constant_half;
    return nullptr;
  }
};

const Registry& registry() {
  static const Registry instance;
  return instance;
}

}  // namespace

const Predictor& lookup_predictor(std::string_view kind) {
  const Predictor* p = registry().find(kind);
  if (!p) throw Error(ErrorCode::UnknownPredictor, "no predictor named '" + std::string(kind) + "'");
  return *p;
}

std::vector<std::string> registered_predictors() { return {"zncc", "constant-half"}; }

ProbabilityCube predict_pair(const CvcVolume& a, const CvcVolume& b, const PredictorSpec& spec) {
  return lookup_predictor(spec.kind).predict(a, b, spec);
}

}  // namespace surfvox
