#include "surfvox/fusion.hpp"

#include "surfvox/descriptor.hpp"
#include "surfvox/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace surfvox {

namespace {

// Significant bits kept when canonicalizing weight ratios. A rescaled weight
// vector differs from the original by a few ulps after division, far below
// this resolution, while the rounding itself perturbs p by at most 2^-41.
constexpr int kWeightBits = 40;

double canonical_ratio(double w, double w_max) {
  const double r = w / w_max;
  if (r == 0.0) return 0.0;
  int exponent = 0;
  const double mantissa = std::frexp(r, &exponent);
  const double snapped = std::nearbyint(std::ldexp(mantissa, kWeightBits));
  return std::ldexp(snapped, exponent - kWeightBits);
}

}  // namespace

std::vector<ViewPair> enumerate_pairs(std::span<const CameraView> views, const Cube& cube) {
  if (views.size() < 2) throw Error(ErrorCode::TooFewViews, "view pairs need at least two views");
  std::vector<int> on_frame;
  for (const auto& view : views) {
    if (extract_patch(cube, view)) on_frame.push_back(view.id);
  }
  std::sort(on_frame.begin(), on_frame.end());
  std::vector<ViewPair> pairs;
  for (std::size_t a = 0; a < on_frame.size(); ++a) {
    for (std::size_t b = a + 1; b < on_frame.size(); ++b) {
      pairs.push_back({on_frame[a], on_frame[b]});
    }
  }
  return pairs;
}

std::vector<PairEntry> select_pairs(const PairWeighting& weighting, int n_v) {
  if (n_v < 1) throw Error(ErrorCode::InvalidConfig, "N_v must be >= 1");
  std::vector<PairEntry> entries = weighting.entries;
  std::sort(entries.begin(), entries.end(), [](const PairEntry& a, const PairEntry& b) {
    if (a.w != b.w) return a.w > b.w;
    return a.pair < b.pair;
  });
  if (static_cast<int>(entries.size()) > n_v) entries.resize(n_v);

  double total = 0.0;
  for (const auto& e : entries) total += e.w;
  for (auto& e : entries) {
    e.w = total > 0.0 ? e.w / total : 1.0 / static_cast<double>(entries.size());
  }
  return entries;
}

FusedCube fuse(std::span<const ProbabilityCube> prob_cubes, std::span<const double> weights) {
  if (prob_cubes.size() != weights.size()) {
    throw Error(ErrorCode::ShapeMismatch, "probability cube and weight counts differ");
  }
  if (prob_cubes.empty()) throw Error(ErrorCode::ZeroWeightSum, "no pairs to fuse");
  const int side = prob_cubes.front().side();
  for (const auto& pc : prob_cubes) {
    if (pc.cube_index != prob_cubes.front().cube_index) {
      throw Error(ErrorCode::ShapeMismatch, "probability cubes belong to different cubes");
    }
    if (pc.side() != side || pc.valid.side() != side) {
      throw Error(ErrorCode::ShapeMismatch, "probability cube sides differ");
    }
  }
  double w_max = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::ZeroWeightSum, "weights must be finite and >= 0");
    w_max = std::max(w_max, w);
  }
  if (!(w_max > 0.0)) throw Error(ErrorCode::ZeroWeightSum, "weights sum to zero");

  struct Term {
    const ProbabilityCube* cube;
    double ratio;
    double w;
  };
  std::vector<Term> terms;
  terms.reserve(prob_cubes.size());
  for (std::size_t t = 0; t < prob_cubes.size(); ++t) {
    terms.push_back({&prob_cubes[t], canonical_ratio(weights[t], w_max), weights[t]});
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.cube->pair != b.cube->pair) return a.cube->pair < b.cube->pair;
    return a.ratio < b.ratio;
  });

  FusedCube out;
  out.cube_index = prob_cubes.front().cube_index;
  out.p = Volume<double>(side, 0.0);
  out.valid = Mask(side, 0);
  double ratio_total = 0.0;
  for (const auto& t : terms) ratio_total += t.ratio;
  for (const auto& t : terms) {
    out.pair_set.push_back({t.cube->pair, 0.0, 0.0, 0.0, t.ratio / ratio_total});
  }

  for (std::size_t idx = 0; idx < out.p.size(); ++idx) {
    double num = 0.0;
    double den = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    bool any = false;
    for (const auto& t : terms) {
      if (!t.cube->valid[idx]) continue;
      const double p = t.cube->p[idx];
      num += t.ratio * p;
      den += t.ratio;
      lo = std::min(lo, p);
      hi = std::max(hi, p);
      any = true;
    }
    if (!any) continue;
    out.valid[idx] = 1;
    // A positive weight can round to a zero ratio only when dwarfed by
    // the largest weight; those pairs alone then carry an unweighted mean.
    if (den > 0.0) {
      out.p[idx] = std::clamp(num / den, lo, hi);
    } else {
      double sum = 0.0;
      int count = 0;
      for (const auto& t : terms) {
        if (t.cube->valid[idx] && t.w > 0.0) {
          sum += t.cube->p[idx];
          ++count;
        }
      }
      out.p[idx] = count > 0 ? std::clamp(sum / count, lo, hi) : 0.0;
    }
  }
  return out;
}

}  // namespace surfvox
