#include "surfvox/error.hpp"
#include "surfvox/synth.hpp"

#include <limits>

namespace surfvox {

namespace {

double nearest_sq(const Vec3& q, std::span<const Vec3> cloud) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : cloud) best = std::min(best, (p - q).squaredNorm());
  return best;
}

}  // namespace

EvalReport evaluate(std::span<const Vec3> predicted, std::span<const Vec3> gt, double eps) {
  if (gt.empty()) throw Error(ErrorCode::EmptyGroundTruth, "ground truth point set is empty");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "eps must be positive");

  EvalReport report;
  report.predicted_count = predicted.size();
  report.gt_count = gt.size();

  if (!predicted.empty()) {
    double sum = 0.0;
    for (const auto& p : predicted) sum += std::sqrt(nearest_sq(p, gt));
    report.accuracy = sum / static_cast<double>(predicted.size());
    report.accuracy_defined = true;
  }

  std::size_t covered = 0;
  if (!predicted.empty()) {
    const double eps_sq = eps * eps;
    for (const auto& g : gt) {
      if (nearest_sq(g, predicted) <= eps_sq) ++covered;
    }
  }
  report.completeness = static_cast<double>(covered) / static_cast<double>(gt.size());
  return report;
}

}  // namespace surfvox
