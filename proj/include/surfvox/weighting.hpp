#pragma once

#include "surfvox/descriptor.hpp"
#include "surfvox/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace surfvox {

inline constexpr int kWeightNetHidden = 100;
inline constexpr int kWeightNetInput = 2 + 2 * kEmbeddingDim;  // theta, d, e_i, e_j

// Shallow scorer r(.): sigmoid hidden layer, single linear output.
struct WeightNet {
  Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(kWeightNetHidden, kWeightNetInput);
  Eigen::VectorXd b1 = Eigen::VectorXd::Zero(kWeightNetHidden);
  Eigen::RowVectorXd w2 = Eigen::RowVectorXd::Zero(kWeightNetHidden);
  double b2 = 0.0;

  bool all_finite() const;
  bool operator==(const WeightNet& other) const;
};

using Embedding = std::array<double, kEmbeddingDim>;

double raw_score(const WeightNet& net, double theta, double d, const Embedding& e_i,
                 const Embedding& e_j);

// Max-subtracted softmax. Throws EmptyInput on an empty list.
std::vector<double> softmax_weights(std::span<const double> scores);

struct HeuristicParams {
  double theta0 = 15.0 * std::numbers::pi / 180.0;
  double sigma_theta = 10.0 * std::numbers::pi / 180.0;
  double lambda = 4.0;
};

// -((theta - theta0) / sigma)^2 - lambda * d; higher is better.
double heuristic_score(double theta, double d, const HeuristicParams& params = {});

struct WeightSample {
  double theta = 0.0;
  double d = 0.0;
  Embedding e_i{};
  Embedding e_j{};
  double quality = 0.0;  // target in [0,1]
};

struct WeightFitOptions {
  int epochs = 200;
  double learning_rate = 0.5;
  std::uint64_t seed = 0;
  int batch_size = 32;
  double init_scale = 0.1;  // 0 gives an all-zero start
};

struct WeightFitResult {
  WeightNet net;
  std::vector<double> loss_history;  // full-data loss, index 0 = before the first epoch
};

// Mini-batch gradient descent on mean((sigmoid(raw_score) - quality)^2).
// Returns the lowest-loss parameters seen, so the final loss never exceeds
// the initial one. Throws EmptyInput for no samples.
WeightFitResult fit_weightnet_detailed(std::span<const WeightSample> samples,
                                       const WeightFitOptions& options = {});
WeightNet fit_weightnet(std::span<const WeightSample> samples, const WeightFitOptions& options = {});

double weightnet_loss(const WeightNet& net, std::span<const WeightSample> samples);

// Logistic regression on the scalar dissimilarity.
struct GateModel {
  double slope = -8.0;
  double intercept = 8.0 * std::numbers::sqrt2;  // boundary at d = sqrt(2), orthogonal embeddings

  double similarity(double d) const;
  bool operator==(const GateModel&) const = default;
};

// Accept iff at least n_min dissimilarities have similarity probability >= 0.5.
bool gate_cube(const GateModel& gate, std::span<const double> dissims, int n_min);

struct GateSample {
  double d = 0.0;
  bool similar = false;
};

// Full-batch gradient descent on the mean logistic loss, starting from zero.
// Throws SingleClass unless both labels are present.
GateModel fit_gate(std::span<const GateSample> samples, int epochs = 2000, double learning_rate = 1.0);

struct PairEntry {
  ViewPair pair;
  double theta = 0.0;
  double d = 0.0;
  double raw_score = 0.0;
  double w = 0.0;
};

// Softmax weights over one cube's candidate pairs.
struct PairWeighting {
  CubeIndex cube_index;
  std::vector<PairEntry> entries;
};

// Fills entries[i].w with the softmax of entries[i].raw_score.
void normalize_weights(PairWeighting& weighting);

// Flat text model formats. Numbers use shortest round-trip formatting.
void write_weightnet(std::ostream& out, const WeightNet& net);
WeightNet read_weightnet(std::istream& in);
void write_gate(std::ostream& out, const GateModel& gate);
GateModel read_gate(std::istream& in);

WeightNet load_weightnet(const std::string& path);
void save_weightnet(const std::string& path, const WeightNet& net);
GateModel load_gate(const std::string& path);
void save_gate(const std::string& path, const GateModel& gate);

}  // namespace surfvox
