#include "surfvox/weighting.hpp"

#include "surfvox/error.hpp"
#include "surfvox/numeric_text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace surfvox {

namespace {

constexpr const char* kWeightNetMagic = "surfvox-weightnet 1";
constexpr const char* kGateMagic = "surfvox-gate 1";

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::VectorXd net_input(double theta, double d, const Embedding& e_i, const Embedding& e_j) {
  Eigen::VectorXd x(kWeightNetInput);
  x[0] = theta;
  x[1] = d;
  for (int t = 0; t < kEmbeddingDim; ++t) {
    x[2 + t] = e_i[t];
    x[2 + kEmbeddingDim + t] = e_j[t];
  }
  return x;
}

Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) {
  return v.unaryExpr([](double a) { return 1.0 / (1.0 + std::exp(-a)); });
}

// Reads the next line that is not blank; throws ParseError at end of stream.
std::string next_line(std::istream& in, int& line_no, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) return line;
  }
  throw Error(ErrorCode::ParseError, std::string("unexpected end of model file reading ") + what);
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, int line_no) {
  const auto fields = split_whitespace(line);
  if (fields.size() != expected) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                           std::to_string(expected) + " values, found " +
                                           std::to_string(fields.size()));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (auto f : fields) {
    auto v = parse_double(f);
    if (!v || !std::isfinite(*v)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" +
                                             std::string(f) + "'");
    }
    out.push_back(*v);
  }
  return out;
}

template <typename Row>
void write_row(std::ostream& out, const Row& row) {
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (i) out << ' ';
    out << format_double(row[i]);
  }
  out << '\n';
}

}  // namespace

bool WeightNet::all_finite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() && std::isfinite(b2);
}

bool WeightNet::operator==(const WeightNet& other) const {
  return w1 == other.w1 && b1 == other.b1 && w2 == other.w2 && b2 == other.b2;
}

double raw_score(const WeightNet& net, double theta, double d, const Embedding& e_i,
                 const Embedding& e_j) {
  const Eigen::VectorXd hidden = sigmoid(net.w1 * net_input(theta, d, e_i, e_j) + net.b1);
  return net.w2.dot(hidden) + net.b2;
}

std::vector<double> softmax_weights(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::EmptyInput, "softmax of an empty score list");
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - top);
    total += out[i];
  }
  for (double& w : out) w /= total;
  return out;
}

double heuristic_score(double theta, double d, const HeuristicParams& params) {
  const double z = (theta - params.theta0) / params.sigma_theta;
  return -z * z - params.lambda * d;
}

double weightnet_loss(const WeightNet& net, std::span<const WeightSample> samples) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : samples) {
    const double y = sigmoid(raw_score(net, s.theta, s.d, s.e_i, s.e_j));
    total += (y - s.quality) * (y - s.quality);
  }
  return total / static_cast<double>(samples.size());
}

WeightFitResult fit_weightnet_detailed(std::span<const WeightSample> samples,
                                       const WeightFitOptions& options) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "no weight-net training samples");
  if (options.epochs < 0 || options.batch_size < 1 || !(options.learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "invalid weight-net fit options");
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> init(-options.init_scale, options.init_scale);
  WeightNet net;
  if (options.init_scale > 0.0) {
    for (Eigen::Index r = 0; r < net.w1.rows(); ++r)
      for (Eigen::Index c = 0; c < net.w1.cols(); ++c) net.w1(r, c) = init(rng);
    for (Eigen::Index r = 0; r < net.w2.size(); ++r) net.w2[r] = init(rng);
  }

  std::vector<Eigen::VectorXd> inputs;
  inputs.reserve(samples.size());
  for (const auto& s : samples) inputs.push_back(net_input(s.theta, s.d, s.e_i, s.e_j));

  WeightFitResult result;
  result.loss_history.push_back(weightnet_loss(net, samples));
  result.net = net;
  double best = result.loss_history.back();

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  Eigen::MatrixXd g_w1(kWeightNetHidden, kWeightNetInput);
  Eigen::VectorXd g_b1(kWeightNetHidden);
  Eigen::RowVectorXd g_w2(kWeightNetHidden);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t stop = std::min(order.size(), start + options.batch_size);
      g_w1.setZero();
      g_b1.setZero();
      g_w2.setZero();
      double g_b2 = 0.0;
      for (std::size_t t = start; t < stop; ++t) {
        const std::size_t n = order[t];
        const Eigen::VectorXd& x = inputs[n];
        const Eigen::VectorXd hidden = sigmoid(net.w1 * x + net.b1);
        const double y = sigmoid(net.w2.dot(hidden) + net.b2);
        const double d_score = 2.0 * (y - samples[n].quality) * y * (1.0 - y);
        g_w2 += d_score * hidden.transpose();
        g_b2 += d_score;
        const Eigen::VectorXd d_hidden =
            (d_score * net.w2.transpose()).cwiseProduct(hidden.cwiseProduct(
                Eigen::VectorXd::Ones(kWeightNetHidden) - hidden));
        g_w1.noalias() += d_hidden * x.transpose();
        g_b1 += d_hidden;
      }
      const double step = options.learning_rate / static_cast<double>(stop - start);
      net.w1 -= step * g_w1;
      net.b1 -= step * g_b1;
      net.w2 -= step * g_w2;
      net.b2 -= step * g_b2;
    }
    const double loss = weightnet_loss(net, samples);
    result.loss_history.push_back(loss);
    if (loss < best) {
      best = loss;
      result.net = net;
    }
  }
  return result;
}

WeightNet fit_weightnet(std::span<const WeightSample> samples, const WeightFitOptions& options) {
  return fit_weightnet_detailed(samples, options).net;
}

void normalize_weights(PairWeighting& weighting) {
  if (weighting.entries.empty()) return;
  std::vector<double> scores;
  scores.reserve(weighting.entries.size());
  for (const auto& e : weighting.entries) scores.push_back(e.raw_score);
  const auto w = softmax_weights(scores);
  for (std::size_t i = 0; i < w.size(); ++i) weighting.entries[i].w = w[i];
}

double GateModel::similarity(double d) const { return sigmoid(slope * d + intercept); }

bool gate_cube(const GateModel& gate, std::span<const double> dissims, int n_min) {
  if (n_min <= 0) return true;
  int passing = 0;
  for (double d : dissims) {
    if (gate.similarity(d) >= 0.5) ++passing;
  }
  return passing >= n_min;
}

GateModel fit_gate(std::span<const GateSample> samples, int epochs, double learning_rate) {
  const bool has_pos = std::any_of(samples.begin(), samples.end(), [](auto& s) { return s.similar; });
  const bool has_neg = std::any_of(samples.begin(), samples.end(), [](auto& s) { return !s.similar; });
  if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClass, "gate training needs both labels");

  GateModel model{0.0, 0.0};
  const double n = static_cast<double>(samples.size());
  for (int epoch = 0; epoch < epochs; ++epoch) {
    double g_slope = 0.0;
    double g_intercept = 0.0;
    for (const auto& s : samples) {
      const double residual = model.similarity(s.d) - (s.similar ? 1.0 : 0.0);
      g_slope += residual * s.d;
      g_intercept += residual;
    }
    model.slope -= learning_rate * g_slope / n;
    model.intercept -= learning_rate * g_intercept / n;
  }
  return model;
}

void write_weightnet(std::ostream& out, const WeightNet& net) {
  out << kWeightNetMagic << '\n';
  out << net.w1.rows() << ' ' << net.w1.cols() << '\n';
  for (Eigen::Index r = 0; r < net.w1.rows(); ++r) write_row(out, net.w1.row(r));
  write_row(out, net.b1);
  write_row(out, net.w2);
  out << format_double(net.b2) << '\n';
}

WeightNet read_weightnet(std::istream& in) {
  int line_no = 0;
  if (trim(next_line(in, line_no, "magic")) != kWeightNetMagic) {
    throw Error(ErrorCode::UnsupportedFormat, "not a surfvox weight-net file");
  }
  const auto dims = parse_row(next_line(in, line_no, "dimensions"), 2, line_no);
  if (dims[0] != kWeightNetHidden || dims[1] != kWeightNetInput) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                           ": weight-net dimensions must be 100 258");
  }
  WeightNet net;
  for (int r = 0; r < kWeightNetHidden; ++r) {
    const auto row = parse_row(next_line(in, line_no, "w1"), kWeightNetInput, line_no);
    for (int c = 0; c < kWeightNetInput; ++c) net.w1(r, c) = row[c];
  }
  const auto b1 = parse_row(next_line(in, line_no, "b1"), kWeightNetHidden, line_no);
  const auto w2 = parse_row(next_line(in, line_no, "w2"), kWeightNetHidden, line_no);
  for (int r = 0; r < kWeightNetHidden; ++r) {
    net.b1[r] = b1[r];
    net.w2[r] = w2[r];
  }
  net.b2 = parse_row(next_line(in, line_no, "b2"), 1, line_no)[0];
  return net;
}

void write_gate(std::ostream& out, const GateModel& gate) {
  out << kGateMagic << '\n' << "1\n"
      << format_double(gate.slope) << ' ' << format_double(gate.intercept) << '\n';
}

GateModel read_gate(std::istream& in) {
  int line_no = 0;
  if (trim(next_line(in, line_no, "magic")) != kGateMagic) {
    throw Error(ErrorCode::UnsupportedFormat, "not a surfvox gate file");
  }
  const auto dims = parse_row(next_line(in, line_no, "dimensions"), 1, line_no);
  if (dims[0] != 1) throw Error(ErrorCode::ParseError, "gate models take exactly one input");
  const auto params = parse_row(next_line(in, line_no, "parameters"), 2, line_no);
  return GateModel{params[0], params[1]};
}

namespace {

template <typename T, typename Reader>
T load_with(const std::string& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return reader(in);
}

template <typename Writer>
void save_with(const std::string& path, Writer writer) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  writer(out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace

WeightNet load_weightnet(const std::string& path) {
  return load_with<WeightNet>(path, [](std::istream& in) { return read_weightnet(in); });
}
void save_weightnet(const std::string& path, const WeightNet& net) {
  save_with(path, [&](std::ostream& out) { write_weightnet(out, net); });
}
GateModel load_gate(const std::string& path) {
  return load_with<GateModel>(path, [](std::istream& in) { return read_gate(in); });
}
void save_gate(const std::string& path, const GateModel& gate) {
  save_with(path, [&](std::ostream& out) { write_gate(out, gate); });
}

}  // namespace surfvox
