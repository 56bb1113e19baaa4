// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "support.hpp"

#include "surfvox/binarize.hpp"
#include "surfvox/cli.hpp"
#include "surfvox/descriptor.hpp"
#include "surfvox/fusion.hpp"
#include "surfvox/predictor.hpp"
#include "surfvox/scene_io.hpp"
#include "surfvox/synth.hpp"
#include "surfvox/weighting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

using namespace surfvox;
using namespace surfvox::test;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- 1, 2

Outcome fusion_oracle() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  bool mask_ok = true;
  for (int t = 0; t < 200; ++t) {
    const int n = uniform_int(rng, 1, 4);
    std::vector<ProbabilityCube> cubes;
    std::vector<double> w;
    for (int i = 0; i < n; ++i) {
      cubes.push_back(random_prob_cube(rng, 4, {i, i + 1}, 0.75));
      w.push_back(uniform(rng, 1e-3, 1.0));
    }
    const FusedCube f = fuse(cubes, w);
    for (std::size_t x = 0; x < f.p.size(); ++x) {
      double num = 0.0, den = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!cubes[i].valid[x]) continue;
        num += w[i] * cubes[i].p[x];
        den += w[i];
      }
      const double expect = den > 0.0 ? num / den : 0.0;
      worst = std::max(worst, std::abs(f.p[x] - expect));
      mask_ok = mask_ok && (static_cast<bool>(f.valid[x]) == (den > 0.0));
    }
  }
  const double secs = elapsed(t0);
  return {worst <= 1e-12 && mask_ok && secs < 5.0,
          "max |fuse - oracle| = " + fmt("%.3g", worst) + ", " + fmt("%.3f", secs) + " s"};
}

Outcome weight_scale() {
  Rng rng(202);
  int identical = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = uniform_int(rng, 1, 4);
    std::vector<ProbabilityCube> cubes;
    std::vector<double> w;
    for (int i = 0; i < n; ++i) {
      cubes.push_back(random_prob_cube(rng, 4, {i, i + 1}, 0.75));
      w.push_back(uniform(rng, 1e-3, 1.0));
    }
    double c = 0.0;
    while (c == 0.0) c = 100.0 * (1.0 - uniform(rng));  // (0, 100]
    std::vector<double> scaled = w;
    for (auto& v : scaled) v *= c;
    const FusedCube a = fuse(cubes, w);
    const FusedCube b = fuse(cubes, scaled);
    if (a.p == b.p && a.valid == b.valid) ++identical;
    for (std::size_t x = 0; x < a.p.size(); ++x) worst = std::max(worst, std::abs(a.p[x] - b.p[x]));
  }
  return {identical == 100, std::to_string(identical) + "/100 trials bit-identical, max |diff| = " + fmt("%.3g", worst)};
}

// ---------------------------------------------------------------- 3

Outcome softmax_contract() {
  Rng rng(303);
  double worst_sum = 0.0, worst_shift = 0.0;
  int argmax_ok = 0, positive = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = uniform_int(rng, 1, 12);
    std::vector<double> s(n);
    for (auto& v : s) v = uniform(rng, -20.0, 20.0);
    const auto w = softmax_weights(s);
    double sum = 0.0;
    for (double v : w) sum += v;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    const double shift = uniform(rng, -1e3, 1e3);
    std::vector<double> s2 = s;
    for (auto& v : s2) v += shift;
    const auto w2 = softmax_weights(s2);
    for (int i = 0; i < n; ++i) worst_shift = std::max(worst_shift, std::abs(w[i] - w2[i]));
    const auto top_s = std::max_element(s.begin(), s.end()) - s.begin();
    const auto top_w = std::max_element(w.begin(), w.end()) - w.begin();
    argmax_ok += top_s == top_w ? 1 : 0;
    positive += std::all_of(w.begin(), w.end(), [](double v) { return v > 0.0; }) ? 1 : 0;
  }
  const bool pass = worst_sum <= 1e-12 && worst_shift <= 1e-12 && argmax_ok == 1000 && positive == 1000;
  return {pass, "max |sum-1| = " + fmt("%.3g", worst_sum) + ", max shift change = " + fmt("%.3g", worst_shift) +
                    ", argmax kept " + std::to_string(argmax_ok) + "/1000"};
}

// ---------------------------------------------------------------- 4, 5

// Lattice of 2x1x1 or 3x3x3 cubes with random fused fields.
struct RandomLattice {
  CubeLattice lattice;
  std::vector<FusedCube> fused;
};

RandomLattice random_lattice(Rng& rng, std::array<int, 3> counts) {
  const int side = 2 * uniform_int(rng, 2, 3);  // 4 or 6
  const int stride = side / 2;
  const Vec3 extent(side + (counts[0] - 1) * stride, side + (counts[1] - 1) * stride, side + (counts[2] - 1) * stride);
  RandomLattice out;
  out.lattice = build_lattice(BBox{Vec3::Zero(), extent}, 1.0, side, stride);
  const int views = uniform_int(rng, 1, 5);
  // A shared smooth-ish field plus per-cube noise, so overlaps partially agree.
  std::vector<double> global(static_cast<std::size_t>(extent.x() * extent.y() * extent.z()));
  for (auto& v : global) v = uniform(rng, 0.3, 1.0);
  const double noise = uniform(rng, 0.0, 0.3);
  for (const auto& cube : out.lattice.cubes) {
    FusedCube f = random_fused(rng, side, cube.index, views);
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j)
        for (int k = 0; k < side; ++k) {
          const auto g = cube.global_voxel(i, j, k);
          const double base = global[(static_cast<std::size_t>(g.x) * static_cast<std::size_t>(extent.y()) + g.y) *
                                         static_cast<std::size_t>(extent.z()) + g.z];
          f.p(i, j, k) = std::clamp(base + uniform(rng, -noise, noise), 0.0, 1.0);
        }
    out.fused.push_back(std::move(f));
  }
  return out;
}

// Independent energy: binarize with the rule, then sum psi in both directions.
double oracle_energy(const RandomLattice& rl, const std::vector<double>& tau, double gamma, double beta) {
  const auto& cubes = rl.lattice.cubes;
  std::vector<Mask> occ;
  for (std::size_t c = 0; c < cubes.size(); ++c) {
    const FusedCube& f = rl.fused[c];
    Mask m(f.side(), 0);
    for (std::size_t x = 0; x < m.size(); ++x) {
      const bool voted = f.votes.votes[x] >= gamma * f.votes.views_seeing - 1e-9;
      m[x] = voted && f.p[x] > tau[c] ? 1 : 0;
    }
    occ.push_back(m);
  }
  double total = 0.0;
  for (std::size_t a = 0; a < cubes.size(); ++a) {
    for (std::size_t b = 0; b < cubes.size(); ++b) {
      const auto& ia = cubes[a].index;
      const auto& ib = cubes[b].index;
      const int manhattan = std::abs(ia.x - ib.x) + std::abs(ia.y - ib.y) + std::abs(ia.z - ib.z);
      if (manhattan != 1) continue;
      const int side = cubes[a].side;
      for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
          for (int k = 0; k < side; ++k) {
            const auto g = cubes[a].global_voxel(i, j, k);
            const int bi = g.x - cubes[b].first_voxel.x, bj = g.y - cubes[b].first_voxel.y,
                      bk = g.z - cubes[b].first_voxel.z;
            if (!occ[b].contains(bi, bj, bk)) continue;
            const double s = occ[a](i, j, k), sp = occ[b](bi, bj, bk);
            total += (1 - s) * sp + s * (1 - sp) - beta * s * sp;
          }
    }
  }
  return total;
}

Outcome threshold_oracle() {
  const auto t0 = Clock::now();
  Rng rng(404);
  int agree = 0, unique_minima = 0;
  std::string first_miss;
  for (int t = 0; t < 20; ++t) {
    RandomLattice rl = random_lattice(rng, {2, 1, 1});
    ThresholdOptions opt;
    std::vector<double> cand{uniform(rng, 0.5, 1.0), uniform(rng, 0.5, 1.0), uniform(rng, 0.5, 1.0)};
    std::sort(cand.begin(), cand.end());
    opt.candidates = cand;
    opt.gamma = uniform(rng, 0.0, 1.0);
    opt.beta = uniform(rng, 0.5, 8.0);
    const ThresholdField field = optimize_thresholds(rl.fused, rl.lattice, opt);
    const double t_a = field.tau.at(rl.lattice.cubes[0].index);
    const double t_b = field.tau.at(rl.lattice.cubes[1].index);

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> minimizers;
    for (double a : cand)
      for (double b : cand) {
        const double e = oracle_energy(rl, {a, b}, opt.gamma, opt.beta);
        if (e < best - 1e-9) {
          best = e;
          minimizers = {{a, b}};
        } else if (std::abs(e - best) <= 1e-9) {
          minimizers.emplace_back(a, b);
        }
      }
    unique_minima += minimizers.size() == 1 ? 1 : 0;
    const bool hit = std::find(minimizers.begin(), minimizers.end(), std::make_pair(t_a, t_b)) != minimizers.end();
    if (hit) {
      ++agree;
    } else if (first_miss.empty()) {
      first_miss = "; trial " + std::to_string(t) + " found E=" +
                   fmt("%g", oracle_energy(rl, {t_a, t_b}, opt.gamma, opt.beta)) + " vs global " + fmt("%g", best);
    }
  }
  const double secs = elapsed(t0);
  return {agree == 20 && secs < 10.0, std::to_string(agree) + "/20 lattices at the exhaustive minimum (" +
                                          std::to_string(unique_minima) + " unique), " + fmt("%.3f", secs) + " s" +
                                          first_miss};
}

Outcome energy_descent() {
  Rng rng(505);
  int monotone = 0;
  int sweeps = 0;
  for (int t = 0; t < 20; ++t) {
    RandomLattice rl = random_lattice(rng, {3, 3, 3});
    ThresholdOptions opt;
    opt.candidates = default_tau_candidates(uniform_int(rng, 3, 50));
    opt.gamma = uniform(rng, 0.0, 1.0);
    opt.beta = uniform(rng, 0.5, 8.0);
    opt.max_sweeps = 10;
    const ThresholdField field = optimize_thresholds(rl.fused, rl.lattice, opt);
    bool ok = field.energy_history.size() == static_cast<std::size_t>(field.iteration_count) + 1;
    for (std::size_t i = 1; i < field.energy_history.size(); ++i) {
      ok = ok && field.energy_history[i] <= field.energy_history[i - 1];
    }
    ok = ok && (field.converged || field.iteration_count == 10);
    // The recorded energy matches an independent evaluation of the final state.
    std::vector<double> tau;
    for (const auto& c : rl.lattice.cubes) tau.push_back(field.tau.at(c.index));
    ok = ok && std::abs(oracle_energy(rl, tau, opt.gamma, opt.beta) - field.energy_history.back()) <= 1e-6;
    monotone += ok ? 1 : 0;
    sweeps += field.iteration_count;
  }
  return {monotone == 20, std::to_string(monotone) + "/20 lattices non-increasing, " + std::to_string(sweeps) +
                              " sweeps total"};
}

// ---------------------------------------------------------------- 6, 7

Outcome psi_closed_forms() {
  Rng rng(606);
  int ok = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const int side = uniform_int(rng, 2, 6);
    const int stride = uniform_int(rng, 1, side - 1);
    const auto lat = build_lattice(BBox{Vec3::Zero(), Vec3(side + stride, side, side)}, 1.0, side, stride);
    const Cube& a = lat.cubes[0];
    const Cube& b = lat.cubes[1];
    const VoxelBox box = *overlap(a, b);
    const double beta = uniform(rng, 0.0, 10.0);
    const double rate = uniform(rng);
    SurfaceCube sa, same, comp, rnd;
    sa.occ = Mask(side, 0);
    for (std::size_t x = 0; x < sa.occ.size(); ++x) sa.occ[x] = uniform(rng) < rate;
    same.occ = comp.occ = rnd.occ = Mask(side, 0);
    for (std::size_t x = 0; x < rnd.occ.size(); ++x) rnd.occ[x] = uniform(rng) < 0.5;
    same.occ = rnd.occ;
    comp.occ = rnd.occ;
    long long n = 0, disagree = 0;
    double terms = 0.0;
    for (int gx = box.lo.x; gx < box.hi.x; ++gx)
      for (int gy = box.lo.y; gy < box.hi.y; ++gy)
        for (int gz = box.lo.z; gz < box.hi.z; ++gz) {
          const auto va = sa.occ(gx - a.first_voxel.x, gy - a.first_voxel.y, gz - a.first_voxel.z);
          const int bi = gx - b.first_voxel.x, bj = gy - b.first_voxel.y, bk = gz - b.first_voxel.z;
          same.occ(bi, bj, bk) = va;
          comp.occ(bi, bj, bk) = 1 - va;
          n += va;
          disagree += 1;
          const double s = va, sp = rnd.occ(bi, bj, bk);
          terms += (1 - s) * sp + s * (1 - sp) - beta * s * sp;
        }
    const bool identical = psi(sa, a, same, b, box, beta) == -beta * static_cast<double>(n);
    const bool opposite = psi(sa, a, comp, b, box, beta) == static_cast<double>(disagree);
    const bool term_sum = std::abs(psi(sa, a, rnd, b, box, beta) - terms) <= 1e-9;
    ok += identical && opposite && term_sum ? 1 : 0;
  }
  return {ok == trials, std::to_string(ok) + "/" + std::to_string(trials) + " random mask pairs"};
}

Outcome binarize_monotone() {
  Rng rng(707);
  int ok = 0;
  for (int t = 0; t < 500; ++t) {
    const FusedCube f = random_fused(rng, uniform_int(rng, 2, 8), {}, uniform_int(rng, 1, 6));
    double t1 = uniform(rng), t2 = uniform(rng);
    if (t1 > t2) std::swap(t1, t2);
    if (t1 == t2) t2 = std::nextafter(t1, 1.0);
    const double gamma = uniform(rng);
    const auto lo = binarize_cube(f, f.votes, t1, gamma);
    const auto hi = binarize_cube(f, f.votes, t2, gamma);
    bool subset = true;
    for (std::size_t x = 0; x < lo.occ.size(); ++x) subset = subset && (!hi.occ[x] || lo.occ[x]);
    ok += subset ? 1 : 0;
  }
  return {ok == 500, std::to_string(ok) + "/500 trials occ(tau2) within occ(tau1)"};
}

// ---------------------------------------------------------------- 8, 9

GrayPatch random_patch(Rng& rng, double lo, double hi) {
  GrayPatch p;
  // Smooth random field so embeddings are not all near-orthogonal.
  const double fx = uniform(rng, 0.02, 0.3), fy = uniform(rng, 0.02, 0.3), ph = uniform(rng, 0, 6.3);
  for (int y = 0; y < kPatchSize; ++y)
    for (int x = 0; x < kPatchSize; ++x) {
      const double s = 0.5 + 0.35 * std::sin(fx * x + fy * y + ph) + 0.15 * (uniform(rng) - 0.5);
      p.at(x, y) = lo + (hi - lo) * std::clamp(s, 0.0, 1.0);
    }
  return p;
}

Outcome descriptor_invariances() {
  Rng rng(808);
  double self = 0.0, photometric = 0.0, worst_triangle = -1e300;
  int triangle_ok = 0;
  for (int t = 0; t < 50; ++t) {
    const GrayPatch p = random_patch(rng, 0.1, 0.6);
    const auto e = embed(p);
    self = std::max(self, dissimilarity(e, e));
    const double a = uniform(rng, 0.2, 1.5), b = uniform(rng, -0.05, 0.05);
    GrayPatch q = p;
    for (auto& v : q.values) v = a * v + b;
    const auto eq = embed(q);
    for (int i = 0; i < kEmbeddingDim; ++i) photometric = std::max(photometric, std::abs(e.vec[i] - eq.vec[i]));
  }
  for (int t = 0; t < 1000; ++t) {
    const auto a = embed(random_patch(rng, 0.0, 1.0));
    const auto b = embed(random_patch(rng, 0.0, 1.0));
    const auto c = embed(random_patch(rng, 0.0, 1.0));
    const double slack = dissimilarity(a, c) - dissimilarity(a, b) - dissimilarity(b, c);
    worst_triangle = std::max(worst_triangle, slack);
    triangle_ok += slack <= 1e-12 ? 1 : 0;
  }
  return {self == 0.0 && photometric <= 1e-10 && triangle_ok == 1000,
          "d(P,P) max " + fmt("%.3g", self) + ", gain/offset max change " + fmt("%.3g", photometric) +
              ", triangle " + std::to_string(triangle_ok) + "/1000"};
}

Outcome zncc_predictor() {
  Rng rng(909);
  double self = 0.0, photometric = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int side = uniform_int(rng, 3, 8);
    Volume<double> g(side);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = uniform(rng, 0.05, 0.9);
    const auto a = gray_cvc(g, 0);
    PredictorSpec spec;
    spec.sharpness = uniform(rng, 0.5, 4.0);
    const auto pp = predict_pair(a, gray_cvc(g, 1), spec);
    for (int i = 1; i + 1 < side; ++i)
      for (int j = 1; j + 1 < side; ++j)
        for (int k = 1; k + 1 < side; ++k) self = std::max(self, std::abs(pp.p(i, j, k) - 1.0));

    Volume<double> other(side);
    for (std::size_t i = 0; i < other.size(); ++i) other[i] = uniform(rng, 0.05, 0.9);
    const double gain = uniform(rng, 0.2, 1.0), offset = uniform(rng, 0.0, 0.08);
    Volume<double> moved(side);
    for (std::size_t i = 0; i < other.size(); ++i) moved[i] = gain * other[i] + offset;
    const auto base = predict_pair(a, gray_cvc(other, 1), spec);
    const auto shifted = predict_pair(a, gray_cvc(moved, 1), spec);
    for (std::size_t i = 0; i < base.p.size(); ++i) photometric = std::max(photometric, std::abs(base.p[i] - shifted.p[i]));
  }
  return {self <= 1e-9 && photometric < 1e-9,
          "self-correlation max |p-1| " + fmt("%.3g", self) + ", gain/offset max |dp| " + fmt("%.3g", photometric)};
}

// ---------------------------------------------------------------- 10, 11

struct EndToEnd {
  bool ran = false;
  std::string error;
  fs::path dir;
};

int cli(const std::vector<std::string>& args, std::string& out, std::string& err) {
  std::ostringstream o, e;
  const int code = cli_main(args, o, e);
  out = o.str();
  err = e.str();
  return code;
}

std::string report_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

EndToEnd e2e;

Outcome end_to_end() {
  e2e.dir = temp_dir("acceptance");
  const std::string d = e2e.dir.string();
  std::string out, err;
  if (cli({"synth", "--shape", "sphere", "--views", "8", "--out", d + "/scene"}, out, err) != 0) {
    return {false, "synth failed: " + err};
  }
  const auto t0 = Clock::now();
  if (cli({"reconstruct", "--scene", d + "/scene/scene.txt", "--out", d + "/t1.ply", "--threads", "1"}, out, err) != 0) {
    return {false, "reconstruct failed: " + err};
  }
  const double secs = elapsed(t0);
  e2e.ran = true;
  const auto manifest = load_manifest(d + "/scene/scene.txt");
  const double vs = *manifest.voxel_size;
  const auto grid = load_occgrid(*manifest.gt_path);
  const auto gt = grid_points(grid, manifest.bbox.min, vs);
  const auto pred = load_ply(d + "/t1.ply");
  const EvalReport r = evaluate(pred, gt, 2.0 * vs);
  // Sphere span in voxels, from the ground truth itself.
  double lo = 1e300, hi = -1e300;
  for (const auto& p : gt) {
    lo = std::min(lo, p.x());
    hi = std::max(hi, p.x());
  }
  const double span = (hi - lo) / vs + 1.0;
  const double acc = r.accuracy_defined ? r.accuracy / vs : std::numeric_limits<double>::infinity();
  const bool pass = r.completeness >= 0.60 && acc <= 3.0 && secs < 300.0;
  return {pass, "completeness " + fmt("%.4f", r.completeness) + " (>= 0.60), accuracy " + fmt("%.3f", acc) +
                    " voxels (<= 3), " + std::to_string(pred.size()) + " points, sphere spans " + fmt("%.0f", span) +
                    " voxels, " + fmt("%.1f", secs) + " s"};
}

Outcome determinism() {
  if (!e2e.ran) return {false, "criterion-10 run did not complete"};
  const std::string d = e2e.dir.string();
  std::string out, err;
  if (cli({"reconstruct", "--scene", d + "/scene/scene.txt", "--out", d + "/t8.ply", "--threads", "8"}, out, err) != 0) {
    return {false, "reconstruct failed: " + err};
  }
  const std::string a = read_file(d + "/t1.ply");
  const std::string b = read_file(d + "/t8.ply");
  return {a == b && !a.empty(), std::string(a == b ? "identical" : "different") + " PLY bytes (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ") at 1 and 8 threads"};
}

// ---------------------------------------------------------------- 12, 13

Outcome gate_behavior() {
  Rng rng(1212);
  std::vector<GateSample> samples;
  std::vector<double> similar_d, dissimilar_d;
  for (int i = 0; i < 200; ++i) {
    const double ds = uniform(rng, 0.0, 0.8);
    const double dd = uniform(rng, 1.2, 2.0);
    samples.push_back({ds, true});
    samples.push_back({dd, false});
    if (i < 10) {
      similar_d.push_back(ds);
      dissimilar_d.push_back(dd);
    }
  }
  const GateModel g = fit_gate(samples);
  const bool rejects = !gate_cube(g, dissimilar_d, 1);
  const bool accepts = gate_cube(g, similar_d, static_cast<int>(similar_d.size()));
  return {g.slope < 0.0 && rejects && accepts, "slope " + fmt("%.3f", g.slope) + ", intercept " +
                                                   fmt("%.3f", g.intercept) + ", dissimilar cube " +
                                                   (rejects ? "rejected" : "accepted") + ", similar cube " +
                                                   (accepts ? "accepted" : "rejected")};
}

Outcome gamma_rule() {
  FusedCube f;
  f.p = Volume<double>(2, 0.9);
  f.valid = Mask(2, 1);
  VoteField votes;
  votes.votes = Volume<std::uint16_t>(2, 0);
  votes.views_seeing = 5;
  votes.votes[0] = 4;
  votes.votes[1] = 3;
  votes.votes[2] = 5;
  const auto s = binarize_cube(f, votes, 0.7, 0.8);
  const bool four = s.occ[0] == 1, three = s.occ[1] == 0, five = s.occ[2] == 1;
  return {four && three && five, std::string("4/5 votes ") + (four ? "pass" : "fail") + ", 3/5 votes " +
                                     (three ? "fail" : "pass") + " the vote test"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "fusion oracle equivalence", fusion_oracle},
      {2, "weight-scale invariance", weight_scale},
      {3, "softmax contract", softmax_contract},
      {4, "threshold-optimization oracle", threshold_oracle},
      {5, "energy descent", energy_descent},
      {6, "psi closed forms", psi_closed_forms},
      {7, "binarization monotonicity", binarize_monotone},
      {8, "descriptor invariances", descriptor_invariances},
      {9, "ZNCC predictor", zncc_predictor},
      {10, "end-to-end synthetic reconstruction", end_to_end},
      {11, "determinism across thread counts", determinism},
      {12, "gate behavior", gate_behavior},
      {13, "gamma rule fidelity", gamma_rule},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << c.id << " " << c.name << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
