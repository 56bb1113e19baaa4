#include "surfvox/binarize.hpp"

#include "surfvox/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace surfvox {

namespace {

constexpr double kVoteSlack = 1e-9;

bool enough_votes(int votes, int views_seeing, double gamma) {
  return static_cast<double>(votes) + kVoteSlack >= gamma * views_seeing;
}

// Rounded pixel id of every voxel center in one view, -1 when off-frame.
std::vector<int> bucket_keys(const Cube& cube, const CameraView& view) {
  const int side = cube.side;
  std::vector<int> keys(static_cast<std::size_t>(side) * side * side, -1);
  const ImageSize bounds = view.size();
  std::size_t idx = 0;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      for (int k = 0; k < side; ++k, ++idx) {
        const auto proj = project(view.proj, cube.voxel_center(i, j, k), bounds);
        if (!proj) continue;
        const long u = std::lround(proj->u);
        const long v = std::lround(proj->v);
        keys[idx] = static_cast<int>(v * bounds.width + u);
      }
    }
  }
  return keys;
}

bool sees_cube(const std::vector<int>& keys) {
  return std::any_of(keys.begin(), keys.end(), [](int k) { return k >= 0; });
}

// Adds one to `wins` for the argmax-p eligible voxel of every bucket.
// Voxels are scanned in linear order and only a strictly larger p takes a
// bucket over, which resolves ties to the smallest index.
void pool_view(const std::vector<int>& keys, const Volume<double>& p, const Mask* eligible,
               std::size_t bucket_count, std::vector<int>& best, Volume<std::uint16_t>& wins) {
  best.assign(bucket_count, -1);
  for (std::size_t idx = 0; idx < keys.size(); ++idx) {
    const int key = keys[idx];
    if (key < 0) continue;
    if (eligible && !(*eligible)[idx]) continue;
    int& slot = best[key];
    if (slot < 0 || p[idx] > p[static_cast<std::size_t>(slot)]) slot = static_cast<int>(idx);
  }
  for (int winner : best) {
    if (winner >= 0) ++wins[static_cast<std::size_t>(winner)];
  }
}

void check_same_geometry(const FusedCube& fused, const Cube& cube) {
  if (fused.cube_index != cube.index || fused.side() != cube.side) {
    throw Error(ErrorCode::ShapeMismatch, "fused cube does not match cube geometry");
  }
}

}  // namespace

std::size_t SurfaceCube::occupied() const {
  return static_cast<std::size_t>(std::count(occ.values().begin(), occ.values().end(), 1));
}

VoteField ray_votes(const FusedCube& fused, std::span<const CameraView> views, const Cube& cube) {
  if (views.empty()) throw Error(ErrorCode::NoViews, "ray pooling needs at least one view");
  check_same_geometry(fused, cube);
  VoteField field;
  field.votes = Volume<std::uint16_t>(cube.side, 0);
  std::vector<int> best;
  for (const auto& view : views) {
    const auto keys = bucket_keys(cube, view);
    if (!sees_cube(keys)) continue;
    ++field.views_seeing;
    pool_view(keys, fused.p, nullptr,
              static_cast<std::size_t>(view.image.width) * view.image.height, best, field.votes);
  }
  return field;
}

SurfaceCube binarize_cube(const FusedCube& fused, const VoteField& votes, double tau, double gamma) {
  if (votes.votes.side() != fused.side()) {
    throw Error(ErrorCode::ShapeMismatch, "vote field does not match fused cube");
  }
  SurfaceCube out;
  out.cube_index = fused.cube_index;
  out.tau_used = tau;
  out.occ = Mask(fused.side(), 0);
  for (std::size_t idx = 0; idx < out.occ.size(); ++idx) {
    if (enough_votes(votes.votes[idx], votes.views_seeing, gamma) && fused.p[idx] > tau) {
      out.occ[idx] = 1;
    }
  }
  return out;
}

double psi(const SurfaceCube& a, const Cube& cube_a, const SurfaceCube& b, const Cube& cube_b,
           const VoxelBox& box, double beta) {
  long long only_a = 0;
  long long only_b = 0;
  long long both = 0;
  for (int gx = box.lo.x; gx < box.hi.x; ++gx) {
    for (int gy = box.lo.y; gy < box.hi.y; ++gy) {
      for (int gz = box.lo.z; gz < box.hi.z; ++gz) {
        const bool sa = a.occ(gx - cube_a.first_voxel.x, gy - cube_a.first_voxel.y,
                              gz - cube_a.first_voxel.z) != 0;
        const bool sb = b.occ(gx - cube_b.first_voxel.x, gy - cube_b.first_voxel.y,
                              gz - cube_b.first_voxel.z) != 0;
        if (sa && sb) {
          ++both;
        } else if (sa) {
          ++only_a;
        } else if (sb) {
          ++only_b;
        }
      }
    }
  }
  return static_cast<double>(only_a + only_b) - beta * static_cast<double>(both);
}

std::vector<double> default_tau_candidates(int count) {
  if (count < 1) throw Error(ErrorCode::InvalidCandidates, "candidate count must be >= 1");
  if (count == 1) return {0.5};
  std::vector<double> out(count);
  for (int m = 0; m < count; ++m) out[m] = 0.5 + (0.99 - 0.5) * m / (count - 1);
  return out;
}

namespace {

// Occupancy of a cube under candidate m is level[x] > m: level counts the
// candidates strictly below p(x), or is 0 when the vote test fails.
struct CubeLevels {
  const Cube* cube = nullptr;
  std::vector<std::uint16_t> level;
};

struct NeighborLink {
  std::size_t other;
  VoxelBox box;
};

struct EnergyModel {
  std::vector<CubeLevels> levels;
  std::vector<std::vector<NeighborLink>> links;
  int candidates = 0;
  double beta = 0.0;

  // psi between cube `a` at every candidate and cube `b` at candidate b_m.
  void accumulate(std::size_t a, const NeighborLink& link, int b_m, std::vector<double>& energy) const {
    const CubeLevels& la = levels[a];
    const CubeLevels& lb = levels[link.other];
    std::vector<long long> with_b(candidates + 1, 0);
    std::vector<long long> without_b(candidates + 1, 0);
    long long n_b = 0;
    const int side = la.cube->side;
    for (int gx = link.box.lo.x; gx < link.box.hi.x; ++gx) {
      for (int gy = link.box.lo.y; gy < link.box.hi.y; ++gy) {
        for (int gz = link.box.lo.z; gz < link.box.hi.z; ++gz) {
          const std::size_t ia =
              (static_cast<std::size_t>(gx - la.cube->first_voxel.x) * side +
               (gy - la.cube->first_voxel.y)) * side + (gz - la.cube->first_voxel.z);
          const std::size_t ib =
              (static_cast<std::size_t>(gx - lb.cube->first_voxel.x) * side +
               (gy - lb.cube->first_voxel.y)) * side + (gz - lb.cube->first_voxel.z);
          if (lb.level[ib] > b_m) {
            ++with_b[la.level[ia]];
            ++n_b;
          } else {
            ++without_b[la.level[ia]];
          }
        }
      }
    }
    // Suffix sums: voxels with level > m are occupied in `a` at candidate m.
    long long a_and_b = 0;
    long long a_not_b = 0;
    for (int m = candidates - 1; m >= 0; --m) {
      a_and_b += with_b[m + 1];
      a_not_b += without_b[m + 1];
      energy[m] += static_cast<double>(a_not_b + (n_b - a_and_b)) - beta * static_cast<double>(a_and_b);
    }
  }

  std::vector<double> cube_energy(std::size_t a, const std::vector<int>& state) const {
    std::vector<double> energy(candidates, 0.0);
    for (const auto& link : links[a]) accumulate(a, link, state[link.other], energy);
    return energy;
  }

  double total(const std::vector<int>& state) const {
    double sum = 0.0;
    for (std::size_t a = 0; a < levels.size(); ++a) sum += cube_energy(a, state)[state[a]];
    return sum;
  }
};

void validate_candidates(const std::vector<double>& candidates) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidCandidates, "empty candidate grid");
  if (candidates.size() > std::numeric_limits<std::uint16_t>::max() - 1) {
    throw Error(ErrorCode::InvalidCandidates, "too many candidates");
  }
  for (std::size_t m = 0; m < candidates.size(); ++m) {
    if (!(candidates[m] >= 0.5 && candidates[m] < 1.0)) {
      throw Error(ErrorCode::InvalidCandidates, "candidates must lie in [0.5, 1)");
    }
    if (m > 0 && !(candidates[m] > candidates[m - 1])) {
      throw Error(ErrorCode::InvalidCandidates, "candidates must be strictly ascending");
    }
  }
}

EnergyModel build_model(std::span<const FusedCube> fused, const CubeLattice& lattice,
                        const std::vector<double>& candidates, double gamma, double beta) {
  EnergyModel model;
  model.candidates = static_cast<int>(candidates.size());
  model.beta = beta;
  std::map<CubeIndex, std::size_t> present;
  for (std::size_t a = 0; a < fused.size(); ++a) {
    const auto pos = lattice.position(fused[a].cube_index);
    if (!pos) throw Error(ErrorCode::ShapeMismatch, "fused cube outside the lattice");
    const Cube& cube = lattice.cubes[*pos];
    if (fused[a].side() != cube.side || fused[a].votes.votes.side() != cube.side) {
      throw Error(ErrorCode::ShapeMismatch, "fused cube lacks votes or has the wrong side");
    }
    if (!present.emplace(fused[a].cube_index, a).second) {
      throw Error(ErrorCode::ShapeMismatch, "duplicate fused cube");
    }
    CubeLevels lv;
    lv.cube = &cube;
    lv.level.assign(fused[a].p.size(), 0);
    for (std::size_t idx = 0; idx < lv.level.size(); ++idx) {
      if (!enough_votes(fused[a].votes.votes[idx], fused[a].votes.views_seeing, gamma)) continue;
      const double p = fused[a].p[idx];
      lv.level[idx] = static_cast<std::uint16_t>(
          std::lower_bound(candidates.begin(), candidates.end(), p) - candidates.begin());
    }
    model.levels.push_back(std::move(lv));
  }
  model.links.resize(fused.size());
  for (std::size_t a = 0; a < fused.size(); ++a) {
    for (const auto& n : lattice.face_neighbors(fused[a].cube_index)) {
      auto it = present.find(n);
      if (it == present.end()) continue;
      const auto box = overlap(*model.levels[a].cube, *model.levels[it->second].cube);
      if (!box) continue;
      model.links[a].push_back({it->second, *box});
    }
  }
  return model;
}

}  // namespace

ThresholdField optimize_thresholds(std::span<const FusedCube> fused, const CubeLattice& lattice,
                                   const ThresholdOptions& options) {
  validate_candidates(options.candidates);
  if (options.max_sweeps < 1) throw Error(ErrorCode::InvalidConfig, "max_sweeps must be >= 1");
  const EnergyModel model =
      build_model(fused, lattice, options.candidates, options.gamma, options.beta);

  std::vector<int> state(fused.size(), 0);
  ThresholdField field;
  field.energy_history.push_back(model.total(state));

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    bool changed = false;
    for (int parity = 0; parity < 2; ++parity) {
      const std::vector<int> snapshot = state;
      for (std::size_t a = 0; a < fused.size(); ++a) {
        const CubeIndex& ci = fused[a].cube_index;
        if (((ci.x + ci.y + ci.z) & 1) != parity) continue;
        const auto energy = model.cube_energy(a, snapshot);
        int best = 0;
        for (int m = 1; m < model.candidates; ++m) {
          if (energy[m] < energy[best]) best = m;
        }
        if (best != snapshot[a]) {
          state[a] = best;
          changed = true;
        }
      }
    }
    field.iteration_count = sweep + 1;
    field.energy_history.push_back(model.total(state));
    if (!changed) {
      field.converged = true;
      break;
    }
  }
  for (std::size_t a = 0; a < fused.size(); ++a) {
    field.tau[fused[a].cube_index] = options.candidates[state[a]];
  }
  return field;
}

double total_energy(std::span<const FusedCube> fused, const CubeLattice& lattice,
                    const std::map<CubeIndex, double>& tau, double gamma, double beta) {
  std::vector<SurfaceCube> surfaces;
  std::vector<const Cube*> cubes;
  std::map<CubeIndex, std::size_t> present;
  for (std::size_t a = 0; a < fused.size(); ++a) {
    const auto pos = lattice.position(fused[a].cube_index);
    if (!pos) throw Error(ErrorCode::ShapeMismatch, "fused cube outside the lattice");
    cubes.push_back(&lattice.cubes[*pos]);
    surfaces.push_back(binarize_cube(fused[a], fused[a].votes, tau.at(fused[a].cube_index), gamma));
    present[fused[a].cube_index] = a;
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < fused.size(); ++a) {
    for (const auto& n : lattice.face_neighbors(fused[a].cube_index)) {
      auto it = present.find(n);
      if (it == present.end()) continue;
      const auto box = overlap(*cubes[a], *cubes[it->second]);
      if (!box) continue;
      sum += psi(surfaces[a], *cubes[a], surfaces[it->second], *cubes[it->second], *box, beta);
    }
  }
  return sum;
}

SurfaceCube thin(const SurfaceCube& surf, const FusedCube& fused, std::span<const CameraView> views,
                 const Cube& cube, double gamma) {
  check_same_geometry(fused, cube);
  if (surf.side() != cube.side) throw Error(ErrorCode::ShapeMismatch, "surface does not match cube");
  Volume<std::uint16_t> wins(cube.side, 0);
  int views_seeing = 0;
  std::vector<int> best;
  for (const auto& view : views) {
    const auto keys = bucket_keys(cube, view);
    if (!sees_cube(keys)) continue;
    ++views_seeing;
    pool_view(keys, fused.p, &surf.occ,
              static_cast<std::size_t>(view.image.width) * view.image.height, best, wins);
  }
  SurfaceCube out = surf;
  for (std::size_t idx = 0; idx < out.occ.size(); ++idx) {
    if (out.occ[idx] && !enough_votes(wins[idx], views_seeing, gamma)) out.occ[idx] = 0;
  }
  return out;
}

}  // namespace surfvox
