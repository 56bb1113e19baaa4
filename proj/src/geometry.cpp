#include "surfvox/geometry.hpp"

#include "surfvox/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace surfvox {

namespace {

constexpr double kMinHomogeneousW = 1e-12;
constexpr double kMinDeterminant = 1e-12;
constexpr double kMinRayNorm = 1e-12;

int cubes_along(int extent_voxels, int side, int stride) {
  if (extent_voxels <= side) return 1;
  return (extent_voxels - side + stride - 1) / stride + 1;
}

}  // namespace

std::optional<Projection> project(const Mat34& proj, const Vec3& point) {
  const Vec3 h = proj.leftCols<3>() * point + proj.col(3);
  if (!(h.z() > kMinHomogeneousW)) return std::nullopt;
  const double m3 = proj.block<1, 3>(2, 0).norm();
  return Projection{h.x() / h.z(), h.y() / h.z(), m3 > 0.0 ? h.z() / m3 : h.z()};
}

std::optional<Projection> project(const Mat34& proj, const Vec3& point, ImageSize bounds) {
  auto p = project(proj, point);
  if (!p) return std::nullopt;
  if (!(p->u >= 0.0 && p->v >= 0.0 && p->u <= bounds.width - 1.0 && p->v <= bounds.height - 1.0)) {
    return std::nullopt;
  }
  return p;
}

Vec3 camera_center(const Mat34& proj) {
  const Mat3 m = proj.leftCols<3>();
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det) < kMinDeterminant) {
    throw Error(ErrorCode::SingularCamera, "|det M| = " + std::to_string(std::abs(det)));
  }
  return -m.fullPivLu().solve(proj.col(3));
}

CameraView make_view(int id, RgbImage image, const Mat34& proj) {
  if (!proj.allFinite()) throw Error(ErrorCode::SingularCamera, "non-finite projection matrix");
  CameraView view;
  view.id = id;
  view.image = std::move(image);
  view.proj = proj;
  view.center = camera_center(proj);
  return view;
}

std::optional<VoxelBox> overlap(const Cube& a, const Cube& b) {
  VoxelBox box;
  box.lo = {std::max(a.first_voxel.x, b.first_voxel.x), std::max(a.first_voxel.y, b.first_voxel.y),
            std::max(a.first_voxel.z, b.first_voxel.z)};
  box.hi = {std::min(a.first_voxel.x + a.side, b.first_voxel.x + b.side),
            std::min(a.first_voxel.y + a.side, b.first_voxel.y + b.side),
            std::min(a.first_voxel.z + a.side, b.first_voxel.z + b.side)};
  if (box.lo.x >= box.hi.x || box.lo.y >= box.hi.y || box.lo.z >= box.hi.z) return std::nullopt;
  return box;
}

std::optional<std::size_t> CubeLattice::position(const CubeIndex& idx) const {
  if (idx.x < 0 || idx.y < 0 || idx.z < 0 || idx.x >= counts[0] || idx.y >= counts[1] ||
      idx.z >= counts[2]) {
    return std::nullopt;
  }
  return (static_cast<std::size_t>(idx.x) * counts[1] + idx.y) * counts[2] + idx.z;
}

std::vector<CubeIndex> CubeLattice::face_neighbors(const CubeIndex& idx) const {
  static constexpr int kOffsets[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0},
                                         {0, 1, 0},  {0, 0, -1}, {0, 0, 1}};
  std::vector<CubeIndex> out;
  for (const auto& o : kOffsets) {
    CubeIndex n{idx.x + o[0], idx.y + o[1], idx.z + o[2]};
    if (position(n)) out.push_back(n);
  }
  return out;
}

std::array<int, 3> voxel_extent(const BBox& bbox, double voxel_size) {
  std::array<int, 3> out{};
  for (int a = 0; a < 3; ++a) {
    const double n = (bbox.max[a] - bbox.min[a]) / voxel_size;
    // Absorb representation error so an exact multiple does not round up.
    out[a] = std::max(1, static_cast<int>(std::ceil(n - 1e-9)));
  }
  return out;
}

CubeLattice build_lattice(const BBox& bbox, double voxel_size, int side, int stride) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw Error(ErrorCode::InvalidConfig, "voxel_size must be positive");
  }
  if (side < 2) throw Error(ErrorCode::InvalidConfig, "cube side must be >= 2");
  if (stride < 1 || stride > side) throw Error(ErrorCode::InvalidConfig, "stride must lie in [1, side]");
  for (int a = 0; a < 3; ++a) {
    if (!(bbox.max[a] > bbox.min[a])) throw Error(ErrorCode::InvalidConfig, "empty bbox");
  }

  CubeLattice lattice;
  lattice.bbox = bbox;
  lattice.voxel_size = voxel_size;
  lattice.side = side;
  lattice.stride = stride;
  const auto extent = voxel_extent(bbox, voxel_size);
  for (int a = 0; a < 3; ++a) lattice.counts[a] = cubes_along(extent[a], side, stride);

  lattice.cubes.reserve(static_cast<std::size_t>(lattice.counts[0]) * lattice.counts[1] *
                        lattice.counts[2]);
  for (int x = 0; x < lattice.counts[0]; ++x) {
    for (int y = 0; y < lattice.counts[1]; ++y) {
      for (int z = 0; z < lattice.counts[2]; ++z) {
        Cube cube;
        cube.index = {x, y, z};
        cube.first_voxel = {x * stride, y * stride, z * stride};
        cube.origin = bbox.min + voxel_size * Vec3(cube.first_voxel.x, cube.first_voxel.y,
                                                   cube.first_voxel.z);
        cube.voxel_size = voxel_size;
        cube.side = side;
        lattice.cubes.push_back(cube);
      }
    }
  }
  return lattice;
}

double pair_angle(const Cube& cube, const CameraView& view_i, const CameraView& view_j) {
  const Vec3 c = cube.center();
  const Vec3 ri = c - view_i.center;
  const Vec3 rj = c - view_j.center;
  const double ni = ri.norm();
  const double nj = rj.norm();
  if (ni < kMinRayNorm || nj < kMinRayNorm) {
    throw Error(ErrorCode::DegenerateRay, "camera center coincides with cube center");
  }
  const double cosine = std::clamp(ri.dot(rj) / (ni * nj), -1.0, 1.0);
  return std::acos(cosine);
}

}  // namespace surfvox
