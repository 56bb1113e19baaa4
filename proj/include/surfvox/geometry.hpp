#pragma once

#include "surfvox/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace surfvox {

struct ImageSize {
  int width = 0;
  int height = 0;
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // homogeneous w divided by |m3|; metric depth for a normalized camera
};

// Dehomogenizes P * [point; 1]. Returns nullopt when w <= 1e-12 (point at or
// behind the camera plane).
std::optional<Projection> project(const Mat34& proj, const Vec3& point);

// As above, additionally rejecting (u, v) outside [0, W-1] x [0, H-1].
// Integer pixel coordinates address pixel centers.
std::optional<Projection> project(const Mat34& proj, const Vec3& point, ImageSize bounds);

// -M^-1 p4. Throws SingularCamera when |det M| < 1e-12.
Vec3 camera_center(const Mat34& proj);

struct CameraView {
  int id = 0;
  RgbImage image;
  Mat34 proj = Mat34::Zero();
  Vec3 center = Vec3::Zero();

  ImageSize size() const { return {image.width, image.height}; }
};

// Validates the projection matrix and derives the camera center.
CameraView make_view(int id, RgbImage image, const Mat34& proj);

struct BBox {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
};

struct Cube {
  CubeIndex index;
  VoxelIndex first_voxel;  // global index of local voxel (0,0,0)
  Vec3 origin = Vec3::Zero();
  double voxel_size = 1.0;
  int side = 2;

  Vec3 voxel_center(int i, int j, int k) const {
    return origin + voxel_size * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }
  Vec3 center() const { return origin + Vec3::Constant(0.5 * voxel_size * side); }
  VoxelIndex global_voxel(int i, int j, int k) const {
    return {first_voxel.x + i, first_voxel.y + j, first_voxel.z + k};
  }
};

// Half-open box of global voxel indices.
struct VoxelBox {
  VoxelIndex lo;
  VoxelIndex hi;
  long long count() const {
    return static_cast<long long>(hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z);
  }
};

// Shared voxels of two cubes; nullopt if they do not intersect.
std::optional<VoxelBox> overlap(const Cube& a, const Cube& b);

struct CubeLattice {
  BBox bbox;
  double voxel_size = 1.0;
  int side = 2;
  int stride = 1;
  std::array<int, 3> counts{0, 0, 0};  // cubes per axis
  std::vector<Cube> cubes;            // lexicographic in (x, y, z)

  // Position in `cubes`, or nullopt when the index lies outside the lattice.
  std::optional<std::size_t> position(const CubeIndex& idx) const;

  // Face-adjacent neighbors inside the lattice, in a fixed order.
  std::vector<CubeIndex> face_neighbors(const CubeIndex& idx) const;

  Vec3 voxel_center(const VoxelIndex& g) const {
    return bbox.min + voxel_size * Vec3(g.x + 0.5, g.y + 0.5, g.z + 0.5);
  }
};

// Number of voxels along each axis needed to cover the bbox.
std::array<int, 3> voxel_extent(const BBox& bbox, double voxel_size);

// Covers `bbox` with side^3 cubes whose origins step by `stride` voxels.
// Throws InvalidConfig on nonpositive sizes or stride outside [1, side].
CubeLattice build_lattice(const BBox& bbox, double voxel_size, int side, int stride);

// Angle between the rays from each camera center to the cube center, in [0, pi].
double pair_angle(const Cube& cube, const CameraView& view_i, const CameraView& view_j);

}  // namespace surfvox
