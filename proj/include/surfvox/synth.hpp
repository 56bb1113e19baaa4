#pragma once

#include "surfvox/geometry.hpp"
#include "surfvox/scene_io.hpp"
#include "surfvox/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace surfvox {

enum class ShapeKind { Sphere, Box };

struct ShapeSpec {
  ShapeKind kind = ShapeKind::Sphere;
  Vec3 center = Vec3::Zero();
  double radius = 1.0;                         // sphere
  Vec3 half_extents = Vec3::Constant(0.75);    // box
  std::uint64_t texture_seed = 1;
};

ShapeKind parse_shape_kind(const std::string& name);

// Cameras evenly spaced on a horizontal ring around the shape center, all
// aimed at it, with world +z as up. `radius` is the distance from each camera
// to the center; `elevation_deg` lifts the ring above the equator.
struct RigSpec {
  int views = 8;
  double radius = 5.0;
  double elevation_deg = 65.0;
  double fov_deg = 30.0;  // horizontal field of view
  int image_size = 256;
};

struct SceneSpec {
  ShapeSpec shape;
  RigSpec rig;
  double voxel_size = 0.03125;
  int bbox_margin_voxels = 8;  // padding around the shape's bounding box
};

struct SyntheticScene {
  SceneSpec spec;
  std::vector<CameraView> views;
  BBox bbox;
  std::array<int, 3> grid_dims{0, 0, 0};
  std::set<VoxelIndex> gt_occ;  // indices on the grid anchored at bbox.min

  Vec3 voxel_center(const VoxelIndex& g) const {
    return bbox.min + spec.voxel_size * Vec3(g.x + 0.5, g.y + 0.5, g.z + 0.5);
  }
  std::vector<Vec3> gt_points() const;
};

// Pinhole camera looking from `eye` at `target`; principal point at the
// image center.
Mat34 look_at_camera(const Vec3& eye, const Vec3& target, double fov_deg, int image_size);

// Distance along the ray to the first hit, or nullopt.
std::optional<double> intersect(const ShapeSpec& shape, const Vec3& origin, const Vec3& dir);

// Unsigned distance from a point to the analytic surface.
double surface_distance(const ShapeSpec& shape, const Vec3& point);

// Solid value-noise albedo in [0,1], a deterministic function of the seed.
double texture_albedo(const ShapeSpec& shape, const Vec3& point);

// Renders every camera (Lambertian shading, fixed light, 2x2 supersampling)
// and labels voxels within half a voxel diagonal of the surface as ground
// truth. Throws InvalidRig for fewer than two views or a bad rig.
SyntheticScene generate_scene(const SceneSpec& spec);

// Writes view_XX.ppm, cameras.txt, gt.occ and scene.txt into `dir`.
// Returns the manifest path.
std::filesystem::path write_scene(const SyntheticScene& scene, const std::filesystem::path& dir);

struct EvalReport {
  double accuracy = 0.0;  // mean predicted-to-truth distance, world units
  bool accuracy_defined = false;
  double completeness = 0.0;
  std::size_t predicted_count = 0;
  std::size_t gt_count = 0;
};

// Exact brute-force nearest neighbors. Throws EmptyGroundTruth when `gt` is
// empty and InvalidConfig for eps <= 0.
EvalReport evaluate(std::span<const Vec3> predicted, std::span<const Vec3> gt, double eps);

// World centers of a grid's occupied cells, with the grid anchored at bbox.min.
std::vector<Vec3> grid_points(const OccupancyGrid& grid, const Vec3& origin, double voxel_size);

}  // namespace surfvox
