#include "surfvox/synth.hpp"

#include "surfvox/error.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace surfvox {

namespace fs = std::filesystem;

namespace {

constexpr double kAmbient = 0.2;
constexpr double kDiffuse = 0.8;
constexpr double kBackground = 0.2;
const Vec3 kTint(1.0, 0.9, 0.75);

// Lattice spacing of the two noise octaves, in world units. The albedo maps
// the noise through a sine so that it has no flat plateaus.
constexpr double kCoarseScale = 0.4;
constexpr double kFineScale = 0.2;
constexpr double kBands = 2.75;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double lattice_value(std::int64_t x, std::int64_t y, std::int64_t z, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(x));
  h = splitmix64(h ^ static_cast<std::uint64_t>(y));
  h = splitmix64(h ^ static_cast<std::uint64_t>(z));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(const Vec3& p, std::uint64_t seed) {
  const double fx = std::floor(p.x());
  const double fy = std::floor(p.y());
  const double fz = std::floor(p.z());
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const auto iz = static_cast<std::int64_t>(fz);
  const double tx = smooth(p.x() - fx);
  const double ty = smooth(p.y() - fy);
  const double tz = smooth(p.z() - fz);
  double acc = 0.0;
  for (int dx = 0; dx < 2; ++dx) {
    for (int dy = 0; dy < 2; ++dy) {
      for (int dz = 0; dz < 2; ++dz) {
        const double w = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty) * (dz ? tz : 1.0 - tz);
        acc += w * lattice_value(ix + dx, iy + dy, iz + dz, seed);
      }
    }
  }
  return acc;
}

Vec3 surface_normal(const ShapeSpec& shape, const Vec3& hit) {
  if (shape.kind == ShapeKind::Sphere) return (hit - shape.center).normalized();
  const Vec3 local = hit - shape.center;
  int axis = 0;
  double best = -1.0;
  for (int a = 0; a < 3; ++a) {
    const double closeness = std::abs(local[a]) / shape.half_extents[a];
    if (closeness > best) {
      best = closeness;
      axis = a;
    }
  }
  Vec3 n = Vec3::Zero();
  n[axis] = local[axis] >= 0.0 ? 1.0 : -1.0;
  return n;
}

Vec3 shape_half_size(const ShapeSpec& shape) {
  return shape.kind == ShapeKind::Sphere ? Vec3::Constant(shape.radius) : shape.half_extents;
}

void validate(const SceneSpec& spec) {
  const auto& rig = spec.rig;
  if (rig.views < 2) throw Error(ErrorCode::InvalidRig, "a rig needs at least two cameras");
  if (!(rig.radius > 0.0)) throw Error(ErrorCode::InvalidRig, "rig radius must be positive");
  if (!(rig.fov_deg > 0.0 && rig.fov_deg < 180.0)) throw Error(ErrorCode::InvalidRig, "fov must lie in (0, 180)");
  if (rig.image_size < 2) throw Error(ErrorCode::InvalidRig, "image size must be >= 2");
  if (!(spec.voxel_size > 0.0)) throw Error(ErrorCode::InvalidConfig, "voxel_size must be positive");
  if (spec.bbox_margin_voxels < 0) throw Error(ErrorCode::InvalidConfig, "negative bbox margin");
  const Vec3 half = shape_half_size(spec.shape);
  if (!(half.minCoeff() > 0.0)) throw Error(ErrorCode::InvalidConfig, "shape size must be positive");
  if (!(std::abs(rig.elevation_deg) < 90.0)) throw Error(ErrorCode::InvalidRig, "elevation must lie in (-90, 90)");
  if (rig.radius <= half.norm()) {
    throw Error(ErrorCode::InvalidRig, "cameras must lie outside the shape");
  }
}

}  // namespace

ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "sphere") return ShapeKind::Sphere;
  if (name == "box") return ShapeKind::Box;
  throw Error(ErrorCode::InvalidConfig, "unknown shape '" + name + "' (expected sphere or box)");
}

std::vector<Vec3> SyntheticScene::gt_points() const {
  std::vector<Vec3> out;
  out.reserve(gt_occ.size());
  for (const auto& g : gt_occ) out.push_back(voxel_center(g));
  return out;
}

Mat34 look_at_camera(const Vec3& eye, const Vec3& target, double fov_deg, int image_size) {
  const Vec3 forward = (target - eye).normalized();
  Vec3 right = forward.cross(Vec3::UnitZ());
  if (right.norm() < 1e-9) right = forward.cross(Vec3::UnitY());
  right.normalize();
  const Vec3 down = forward.cross(right);

  Mat3 rot;
  rot.row(0) = right.transpose();
  rot.row(1) = down.transpose();
  rot.row(2) = forward.transpose();
  const double focal = 0.5 * image_size / std::tan(0.5 * fov_deg * std::numbers::pi / 180.0);
  const double principal = 0.5 * (image_size - 1);
  Mat3 k;
  k << focal, 0.0, principal, 0.0, focal, principal, 0.0, 0.0, 1.0;

  Mat34 proj;
  proj.leftCols<3>() = k * rot;
  proj.col(3) = -k * rot * eye;
  return proj;
}

std::optional<double> intersect(const ShapeSpec& shape, const Vec3& origin, const Vec3& dir) {
  if (shape.kind == ShapeKind::Sphere) {
    const Vec3 oc = origin - shape.center;
    const double a = dir.squaredNorm();
    const double b = oc.dot(dir);
    const double c = oc.squaredNorm() - shape.radius * shape.radius;
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    double t = (-b - root) / a;
    if (t <= 0.0) t = (-b + root) / a;
    if (t <= 0.0) return std::nullopt;
    return t;
  }
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double lo = shape.center[axis] - shape.half_extents[axis];
    const double hi = shape.center[axis] + shape.half_extents[axis];
    if (std::abs(dir[axis]) < 1e-15) {
      if (origin[axis] < lo || origin[axis] > hi) return std::nullopt;
      continue;
    }
    double t0 = (lo - origin[axis]) / dir[axis];
    double t1 = (hi - origin[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_near > t_far || t_far <= 0.0) return std::nullopt;
  return t_near > 0.0 ? t_near : t_far;
}

double surface_distance(const ShapeSpec& shape, const Vec3& point) {
  if (shape.kind == ShapeKind::Sphere) return std::abs((point - shape.center).norm() - shape.radius);
  const Vec3 q = (point - shape.center).cwiseAbs() - shape.half_extents;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(q.maxCoeff(), 0.0);
  return std::abs(outside + inside);
}

double texture_albedo(const ShapeSpec& shape, const Vec3& point) {
  const Vec3 local = point - shape.center;
  const double coarse = value_noise(local / kCoarseScale, shape.texture_seed);
  const double fine = value_noise(local / kFineScale, shape.texture_seed ^ 0x5bd1e995ull);
  const double n = 0.6 * coarse + 0.4 * fine;
  return 0.5 + 0.45 * std::sin(2.0 * std::numbers::pi * kBands * n);
}

SyntheticScene generate_scene(const SceneSpec& spec) {
  validate(spec);
  SyntheticScene scene;
  scene.spec = spec;
  const ShapeSpec& shape = spec.shape;
  const RigSpec& rig = spec.rig;

  const Vec3 pad = Vec3::Constant(spec.voxel_size * spec.bbox_margin_voxels);
  const Vec3 half = shape_half_size(shape);
  scene.bbox.min = shape.center - half - pad;
  scene.bbox.max = shape.center + half + pad;
  scene.grid_dims = voxel_extent(scene.bbox, spec.voxel_size);

  const Vec3 light = Vec3(0.4, -0.3, 0.85).normalized();
  const int size = rig.image_size;
  for (int v = 0; v < rig.views; ++v) {
    const double angle = 2.0 * std::numbers::pi * v / rig.views;
    const double elevation = rig.elevation_deg * std::numbers::pi / 180.0;
    const double ring = rig.radius * std::cos(elevation);
    const Vec3 eye =
        shape.center + Vec3(ring * std::cos(angle), ring * std::sin(angle), rig.radius * std::sin(elevation));
    const Mat34 proj = look_at_camera(eye, shape.center, rig.fov_deg, size);
    const Mat3 inv = proj.leftCols<3>().inverse();

    RgbImage image(size, size);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        Vec3 acc = Vec3::Zero();
        for (int sy = 0; sy < 2; ++sy) {
          for (int sx = 0; sx < 2; ++sx) {
            const Vec3 pixel(x - 0.25 + 0.5 * sx, y - 0.25 + 0.5 * sy, 1.0);
            const Vec3 dir = (inv * pixel).normalized();
            const auto t = intersect(shape, eye, dir);
            if (!t) {
              acc += Vec3::Constant(kBackground);
              continue;
            }
            const Vec3 hit = eye + *t * dir;
            const double shade = kAmbient + kDiffuse * std::max(0.0, surface_normal(shape, hit).dot(light));
            acc += texture_albedo(shape, hit) * shade * kTint;
          }
        }
        for (int c = 0; c < 3; ++c) {
          const double value = std::clamp(acc[c] / 4.0, 0.0, 1.0);
          image.at(x, y, c) = static_cast<std::uint8_t>(std::lround(value * 255.0));
        }
      }
    }
    scene.views.push_back(make_view(v, std::move(image), proj));
  }

  const double tolerance = 0.5 * std::sqrt(3.0) * spec.voxel_size;
  for (int x = 0; x < scene.grid_dims[0]; ++x) {
    for (int y = 0; y < scene.grid_dims[1]; ++y) {
      for (int z = 0; z < scene.grid_dims[2]; ++z) {
        const VoxelIndex g{x, y, z};
        if (surface_distance(shape, scene.voxel_center(g)) <= tolerance) scene.gt_occ.insert(g);
      }
    }
  }
  return scene;
}

fs::path write_scene(const SyntheticScene& scene, const fs::path& dir) {
  fs::create_directories(dir);
  SceneManifest manifest;
  std::vector<Mat34> cameras;
  for (const auto& view : scene.views) {
    char name[32];
    std::snprintf(name, sizeof(name), "view_%02d.ppm", view.id);
    save_image(dir / name, view.image);
    manifest.image_paths.emplace_back(name);
    cameras.push_back(view.proj);
  }
  save_cameras(dir / "cameras.txt", cameras);
  save_occgrid(dir / "gt.occ", make_grid(scene.grid_dims, scene.gt_occ));
  manifest.camera_file_path = "cameras.txt";
  manifest.bbox = scene.bbox;
  manifest.voxel_size = scene.spec.voxel_size;
  manifest.gt_path = "gt.occ";
  manifest.notes = std::string("synthetic ") +
                   (scene.spec.shape.kind == ShapeKind::Sphere ? "sphere" : "box") + " seed " +
                   std::to_string(scene.spec.shape.texture_seed);
  const fs::path manifest_path = dir / "scene.txt";
  save_manifest(manifest_path, manifest);
  return manifest_path;
}

std::vector<Vec3> grid_points(const OccupancyGrid& grid, const Vec3& origin, double voxel_size) {
  std::vector<Vec3> out;
  for (const auto& g : grid.occupied()) {
    out.push_back(origin + voxel_size * Vec3(g.x + 0.5, g.y + 0.5, g.z + 0.5));
  }
  return out;
}

}  // namespace surfvox
