#pragma once

#include "surfvox/binarize.hpp"
#include "surfvox/geometry.hpp"
#include "surfvox/types.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace surfvox {

// Camera file: "# cameras N", then N blocks of three rows of four numbers,
// blocks separated by blank lines.
std::vector<Mat34> read_cameras(std::istream& in);
void write_cameras(std::ostream& out, std::span<const Mat34> cameras);
std::vector<Mat34> load_cameras(const std::filesystem::path& path);
void save_cameras(const std::filesystem::path& path, std::span<const Mat34> cameras);

// Binary PPM (P6, maxval 255) only.
RgbImage read_ppm(std::istream& in);
void write_ppm(std::ostream& out, const RgbImage& image);
RgbImage load_image(const std::filesystem::path& path);
void save_image(const std::filesystem::path& path, const RgbImage& image);

// key=value scene description. Relative paths resolve against the manifest
// directory when loaded from disk.
struct SceneManifest {
  std::vector<std::string> image_paths;
  std::string camera_file_path;
  BBox bbox;
  std::string notes;
  std::optional<double> voxel_size;    // grid spacing of the ground truth, if any
  std::optional<std::string> gt_path;  // occupancy grid of the ground truth, if any
};

SceneManifest parse_manifest(std::istream& in);
void write_manifest(std::ostream& out, const SceneManifest& manifest);
SceneManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const SceneManifest& manifest);

// Loads every image and camera of a manifest into views (ids 0..N-1).
std::vector<CameraView> load_views(const SceneManifest& manifest);

// Dense occupancy over a global voxel grid: "occgrid nx ny nz\n" followed by
// nx*ny*nz bytes (0 or 1), x slowest and z fastest.
struct OccupancyGrid {
  std::array<int, 3> dims{0, 0, 0};
  std::vector<std::uint8_t> cells;

  std::size_t linear(int x, int y, int z) const {
    return (static_cast<std::size_t>(x) * dims[1] + y) * dims[2] + z;
  }
  std::vector<VoxelIndex> occupied() const;
  bool operator==(const OccupancyGrid&) const = default;
};

OccupancyGrid make_grid(std::array<int, 3> dims, const std::set<VoxelIndex>& voxels);
void write_occgrid(std::ostream& out, const OccupancyGrid& grid);
OccupancyGrid read_occgrid(std::istream& in);
OccupancyGrid load_occgrid(const std::filesystem::path& path);
void save_occgrid(const std::filesystem::path& path, const OccupancyGrid& grid);

// Occupied voxels of all surfaces as a deduplicated set of global indices.
std::set<VoxelIndex> occupied_voxels(std::span<const SurfaceCube> surfaces, const CubeLattice& lattice);

// ASCII PLY 1.0 with one vertex per distinct occupied voxel at its world
// center, sorted by global voxel index.
std::string write_ply(std::span<const SurfaceCube> surfaces, const CubeLattice& lattice);
std::string write_ply_points(std::span<const Vec3> points);
std::vector<Vec3> read_ply(std::istream& in);
std::vector<Vec3> load_ply(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace surfvox
