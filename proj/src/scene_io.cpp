#include "surfvox/scene_io.hpp"

#include "surfvox/error.hpp"
#include "surfvox/numeric_text.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace surfvox {

namespace fs = std::filesystem;

namespace {

std::string at_line(int line_no) { return "line " + std::to_string(line_no) + ": "; }

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

// ---------------------------------------------------------------- cameras

std::vector<Mat34> read_cameras(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_nonblank = [&](bool required) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    if (required) throw Error(ErrorCode::ParseError, at_line(line_no) + "unexpected end of camera file");
    return false;
  };

  next_nonblank(true);
  const auto header = split_whitespace(line);
  if (header.size() != 3 || header[0] != "#" || header[1] != "cameras") {
    throw Error(ErrorCode::ParseError, at_line(line_no) + "expected '# cameras <N>'");
  }
  const auto count = parse_int(header[2]);
  if (!count || *count < 0) throw Error(ErrorCode::ParseError, at_line(line_no) + "bad camera count");

  std::vector<Mat34> cameras;
  cameras.reserve(static_cast<std::size_t>(*count));
  for (long long c = 0; c < *count; ++c) {
    Mat34 proj;
    int block_line = 0;
    for (int row = 0; row < 3; ++row) {
      if (row == 0) {
        next_nonblank(true);
      } else {
        if (!std::getline(in, line)) {
          throw Error(ErrorCode::ParseError, at_line(line_no + 1) + "camera block ended early");
        }
        ++line_no;
      }
      if (row == 0) block_line = line_no;
      const auto fields = split_whitespace(line);
      if (fields.size() != 4) {
        throw Error(ErrorCode::ParseError, at_line(line_no) + "expected 4 values, found " +
                                               std::to_string(fields.size()));
      }
      for (int col = 0; col < 4; ++col) {
        const auto v = parse_double(fields[col]);
        if (!v || !std::isfinite(*v)) {
          throw Error(ErrorCode::ParseError, at_line(line_no) + "bad number '" +
                                                 std::string(fields[col]) + "'");
        }
        proj(row, col) = *v;
      }
    }
    try {
      camera_center(proj);
    } catch (const Error& e) {
      throw Error(ErrorCode::SingularCamera, "camera " + std::to_string(c) + " at " +
                                                 at_line(block_line) + e.what());
    }
    cameras.push_back(proj);
  }
  if (next_nonblank(false)) throw Error(ErrorCode::ParseError, at_line(line_no) + "trailing data after cameras");
  return cameras;
}

void write_cameras(std::ostream& out, std::span<const Mat34> cameras) {
  out << "# cameras " << cameras.size() << '\n';
  for (std::size_t c = 0; c < cameras.size(); ++c) {
    if (c) out << '\n';
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 4; ++col) {
        if (col) out << ' ';
        out << format_double(cameras[c](row, col));
      }
      out << '\n';
    }
  }
}

std::vector<Mat34> load_cameras(const fs::path& path) {
  auto in = open_in(path);
  return read_cameras(in);
}

void save_cameras(const fs::path& path, std::span<const Mat34> cameras) {
  auto out = open_out(path);
  write_cameras(out, cameras);
}

// ---------------------------------------------------------------- images

namespace {

// Reads one header token of a PNM file, skipping whitespace and comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (token.empty()) throw Error(ErrorCode::ParseError, "truncated PPM header");
  return token;
}

}  // namespace

RgbImage read_ppm(std::istream& in) {
  const std::string magic = pnm_token(in);
  if (magic != "P6") throw Error(ErrorCode::UnsupportedFormat, "only binary P6 PPM is supported, got " + magic);
  const auto width = parse_int(pnm_token(in));
  const auto height = parse_int(pnm_token(in));
  const auto maxval = parse_int(pnm_token(in));
  if (!width || !height || !maxval || *width <= 0 || *height <= 0) {
    throw Error(ErrorCode::ParseError, "bad PPM dimensions");
  }
  if (*maxval != 255) throw Error(ErrorCode::UnsupportedFormat, "only 8-bit PPM (maxval 255) is supported");
  // pnm_token consumed exactly one whitespace byte after maxval.
  RgbImage image(static_cast<int>(*width), static_cast<int>(*height));
  in.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(image.pixels.size())) {
    throw Error(ErrorCode::ParseError, "truncated PPM payload");
  }
  return image;
}

void write_ppm(std::ostream& out, const RgbImage& image) {
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

RgbImage load_image(const fs::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  return read_ppm(in);
}

void save_image(const fs::path& path, const RgbImage& image) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  write_ppm(out, image);
}

// ---------------------------------------------------------------- manifest

SceneManifest parse_manifest(std::istream& in) {
  SceneManifest m;
  bool have_images = false;
  bool have_cameras = false;
  bool have_bbox = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::ParseError, at_line(line_no) + "expected key=value");
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key == "images") {
      for (auto p : split_whitespace(value)) m.image_paths.emplace_back(p);
      have_images = true;
    } else if (key == "cameras") {
      m.camera_file_path = std::string(value);
      have_cameras = true;
    } else if (key == "bbox") {
      const auto fields = split_whitespace(value);
      if (fields.size() != 6) throw Error(ErrorCode::ParseError, at_line(line_no) + "bbox needs 6 numbers");
      double v[6];
      for (int t = 0; t < 6; ++t) {
        const auto d = parse_double(fields[t]);
        if (!d || !std::isfinite(*d)) throw Error(ErrorCode::ParseError, at_line(line_no) + "bad bbox number");
        v[t] = *d;
      }
      m.bbox.min = Vec3(v[0], v[1], v[2]);
      m.bbox.max = Vec3(v[3], v[4], v[5]);
      have_bbox = true;
    } else if (key == "notes") {
      m.notes = std::string(value);
    } else if (key == "voxel_size") {
      const auto d = parse_double(value);
      if (!d || !(*d > 0.0)) throw Error(ErrorCode::ParseError, at_line(line_no) + "bad voxel_size");
      m.voxel_size = *d;
    } else if (key == "gt") {
      m.gt_path = std::string(value);
    } else {
      throw Error(ErrorCode::ParseError, at_line(line_no) + "unknown manifest key '" + key + "'");
    }
  }
  if (!have_images || !have_cameras || !have_bbox) {
    throw Error(ErrorCode::ParseError, "manifest needs images=, cameras= and bbox=");
  }
  if (m.image_paths.size() < 2) throw Error(ErrorCode::ParseError, "manifest lists fewer than two images");
  return m;
}

void write_manifest(std::ostream& out, const SceneManifest& m) {
  out << "images=";
  for (std::size_t i = 0; i < m.image_paths.size(); ++i) out << (i ? " " : "") << m.image_paths[i];
  out << "\ncameras=" << m.camera_file_path << '\n';
  out << "bbox=" << format_double(m.bbox.min.x()) << ' ' << format_double(m.bbox.min.y()) << ' '
      << format_double(m.bbox.min.z()) << ' ' << format_double(m.bbox.max.x()) << ' '
      << format_double(m.bbox.max.y()) << ' ' << format_double(m.bbox.max.z()) << '\n';
  if (m.voxel_size) out << "voxel_size=" << format_double(*m.voxel_size) << '\n';
  if (m.gt_path) out << "gt=" << *m.gt_path << '\n';
  if (!m.notes.empty()) out << "notes=" << m.notes << '\n';
}

SceneManifest load_manifest(const fs::path& path) {
  auto in = open_in(path);
  SceneManifest m = parse_manifest(in);
  const fs::path base = path.parent_path();
  for (auto& p : m.image_paths) p = resolve(base, p).string();
  m.camera_file_path = resolve(base, m.camera_file_path).string();
  if (m.gt_path) m.gt_path = resolve(base, *m.gt_path).string();
  return m;
}

void save_manifest(const fs::path& path, const SceneManifest& manifest) {
  auto out = open_out(path);
  write_manifest(out, manifest);
}

std::vector<CameraView> load_views(const SceneManifest& manifest) {
  const auto cameras = load_cameras(manifest.camera_file_path);
  if (cameras.size() != manifest.image_paths.size()) {
    throw Error(ErrorCode::ParseError, "manifest lists " + std::to_string(manifest.image_paths.size()) +
                                           " images but the camera file has " +
                                           std::to_string(cameras.size()) + " cameras");
  }
  std::vector<CameraView> views;
  views.reserve(cameras.size());
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    views.push_back(make_view(static_cast<int>(i), load_image(manifest.image_paths[i]), cameras[i]));
  }
  return views;
}

// ---------------------------------------------------------------- occupancy

std::vector<VoxelIndex> OccupancyGrid::occupied() const {
  std::vector<VoxelIndex> out;
  for (int x = 0; x < dims[0]; ++x)
    for (int y = 0; y < dims[1]; ++y)
      for (int z = 0; z < dims[2]; ++z)
        if (cells[linear(x, y, z)]) out.push_back({x, y, z});
  return out;
}

OccupancyGrid make_grid(std::array<int, 3> dims, const std::set<VoxelIndex>& voxels) {
  OccupancyGrid grid;
  grid.dims = dims;
  grid.cells.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0);
  for (const auto& v : voxels) {
    if (v.x < 0 || v.y < 0 || v.z < 0 || v.x >= dims[0] || v.y >= dims[1] || v.z >= dims[2]) continue;
    grid.cells[grid.linear(v.x, v.y, v.z)] = 1;
  }
  return grid;
}

void write_occgrid(std::ostream& out, const OccupancyGrid& grid) {
  out << "occgrid " << grid.dims[0] << ' ' << grid.dims[1] << ' ' << grid.dims[2] << '\n';
  out.write(reinterpret_cast<const char*>(grid.cells.data()), static_cast<std::streamsize>(grid.cells.size()));
}

OccupancyGrid read_occgrid(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::ParseError, "empty occupancy file");
  const auto fields = split_whitespace(header);
  if (fields.size() != 4 || fields[0] != "occgrid") {
    throw Error(ErrorCode::ParseError, "expected 'occgrid <nx> <ny> <nz>' header");
  }
  OccupancyGrid grid;
  for (int a = 0; a < 3; ++a) {
    const auto n = parse_int(fields[a + 1]);
    if (!n || *n <= 0) throw Error(ErrorCode::ParseError, "bad occupancy dimension");
    grid.dims[a] = static_cast<int>(*n);
  }
  grid.cells.resize(static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2]);
  in.read(reinterpret_cast<char*>(grid.cells.data()), static_cast<std::streamsize>(grid.cells.size()));
  if (in.gcount() != static_cast<std::streamsize>(grid.cells.size())) {
    throw Error(ErrorCode::ParseError, "truncated occupancy payload");
  }
  for (auto c : grid.cells) {
    if (c > 1) throw Error(ErrorCode::ParseError, "occupancy bytes must be 0 or 1");
  }
  return grid;
}

OccupancyGrid load_occgrid(const fs::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  return read_occgrid(in);
}

void save_occgrid(const fs::path& path, const OccupancyGrid& grid) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  write_occgrid(out, grid);
}

// ---------------------------------------------------------------- PLY

std::set<VoxelIndex> occupied_voxels(std::span<const SurfaceCube> surfaces, const CubeLattice& lattice) {
  std::set<VoxelIndex> voxels;
  for (const auto& surf : surfaces) {
    const auto pos = lattice.position(surf.cube_index);
    if (!pos) throw Error(ErrorCode::ShapeMismatch, "surface cube outside the lattice");
    const Cube& cube = lattice.cubes[*pos];
    for (int i = 0; i < surf.side(); ++i)
      for (int j = 0; j < surf.side(); ++j)
        for (int k = 0; k < surf.side(); ++k)
          if (surf.occ(i, j, k)) voxels.insert(cube.global_voxel(i, j, k));
  }
  return voxels;
}

std::string write_ply_points(std::span<const Vec3> points) {
  std::ostringstream out;
  out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  for (const auto& p : points) {
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  }
  return out.str();
}

std::string write_ply(std::span<const SurfaceCube> surfaces, const CubeLattice& lattice) {
  std::vector<Vec3> points;
  for (const auto& g : occupied_voxels(surfaces, lattice)) points.push_back(lattice.voxel_center(g));
  return write_ply_points(points);
}

std::vector<Vec3> read_ply(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next = [&]() {
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "truncated PLY file");
    ++line_no;
    return std::string(trim(line));
  };
  if (next() != "ply") throw Error(ErrorCode::ParseError, "missing 'ply' magic");
  long long vertices = -1;
  int properties = 0;
  bool in_vertex = false;
  for (;;) {
    const std::string text = next();
    const auto fields = split_whitespace(text);
    if (fields.empty() || fields[0] == "comment") continue;
    if (fields[0] == "end_header") break;
    if (fields[0] == "format") {
      if (fields.size() < 2 || fields[1] != "ascii") {
        throw Error(ErrorCode::UnsupportedFormat, "only ASCII PLY is supported");
      }
    } else if (fields[0] == "element") {
      in_vertex = fields.size() == 3 && fields[1] == "vertex";
      if (in_vertex) {
        const auto n = parse_int(fields[2]);
        if (!n || *n < 0) throw Error(ErrorCode::ParseError, at_line(line_no) + "bad vertex count");
        vertices = *n;
      }
    } else if (fields[0] == "property" && in_vertex) {
      ++properties;
    }
  }
  if (vertices < 0 || (vertices > 0 && properties < 3)) {
    throw Error(ErrorCode::ParseError, "PLY lacks a vertex element with x y z");
  }
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(vertices));
  for (long long v = 0; v < vertices; ++v) {
    const std::string row = next();
    const auto fields = split_whitespace(row);
    if (static_cast<int>(fields.size()) < 3) throw Error(ErrorCode::ParseError, at_line(line_no) + "short vertex");
    Vec3 p;
    for (int a = 0; a < 3; ++a) {
      const auto d = parse_double(fields[a]);
      if (!d) throw Error(ErrorCode::ParseError, at_line(line_no) + "bad vertex coordinate");
      p[a] = *d;
    }
    points.push_back(p);
  }
  return points;
}

std::vector<Vec3> load_ply(const fs::path& path) {
  auto in = open_in(path);
  return read_ply(in);
}

std::string read_file(const fs::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace surfvox
