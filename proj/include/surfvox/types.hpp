#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace surfvox {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

// Lattice coordinate of a cube.
struct CubeIndex {
  int x = 0;
  int y = 0;
  int z = 0;
  auto operator<=>(const CubeIndex&) const = default;
};

// Scene-global integer voxel coordinate, anchored at the lattice bbox minimum.
struct VoxelIndex {
  int x = 0;
  int y = 0;
  int z = 0;
  auto operator<=>(const VoxelIndex&) const = default;
};

// Unordered view pair stored with first < second.
struct ViewPair {
  int first = 0;
  int second = 0;
  auto operator<=>(const ViewPair&) const = default;
};

inline ViewPair make_pair_ordered(int a, int b) { return a < b ? ViewPair{a, b} : ViewPair{b, a}; }

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  bool operator==(const Rgb&) const = default;
};

inline double luminance(const Rgb& c) { return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b; }

// 8-bit interleaved RGB raster, row-major with y as the row index.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t& at(int x, int y, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  Rgb color(int x, int y) const {
    return {at(x, y, 0) / 255.0, at(x, y, 1) / 255.0, at(x, y, 2) / 255.0};
  }
  bool operator==(const RgbImage&) const = default;
};

// Dense side^3 grid. Linear order is lexicographic in (i, j, k), k fastest.
template <typename T>
class Volume {
 public:
  Volume() = default;
  explicit Volume(int side, T fill = T{})
      : side_(side), data_(static_cast<std::size_t>(side) * side * side, fill) {}

  int side() const { return side_; }
  std::size_t size() const { return data_.size(); }

  std::size_t linear(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * side_ + j) * side_ + k;
  }
  void unlinear(std::size_t idx, int& i, int& j, int& k) const {
    k = static_cast<int>(idx % side_);
    j = static_cast<int>((idx / side_) % side_);
    i = static_cast<int>(idx / (static_cast<std::size_t>(side_) * side_));
  }
  bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < side_ && j < side_ && k < side_;
  }

  T& operator()(int i, int j, int k) { return data_[linear(i, j, k)]; }
  const T& operator()(int i, int j, int k) const { return data_[linear(i, j, k)]; }
  T& operator[](std::size_t idx) { return data_[idx]; }
  const T& operator[](std::size_t idx) const { return data_[idx]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool operator==(const Volume&) const = default;

 private:
  int side_ = 0;
  std::vector<T> data_;
};

using Mask = Volume<std::uint8_t>;

}  // namespace surfvox
