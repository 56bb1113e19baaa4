#pragma once

#include "surfvox/binarize.hpp"
#include "surfvox/cvc.hpp"
#include "surfvox/fusion.hpp"
#include "surfvox/geometry.hpp"
#include "surfvox/predictor.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace surfvox::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// K [I | -eye] with K = diag(f, f, 1) plus principal point (cx, cy): a camera
// at `eye` looking down world +z with image x along world x.
inline Mat34 axis_camera(const Vec3& eye, double f, double cx, double cy) {
  Mat3 k;
  k << f, 0, cx, 0, f, cy, 0, 0, 1;
  Mat34 rt;
  rt.leftCols<3>() = Mat3::Identity();
  rt.col(3) = -eye;
  return k * rt;
}

// Camera looking down world +x (image x = world y, image y = world z).
inline Mat34 side_camera(const Vec3& eye, double f, double cx, double cy) {
  Mat3 k;
  k << f, 0, cx, 0, f, cy, 0, 0, 1;
  Mat3 r;
  r << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  Mat34 rt;
  rt.leftCols<3>() = r;
  rt.col(3) = -r * eye;
  return k * rt;
}

inline CameraView blank_view(int id, int w, int h, const Mat34& proj) {
  return make_view(id, RgbImage(w, h), proj);
}

inline Cube unit_cube(int side, CubeIndex index = {}, Vec3 origin = Vec3::Zero(), double vs = 1.0) {
  Cube c;
  c.index = index;
  c.side = side;
  c.origin = origin;
  c.voxel_size = vs;
  return c;
}

inline ProbabilityCube random_prob_cube(Rng& rng, int side, ViewPair pair, double valid_rate = 0.8,
                                        CubeIndex index = {}) {
  ProbabilityCube pc;
  pc.cube_index = index;
  pc.pair = pair;
  pc.p = Volume<double>(side, 0.0);
  pc.valid = Mask(side, 0);
  for (std::size_t i = 0; i < pc.p.size(); ++i) {
    if (uniform(rng) < valid_rate) {
      pc.valid[i] = 1;
      pc.p[i] = uniform(rng);
    }
  }
  return pc;
}

// Fused cube with random p in [0,1] and a random vote field over `views` views.
inline FusedCube random_fused(Rng& rng, int side, CubeIndex index, int views) {
  FusedCube f;
  f.cube_index = index;
  f.p = Volume<double>(side, 0.0);
  f.valid = Mask(side, 1);
  f.votes.votes = Volume<std::uint16_t>(side, 0);
  f.votes.views_seeing = views;
  for (std::size_t i = 0; i < f.p.size(); ++i) {
    f.p[i] = uniform(rng);
    f.votes.votes[i] = static_cast<std::uint16_t>(uniform_int(rng, 0, views));
  }
  return f;
}

inline CvcVolume gray_cvc(const Volume<double>& gray, int view_id, CubeIndex index = {}) {
  CvcVolume c;
  c.cube_index = index;
  c.view_id = view_id;
  c.colors = Volume<Rgb>(gray.side());
  c.valid = Mask(gray.side(), 1);
  for (std::size_t i = 0; i < gray.size(); ++i) c.colors[i] = {gray[i], gray[i], gray[i]};
  return c;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("surfvox_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace surfvox::test
