#include "support.hpp"

#include "surfvox/cvc.hpp"

#include <doctest.h>

#include <cmath>

using namespace surfvox;
using namespace surfvox::test;

namespace {

RgbImage constant_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  return img;
}

RgbImage random_image(Rng& rng, int w, int h) {
  RgbImage img(w, h);
  for (auto& px : img.pixels) px = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
  return img;
}

}  // namespace

TEST_CASE("constant image gives constant valid colors") {
  const auto view = make_view(0, constant_image(32, 32, 51, 102, 153), axis_camera(Vec3(2, 2, -4), 8, 0, 0));
  const Cube cube = unit_cube(4, {}, Vec3(0, 0, 0), 1.0);
  const CvcVolume cvc = build_cvc(cube, view);
  int valid = 0;
  for (std::size_t i = 0; i < cvc.colors.size(); ++i) {
    if (!cvc.valid[i]) {
      CHECK(cvc.colors[i] == Rgb{});
      continue;
    }
    ++valid;
    CHECK(cvc.colors[i].r == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(cvc.colors[i].g == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cvc.colors[i].b == doctest::Approx(0.6).epsilon(1e-12));
  }
  CHECK(valid > 0);
}

TEST_CASE("cube behind the camera is entirely invalid") {
  const auto view = make_view(0, constant_image(16, 16, 200, 200, 200), axis_camera(Vec3(0, 0, 10), 4, 8, 8));
  const CvcVolume cvc = build_cvc(unit_cube(3), view);
  for (std::size_t i = 0; i < cvc.valid.size(); ++i) {
    CHECK(cvc.valid[i] == 0);
    CHECK(cvc.colors[i] == Rgb{});
  }
}

TEST_CASE("2x2 checkerboard matches hand bilinear interpolation") {
  RgbImage img(2, 2);
  const double value[2][2] = {{1.0, 0.0}, {0.0, 1.0}};  // [y][x]
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = value[y][x] > 0.5 ? 255 : 0;
  // Camera at z = -1 looking +z with f = 1: u = x / (z + 1), v = y / (z + 1).
  const auto view = make_view(0, img, axis_camera(Vec3(0, 0, -1), 1, 0, 0));
  const Cube cube = unit_cube(2, {}, Vec3::Zero(), 0.5);
  const CvcVolume cvc = build_cvc(cube, view);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const Vec3 x = cube.voxel_center(i, j, k);
        const double u = x[0] / (x[2] + 1.0);
        const double v = x[1] / (x[2] + 1.0);
        const double expect = (1 - u) * (1 - v) * value[0][0] + u * (1 - v) * value[0][1] +
                              (1 - u) * v * value[1][0] + u * v * value[1][1];
        REQUIRE(cvc.valid(i, j, k));
        CHECK(cvc.colors(i, j, k).r == doctest::Approx(expect).epsilon(1e-12));
        CHECK(cvc.colors(i, j, k).b == doctest::Approx(expect).epsilon(1e-12));
      }
}

TEST_CASE("samples needing pixels beyond the frame are invalid") {
  RgbImage img = constant_image(4, 4, 10, 10, 10);
  CHECK(sample_bilinear(img, 3.0, 3.0));
  CHECK(sample_bilinear(img, 0.0, 0.0));
  CHECK_FALSE(sample_bilinear(img, 3.0001, 1.0));
  CHECK_FALSE(sample_bilinear(img, 1.0, -0.0001));
}

TEST_CASE("cvc_gray") {
  CvcVolume cvc;
  cvc.colors = Volume<Rgb>(2);
  cvc.valid = Mask(2, 1);
  cvc.colors[0] = {1, 1, 1};
  cvc.colors[1] = {0, 1, 0};
  cvc.valid[2] = 0;
  cvc.colors[2] = {};
  Rng rng(8);
  for (std::size_t i = 3; i < 8; ++i) cvc.colors[i] = {uniform(rng), uniform(rng), uniform(rng)};
  const auto gray = cvc_gray(cvc);
  CHECK(gray[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gray[1] == 0.587);
  CHECK(gray[2] == 0.0);
  for (std::size_t i = 3; i < 8; ++i) {
    const Rgb c = cvc.colors[i];
    CHECK(gray[i] == doctest::Approx(0.299 * c.r + 0.587 * c.g + 0.114 * c.b).epsilon(1e-15));
  }
}

TEST_CASE("colors stay in range and translation is equivariant") {
  Rng rng(21);
  const RgbImage img = random_image(rng, 48, 40);
  const Mat34 p = axis_camera(Vec3(1.0, 1.0, -6.0), 20.0, 10.0, 8.0);
  const Vec3 t(3.25, -1.5, 7.0);
  Mat34 shifted = p;
  shifted.col(3) = p.col(3) - p.leftCols<3>() * t;
  const Cube a = unit_cube(6, {}, Vec3(0.0, 0.0, 0.0), 0.2);
  Cube b = a;
  b.origin += t;
  const CvcVolume ca = build_cvc(a, make_view(0, img, p));
  const CvcVolume cb = build_cvc(b, make_view(0, img, shifted));
  int valid = 0;
  for (std::size_t i = 0; i < ca.colors.size(); ++i) {
    CHECK(ca.valid[i] == cb.valid[i]);
    if (!ca.valid[i]) continue;
    ++valid;
    for (double c : {ca.colors[i].r, ca.colors[i].g, ca.colors[i].b}) {
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
    CHECK(ca.colors[i].r == doctest::Approx(cb.colors[i].r).epsilon(1e-9));
    CHECK(ca.colors[i].g == doctest::Approx(cb.colors[i].g).epsilon(1e-9));
  }
  CHECK(valid > 100);
}
