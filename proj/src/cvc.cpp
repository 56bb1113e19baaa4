#include "surfvox/cvc.hpp"

#include <algorithm>
#include <cmath>

namespace surfvox {

std::optional<Rgb> sample_bilinear(const RgbImage& image, double u, double v) {
  if (!(u >= 0.0 && v >= 0.0 && u <= image.width - 1.0 && v <= image.height - 1.0)) {
    return std::nullopt;
  }
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const int x1 = std::min(x0 + 1, image.width - 1);
  const int y1 = std::min(y0 + 1, image.height - 1);
  const double fx = u - x0;
  const double fy = v - y0;

  const Rgb c00 = image.color(x0, y0);
  const Rgb c10 = image.color(x1, y0);
  const Rgb c01 = image.color(x0, y1);
  const Rgb c11 = image.color(x1, y1);
  auto mix = [&](double a, double b, double c, double d) {
    return (1.0 - fy) * ((1.0 - fx) * a + fx * b) + fy * ((1.0 - fx) * c + fx * d);
  };
  return Rgb{mix(c00.r, c10.r, c01.r, c11.r), mix(c00.g, c10.g, c01.g, c11.g),
             mix(c00.b, c10.b, c01.b, c11.b)};
}

CvcVolume build_cvc(const Cube& cube, const CameraView& view) {
  CvcVolume cvc;
  cvc.cube_index = cube.index;
  cvc.view_id = view.id;
  cvc.colors = Volume<Rgb>(cube.side);
  cvc.valid = Mask(cube.side, 0);

  const ImageSize bounds = view.size();
  for (int i = 0; i < cube.side; ++i) {
    for (int j = 0; j < cube.side; ++j) {
      for (int k = 0; k < cube.side; ++k) {
        const auto proj = project(view.proj, cube.voxel_center(i, j, k), bounds);
        if (!proj) continue;
        const auto color = sample_bilinear(view.image, proj->u, proj->v);
        if (!color) continue;
        const std::size_t idx = cvc.colors.linear(i, j, k);
        cvc.colors[idx] = *color;
        cvc.valid[idx] = 1;
      }
    }
  }
  return cvc;
}

Volume<double> cvc_gray(const CvcVolume& cvc) {
  Volume<double> gray(cvc.side(), 0.0);
  for (std::size_t idx = 0; idx < gray.size(); ++idx) {
    if (cvc.valid[idx]) gray[idx] = luminance(cvc.colors[idx]);
  }
  return gray;
}

}  // namespace surfvox
