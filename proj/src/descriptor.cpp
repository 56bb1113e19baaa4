#include "surfvox/descriptor.hpp"

#include "surfvox/error.hpp"

#include <cmath>

namespace surfvox {

namespace {

constexpr int kCellPixels = kPatchSize / kPoolCells;
constexpr double kFlatNorm = 1e-12;

double pixel_gray(const RgbImage& image, int x, int y) {
  return luminance(image.color(x, y));
}

// Central differences inside, one-sided at the border.
double gradient_magnitude(const GrayPatch& patch, int x, int y) {
  const int last = kPatchSize - 1;
  double gx = 0.0;
  double gy = 0.0;
  if (x == 0) {
    gx = patch.at(1, y) - patch.at(0, y);
  } else if (x == last) {
    gx = patch.at(last, y) - patch.at(last - 1, y);
  } else {
    gx = 0.5 * (patch.at(x + 1, y) - patch.at(x - 1, y));
  }
  if (y == 0) {
    gy = patch.at(x, 1) - patch.at(x, 0);
  } else if (y == last) {
    gy = patch.at(x, last) - patch.at(x, last - 1);
  } else {
    gy = 0.5 * (patch.at(x, y + 1) - patch.at(x, y - 1));
  }
  return std::sqrt(gx * gx + gy * gy);
}

}  // namespace

std::optional<GrayPatch> extract_patch(const Cube& cube, const CameraView& view) {
  const auto proj = project(view.proj, cube.center(), view.size());
  if (!proj) return std::nullopt;
  const long cx = std::lround(proj->u);
  const long cy = std::lround(proj->v);
  const long x0 = cx - kPatchSize / 2;
  const long y0 = cy - kPatchSize / 2;
  if (x0 < 0 || y0 < 0 || x0 + kPatchSize > view.image.width || y0 + kPatchSize > view.image.height) {
    return std::nullopt;
  }

  GrayPatch patch;
  patch.source_view = view.id;
  patch.cube_index = cube.index;
  for (int y = 0; y < kPatchSize; ++y) {
    for (int x = 0; x < kPatchSize; ++x) {
      patch.at(x, y) = pixel_gray(view.image, static_cast<int>(x0) + x, static_cast<int>(y0) + y);
    }
  }
  return patch;
}

PatchEmbedding embed(const GrayPatch& patch) {
  PatchEmbedding out;
  out.source_view = patch.source_view;
  out.cube_index = patch.cube_index;

  constexpr int kCells = kPoolCells * kPoolCells;
  constexpr double kCellArea = kCellPixels * kCellPixels;
  double intensity_mean = 0.0;
  for (int cy = 0; cy < kPoolCells; ++cy) {
    for (int cx = 0; cx < kPoolCells; ++cx) {
      double sum = 0.0;
      double grad = 0.0;
      for (int y = cy * kCellPixels; y < (cy + 1) * kCellPixels; ++y) {
        for (int x = cx * kCellPixels; x < (cx + 1) * kCellPixels; ++x) {
          sum += patch.at(x, y);
          grad += gradient_magnitude(patch, x, y);
        }
      }
      const int cell = cy * kPoolCells + cx;
      out.vec[cell] = sum / kCellArea;
      out.vec[kCells + cell] = grad / kCellArea;
      intensity_mean += out.vec[cell];
    }
  }
  intensity_mean /= kCells;
  for (int cell = 0; cell < kCells; ++cell) out.vec[cell] -= intensity_mean;

  double norm2 = 0.0;
  for (double v : out.vec) norm2 += v * v;
  const double norm = std::sqrt(norm2);
  if (norm < kFlatNorm) {
    out.vec.fill(0.0);
  } else {
    for (double& v : out.vec) v /= norm;
  }
  return out;
}

double dissimilarity(const PatchEmbedding& a, const PatchEmbedding& b) {
  if (a.cube_index != b.cube_index) {
    throw Error(ErrorCode::CubeMismatch, "embeddings belong to different cubes");
  }
  double sum = 0.0;
  for (int i = 0; i < kEmbeddingDim; ++i) {
    const double diff = a.vec[i] - b.vec[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace surfvox
