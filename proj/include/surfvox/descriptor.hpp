#pragma once

#include "surfvox/geometry.hpp"
#include "surfvox/types.hpp"

#include <array>
#include <optional>
#include <vector>

namespace surfvox {

inline constexpr int kPatchSize = 64;
inline constexpr int kPoolCells = 8;  // 8x8 pooling grid per block
inline constexpr int kEmbeddingDim = 2 * kPoolCells * kPoolCells;

// 64x64 grayscale crop, values in [0,1], row-major.
struct GrayPatch {
  int source_view = -1;
  CubeIndex cube_index;
  std::vector<double> values = std::vector<double>(kPatchSize * kPatchSize, 0.0);

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * kPatchSize + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * kPatchSize + x]; }
};

struct PatchEmbedding {
  std::array<double, kEmbeddingDim> vec{};
  int source_view = -1;
  CubeIndex cube_index;
};

// Crop centered on the rounded projection of the cube center. nullopt when
// the center projects behind the camera or any crop pixel leaves the frame.
std::optional<GrayPatch> extract_patch(const Cube& cube, const CameraView& view);

// Mean-subtracted 8x8 pooled intensity followed by 8x8 pooled gradient
// magnitude, jointly L2-normalized. Flat patches embed to the zero vector.
PatchEmbedding embed(const GrayPatch& patch);

// Euclidean distance; throws CubeMismatch for embeddings of different cubes.
double dissimilarity(const PatchEmbedding& a, const PatchEmbedding& b);

}  // namespace surfvox
