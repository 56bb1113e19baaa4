#pragma once

#include "surfvox/geometry.hpp"
#include "surfvox/types.hpp"

#include <optional>

namespace surfvox {

// Colored voxel cube: the image color seen at each voxel center's projection.
// Voxels whose projection misses the frame are invalid and carry color 0.
struct CvcVolume {
  CubeIndex cube_index;
  int view_id = 0;
  Volume<Rgb> colors;
  Mask valid;

  int side() const { return colors.side(); }
};

// Bilinear sample with colors in [0,1]; nullopt outside [0,W-1] x [0,H-1].
std::optional<Rgb> sample_bilinear(const RgbImage& image, double u, double v);

CvcVolume build_cvc(const Cube& cube, const CameraView& view);

// Rec. 601 luminance per voxel; invalid voxels map to 0.
Volume<double> cvc_gray(const CvcVolume& cvc);

}  // namespace surfvox
