#pragma once

#include "surfvox/config.hpp"
#include "surfvox/geometry.hpp"
#include "surfvox/weighting.hpp"

#include <filesystem>
#include <set>
#include <span>
#include <vector>

namespace surfvox {

// A scene whose manifest carries voxel_size and a ground-truth grid.
struct TrainingScene {
  std::vector<CameraView> views;
  BBox bbox;
  double voxel_size = 0.0;
  std::set<VoxelIndex> gt;
};

TrainingScene load_training_scene(const std::filesystem::path& manifest_path);

// `dir`/scene.txt if present, plus scene.txt of every direct subdirectory,
// sorted by path. Throws EmptyInput when none is found.
std::vector<std::filesystem::path> find_scene_manifests(const std::filesystem::path& dir);

struct PairSample {
  CubeIndex cube_index;
  ViewPair pair;
  double theta = 0.0;
  double d = 0.0;
  Embedding e_i{};
  Embedding e_j{};
  double iou = 0.0;  // thresholded prediction vs. ground truth inside the cube
};

// Every candidate pair of every cube that contains ground truth, predicted
// with config.predictor and thresholded at config.tau.
std::vector<PairSample> collect_pair_samples(const TrainingScene& scene, const PipelineConfig& config);

std::vector<WeightSample> weight_samples(std::span<const PairSample> pairs);

// A pair counts as similar when its IoU reaches `min_iou`.
std::vector<GateSample> gate_samples(std::span<const PairSample> pairs, double min_iou = 0.25);

}  // namespace surfvox
