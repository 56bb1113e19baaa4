#pragma once

#include "surfvox/cvc.hpp"
#include "surfvox/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace surfvox {

// Per-voxel surface confidence for one view pair. p is 0 wherever `valid`
// (both CVCs valid) is false.
struct ProbabilityCube {
  CubeIndex cube_index;
  ViewPair pair;
  Volume<double> p;
  Mask valid;

  int side() const { return p.side(); }
};

struct PredictorSpec {
  std::string kind = "zncc";
  int window = 3;          // odd neighborhood side K
  double sharpness = 2.0;  // exponent applied to (z + 1) / 2

  void validate() const;
};

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string_view name() const = 0;
  virtual ProbabilityCube predict(const CvcVolume& a, const CvcVolume& b,
                                  const PredictorSpec& spec) const = 0;
};

// Windowed zero-mean normalized cross-correlation of the two grayscale CVCs,
// masked to jointly valid voxels and mapped to ((z + 1) / 2)^sharpness.
class ZnccPredictor final : public Predictor {
 public:
  std::string_view name() const override { return "zncc"; }
  ProbabilityCube predict(const CvcVolume& a, const CvcVolume& b,
                          const PredictorSpec& spec) const override;
};

// p = 0.5 on every jointly valid voxel.
class ConstantHalfPredictor final : public Predictor {
 public:
  std::string_view name() const override { return "constant-half"; }
  ProbabilityCube predict(const CvcVolume& a, const CvcVolume& b,
                          const PredictorSpec& spec) const override;
};

// Throws UnknownPredictor for unregistered kinds.
const Predictor& lookup_predictor(std::string_view kind);
std::vector<std::string> registered_predictors();

// Dispatches through the registry on spec.kind.
ProbabilityCube predict_pair(const CvcVolume& a, const CvcVolume& b, const PredictorSpec& spec);

}  // namespace surfvox
