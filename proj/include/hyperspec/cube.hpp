#ifndef HYPERSPEC_CUBE_HPP
#define HYPERSPEC_CUBE_HPP

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "hyperspec/common.hpp"

namespace hyperspec {

/// H x W x B radiance cube. Storage is a (H*W) x B column-major matrix, so
/// column b is band b as a row-major H x W image and the raw buffer is
/// exactly the band-sequential file payload.
template <typename Scalar>
struct Cube {
  Index height = 0;
  Index width = 0;
  Matrix<Scalar> data;

  Cube() = default;
  Cube(Index h, Index w, Index b) : height(h), width(w), data(h * w, b) {}

  Index bands() const { return data.cols(); }
  Index pixels() const { return height * width; }

  auto band(Index b) const { return data.col(b); }
  auto band(Index b) { return data.col(b); }
};

using HsiCube = Cube<float>;

/// Per-pixel class raster. Label 0 marks unlabeled pixels.
struct GroundTruthMap {
  Index height = 0;
  Index width = 0;
  std::vector<Label> labels;
  Label num_classes = 0;
  std::vector<std::string> warnings;

  Index pixels() const { return height * width; }
  Index labeled_count() const;
};

struct QuantizedBand {
  Index height = 0;
  Index width = 0;
  int levels = 0;
  std::vector<std::int32_t> codes;
};

/// Validates labels and derives num_classes (= max label). Empty classes
/// inside 1..max are reported in `warnings`.
GroundTruthMap make_ground_truth(Index height, Index width, std::vector<Label> labels);

HsiCube load_cube(const std::filesystem::path& path);
void save_cube(const HsiCube& cube, const std::filesystem::path& path);

GroundTruthMap load_ground_truth(const std::filesystem::path& path,
                                 std::pair<Index, Index> expected_dims);
void save_ground_truth(const GroundTruthMap& gt, const std::filesystem::path& path);

/// Min-max quantization to `levels` codes: floor((v - min) / (max - min) * L)
/// clamped to [0, L-1]; a constant input maps to code 0.
template <typename Derived>
std::vector<std::int32_t> quantize(const Eigen::DenseBase<Derived>& values, int levels) {
  if (levels < 2) throw Error("quantization needs at least 2 levels");
  std::vector<std::int32_t> codes(static_cast<std::size_t>(values.size()), 0);
  if (values.size() == 0) return codes;
  const double lo = static_cast<double>(values.minCoeff());
  const double hi = static_cast<double>(values.maxCoeff());
  if (!(hi > lo)) return codes;
  const double scale = static_cast<double>(levels) / (hi - lo);
  for (Index i = 0; i < values.size(); ++i) {
    const double q = std::floor((static_cast<double>(values(i)) - lo) * scale);
    codes[static_cast<std::size_t>(i)] =
        static_cast<std::int32_t>(std::clamp(q, 0.0, static_cast<double>(levels - 1)));
  }
  return codes;
}

QuantizedBand quantize_band(const HsiCube& cube, Index band, int levels = 256);

}  // namespace hyperspec

#endif
