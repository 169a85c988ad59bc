#ifndef HYPERSPEC_PALETTE_HPP
#define HYPERSPEC_PALETTE_HPP

#include <array>
#include <filesystem>
#include <vector>

#include "hyperspec/cube.hpp"

namespace hyperspec {

using Rgb = std::array<std::uint8_t, 3>;

/// Class 0 is black; class c >= 1 is the fully saturated hue
/// (137.508 * c) mod 360 degrees, channels rounded half up.
Rgb class_color(Label c);

struct ClassificationMap {
  Index height = 0;
  Index width = 0;
  std::vector<Label> labels;  // row-major, 0 = unlabeled
};

/// Copy of `map` with every pixel unlabeled in `gt` set to 0.
ClassificationMap mask_unlabeled(const ClassificationMap& map, const GroundTruthMap& gt);
ClassificationMap as_map(const GroundTruthMap& gt);

/// Binary P6 image, one palette color per pixel.
std::vector<std::uint8_t> encode_ppm(const ClassificationMap& map);
void write_ppm(const ClassificationMap& map, const std::filesystem::path& path);

}  // namespace hyperspec

#endif
