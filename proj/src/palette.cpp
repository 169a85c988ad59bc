#include "hyperspec/palette.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace hyperspec {

Rgb class_color(Label c) {
  if (c <= 0) return {0, 0, 0};
  const double hue = std::fmod(137.508 * static_cast<double>(c), 360.0) / 60.0;
  const double sector = std::floor(hue);
  const double f = hue - sector;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(sector)) {
    case 0: r = 1; g = f; b = 0; break;
    case 1: r = 1 - f; g = 1; b = 0; break;
    case 2: r = 0; g = 1; b = f; break;
    case 3: r = 0; g = 1 - f; b = 1; break;
    case 4: r = f; g = 0; b = 1; break;
    default: r = 1; g = 0; b = 1 - f; break;
  }
  const auto to_byte = [](double x) { return static_cast<std::uint8_t>(std::floor(x * 255.0 + 0.5)); };
  return {to_byte(r), to_byte(g), to_byte(b)};
}

ClassificationMap mask_unlabeled(const ClassificationMap& map, const GroundTruthMap& gt) {
  if (map.height != gt.height || map.width != gt.width) throw Error("map and ground truth dimensions differ");
  ClassificationMap out = map;
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    if (gt.labels[i] == 0) out.labels[i] = 0;
  }
  return out;
}

ClassificationMap as_map(const GroundTruthMap& gt) { return {gt.height, gt.width, gt.labels}; }

std::vector<std::uint8_t> encode_ppm(const ClassificationMap& map) {
  const std::string header = "P6\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + map.labels.size() * 3);
  for (Label l : map.labels) {
    const Rgb c = class_color(l);
    bytes.insert(bytes.end(), c.begin(), c.end());
  }
  return bytes;
}

void write_ppm(const ClassificationMap& map, const std::filesystem::path& path) {
  const auto bytes = encode_ppm(map);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace hyperspec
