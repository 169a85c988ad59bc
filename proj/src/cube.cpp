#include "hyperspec/cube.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include <json.hpp>

namespace hyperspec {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path sidecar_path(const fs::path& path) {
  return fs::path(path.string() + ".json");
}

json read_sidecar(const fs::path& path) {
  const fs::path side = sidecar_path(path);
  std::ifstream in(side);
  if (!in) throw Error("cannot open header " + side.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("garbled header " + side.string() + ": " + e.what());
  }
}

Index header_dim(const json& header, const char* key, const fs::path& path) {
  if (!header.contains(key) || !header[key].is_number_integer()) {
    throw Error("header " + sidecar_path(path).string() + " lacks integer \"" + key + "\"");
  }
  const auto v = header[key].get<std::int64_t>();
  if (v < 1) throw Error(std::string("header field \"") + key + "\" must be >= 1");
  return static_cast<Index>(v);
}

std::vector<char> read_payload(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, const char* bytes, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes, static_cast<std::streamsize>(size));
  if (!out) throw Error("short write on " + path.string());
}

void write_sidecar(const fs::path& path, const json& header) {
  const std::string text = header.dump();
  write_file(sidecar_path(path), text.data(), text.size());
}

template <typename UInt>
UInt byteswap_if_big(UInt v) {
  if constexpr (std::endian::native == std::endian::big) {
    UInt r = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
      r = static_cast<UInt>((r << 8) | ((v >> (8 * i)) & 0xff));
    }
    return r;
  }
  return v;
}

}  // namespace

Index GroundTruthMap::labeled_count() const {
  return static_cast<Index>(std::count_if(labels.begin(), labels.end(), [](Label l) { return l != 0; }));
}

GroundTruthMap make_ground_truth(Index height, Index width, std::vector<Label> labels) {
  if (height < 1 || width < 1) throw Error("ground truth dimensions must be positive");
  if (static_cast<Index>(labels.size()) != height * width) {
    throw Error("ground truth holds " + std::to_string(labels.size()) + " labels, expected " +
                std::to_string(height * width));
  }
  GroundTruthMap gt;
  gt.height = height;
  gt.width = width;
  std::set<Label> present;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      throw Error("negative label " + std::to_string(labels[i]) + " at pixel " + std::to_string(i));
    }
    if (labels[i] > 0) present.insert(labels[i]);
  }
  gt.num_classes = present.empty() ? 0 : *present.rbegin();
  for (Label c = 1; c <= gt.num_classes; ++c) {
    if (!present.count(c)) gt.warnings.push_back("class " + std::to_string(c) + " empty");
  }
  gt.labels = std::move(labels);
  return gt;
}

HsiCube load_cube(const fs::path& path) {
  const json header = read_sidecar(path);
  const Index h = header_dim(header, "height", path);
  const Index w = header_dim(header, "width", path);
  const Index b = header_dim(header, "bands", path);
  if (header.value("dtype", "f32le") != "f32le") throw Error("unsupported dtype in " + path.string());
  if (header.value("order", "bsq") != "bsq") throw Error("unsupported interleave in " + path.string());

  const std::vector<char> bytes = read_payload(path);
  const std::size_t expected = static_cast<std::size_t>(h * w * b) * sizeof(float);
  if (bytes.size() != expected) {
    throw Error("payload size mismatch in " + path.string() + ": " + std::to_string(bytes.size()) +
                " bytes, header implies " + std::to_string(expected));
  }

  HsiCube cube(h, w, b);
  float* out = cube.data.data();
  for (std::size_t i = 0; i < static_cast<std::size_t>(h * w * b); ++i) {
    std::uint32_t raw;
    std::memcpy(&raw, bytes.data() + i * sizeof(float), sizeof raw);
    const float v = std::bit_cast<float>(byteswap_if_big(raw));
    if (!std::isfinite(v)) {
      throw Error("non-finite sample at byte offset " + std::to_string(i * sizeof(float)) + " in " +
                  path.string());
    }
    out[i] = v;
  }
  return cube;
}

void save_cube(const HsiCube& cube, const fs::path& path) {
  const std::size_t n = static_cast<std::size_t>(cube.data.size());
  std::vector<std::uint32_t> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = byteswap_if_big(std::bit_cast<std::uint32_t>(cube.data.data()[i]));
  }
  write_file(path, reinterpret_cast<const char*>(raw.data()), n * sizeof(std::uint32_t));
  write_sidecar(path, {{"height", cube.height},
                       {"width", cube.width},
                       {"bands", cube.bands()},
                       {"dtype", "f32le"},
                       {"order", "bsq"}});
}

GroundTruthMap load_ground_truth(const fs::path& path, std::pair<Index, Index> expected_dims) {
  const json header = read_sidecar(path);
  const Index h = header_dim(header, "height", path);
  const Index w = header_dim(header, "width", path);
  if (h != expected_dims.first || w != expected_dims.second) {
    throw Error("ground truth is " + std::to_string(h) + "x" + std::to_string(w) + ", cube is " +
                std::to_string(expected_dims.first) + "x" + std::to_string(expected_dims.second));
  }
  const std::vector<char> bytes = read_payload(path);
  const std::size_t expected = static_cast<std::size_t>(h * w) * sizeof(std::uint16_t);
  if (bytes.size() != expected) {
    throw Error("payload size mismatch in " + path.string() + ": " + std::to_string(bytes.size()) +
                " bytes, header implies " + std::to_string(expected));
  }
  std::vector<Label> labels(static_cast<std::size_t>(h * w));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::uint16_t raw;
    std::memcpy(&raw, bytes.data() + i * sizeof raw, sizeof raw);
    labels[i] = byteswap_if_big(raw);
  }
  return make_ground_truth(h, w, std::move(labels));
}

void save_ground_truth(const GroundTruthMap& gt, const fs::path& path) {
  std::vector<std::uint16_t> raw(gt.labels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (gt.labels[i] < 0 || gt.labels[i] > 0xffff) throw Error("label does not fit uint16");
    raw[i] = byteswap_if_big(static_cast<std::uint16_t>(gt.labels[i]));
  }
  write_file(path, reinterpret_cast<const char*>(raw.data()), raw.size() * sizeof(std::uint16_t));
  write_sidecar(path, {{"height", gt.height}, {"width", gt.width}});
}

QuantizedBand quantize_band(const HsiCube& cube, Index band, int levels) {
  if (band < 0 || band >= cube.bands()) {
    throw Error("band " + std::to_string(band) + " out of range [0, " + std::to_string(cube.bands()) + ")");
  }
  return {cube.height, cube.width, levels, quantize(cube.band(band), levels)};
}

}  // namespace hyperspec
