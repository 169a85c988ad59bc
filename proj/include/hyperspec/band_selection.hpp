#ifndef HYPERSPEC_BAND_SELECTION_HPP
#define HYPERSPEC_BAND_SELECTION_HPP

#include <iosfwd>
#include <vector>

#include "hyperspec/cube.hpp"
#include "hyperspec/info_theory.hpp"

namespace hyperspec {

/// How the reference map is updated when a candidate band is tried.
enum class GestRule {
  kMeanOfAccepted,     ///< mean over all accepted bands plus the candidate
  kPairwiseRecursive,  ///< (previous reference map + candidate) / 2
};

struct SelectionConfig {
  Index max_bands = 100;
  int levels = 256;
  double threshold = 0.0;
  GestRule gest_rule = GestRule::kMeanOfAccepted;
};

struct BandScore {
  Index band;
  double mi_bits;
};

struct SelectionTrial {
  Index band;
  double trial_mi_bits;
  bool accepted;
  Index cumulative_selected;
};

struct SelectionState {
  std::vector<Index> accepted;
  VectorXd gest;  // H*W, row-major
  double current_mi = 0.0;
  std::vector<SelectionTrial> trace;
  std::vector<BandScore> ranking;
};

/// MI between the ground truth and a real-valued H*W map, both restricted
/// to labeled pixels; the map is min-max quantized over those pixels.
template <typename Derived>
double mi_with_ground_truth(const Eigen::DenseBase<Derived>& map, const GroundTruthMap& gt, int levels);

/// Bands sorted by descending MI with the ground truth; ties by band id.
std::vector<BandScore> rank_bands_by_mi(const HsiCube& cube, const GroundTruthMap& gt, int levels = 256);

/// Pixel-wise mean of the listed bands.
VectorXd build_gest(const HsiCube& cube, const std::vector<Index>& bands);

/// Greedy forward selection: seed with the top-ranked band, then visit the
/// rest in rank order and keep a candidate only if MI(GT, reference map)
/// rises by more than `threshold`. Rejected bands are not revisited.
SelectionState select_bands(const HsiCube& cube, const GroundTruthMap& gt, const SelectionConfig& config);

/// CSV with columns band_id,trial_mi_bits,accepted,cumulative_selected.
void write_trace_csv(const SelectionState& state, std::ostream& out);

namespace detail {
std::vector<Index> labeled_pixels(const GroundTruthMap& gt);
double mi_on_pixels(const double* map, const std::vector<Index>& pixels, const std::vector<Symbol>& gt_symbols,
                    int levels);
}  // namespace detail

template <typename Derived>
double mi_with_ground_truth(const Eigen::DenseBase<Derived>& map, const GroundTruthMap& gt, int levels) {
  if (map.size() != gt.pixels()) throw Error("map and ground truth sizes differ");
  const VectorXd values = map.derived().template cast<double>();
  const auto pixels = detail::labeled_pixels(gt);
  if (pixels.empty()) throw Error("no labeled pixels");
  std::vector<Symbol> symbols;
  symbols.reserve(pixels.size());
  for (Index p : pixels) symbols.push_back(gt.labels[static_cast<std::size_t>(p)]);
  return detail::mi_on_pixels(values.data(), pixels, symbols, levels);
}

}  // namespace hyperspec

#endif
