#include "hyperspec/band_selection.hpp"

#include <ostream>

#include "hyperspec/csv.hpp"
#include "hyperspec/info_theory.hpp"

namespace hyperspec {

namespace detail {

std::vector<Index> labeled_pixels(const GroundTruthMap& gt) {
  std::vector<Index> pixels;
  for (Index p = 0; p < gt.pixels(); ++p) {
    if (gt.labels[static_cast<std::size_t>(p)] != 0) pixels.push_back(p);
  }
  return pixels;
}

double mi_on_pixels(const double* map, const std::vector<Index>& pixels, const std::vector<Symbol>& gt_symbols,
                    int levels) {
  VectorXd values(static_cast<Index>(pixels.size()));
  for (std::size_t i = 0; i < pixels.size(); ++i) values(static_cast<Index>(i)) = map[pixels[i]];
  const auto codes = quantize(values, levels);
  return mutual_information(codes, gt_symbols);
}

}  // namespace detail

namespace {

struct LabeledView {
  std::vector<Index> pixels;
  std::vector<Symbol> symbols;
};

LabeledView labeled_view(const HsiCube& cube, const GroundTruthMap& gt) {
  if (gt.height != cube.height || gt.width != cube.width) throw Error("ground truth and cube dimensions differ");
  LabeledView view;
  view.pixels = detail::labeled_pixels(gt);
  if (view.pixels.empty()) throw Error("no labeled pixels");
  for (Index p : view.pixels) view.symbols.push_back(gt.labels[static_cast<std::size_t>(p)]);
  return view;
}

}  // namespace

std::vector<BandScore> rank_bands_by_mi(const HsiCube& cube, const GroundTruthMap& gt, int levels) {
  const LabeledView view = labeled_view(cube, gt);
  std::vector<BandScore> scores(static_cast<std::size_t>(cube.bands()));
  parallel_for(scores.size(), [&](std::size_t b) {
    const VectorXd band = cube.band(static_cast<Index>(b)).cast<double>();
    scores[b] = {static_cast<Index>(b), detail::mi_on_pixels(band.data(), view.pixels, view.symbols, levels)};
  });
  std::stable_sort(scores.begin(), scores.end(),
                   [](const BandScore& a, const BandScore& b) { return a.mi_bits > b.mi_bits; });
  return scores;
}

VectorXd build_gest(const HsiCube& cube, const std::vector<Index>& bands) {
  if (bands.empty()) throw Error("reference map needs at least one band");
  VectorXd sum = VectorXd::Zero(cube.pixels());
  for (Index b : bands) {
    if (b < 0 || b >= cube.bands()) throw Error("band " + std::to_string(b) + " out of range");
    sum += cube.band(b).cast<double>();
  }
  return sum / static_cast<double>(bands.size());
}

SelectionState select_bands(const HsiCube& cube, const GroundTruthMap& gt, const SelectionConfig& config) {
  if (config.max_bands < 1) throw Error("max_bands must be >= 1");
  if (config.threshold < 0.0) throw Error("selection threshold must be non-negative");
  const LabeledView view = labeled_view(cube, gt);

  SelectionState state;
  state.ranking = rank_bands_by_mi(cube, gt, config.levels);

  const Index seed = state.ranking.front().band;
  state.accepted.push_back(seed);
  VectorXd sum = cube.band(seed).cast<double>();
  state.gest = sum;
  state.current_mi = detail::mi_on_pixels(state.gest.data(), view.pixels, view.symbols, config.levels);
  state.trace.push_back({seed, state.current_mi, true, 1});

  VectorXd trial;
  for (std::size_t r = 1; r < state.ranking.size(); ++r) {
    if (static_cast<Index>(state.accepted.size()) >= config.max_bands) break;
    const Index candidate = state.ranking[r].band;
    const auto k = static_cast<double>(state.accepted.size());
    if (config.gest_rule == GestRule::kMeanOfAccepted) {
      trial = (sum + cube.band(candidate).cast<double>()) / (k + 1.0);
    } else {
      trial = (state.gest + cube.band(candidate).cast<double>()) / 2.0;
    }
    const double trial_mi = detail::mi_on_pixels(trial.data(), view.pixels, view.symbols, config.levels);
    const bool accept = trial_mi > state.current_mi + config.threshold;
    if (accept) {
      state.accepted.push_back(candidate);
      sum += cube.band(candidate).cast<double>();
      state.gest = trial;
      state.current_mi = trial_mi;
    }
    state.trace.push_back({candidate, trial_mi, accept, static_cast<Index>(state.accepted.size())});
  }
  return state;
}

void write_trace_csv(const SelectionState& state, std::ostream& out) {
  out << "band_id,trial_mi_bits,accepted,cumulative_selected\n";
  for (const auto& t : state.trace) {
    out << t.band << ',' << format_real(t.trial_mi_bits) << ',' << (t.accepted ? 1 : 0) << ','
        << t.cumulative_selected << '\n';
  }
}

}  // namespace hyperspec
