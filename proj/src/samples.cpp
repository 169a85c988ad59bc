#include "hyperspec/samples.hpp"

#include <cmath>
#include <set>

namespace hyperspec {

LabeledSampleSet LabeledSampleSet::subset(const std::vector<Index>& rows) const {
  LabeledSampleSet out;
  out.features.resize(static_cast<Index>(rows.size()), dims());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Index>(i)) = features.row(rows[i]);
    out.labels.push_back(labels[static_cast<std::size_t>(rows[i])]);
  }
  out.band_ids = band_ids;
  out.num_classes = num_classes;
  return out;
}

LabeledSampleSet LabeledSampleSet::leading_bands(Index n) const {
  n = std::min(n, dims());
  LabeledSampleSet out;
  out.features = features.leftCols(n);
  out.labels = labels;
  out.band_ids.assign(band_ids.begin(), band_ids.begin() + n);
  out.num_classes = num_classes;
  return out;
}

std::vector<Index> LabeledSampleSet::class_counts() const {
  std::vector<Index> counts(static_cast<std::size_t>(num_classes) + 1, 0);
  for (Label l : labels) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

LabeledSampleSet extract_labeled_samples(const HsiCube& cube, const GroundTruthMap& gt,
                                         const std::vector<Index>& band_ids) {
  if (band_ids.empty()) throw Error("empty band list");
  if (gt.height != cube.height || gt.width != cube.width) throw Error("ground truth and cube dimensions differ");
  std::set<Index> seen;
  for (Index b : band_ids) {
    if (b < 0 || b >= cube.bands()) throw Error("band " + std::to_string(b) + " out of range");
    if (!seen.insert(b).second) throw Error("duplicate band " + std::to_string(b));
  }
  const Index n = gt.labeled_count();
  if (n == 0) throw Error("no labeled pixels");

  LabeledSampleSet set;
  set.features.resize(n, static_cast<Index>(band_ids.size()));
  set.labels.reserve(static_cast<std::size_t>(n));
  set.band_ids = band_ids;
  set.num_classes = gt.num_classes;
  Index row = 0;
  for (Index p = 0; p < gt.pixels(); ++p) {
    const Label l = gt.labels[static_cast<std::size_t>(p)];
    if (l == 0) continue;
    for (std::size_t j = 0; j < band_ids.size(); ++j) {
      set.features(row, static_cast<Index>(j)) = cube.data(p, band_ids[j]);
    }
    set.labels.push_back(l);
    ++row;
  }
  return set;
}

Split stratified_split(const LabeledSampleSet& set, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error("train fraction must lie strictly between 0 and 1");
  }
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(set.num_classes) + 1);
  for (Index i = 0; i < set.size(); ++i) {
    by_class[static_cast<std::size_t>(set.labels[static_cast<std::size_t>(i)])].push_back(i);
  }
  bool any = false;
  for (Label c = 1; c <= set.num_classes; ++c) {
    const auto& members = by_class[static_cast<std::size_t>(c)];
    if (members.empty()) continue;
    any = true;
    if (members.size() < 2) throw Error("class " + std::to_string(c) + " has fewer than 2 samples");
  }
  if (!any) throw Error("no labeled samples to split");

  Split split;
  for (Label c = 1; c <= set.num_classes; ++c) {
    auto members = by_class[static_cast<std::size_t>(c)];
    if (members.empty()) continue;
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(c)));
    shuffle(members, rng);
    const auto n = static_cast<Index>(members.size());
    // The epsilon keeps exact products such as 0.3 * 10 from rounding up.
    auto n_train = static_cast<Index>(std::ceil(static_cast<double>(n) * spec.train_fraction - 1e-9));
    n_train = std::clamp<Index>(n_train, 1, n - 1);
    split.train_indices.insert(split.train_indices.end(), members.begin(), members.begin() + n_train);
    split.test_indices.insert(split.test_indices.end(), members.begin() + n_train, members.end());
  }
  std::sort(split.train_indices.begin(), split.train_indices.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  split.train = set.subset(split.train_indices);
  split.test = set.subset(split.test_indices);
  return split;
}

}  // namespace hyperspec
