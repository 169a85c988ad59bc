#ifndef HYPERSPEC_SAMPLES_HPP
#define HYPERSPEC_SAMPLES_HPP

#include <vector>

#include "hyperspec/cube.hpp"

namespace hyperspec {

/// Labeled feature vectors, one row per sample, columns follow band_ids.
struct LabeledSampleSet {
  MatrixXd features;
  std::vector<Label> labels;
  std::vector<Index> band_ids;
  Label num_classes = 0;

  Index size() const { return features.rows(); }
  Index dims() const { return features.cols(); }

  LabeledSampleSet subset(const std::vector<Index>& rows) const;
  /// Keeps only the first `n` feature columns.
  LabeledSampleSet leading_bands(Index n) const;
  /// Sample counts per class, indexed by label (slot 0 unused).
  std::vector<Index> class_counts() const;
};

struct SplitSpec {
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct Split {
  LabeledSampleSet train;
  LabeledSampleSet test;
  std::vector<Index> train_indices;
  std::vector<Index> test_indices;
};

LabeledSampleSet extract_labeled_samples(const HsiCube& cube, const GroundTruthMap& gt,
                                         const std::vector<Index>& band_ids);

/// Per-class seeded shuffle; ceil(n_c * fraction) samples go to train and
/// the remainder to test. Both index lists are ascending.
Split stratified_split(const LabeledSampleSet& set, const SplitSpec& spec);

}  // namespace hyperspec

#endif
