#ifndef HYPERSPEC_GRID_SEARCH_HPP
#define HYPERSPEC_GRID_SEARCH_HPP

#include <vector>

#include "hyperspec/classifier.hpp"

namespace hyperspec {

struct CvResult {
  ClassifierSpec best;
  std::vector<double> mean_oa;  // one per grid entry; empty for a single-entry grid
};

/// Fold id in [0, folds) per sample. Each class is shuffled with its own
/// seeded stream and dealt round-robin, so fold sizes per class differ by
/// at most one.
std::vector<int> stratified_folds(const LabeledSampleSet& set, int folds, std::uint64_t seed);

/// Mean fold overall accuracy for every candidate; the first maximum wins.
/// A single-candidate grid is returned without evaluation.
CvResult grid_search_cv(const LabeledSampleSet& set, const std::vector<ClassifierSpec>& grid, int folds,
                        std::uint64_t seed, const TrainOptions& options = {});

/// SVM: C in {0.1, 1, 10, 100} crossed with gamma in {1/d, 0.01, 0.1, 1}
/// (gamma only for rbf/sigmoid, duplicates dropped). Other families have
/// no tuned parameters and yield {base}.
std::vector<ClassifierSpec> default_grid(const ClassifierSpec& base, Index dims);

}  // namespace hyperspec

#endif
