#include "hyperspec/grid_search.hpp"

namespace hyperspec {

std::vector<int> stratified_folds(const LabeledSampleSet& set, int folds, std::uint64_t seed) {
  if (folds < 2) throw Error("cross validation needs at least 2 folds");
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(set.num_classes) + 1);
  for (Index i = 0; i < set.size(); ++i) by_class[static_cast<std::size_t>(set.labels[static_cast<std::size_t>(i)])].push_back(i);
  std::vector<int> fold(static_cast<std::size_t>(set.size()), 0);
  for (Label c = 1; c <= set.num_classes; ++c) {
    auto members = by_class[static_cast<std::size_t>(c)];
    if (members.empty()) continue;
    if (static_cast<int>(members.size()) < folds) {
      throw Error("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                  " samples, fewer than " + std::to_string(folds) + " folds");
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    shuffle(members, rng);
    for (std::size_t r = 0; r < members.size(); ++r) fold[static_cast<std::size_t>(members[r])] = static_cast<int>(r % static_cast<std::size_t>(folds));
  }
  return fold;
}

CvResult grid_search_cv(const LabeledSampleSet& set, const std::vector<ClassifierSpec>& grid, int folds,
                        std::uint64_t seed, const TrainOptions& options) {
  if (grid.empty()) throw Error("empty hyperparameter grid");
  if (grid.size() == 1) return {grid.front(), {}};
  const auto fold = stratified_folds(set, folds, seed);

  std::vector<LabeledSampleSet> fit_sets, held_sets;
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> fit_rows, held_rows;
    for (Index i = 0; i < set.size(); ++i) (fold[static_cast<std::size_t>(i)] == f ? held_rows : fit_rows).push_back(i);
    fit_sets.push_back(set.subset(fit_rows));
    held_sets.push_back(set.subset(held_rows));
  }

  CvResult result;
  result.mean_oa.assign(grid.size(), 0.0);
  std::vector<double> fold_oa(grid.size() * static_cast<std::size_t>(folds));
  parallel_for(fold_oa.size(), [&](std::size_t job) {
    const std::size_t g = job / static_cast<std::size_t>(folds);
    const std::size_t f = job % static_cast<std::size_t>(folds);
    const TrainedModel model = train(grid[g], fit_sets[f], options);
    const auto pred = predict(model, held_sets[f].features);
    Index correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == held_sets[f].labels[i];
    fold_oa[job] = static_cast<double>(correct) / static_cast<double>(pred.size());
  });
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    for (int f = 0; f < folds; ++f) sum += fold_oa[g * static_cast<std::size_t>(folds) + static_cast<std::size_t>(f)];
    result.mean_oa[g] = sum / folds;
    if (result.mean_oa[g] > result.mean_oa[best]) best = g;
  }
  result.best = grid[best];
  return result;
}

std::vector<ClassifierSpec> default_grid(const ClassifierSpec& base, Index dims) {
  const auto* svm = std::get_if<SvmSpec>(&base);
  if (!svm) return {base};
  const double Cs[] = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> gammas;
  if (svm->kernel == KernelKind::kLinear) {
    gammas = {svm->gamma};
  } else {
    for (double g : {1.0 / static_cast<double>(std::max<Index>(dims, 1)), 0.01, 0.1, 1.0}) {
      if (std::find(gammas.begin(), gammas.end(), g) == gammas.end()) gammas.push_back(g);
    }
  }
  std::vector<ClassifierSpec> grid;
  for (double C : Cs) {
    for (double g : gammas) grid.push_back(SvmSpec{svm->kernel, C, g, svm->coef0});
  }
  return grid;
}

}  // namespace hyperspec
