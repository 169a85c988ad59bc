#include "hyperspec/random_forest.hpp"

#include <cmath>
#include <numeric>

namespace hyperspec {

namespace detail {

namespace {

// n * gini = n - sum c^2 / n
double scaled_gini(const std::vector<Index>& counts, Index n) {
  if (n == 0) return 0.0;
  double sq = 0.0;
  for (Index c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
  return static_cast<double>(n) - sq / static_cast<double>(n);
}

}  // namespace

double gini(std::span<const Label> labels, std::span<const Index> rows, Label num_classes) {
  std::vector<Index> counts(static_cast<std::size_t>(num_classes) + 1, 0);
  for (Index r : rows) ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
  const auto n = static_cast<Index>(rows.size());
  return n == 0 ? 0.0 : scaled_gini(counts, n) / static_cast<double>(n);
}

SplitChoice best_split(const MatrixXd& X, std::span<const Label> labels, std::span<const Index> rows,
                       std::span<const int> features, int min_leaf, Label num_classes) {
  const auto n = static_cast<Index>(rows.size());
  const std::size_t width = static_cast<std::size_t>(num_classes) + 1;
  std::vector<Index> total(width, 0);
  for (Index r : rows) ++total[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
  const double parent = scaled_gini(total, n) / static_cast<double>(n);

  SplitChoice best;
  best.impurity = parent;
  std::vector<Index> sorted(rows.begin(), rows.end());
  std::vector<Index> left(width), right(width);
  for (int f : features) {
    std::sort(sorted.begin(), sorted.end(), [&](Index a, Index b) {
      return X(a, f) < X(b, f) || (X(a, f) == X(b, f) && a < b);
    });
    std::fill(left.begin(), left.end(), 0);
    right = total;
    for (Index i = 0; i + 1 < n; ++i) {
      const auto lab = static_cast<std::size_t>(labels[static_cast<std::size_t>(sorted[static_cast<std::size_t>(i)])]);
      ++left[lab];
      --right[lab];
      const double lo = X(sorted[static_cast<std::size_t>(i)], f);
      const double hi = X(sorted[static_cast<std::size_t>(i + 1)], f);
      if (!(lo < hi)) continue;
      const Index nl = i + 1, nr = n - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double impurity = (scaled_gini(left, nl) + scaled_gini(right, nr)) / static_cast<double>(n);
      if (impurity < best.impurity - 1e-12) {
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best = {true, f, mid, impurity};
      }
    }
  }
  return best;
}

}  // namespace detail

namespace {

Label majority(std::span<const Label> labels, std::span<const Index> rows, Label num_classes) {
  std::vector<Index> counts(static_cast<std::size_t>(num_classes) + 1, 0);
  for (Index r : rows) ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
  // max_element returns the first maximum, i.e. the smallest label
  return static_cast<Label>(std::max_element(counts.begin() + 1, counts.end()) - counts.begin());
}

DecisionTree grow_tree(const LabeledSampleSet& set, int max_features, int min_leaf, std::uint64_t seed) {
  Rng rng(seed);
  const Index n = set.size();
  const auto dims = static_cast<int>(set.dims());
  std::vector<Index> boot(static_cast<std::size_t>(n));
  for (auto& r : boot) r = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
  std::sort(boot.begin(), boot.end());

  std::vector<int> all_features(static_cast<std::size_t>(dims));
  std::iota(all_features.begin(), all_features.end(), 0);

  DecisionTree tree;
  struct Pending {
    int node;
    std::vector<Index> rows;
  };
  std::vector<Pending> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, std::move(boot)});
  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    const Label label = majority(set.labels, job.rows, set.num_classes);
    tree.nodes[static_cast<std::size_t>(job.node)].label = label;

    const bool pure = std::all_of(job.rows.begin(), job.rows.end(),
                                  [&](Index r) { return set.labels[static_cast<std::size_t>(r)] == label; });
    if (pure || static_cast<Index>(job.rows.size()) < 2 * min_leaf) continue;

    // partial Fisher-Yates: the first max_features entries are the draw
    for (int k = 0; k < max_features; ++k) {
      const auto pick = static_cast<std::size_t>(k) + uniform_index(rng, static_cast<std::uint64_t>(dims - k));
      std::swap(all_features[static_cast<std::size_t>(k)], all_features[pick]);
    }
    const std::span<const int> candidates(all_features.data(), static_cast<std::size_t>(max_features));
    const auto split = detail::best_split(set.features, set.labels, job.rows, candidates, min_leaf, set.num_classes);
    if (!split.found) continue;

    std::vector<Index> left, right;
    for (Index r : job.rows) (set.features(r, split.feature) <= split.threshold ? left : right).push_back(r);
    const auto left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left_id;
    node.right = left_id + 1;
    stack.push_back({left_id + 1, std::move(right)});
    stack.push_back({left_id, std::move(left)});
  }
  return tree;
}

}  // namespace

RandomForest rf_fit(const LabeledSampleSet& set, const ForestParams& params) {
  if (set.size() == 0) throw Error("empty training set");
  if (params.num_trees < 1) throw Error("forest needs at least one tree");
  if (params.min_leaf < 1) throw Error("min_leaf must be >= 1");
  const auto dims = static_cast<int>(set.dims());
  int m = params.max_features > 0 ? params.max_features
                                  : static_cast<int>(std::floor(std::sqrt(static_cast<double>(dims))));
  m = std::clamp(m, 1, dims);

  RandomForest forest;
  forest.num_classes = set.num_classes;
  forest.dims = set.dims();
  forest.trees.resize(static_cast<std::size_t>(params.num_trees));
  parallel_for(forest.trees.size(), [&](std::size_t t) {
    forest.trees[t] = grow_tree(set, m, params.min_leaf, derive_seed(params.seed, t));
  });
  return forest;
}

Label rf_predict(const RandomForest& forest, const Eigen::Ref<const VectorXd>& query) {
  if (query.size() != forest.dims) throw Error("query dimension differs from the model's");
  std::vector<int> votes(static_cast<std::size_t>(forest.num_classes) + 1, 0);
  for (const auto& tree : forest.trees) ++votes[static_cast<std::size_t>(tree.predict(query))];
  return static_cast<Label>(std::max_element(votes.begin() + 1, votes.end()) - votes.begin());
}

std::vector<Label> rf_predict_batch(const RandomForest& forest, const MatrixXd& queries) {
  std::vector<Label> out(static_cast<std::size_t>(queries.rows()));
  parallel_for(out.size(), [&](std::size_t q) {
    out[q] = rf_predict(forest, queries.row(static_cast<Index>(q)).transpose());
  });
  return out;
}

}  // namespace hyperspec
