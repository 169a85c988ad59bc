#ifndef HYPERSPEC_RANDOM_FOREST_HPP
#define HYPERSPEC_RANDOM_FOREST_HPP

#include <span>
#include <vector>

#include "hyperspec/samples.hpp"

namespace hyperspec {

/// Internal nodes send x[feature] <= threshold left. Leaves have feature -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  Label label = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  template <typename Derived>
  Label predict(const Eigen::DenseBase<Derived>& x) const {
    int n = 0;
    while (nodes[static_cast<std::size_t>(n)].feature >= 0) {
      const TreeNode& node = nodes[static_cast<std::size_t>(n)];
      n = x(node.feature) <= node.threshold ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(n)].label;
  }
};

struct ForestParams {
  int num_trees = 100;
  int max_features = 0;  // 0: floor(sqrt(F))
  int min_leaf = 1;
  std::uint64_t seed = 0;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  Label num_classes = 0;
  Index dims = 0;
};

/// Bagged CART trees with Gini splits over a random subset of features at
/// every node. Tree t draws from a stream seeded by (seed, t).
RandomForest rf_fit(const LabeledSampleSet& set, const ForestParams& params);

/// Majority vote over trees; ties go to the smallest class id.
Label rf_predict(const RandomForest& forest, const Eigen::Ref<const VectorXd>& query);
std::vector<Label> rf_predict_batch(const RandomForest& forest, const MatrixXd& queries);

namespace detail {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child Gini
};

/// Gini impurity 1 - sum p^2 of the labels at `rows`.
double gini(std::span<const Label> labels, std::span<const Index> rows, Label num_classes);

/// Best threshold split of `rows` over the candidate features: lowest
/// weighted child Gini, strictly below the parent's, both children holding
/// at least min_leaf rows. Thresholds are midpoints between consecutive
/// distinct values; ties keep the earliest (feature order, ascending value).
SplitChoice best_split(const MatrixXd& X, std::span<const Label> labels, std::span<const Index> rows,
                       std::span<const int> features, int min_leaf, Label num_classes);

}  // namespace detail

}  // namespace hyperspec

#endif
