#include "hyperspec/knn.hpp"

#include <map>
#include <numeric>

namespace hyperspec {

KnnModel knn_fit(const LabeledSampleSet& train, int k) {
  if (train.size() == 0) throw Error("empty training set");
  if (k < 1) throw Error("k must be >= 1");
  if (k > train.size()) throw Error("k exceeds the training set size");
  return {train.features.transpose(), train.labels, k};
}

Label knn_predict(const KnnModel& model, const Eigen::Ref<const VectorXd>& query) {
  const Index n = model.points.cols();
  if (n == 0) throw Error("empty training set");
  if (model.k > n) throw Error("k exceeds the training set size");
  if (query.size() != model.points.rows()) throw Error("query dimension differs from training data");

  const VectorXd dist = (model.points.colwise() - query).colwise().squaredNorm().transpose();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto closer = [&](Index a, Index b) { return dist(a) < dist(b) || (dist(a) == dist(b) && a < b); };
  const auto k = static_cast<std::size_t>(model.k);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), closer);

  // votes and rank of each label's nearest member; `order` is nearest first
  std::map<Label, std::pair<int, std::size_t>> tally;
  for (std::size_t r = 0; r < k; ++r) {
    const Label l = model.labels[static_cast<std::size_t>(order[r])];
    auto [it, inserted] = tally.try_emplace(l, 0, r);
    ++it->second.first;
  }
  Label best = 0;
  int best_votes = -1;
  std::size_t best_rank = 0;
  for (const auto& [label, entry] : tally) {
    const auto [votes, rank] = entry;
    if (votes > best_votes || (votes == best_votes && rank < best_rank)) {
      best = label;
      best_votes = votes;
      best_rank = rank;
    }
  }
  return best;
}

Label knn_predict(const LabeledSampleSet& train, const Eigen::Ref<const VectorXd>& query, int k) {
  return knn_predict(knn_fit(train, k), query);
}

std::vector<Label> knn_predict_batch(const KnnModel& model, const MatrixXd& queries) {
  std::vector<Label> out(static_cast<std::size_t>(queries.rows()));
  parallel_for(out.size(), [&](std::size_t q) {
    out[q] = knn_predict(model, queries.row(static_cast<Index>(q)).transpose());
  });
  return out;
}

}  // namespace hyperspec
