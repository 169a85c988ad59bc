#ifndef HYPERSPEC_KNN_HPP
#define HYPERSPEC_KNN_HPP

#include <span>
#include <vector>

#include "hyperspec/samples.hpp"

namespace hyperspec {

/// Brute-force Euclidean k-NN. Training samples are kept one per column.
struct KnnModel {
  MatrixXd points;
  std::vector<Label> labels;
  int k = 1;
};

KnnModel knn_fit(const LabeledSampleSet& train, int k);

/// Majority label among the k nearest samples. Distance ties are broken by
/// training index; vote ties by the nearest neighbor among the tied labels.
Label knn_predict(const KnnModel& model, const Eigen::Ref<const VectorXd>& query);
Label knn_predict(const LabeledSampleSet& train, const Eigen::Ref<const VectorXd>& query, int k);
std::vector<Label> knn_predict_batch(const KnnModel& model, const MatrixXd& queries);

}  // namespace hyperspec

#endif
