#ifndef HYPERSPEC_CLASSIFIER_HPP
#define HYPERSPEC_CLASSIFIER_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hyperspec/knn.hpp"
#include "hyperspec/lda.hpp"
#include "hyperspec/random_forest.hpp"
#include "hyperspec/svm.hpp"

namespace hyperspec {

struct SvmSpec {
  KernelKind kernel = KernelKind::kRbf;
  double C = 1.0;
  double gamma = 1.0;
  double coef0 = 0.0;
};

struct KnnSpec {
  int k = 1;
};

struct LdaSpec {
  LdaMode mode = LdaMode::kLinear;
  double ridge = 1e-6;
};

struct RfSpec {
  int num_trees = 100;
  int max_features = 0;  // 0: sqrt
  int min_leaf = 1;
  std::uint64_t seed = 0;
};

using ClassifierSpec = std::variant<SvmSpec, KnnSpec, LdaSpec, RfSpec>;

void validate(const ClassifierSpec& spec);
/// Compact human-readable form, e.g. "svm(kernel=rbf;C=10;gamma=0.1;coef0=0)".
std::string describe(const ClassifierSpec& spec);

/// Per-feature z-scoring fitted on training data; zero-variance features
/// keep unit scale.
struct Standardizer {
  VectorXd mean;
  VectorXd scale;

  static Standardizer fit(const MatrixXd& X);
  MatrixXd apply(const MatrixXd& X) const;
};

struct TrainOptions {
  /// Applied to SVM, KNN and LDA; forests always see raw values.
  bool standardize = true;
  SmoOptions smo;
};

struct TrainedModel {
  ClassifierSpec spec;
  std::vector<Index> band_ids;
  Label num_classes = 0;
  std::optional<Standardizer> standardizer;
  std::variant<SvmModel, KnnModel, LdaModel, RandomForest> params;

  Index dims() const { return static_cast<Index>(band_ids.size()); }
};

TrainedModel train(const ClassifierSpec& spec, const LabeledSampleSet& set, const TrainOptions& options = {});
std::vector<Label> predict(const TrainedModel& model, const MatrixXd& features);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace hyperspec

#endif
