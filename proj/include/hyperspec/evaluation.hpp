#ifndef HYPERSPEC_EVALUATION_HPP
#define HYPERSPEC_EVALUATION_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "hyperspec/classifier.hpp"

namespace hyperspec {

/// Rows are true classes, columns predicted classes; class c sits at c-1.
struct ConfusionMatrix {
  Matrix<std::int64_t> counts;

  Label num_classes() const { return static_cast<Label>(counts.rows()); }
  std::int64_t total() const { return counts.sum(); }
};

struct BinaryCounts {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
};

struct ClassMetrics {
  Label label = 0;
  BinaryCounts counts;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  bool sensitivity_degenerate = false;
  bool specificity_degenerate = false;
  bool precision_degenerate = false;
};

struct EvalReport {
  ConfusionMatrix confusion;
  std::vector<ClassMetrics> per_class;  // classes present in the test set
  double sensitivity = 0.0;             // macro averages over per_class
  double specificity = 0.0;
  double precision = 0.0;
  double oa = 0.0;
  double kappa = 0.0;
  bool kappa_degenerate = false;
  double train_seconds = 0.0;
  double predict_seconds = 0.0;

  double time_seconds() const { return train_seconds + predict_seconds; }
};

ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> predicted, Label num_classes);
ConfusionMatrix make_confusion_matrix(Matrix<std::int64_t> counts);

/// One-vs-rest reduction for class c (1-based).
BinaryCounts per_class_binary_counts(const ConfusionMatrix& cm, Label c);

/// TP/(TP+FN), TN/(TN+FP), TP/(TP+FP). A zero denominator yields 0 and
/// sets `degenerate`.
double sensitivity(const BinaryCounts& c, bool* degenerate = nullptr);
double specificity(const BinaryCounts& c, bool* degenerate = nullptr);
double precision(const BinaryCounts& c, bool* degenerate = nullptr);

double overall_accuracy(const ConfusionMatrix& cm);

/// (p_o - p_e) / (1 - p_e) with the marginal-product chance term. When
/// p_e = 1 the result is 1 if p_o = 1, else 0, and `degenerate` is set.
double cohen_kappa(const ConfusionMatrix& cm, bool* degenerate = nullptr);

/// All metrics from a confusion matrix; timings left at zero.
EvalReport report_from_confusion(ConfusionMatrix cm);

/// Predicts the test set and fills a report with the given timings.
EvalReport evaluate(const TrainedModel& model, const LabeledSampleSet& test, double train_seconds = 0.0,
                    double predict_seconds = 0.0);
EvalReport evaluate_predictions(std::span<const Label> truth, std::span<const Label> predicted, Label num_classes);

/// "sensitivity,specificity,precision,oa,kappa,time_seconds"
std::string report_csv_header();
std::string report_csv_row(const EvalReport& r);
/// One line per class: label,tp,tn,fp,fn,sensitivity,specificity,precision,degenerate
void write_per_class_csv(const EvalReport& r, std::ostream& out, const std::string& prefix = {});

}  // namespace hyperspec

#endif
