#include "hyperspec/evaluation.hpp"

#include <ostream>

#include "hyperspec/csv.hpp"

namespace hyperspec {

ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> predicted, Label num_classes) {
  if (truth.size() != predicted.size()) throw Error("truth and prediction lengths differ");
  if (truth.empty()) throw Error("no samples to evaluate");
  if (num_classes < 1) throw Error("confusion matrix needs at least one class");
  ConfusionMatrix cm{Matrix<std::int64_t>::Zero(num_classes, num_classes)};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Label t = truth[i], p = predicted[i];
    if (t < 1 || t > num_classes || p < 1 || p > num_classes) {
      throw Error("label out of range [1, " + std::to_string(num_classes) + "] at position " + std::to_string(i));
    }
    ++cm.counts(t - 1, p - 1);
  }
  return cm;
}

ConfusionMatrix make_confusion_matrix(Matrix<std::int64_t> counts) {
  if (counts.rows() != counts.cols()) throw Error("confusion matrix must be square");
  if ((counts.array() < 0).any()) throw Error("negative confusion count");
  return {std::move(counts)};
}

BinaryCounts per_class_binary_counts(const ConfusionMatrix& cm, Label c) {
  if (c < 1 || c > cm.num_classes()) throw Error("class " + std::to_string(c) + " out of range");
  const Index k = c - 1;
  BinaryCounts b;
  b.tp = cm.counts(k, k);
  b.fn = cm.counts.row(k).sum() - b.tp;
  b.fp = cm.counts.col(k).sum() - b.tp;
  b.tn = cm.total() - b.tp - b.fn - b.fp;
  return b;
}

namespace {

double ratio(std::int64_t num, std::int64_t den, bool* degenerate) {
  if (degenerate) *degenerate = den == 0;
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double sensitivity(const BinaryCounts& c, bool* degenerate) { return ratio(c.tp, c.tp + c.fn, degenerate); }
double specificity(const BinaryCounts& c, bool* degenerate) { return ratio(c.tn, c.tn + c.fp, degenerate); }
double precision(const BinaryCounts& c, bool* degenerate) { return ratio(c.tp, c.tp + c.fp, degenerate); }

double overall_accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total < 1) throw Error("empty confusion matrix");
  return static_cast<double>(cm.counts.trace()) / static_cast<double>(total);
}

double cohen_kappa(const ConfusionMatrix& cm, bool* degenerate) {
  const auto total = cm.total();
  if (total < 1) throw Error("empty confusion matrix");
  const double n = static_cast<double>(total);
  const double po = static_cast<double>(cm.counts.trace()) / n;
  double chance = 0.0;
  for (Index c = 0; c < cm.counts.rows(); ++c) {
    chance += static_cast<double>(cm.counts.row(c).sum()) * static_cast<double>(cm.counts.col(c).sum());
  }
  const double pe = chance / (n * n);
  if (degenerate) *degenerate = pe >= 1.0;
  if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

EvalReport report_from_confusion(ConfusionMatrix cm) {
  EvalReport r;
  r.oa = overall_accuracy(cm);
  r.kappa = cohen_kappa(cm, &r.kappa_degenerate);
  for (Label c = 1; c <= cm.num_classes(); ++c) {
    if (cm.counts.row(c - 1).sum() == 0) continue;
    ClassMetrics m;
    m.label = c;
    m.counts = per_class_binary_counts(cm, c);
    m.sensitivity = sensitivity(m.counts, &m.sensitivity_degenerate);
    m.specificity = specificity(m.counts, &m.specificity_degenerate);
    m.precision = precision(m.counts, &m.precision_degenerate);
    r.per_class.push_back(m);
  }
  for (const auto& m : r.per_class) {
    r.sensitivity += m.sensitivity;
    r.specificity += m.specificity;
    r.precision += m.precision;
  }
  const auto k = static_cast<double>(r.per_class.size());
  r.sensitivity /= k;
  r.specificity /= k;
  r.precision /= k;
  r.confusion = std::move(cm);
  return r;
}

EvalReport evaluate_predictions(std::span<const Label> truth, std::span<const Label> predicted, Label num_classes) {
  return report_from_confusion(confusion_matrix(truth, predicted, num_classes));
}

EvalReport evaluate(const TrainedModel& model, const LabeledSampleSet& test, double train_seconds,
                    double predict_seconds) {
  if (test.dims() != model.dims()) throw Error("test features and model dimensions differ");
  const auto pred = predict(model, test.features);
  EvalReport r = evaluate_predictions(test.labels, pred, std::max(model.num_classes, test.num_classes));
  r.train_seconds = train_seconds;
  r.predict_seconds = predict_seconds;
  return r;
}

std::string report_csv_header() { return "sensitivity,specificity,precision,oa,kappa,time_seconds"; }

std::string report_csv_row(const EvalReport& r) {
  return format_real(r.sensitivity) + ',' + format_real(r.specificity) + ',' + format_real(r.precision) + ',' +
         format_real(r.oa) + ',' + format_real(r.kappa) + ',' + format_real(r.time_seconds());
}

void write_per_class_csv(const EvalReport& r, std::ostream& out, const std::string& prefix) {
  for (const auto& m : r.per_class) {
    const bool degenerate = m.sensitivity_degenerate || m.specificity_degenerate || m.precision_degenerate;
    out << prefix << m.label << ',' << m.counts.tp << ',' << m.counts.tn << ',' << m.counts.fp << ',' << m.counts.fn
        << ',' << format_real(m.sensitivity) << ',' << format_real(m.specificity) << ','
        << format_real(m.precision) << ',' << (degenerate ? 1 : 0) << '\n';
  }
}

}  // namespace hyperspec
