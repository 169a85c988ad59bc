#include "hyperspec/lda.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace hyperspec {

std::string to_string(LdaMode mode) { return mode == LdaMode::kLinear ? "linear" : "diaglinear"; }

LdaMode lda_mode_from_string(const std::string& name) {
  if (name == "linear") return LdaMode::kLinear;
  if (name == "diaglinear") return LdaMode::kDiagLinear;
  throw Error("unknown LDA mode '" + name + "'");
}

namespace {

// Smallest leading block that is not positive definite.
Index first_singular_dimension(const MatrixXd& S) {
  for (Index k = 1; k <= S.rows(); ++k) {
    Eigen::LLT<MatrixXd> llt(S.topLeftCorner(k, k));
    if (llt.info() != Eigen::Success) return k - 1;
  }
  return S.rows() - 1;
}

}  // namespace

LdaModel lda_fit(const LabeledSampleSet& set, LdaMode mode, double ridge) {
  if (set.dims() < 1) throw Error("LDA needs at least one feature");
  if (ridge < 0.0) throw Error("LDA ridge must be non-negative");
  const auto counts = set.class_counts();
  LdaModel model;
  model.mode = mode;
  for (Label c = 1; c <= set.num_classes; ++c) {
    const Index nc = counts[static_cast<std::size_t>(c)];
    if (nc == 0) continue;
    if (nc < 2) throw Error("class " + std::to_string(c) + " has fewer than 2 samples");
    model.classes.push_back(c);
  }
  if (model.classes.empty()) throw Error("empty training set");

  const Index d = set.dims();
  const auto nclass = static_cast<Index>(model.classes.size());
  std::vector<Index> slot(static_cast<std::size_t>(set.num_classes) + 1, -1);
  for (Index k = 0; k < nclass; ++k) slot[static_cast<std::size_t>(model.classes[static_cast<std::size_t>(k)])] = k;

  model.means = MatrixXd::Zero(d, nclass);
  for (Index r = 0; r < set.size(); ++r) {
    model.means.col(slot[static_cast<std::size_t>(set.labels[static_cast<std::size_t>(r)])]) +=
        set.features.row(r).transpose();
  }
  model.log_priors.resize(nclass);
  for (Index k = 0; k < nclass; ++k) {
    const auto nc = static_cast<double>(counts[static_cast<std::size_t>(model.classes[static_cast<std::size_t>(k)])]);
    model.means.col(k) /= nc;
    model.log_priors(k) = std::log(nc / static_cast<double>(set.size()));
  }

  MatrixXd centered(set.size(), d);
  for (Index r = 0; r < set.size(); ++r) {
    centered.row(r) =
        set.features.row(r) - model.means.col(slot[static_cast<std::size_t>(set.labels[static_cast<std::size_t>(r)])]).transpose();
  }
  const Index dof = std::max<Index>(set.size() - nclass, 1);
  MatrixXd S = (centered.transpose() * centered) / static_cast<double>(dof);
  if (mode == LdaMode::kDiagLinear) S = MatrixXd(S.diagonal().asDiagonal());
  S.diagonal().array() += ridge * S.diagonal().mean();
  model.covariance = S;

  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    throw Error("pooled covariance is singular at dimension " + std::to_string(first_singular_dimension(S)) +
                " after ridge");
  }
  model.weights = llt.solve(model.means);
  model.offsets.resize(nclass);
  for (Index k = 0; k < nclass; ++k) {
    model.offsets(k) = -0.5 * model.means.col(k).dot(model.weights.col(k)) + model.log_priors(k);
  }
  return model;
}

MatrixXd lda_discriminants(const LdaModel& model, const MatrixXd& queries) {
  if (queries.cols() != model.weights.rows()) throw Error("query dimension differs from the model's");
  return (queries * model.weights).rowwise() + model.offsets.transpose();
}

std::vector<Label> lda_predict(const LdaModel& model, const MatrixXd& queries) {
  const MatrixXd scores = lda_discriminants(model, queries);
  std::vector<Label> out(static_cast<std::size_t>(queries.rows()));
  for (Index q = 0; q < scores.rows(); ++q) {
    Index best = 0;
    scores.row(q).maxCoeff(&best);
    out[static_cast<std::size_t>(q)] = model.classes[static_cast<std::size_t>(best)];
  }
  return out;
}

}  // namespace hyperspec
