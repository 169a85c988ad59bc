#ifndef HYPERSPEC_LDA_HPP
#define HYPERSPEC_LDA_HPP

#include <string>
#include <vector>

#include "hyperspec/samples.hpp"

namespace hyperspec {

enum class LdaMode { kLinear, kDiagLinear };

std::string to_string(LdaMode mode);
LdaMode lda_mode_from_string(const std::string& name);

/// Gaussian discriminant with a covariance shared by all classes.
/// delta_c(x) = x' S^-1 mu_c - 1/2 mu_c' S^-1 mu_c + log prior_c, stored
/// as weights.col(c) and offsets(c).
struct LdaModel {
  LdaMode mode = LdaMode::kLinear;
  std::vector<Label> classes;
  MatrixXd means;       // d x classes
  MatrixXd covariance;  // pooled, ridge included
  VectorXd log_priors;
  MatrixXd weights;     // d x classes
  VectorXd offsets;
};

/// ridge * mean(diag(S)) is added to the diagonal before factorization.
LdaModel lda_fit(const LabeledSampleSet& set, LdaMode mode, double ridge = 1e-6);

/// queries x classes
MatrixXd lda_discriminants(const LdaModel& model, const MatrixXd& queries);
std::vector<Label> lda_predict(const LdaModel& model, const MatrixXd& queries);

}  // namespace hyperspec

#endif
