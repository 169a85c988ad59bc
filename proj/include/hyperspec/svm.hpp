#ifndef HYPERSPEC_SVM_HPP
#define HYPERSPEC_SVM_HPP

#include <span>
#include <vector>

#include "hyperspec/kernel.hpp"
#include "hyperspec/samples.hpp"

namespace hyperspec {

struct SmoOptions {
  double tol = 1e-3;
  /// 0 selects max(10'000'000, 100 n).
  long max_iterations = 0;
  bool record_objective = false;
  std::size_t cache_bytes = std::size_t{512} << 20;
};

/// Dual solution of the soft-margin problem for labels in {-1, +1}.
struct SmoResult {
  VectorXd alpha;
  double bias = 0.0;
  bool converged = false;
  long iterations = 0;
  /// Dual objective sum(alpha) - 1/2 alpha'Q alpha after each step, when recorded.
  std::vector<double> dual_objective;
};

/// Sequential minimal optimization with maximal-violating-pair, second
/// order working-set selection. Stops once the largest KKT violation gap
/// drops below tol, which bounds |y f(x) - 1| violations by tol.
SmoResult smo_solve(const MatrixXd& X, std::span<const int> y, const KernelParams& kernel, double C,
                    const SmoOptions& options = {});

/// One machine of a one-vs-one ensemble, or a standalone binary SVM.
/// support_index points into the owning model's support-vector matrix.
struct BinarySvm {
  Label positive = 1;
  Label negative = 2;
  std::vector<Index> support_index;
  VectorXd coef;  // alpha_i y_i
  double bias = 0.0;
  bool converged = true;
};

struct SvmModel {
  KernelParams kernel;
  double C = 1.0;
  MatrixXd support_vectors;  // one vector per column
  std::vector<BinarySvm> machines;
  std::vector<Label> classes;

  bool converged() const;
};

/// Binary trainer; y in {-1, +1}. The returned model's single machine maps
/// +1 to `positive` and -1 to `negative`.
SvmModel svm_train_binary(const MatrixXd& X, std::span<const int> y, const KernelParams& kernel, double C,
                          const SmoOptions& options = {});

/// One binary machine per unordered pair of classes present in `set`.
SvmModel svm_train_multiclass(const LabeledSampleSet& set, const KernelParams& kernel, double C,
                              const SmoOptions& options = {});

/// Decision values of every machine for each query row (queries x machines).
MatrixXd svm_decision_values(const SvmModel& model, const MatrixXd& queries);

/// Pairwise vote; ties go to the larger summed |decision| among tied
/// classes, then to the smallest class id.
std::vector<Label> svm_predict(const SvmModel& model, const MatrixXd& queries);

}  // namespace hyperspec

#endif
