#ifndef HYPERSPEC_KERNEL_HPP
#define HYPERSPEC_KERNEL_HPP

#include <cmath>
#include <string>

#include "hyperspec/common.hpp"

namespace hyperspec {

enum class KernelKind { kLinear, kRbf, kSigmoid };

struct KernelParams {
  KernelKind kind = KernelKind::kRbf;
  double gamma = 1.0;
  double coef0 = 0.0;
};

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

inline void validate(const KernelParams& p) {
  if (p.kind != KernelKind::kLinear && !(p.gamma > 0.0)) throw Error("kernel gamma must be positive");
}

/// linear: u.v, rbf: exp(-gamma |u-v|^2), sigmoid: tanh(gamma u.v + coef0)
template <typename DerivedU, typename DerivedV>
double kernel_eval(const KernelParams& p, const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != v.size()) throw Error("kernel arguments differ in dimension");
  switch (p.kind) {
    case KernelKind::kLinear:
      return u.reshaped().dot(v.reshaped());
    case KernelKind::kRbf:
      return std::exp(-p.gamma * (u.reshaped() - v.reshaped()).squaredNorm());
    case KernelKind::kSigmoid:
      return std::tanh(p.gamma * u.reshaped().dot(v.reshaped()) + p.coef0);
  }
  return 0.0;
}

/// K(x, column t of points) for every t. `points` holds one sample per column.
template <typename DerivedX>
VectorXd kernel_row(const KernelParams& p, const MatrixXd& points, const Eigen::MatrixBase<DerivedX>& x) {
  switch (p.kind) {
    case KernelKind::kLinear:
      return points.transpose() * x;
    case KernelKind::kRbf:
      return (-p.gamma * (points.colwise() - x).colwise().squaredNorm().transpose().array()).exp().matrix();
    case KernelKind::kSigmoid:
      return (p.gamma * (points.transpose() * x).array() + p.coef0).tanh().matrix();
  }
  return {};
}

}  // namespace hyperspec

#endif
