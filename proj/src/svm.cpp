#include "hyperspec/svm.hpp"

#include <limits>
#include <list>
#include <numeric>
#include <map>
#include <unordered_map>

namespace hyperspec {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kLinear: return "linear";
    case KernelKind::kRbf: return "rbf";
    case KernelKind::kSigmoid: return "sigmoid";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "linear") return KernelKind::kLinear;
  if (name == "rbf") return KernelKind::kRbf;
  if (name == "sigmoid") return KernelKind::kSigmoid;
  throw Error("unknown kernel '" + name + "'");
}

namespace {

constexpr double kTau = 1e-12;

// Kernel rows K(x_i, .) over the training set. Holds the full matrix when
// it fits the byte budget, otherwise an LRU set of rows. The two most
// recently returned rows always stay resident.
class KernelRows {
public:
  KernelRows(const MatrixXd& points, const KernelParams& kernel, std::size_t budget)
      : points_(points), kernel_(kernel), n_(points.cols()) {
    const std::size_t row_bytes = static_cast<std::size_t>(n_) * sizeof(double);
    if (row_bytes * static_cast<std::size_t>(n_) <= budget) {
      full_.resize(n_, n_);
      for (Index i = 0; i < n_; ++i) full_.col(i) = kernel_row(kernel_, points_, points_.col(i));
    } else {
      capacity_ = std::max<std::size_t>(2, budget / std::max<std::size_t>(row_bytes, 1));
    }
    diag_.resize(n_);
    for (Index i = 0; i < n_; ++i) diag_(i) = kernel_eval(kernel_, points_.col(i), points_.col(i));
  }

  const double* row(Index i) {
    if (full_.size() > 0) return full_.col(i).data();
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second.data();
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    lru_.emplace_front(i, kernel_row(kernel_, points_, points_.col(i)));
    index_[i] = lru_.begin();
    return lru_.front().second.data();
  }

  double diag(Index i) const { return diag_(i); }

private:
  const MatrixXd& points_;
  KernelParams kernel_;
  Index n_;
  MatrixXd full_;
  VectorXd diag_;
  std::size_t capacity_ = 0;
  std::list<std::pair<Index, VectorXd>> lru_;
  std::unordered_map<Index, std::list<std::pair<Index, VectorXd>>::iterator> index_;
};

}  // namespace

SmoResult smo_solve(const MatrixXd& X, std::span<const int> y, const KernelParams& kernel, double C,
                    const SmoOptions& options) {
  const Index n = X.rows();
  if (static_cast<Index>(y.size()) != n) throw Error("label count differs from sample count");
  if (n == 0) throw Error("empty training set");
  if (!(C > 0.0)) throw Error("SVM C must be positive");
  validate(kernel);
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == 1) has_pos = true;
    else if (v == -1) has_neg = true;
    else throw Error("binary SVM labels must be -1 or +1");
  }
  if (!has_pos || !has_neg) throw Error("binary SVM needs both classes");

  const MatrixXd points = X.transpose();
  KernelRows K(points, kernel, options.cache_bytes);
  const long max_iter =
      options.max_iterations > 0 ? options.max_iterations : std::max<long>(10'000'000, 100 * static_cast<long>(n));

  SmoResult res;
  VectorXd& alpha = res.alpha;
  alpha = VectorXd::Zero(n);
  VectorXd G = VectorXd::Constant(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  const auto yi = [&](Index t) { return static_cast<double>(y[static_cast<std::size_t>(t)]); };
  const auto upper = [&](Index t) { return alpha(t) >= C; };
  const auto lower = [&](Index t) { return alpha(t) <= 0.0; };

  const auto objective = [&] {
    double f = 0.0;
    for (Index t = 0; t < n; ++t) f += alpha(t) * (G(t) - 1.0);
    return -0.5 * f;
  };

  while (res.iterations < max_iter) {
    // i: maximal violator in I_up
    double gmax = -std::numeric_limits<double>::infinity();
    Index i = -1;
    for (Index t = 0; t < n; ++t) {
      if (yi(t) > 0) {
        if (!upper(t) && -G(t) >= gmax) { gmax = -G(t); i = t; }
      } else {
        if (!lower(t) && G(t) >= gmax) { gmax = G(t); i = t; }
      }
    }
    if (i < 0) { res.converged = true; break; }
    const double* Ki = K.row(i);

    // j: second-order choice in I_low
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    Index j = -1;
    for (Index t = 0; t < n; ++t) {
      if (yi(t) > 0) {
        if (lower(t)) continue;
        const double grad_diff = gmax + G(t);
        gmax2 = std::max(gmax2, G(t));
        if (grad_diff > 0) {
          double quad = K.diag(i) + K.diag(t) - 2.0 * yi(i) * Ki[t];
          if (quad <= 0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) { best_obj = obj; j = t; }
        }
      } else {
        if (upper(t)) continue;
        const double grad_diff = gmax - G(t);
        gmax2 = std::max(gmax2, -G(t));
        if (grad_diff > 0) {
          double quad = K.diag(i) + K.diag(t) + 2.0 * yi(i) * Ki[t];
          if (quad <= 0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) { best_obj = obj; j = t; }
        }
      }
    }
    if (gmax + gmax2 < options.tol || j < 0) { res.converged = true; break; }

    const double* Kj = K.row(j);
    Ki = K.row(i);
    const double Qij = yi(i) * yi(j) * Ki[j];
    const double old_ai = alpha(i), old_aj = alpha(j);
    double& ai = alpha(i);
    double& aj = alpha(j);
    if (yi(i) != yi(j)) {
      double quad = K.diag(i) + K.diag(j) + 2.0 * Qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-G(i) - G(j)) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) { aj = 0; ai = diff; }
      } else {
        if (ai < 0) { ai = 0; aj = -diff; }
      }
      if (diff > 0) {
        if (ai > C) { ai = C; aj = C - diff; }
      } else {
        if (aj > C) { aj = C; ai = C + diff; }
      }
    } else {
      double quad = K.diag(i) + K.diag(j) - 2.0 * Qij;
      if (quad <= 0) quad = kTau;
      const double delta = (G(i) - G(j)) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > C) {
        if (ai > C) { ai = C; aj = sum - C; }
      } else {
        if (aj < 0) { aj = 0; ai = sum; }
      }
      if (sum > C) {
        if (aj > C) { aj = C; ai = sum - C; }
      } else {
        if (ai < 0) { ai = 0; aj = sum; }
      }
    }

    const double dai = (alpha(i) - old_ai) * yi(i);
    const double daj = (alpha(j) - old_aj) * yi(j);
    for (Index t = 0; t < n; ++t) G(t) += yi(t) * (Ki[t] * dai + Kj[t] * daj);
    ++res.iterations;
    if (options.record_objective) res.dual_objective.push_back(objective());
  }

  // bias from free vectors, or the midpoint of the feasible interval
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  Index nr_free = 0;
  for (Index t = 0; t < n; ++t) {
    const double yG = yi(t) * G(t);
    if (upper(t)) {
      if (yi(t) < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (lower(t)) {
      if (yi(t) > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++nr_free;
      sum_free += yG;
    }
  }
  const double rho = nr_free > 0 ? sum_free / static_cast<double>(nr_free) : (ub + lb) / 2.0;
  res.bias = -rho;
  return res;
}

bool SvmModel::converged() const {
  return std::all_of(machines.begin(), machines.end(), [](const BinarySvm& m) { return m.converged; });
}

namespace {

// Registers the nonzero-alpha training rows as support vectors,
// deduplicating through `slot_of`.
BinarySvm make_machine(const SmoResult& res, const std::vector<Index>& rows,
                       std::span<const int> y, std::map<Index, Index>& slot_of, std::vector<Index>& sv_rows) {
  BinarySvm m;
  m.bias = res.bias;
  m.converged = res.converged;
  std::vector<double> coef;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const double a = res.alpha(static_cast<Index>(t));
    if (a <= 0.0) continue;
    auto [it, inserted] = slot_of.try_emplace(rows[t], static_cast<Index>(sv_rows.size()));
    if (inserted) sv_rows.push_back(rows[t]);
    m.support_index.push_back(it->second);
    coef.push_back(a * y[t]);
  }
  m.coef = Eigen::Map<const VectorXd>(coef.data(), static_cast<Index>(coef.size()));
  return m;
}

MatrixXd gather_columns(const MatrixXd& X, const std::vector<Index>& rows) {
  MatrixXd out(X.cols(), static_cast<Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) out.col(static_cast<Index>(t)) = X.row(rows[t]).transpose();
  return out;
}

}  // namespace

SvmModel svm_train_binary(const MatrixXd& X, std::span<const int> y, const KernelParams& kernel, double C,
                          const SmoOptions& options) {
  const SmoResult res = smo_solve(X, y, kernel, C, options);
  SvmModel model;
  model.kernel = kernel;
  model.C = C;
  model.classes = {1, 2};
  std::vector<Index> rows(static_cast<std::size_t>(X.rows()));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::map<Index, Index> slot_of;
  std::vector<Index> sv_rows;
  model.machines.push_back(make_machine(res, rows, y, slot_of, sv_rows));
  model.support_vectors = gather_columns(X, sv_rows);
  return model;
}

SvmModel svm_train_multiclass(const LabeledSampleSet& set, const KernelParams& kernel, double C,
                              const SmoOptions& options) {
  SvmModel model;
  model.kernel = kernel;
  model.C = C;
  const auto counts = set.class_counts();
  for (Label c = 1; c <= set.num_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) model.classes.push_back(c);
  }
  if (model.classes.size() < 2) throw Error("SVM needs at least 2 classes");

  std::vector<std::pair<Label, Label>> pairs;
  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) pairs.emplace_back(model.classes[a], model.classes[b]);
  }

  std::vector<std::vector<Index>> pair_rows(pairs.size());
  std::vector<std::vector<int>> pair_y(pairs.size());
  std::vector<SmoResult> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [pos, neg] = pairs[p];
    for (Index r = 0; r < set.size(); ++r) {
      const Label l = set.labels[static_cast<std::size_t>(r)];
      if (l == pos || l == neg) {
        pair_rows[p].push_back(r);
        pair_y[p].push_back(l == pos ? 1 : -1);
      }
    }
    MatrixXd X(static_cast<Index>(pair_rows[p].size()), set.dims());
    for (std::size_t t = 0; t < pair_rows[p].size(); ++t) X.row(static_cast<Index>(t)) = set.features.row(pair_rows[p][t]);
    results[p] = smo_solve(X, pair_y[p], kernel, C, options);
  });

  std::map<Index, Index> slot_of;
  std::vector<Index> sv_rows;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    BinarySvm m = make_machine(results[p], pair_rows[p], pair_y[p], slot_of, sv_rows);
    m.positive = pairs[p].first;
    m.negative = pairs[p].second;
    model.machines.push_back(std::move(m));
  }
  model.support_vectors = gather_columns(set.features, sv_rows);
  return model;
}

MatrixXd svm_decision_values(const SvmModel& model, const MatrixXd& queries) {
  if (queries.cols() != model.support_vectors.rows() && model.support_vectors.cols() > 0) {
    throw Error("query dimension differs from the model's");
  }
  MatrixXd out(queries.rows(), static_cast<Index>(model.machines.size()));
  parallel_for(static_cast<std::size_t>(queries.rows()), [&](std::size_t q) {
    const VectorXd x = queries.row(static_cast<Index>(q)).transpose();
    const VectorXd k = kernel_row(model.kernel, model.support_vectors, x);
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
      const BinarySvm& machine = model.machines[m];
      double f = machine.bias;
      for (std::size_t s = 0; s < machine.support_index.size(); ++s) {
        f += machine.coef(static_cast<Index>(s)) * k(machine.support_index[s]);
      }
      out(static_cast<Index>(q), static_cast<Index>(m)) = f;
    }
  });
  return out;
}

std::vector<Label> svm_predict(const SvmModel& model, const MatrixXd& queries) {
  const MatrixXd f = svm_decision_values(model, queries);
  const Label max_class = model.classes.empty() ? 0 : model.classes.back();
  std::vector<Label> out(static_cast<std::size_t>(queries.rows()));
  std::vector<int> votes(static_cast<std::size_t>(max_class) + 1);
  std::vector<double> margin(votes.size());
  for (Index q = 0; q < queries.rows(); ++q) {
    std::fill(votes.begin(), votes.end(), 0);
    std::fill(margin.begin(), margin.end(), 0.0);
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
      const double v = f(q, static_cast<Index>(m));
      const Label winner = v > 0 ? model.machines[m].positive : model.machines[m].negative;
      ++votes[static_cast<std::size_t>(winner)];
      margin[static_cast<std::size_t>(winner)] += std::abs(v);
    }
    Label best = model.classes.front();
    for (Label c : model.classes) {
      const auto ci = static_cast<std::size_t>(c), bi = static_cast<std::size_t>(best);
      if (votes[ci] > votes[bi] || (votes[ci] == votes[bi] && margin[ci] > margin[bi])) best = c;
    }
    out[static_cast<std::size_t>(q)] = best;
  }
  return out;
}

}  // namespace hyperspec
