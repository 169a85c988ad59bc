#include "hyperspec/info_theory.hpp"

#include <cmath>

namespace hyperspec {

namespace {

Symbol max_symbol(std::span<const Symbol> x) {
  Symbol m = 0;
  for (Symbol s : x) {
    if (s < 0) throw Error("symbols must be non-negative");
    m = std::max(m, s);
  }
  return m;
}

// Nonzero counts are summed in sorted order so the result does not depend
// on cell layout; transposing a joint histogram gives a bit-identical entropy.
template <typename Range>
double entropy_of_counts(const Range& counts, Count total) {
  if (total < 1) throw Error("entropy of an empty histogram");
  std::vector<Count> nonzero;
  for (Count c : counts) {
    if (c > 0) nonzero.push_back(c);
  }
  std::sort(nonzero.begin(), nonzero.end());
  const double n = static_cast<double>(total);
  double acc = 0.0;
  for (Count c : nonzero) {
    const double p = static_cast<double>(c) / n;
    acc -= p * std::log2(p);
  }
  return acc;
}

}  // namespace

Histogram1D JointHistogram::row_marginal() const {
  Histogram1D h;
  h.counts.resize(static_cast<std::size_t>(counts.rows()));
  for (Index r = 0; r < counts.rows(); ++r) h.counts[static_cast<std::size_t>(r)] = counts.row(r).sum();
  h.total = total;
  return h;
}

Histogram1D JointHistogram::col_marginal() const {
  Histogram1D h;
  h.counts.resize(static_cast<std::size_t>(counts.cols()));
  for (Index c = 0; c < counts.cols(); ++c) h.counts[static_cast<std::size_t>(c)] = counts.col(c).sum();
  h.total = total;
  return h;
}

Histogram1D make_histogram(std::vector<Count> counts) {
  Histogram1D h;
  for (Count c : counts) {
    if (c < 0) throw Error("negative histogram count");
    h.total += c;
  }
  h.counts = std::move(counts);
  return h;
}

JointHistogram make_joint_histogram(CountMatrix counts) {
  if ((counts.array() < 0).any()) throw Error("negative histogram count");
  JointHistogram j;
  j.total = counts.sum();
  j.counts = std::move(counts);
  return j;
}

Histogram1D histogram(std::span<const Symbol> x) {
  Histogram1D h;
  h.counts.assign(static_cast<std::size_t>(max_symbol(x)) + 1, 0);
  for (Symbol s : x) ++h.counts[static_cast<std::size_t>(s)];
  h.total = static_cast<Count>(x.size());
  return h;
}

JointHistogram joint_histogram(std::span<const Symbol> x, std::span<const Symbol> y) {
  if (x.size() != y.size()) throw Error("symbol sequences differ in length");
  if (x.empty()) throw Error("empty symbol sequence");
  JointHistogram j;
  j.counts = CountMatrix::Zero(max_symbol(x) + 1, max_symbol(y) + 1);
  for (std::size_t i = 0; i < x.size(); ++i) ++j.counts(x[i], y[i]);
  j.total = static_cast<Count>(x.size());
  return j;
}

double entropy(const Histogram1D& h) { return entropy_of_counts(h.counts, h.total); }

double joint_entropy(const JointHistogram& j) {
  return entropy_of_counts(j.counts.reshaped(), j.total);
}

double mutual_information(const JointHistogram& j) {
  const double mi = entropy(j.row_marginal()) + entropy(j.col_marginal()) - joint_entropy(j);
  return (mi < 0.0 && mi > -1e-12) ? 0.0 : mi;
}

double mutual_information(std::span<const Symbol> x, std::span<const Symbol> y) {
  return mutual_information(joint_histogram(x, y));
}

}  // namespace hyperspec
