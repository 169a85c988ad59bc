#ifndef HYPERSPEC_INFO_THEORY_HPP
#define HYPERSPEC_INFO_THEORY_HPP

#include <span>
#include <vector>

#include "hyperspec/common.hpp"

namespace hyperspec {

using Symbol = std::int32_t;
using Count = std::int64_t;
using CountMatrix = Matrix<Count>;

struct Histogram1D {
  std::vector<Count> counts;
  Count total = 0;
};

/// counts(x, y) over paired symbols; rows index the first variable.
struct JointHistogram {
  CountMatrix counts;
  Count total = 0;

  Histogram1D row_marginal() const;
  Histogram1D col_marginal() const;
};

Histogram1D histogram(std::span<const Symbol> x);
JointHistogram joint_histogram(std::span<const Symbol> x, std::span<const Symbol> y);
Histogram1D make_histogram(std::vector<Count> counts);
JointHistogram make_joint_histogram(CountMatrix counts);

/// Shannon entropy in bits with plug-in probabilities and 0 log 0 = 0.
double entropy(const Histogram1D& h);
double joint_entropy(const JointHistogram& j);

/// H(X) + H(Y) - H(X,Y) in bits. Tiny negative round-off is clamped to 0.
double mutual_information(const JointHistogram& j);
double mutual_information(std::span<const Symbol> x, std::span<const Symbol> y);

}  // namespace hyperspec

#endif
