#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rtkit/dated_series.hpp"

namespace rtkit {

struct AlignedTable;

/// Fractional (average) ranks, 1-based. Tied values share the mean of the
/// positions they occupy.
template <typename Derived>
Eigen::VectorXd average_ranks(const Eigen::DenseBase<Derived>& values);

/// Spearman's r_s of two equally long samples: the product-moment
/// correlation of their average ranks. Throws TooFewPairs below 3 pairs and
/// ZeroVariance if either sample is constant.
double spearman(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Spearman over the dates on which both series are present.
double spearman(const DatedSeries& x, const DatedSeries& y);

/// Number of dates on which both series are present.
std::size_t paired_count(const DatedSeries& x, const DatedSeries& y);

/// Discrete day-over-day derivative: central differences where both
/// neighbours are present, one-sided at the ends of each present run.
DatedSeries change_rate(const DatedSeries& series);

enum class Variable : int { kRt = 0, kRtChangeRate = 1, kMobility = 2 };
inline constexpr std::array<const char*, 3> kVariableNames{"rt", "drt_dt", "mobility"};

struct CorrelationReport {
  std::string country;
  Date first{};
  Date last{};
  /// Coefficients; only meaningful where `defined` is set.
  Eigen::Matrix3d r_s = Eigen::Matrix3d::Zero();
  Eigen::Matrix<bool, 3, 3> defined = Eigen::Matrix<bool, 3, 3>::Constant(false);
  Eigen::Matrix3i n_obs = Eigen::Matrix3i::Zero();

  std::optional<double> cell(Variable a, Variable b) const {
    const auto i = static_cast<int>(a), j = static_cast<int>(b);
    if (!defined(i, j)) return std::nullopt;
    return r_s(i, j);
  }
};

/// Pairwise Spearman over {rt, drt_dt, mobility}. Cells whose coefficient is
/// undefined are left absent.
CorrelationReport correlation_matrix(const AlignedTable& table);

struct ShiftRange {
  int lo = -21;
  int hi = 21;
};

/// Spearman between R_t and mobility displaced by each shift. A shift of s
/// pairs R_t on day t with mobility on day t - s, so positive shifts mean
/// mobility leads.
struct ShiftSweep {
  std::vector<int> shifts;
  std::vector<std::optional<double>> r_s;
  std::vector<std::size_t> n_obs;

  /// Index of the largest |r_s|; ties resolve to the smallest |shift|, then the smaller shift.
  std::optional<std::size_t> peak() const;
};

ShiftSweep shift_sweep(const DatedSeries& rt, const DatedSeries& mobility, ShiftRange shifts);

// ---------------------------------------------------------------------------

template <typename Derived>
Eigen::VectorXd average_ranks(const Eigen::DenseBase<Derived>& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });

  Eigen::VectorXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && values(order[static_cast<std::size_t>(j + 1)]) == values(order[static_cast<std::size_t>(i)])) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index t = i; t <= j; ++t) ranks(order[static_cast<std::size_t>(t)]) = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace rtkit
