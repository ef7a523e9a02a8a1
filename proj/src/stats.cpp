#include "rtkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"

namespace rtkit {
namespace {

void paired_values(const DatedSeries& x, const DatedSeries& y, Eigen::VectorXd& xs, Eigen::VectorXd& ys) {
  std::vector<double> a, b;
  if (!x.empty() && !y.empty()) {
    const Date lo = std::max(x.start(), y.start());
    const Date hi = std::min(x.last(), y.last());
    for (Date d = lo; d <= hi; d = add_days(d, 1)) {
      const auto vx = x.at(d);
      const auto vy = y.at(d);
      if (vx && vy) {
        a.push_back(*vx);
        b.push_back(*vy);
      }
    }
  }
  xs = Eigen::Map<Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
  ys = Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
}

}  // namespace

double spearman(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw InvalidArgument("spearman: samples differ in length");
  if (x.size() < 3) throw TooFewPairs("spearman needs at least 3 pairs, got " + std::to_string(x.size()));

  const Eigen::VectorXd rx = average_ranks(x);
  const Eigen::VectorXd ry = average_ranks(y);
  const Eigen::VectorXd cx = rx.array() - rx.mean();
  const Eigen::VectorXd cy = ry.array() - ry.mean();
  const double sxx = cx.squaredNorm();
  const double syy = cy.squaredNorm();
  if (sxx == 0.0 || syy == 0.0) throw ZeroVariance("spearman undefined: a sample is constant");
  const double r = cx.dot(cy) / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double spearman(const DatedSeries& x, const DatedSeries& y) {
  Eigen::VectorXd xs, ys;
  paired_values(x, y, xs, ys);
  return spearman(xs, ys);
}

std::size_t paired_count(const DatedSeries& x, const DatedSeries& y) {
  Eigen::VectorXd xs, ys;
  paired_values(x, y, xs, ys);
  return static_cast<std::size_t>(xs.size());
}

DatedSeries change_rate(const DatedSeries& series) {
  const std::size_t n = series.size();
  std::vector<DatedSeries::Value> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!series[i]) continue;
    const bool has_prev = i > 0 && series[i - 1];
    const bool has_next = i + 1 < n && series[i + 1];
    if (has_prev && has_next) {
      out[i] = (*series[i + 1] - *series[i - 1]) / 2.0;
    } else if (has_next) {
      out[i] = *series[i + 1] - *series[i];
    } else if (has_prev) {
      out[i] = *series[i] - *series[i - 1];
    }
  }
  return DatedSeries(series.start(), std::move(out));
}

CorrelationReport correlation_matrix(const AlignedTable& table) {
  if (table.rows() < 3) throw TooFewPairs("correlation_matrix needs at least 3 aligned rows");

  const auto rows = static_cast<Eigen::Index>(table.rows());
  Eigen::Matrix<double, Eigen::Dynamic, 3> data(rows, 3);
  data.col(0) = Eigen::Map<const Eigen::VectorXd>(table.rt.data(), rows);
  data.col(1) = Eigen::Map<const Eigen::VectorXd>(table.drt_dt.data(), rows);
  data.col(2) = Eigen::Map<const Eigen::VectorXd>(table.mobility.data(), rows);

  CorrelationReport report;
  report.country = table.country;
  report.first = table.dates.front();
  report.last = table.dates.back();
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      report.n_obs(i, j) = report.n_obs(j, i) = static_cast<int>(rows);
      try {
        double r = spearman(data.col(i), data.col(j));
        if (i == j) r = 1.0;
        report.r_s(i, j) = report.r_s(j, i) = r;
        report.defined(i, j) = report.defined(j, i) = true;
      } catch (const ZeroVariance&) {
        // undefined cell stays absent
      }
    }
  }
  return report;
}

std::optional<std::size_t> ShiftSweep::peak() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < r_s.size(); ++i) {
    if (!r_s[i]) continue;
    if (!best) {
      best = i;
      continue;
    }
    const double a = std::abs(*r_s[i]), b = std::abs(*r_s[*best]);
    if (a > b || (a == b && std::abs(shifts[i]) < std::abs(shifts[*best]))) best = i;
  }
  return best;
}

ShiftSweep shift_sweep(const DatedSeries& rt, const DatedSeries& mobility, ShiftRange shifts) {
  if (shifts.lo > shifts.hi) throw InvalidArgument("shift_sweep: empty shift range");
  ShiftSweep sweep;
  for (int s = shifts.lo; s <= shifts.hi; ++s) {
    // mobility(t - s) paired with rt(t): relabel mobility s days later.
    const DatedSeries displaced = mobility.shifted(s);
    sweep.shifts.push_back(s);
    sweep.n_obs.push_back(paired_count(rt, displaced));
    try {
      sweep.r_s.emplace_back(spearman(rt, displaced));
    } catch (const TooFewPairs&) {
      sweep.r_s.emplace_back(std::nullopt);
    } catch (const ZeroVariance&) {
      sweep.r_s.emplace_back(std::nullopt);
    }
  }
  return sweep;
}

}  // namespace rtkit
