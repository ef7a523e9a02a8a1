#pragma once

// Slow, obviously-correct reference computations. None of these share code
// with the library beyond plain data types.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace rtkit::testing {

/// Forward Euler on the SEIR equations; returns (S, E, I, R) at each day mark.
inline std::vector<std::array<double, 4>> euler_seir(std::array<double, 4> x, double beta, double gamma, double k,
                                                     double n, int days, int substeps) {
  std::vector<std::array<double, 4>> out{x};
  const double h = 1.0 / substeps;
  for (int d = 0; d < days; ++d) {
    for (int j = 0; j < substeps; ++j) {
      const double infection = beta * x[0] * x[2] / n;
      const double onset = k * x[1];
      const double removal = gamma * x[2];
      x = {x[0] - h * infection, x[1] + h * (infection - onset), x[2] + h * (onset - removal), x[3] + h * removal};
    }
    out.push_back(x);
  }
  return out;
}

/// Average ranks by counting: rank = 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> brute_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) less += 1;
      if (w == v[i]) equal += 1;
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

/// Pearson correlation of average ranks, by the textbook sums.
inline double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = brute_ranks(x), ry = brute_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// r_s = 1 - 6 sum d^2 / (n (n^2 - 1)); valid only without ties.
inline double no_ties_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = brute_ranks(x), ry = brute_ranks(y);
  double d2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const double n = static_cast<double>(x.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

struct GridMin {
  double x;
  double f;
};

/// Exhaustive scan of [lo, hi] at `step`; first (smallest) x wins ties.
inline GridMin grid_minimum(const std::function<double(double)>& f, double lo, double hi, double step) {
  GridMin best{lo, f(lo)};
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long i = 1; i <= n; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    const double v = f(x);
    if (v < best.f) best = {x, v};
  }
  return best;
}

}  // namespace rtkit::testing
