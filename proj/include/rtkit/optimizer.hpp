#pragma once

#include <cstddef>
#include <functional>
#include <utility>

namespace rtkit {

/// Deterministic real-valued cost with an evaluation counter.
class ScalarObjective {
 public:
  explicit ScalarObjective(std::function<double(double)> fn) : fn_(std::move(fn)) {}

  double operator()(double x) {
    ++evaluations_;
    return fn_(x);
  }

  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  std::function<double(double)> fn_;
  std::size_t evaluations_ = 0;
};

struct MinimizeOptions {
  double lower_bound = 0.0;
  double upper_bound = 2.0;
  double x_tolerance = 1e-6;
  int max_iterations = 200;
  /// Equispaced probes of the bracketing scan, endpoints included.
  int scan_points = 17;

  void validate() const;
};

struct MinimizeResult {
  double x_min = 0.0;
  double f_min = 0.0;
  /// Golden-section iterations summed over all refined brackets.
  int iterations = 0;
  bool converged = false;
  std::size_t evaluations = 0;
};

/// Derivative-free bounded scalar minimization.
///
/// An equispaced scan locates every local minimum among the probes; each one is
/// refined by golden-section search on its neighbouring bracket, and the lowest
/// point seen overall is returned. Equal costs resolve to the smallest x.
///
/// Throws NonFiniteObjective if any probe evaluates to NaN or infinity.
MinimizeResult minimize_scalar(ScalarObjective& objective, const MinimizeOptions& opts = {});

template <typename F>
MinimizeResult minimize_scalar(F&& fn, const MinimizeOptions& opts = {}) {
  ScalarObjective objective(std::function<double(double)>(std::forward<F>(fn)));
  return minimize_scalar(objective, opts);
}

}  // namespace rtkit
