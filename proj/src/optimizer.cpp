#include "rtkit/optimizer.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rtkit/errors.hpp"

namespace rtkit {
namespace {

struct Probe {
  double x;
  double f;
};

// Lower cost wins; ties go to the smaller abscissa.
bool better(const Probe& a, const Probe& b) { return a.f < b.f || (a.f == b.f && a.x < b.x); }

class Evaluator {
 public:
  explicit Evaluator(ScalarObjective& objective) : objective_(objective) {}

  Probe operator()(double x) {
    const double f = objective_(x);
    if (!std::isfinite(f)) {
      throw NonFiniteObjective("objective is not finite at x = " + std::to_string(x));
    }
    return {x, f};
  }

 private:
  ScalarObjective& objective_;
};

struct Refinement {
  Probe best;
  int iterations;
  bool converged;
};

Refinement golden_section(Evaluator& eval, double a, double b, const MinimizeOptions& opts) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  Probe pc = eval(c);
  Probe pd = eval(d);
  Probe best = better(pc, pd) ? pc : pd;

  int it = 0;
  while (b - a > opts.x_tolerance && it < opts.max_iterations) {
    if (pc.f <= pd.f) {
      b = d;
      d = c;
      pd = pc;
      c = b - kInvPhi * (b - a);
      pc = eval(c);
      if (better(pc, best)) best = pc;
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + kInvPhi * (b - a);
      pd = eval(d);
      if (better(pd, best)) best = pd;
    }
    ++it;
  }
  const bool converged = b - a <= opts.x_tolerance;
  const Probe mid = eval(0.5 * (a + b));
  if (better(mid, best)) best = mid;
  return {best, it, converged};
}

}  // namespace

void MinimizeOptions::validate() const {
  if (!(lower_bound < upper_bound) || !std::isfinite(lower_bound) || !std::isfinite(upper_bound)) {
    throw InvalidArgument("MinimizeOptions: need finite lower_bound < upper_bound");
  }
  if (!(x_tolerance > 0.0)) throw InvalidArgument("MinimizeOptions: x_tolerance must be > 0");
  if (max_iterations < 1) throw InvalidArgument("MinimizeOptions: max_iterations must be >= 1");
  if (scan_points < 3) throw InvalidArgument("MinimizeOptions: scan_points must be >= 3");
}

MinimizeResult minimize_scalar(ScalarObjective& objective, const MinimizeOptions& opts) {
  opts.validate();
  Evaluator eval(objective);

  const int n = opts.scan_points;
  const double step = (opts.upper_bound - opts.lower_bound) / (n - 1);
  std::vector<Probe> scan;
  scan.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double x = j + 1 == n ? opts.upper_bound : opts.lower_bound + j * step;
    scan.push_back(eval(x));
  }

  Probe best = scan.front();
  for (const auto& p : scan) {
    if (better(p, best)) best = p;
  }

  MinimizeResult result;
  result.converged = true;
  for (int j = 0; j < n; ++j) {
    const double f = scan[static_cast<std::size_t>(j)].f;
    const double left = j > 0 ? scan[static_cast<std::size_t>(j - 1)].f : f;
    const double right = j + 1 < n ? scan[static_cast<std::size_t>(j + 1)].f : f;
    const bool local_min = f <= left && f <= right;
    const bool flat = f == left && f == right;
    if (!local_min || flat) continue;

    const double a = scan[static_cast<std::size_t>(j > 0 ? j - 1 : j)].x;
    const double b = scan[static_cast<std::size_t>(j + 1 < n ? j + 1 : j)].x;
    const Refinement r = golden_section(eval, a, b, opts);
    result.iterations += r.iterations;
    result.converged = result.converged && r.converged;
    if (better(r.best, best)) best = r.best;
  }

  result.x_min = best.x;
  result.f_min = best.f;
  result.evaluations = objective.evaluations();
  return result;
}

}  // namespace rtkit
