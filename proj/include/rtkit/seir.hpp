#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rtkit/date.hpp"
#include "rtkit/dated_series.hpp"
#include "rtkit/errors.hpp"

namespace rtkit {

/// Column layout of a SEIR state vector.
enum Compartment : Eigen::Index { kSusceptible = 0, kExposed = 1, kInfected = 2, kRemoved = 3 };

template <typename Scalar>
using SeirVector = Eigen::Matrix<Scalar, 4, 1>;

/// Rates of the closed-population SEIR system. All rates are per day.
template <typename Scalar = double>
struct SeirParams {
  Scalar beta{0};
  Scalar gamma{Scalar(1) / Scalar(30)};
  Scalar k{Scalar(1) / Scalar(5)};
  Scalar n_pop{1};

  void validate() const {
    if (!(beta >= Scalar(0)) || !(gamma > Scalar(0)) || !(k > Scalar(0)) || !(n_pop > Scalar(0)) ||
        !std::isfinite(static_cast<double>(beta)) || !std::isfinite(static_cast<double>(n_pop))) {
      throw InvalidArgument("SeirParams require beta >= 0 and gamma, k, n_pop > 0");
    }
  }
};

/// Compartment occupancies (S, E, I, R), real-valued person units, all >= 0.
template <typename Scalar = double>
class SeirState {
 public:
  SeirState() : x_(SeirVector<Scalar>::Zero()) {}
  SeirState(Scalar s, Scalar e, Scalar i, Scalar r) : SeirState(SeirVector<Scalar>(s, e, i, r)) {}
  explicit SeirState(const SeirVector<Scalar>& x) : x_(x) {
    for (Eigen::Index c = 0; c < 4; ++c) {
      if (!std::isfinite(static_cast<double>(x_[c]))) throw NonFiniteState("SEIR compartment is not finite");
      if (x_[c] < Scalar(0)) throw NegativeCompartment("SEIR compartment is negative");
    }
  }

  Scalar s() const { return x_[kSusceptible]; }
  Scalar e() const { return x_[kExposed]; }
  Scalar i() const { return x_[kInfected]; }
  Scalar r() const { return x_[kRemoved]; }
  Scalar total() const { return x_.sum(); }

  const SeirVector<Scalar>& vector() const { return x_; }

  friend bool operator==(const SeirState& a, const SeirState& b) { return a.x_ == b.x_; }

 private:
  SeirVector<Scalar> x_;
};

/// Right-hand side of the SEIR system:
///   dS = -beta S I / N, dE = beta S I / N - k E, dI = k E - gamma I, dR = gamma I.
template <typename Derived, typename Scalar>
SeirVector<Scalar> seir_rates(const Eigen::MatrixBase<Derived>& x, const SeirParams<Scalar>& p) {
  const Scalar infection = p.beta * x[kSusceptible] * x[kInfected] / p.n_pop;
  const Scalar progression = p.k * x[kExposed];
  const Scalar removal = p.gamma * x[kInfected];
  return SeirVector<Scalar>(-infection, infection - progression, progression - removal, removal);
}

template <typename Scalar>
SeirVector<Scalar> seir_derivative(const SeirState<Scalar>& state, const SeirParams<Scalar>& params) {
  return seir_rates(state.vector(), params);
}

/// Daily samples of an integrated SEIR run. Column d holds the state `d` days
/// after `start`.
template <typename Scalar = double>
struct Trajectory {
  Date start{};
  SeirParams<Scalar> params{};
  Eigen::Matrix<Scalar, 4, Eigen::Dynamic> states;

  Eigen::Index days() const { return states.cols() - 1; }
  Eigen::Index size() const { return states.cols(); }
  SeirState<Scalar> state(Eigen::Index day) const { return SeirState<Scalar>(SeirVector<Scalar>(states.col(day))); }
};

namespace detail {

/// Maps roundoff-level negatives to zero; anything worse means the step is too coarse.
template <typename Scalar>
void clamp_roundoff(SeirVector<Scalar>& x, Scalar n_pop) {
  const Scalar floor = Scalar(-1e-9) * n_pop;
  for (Eigen::Index c = 0; c < 4; ++c) {
    if (!std::isfinite(static_cast<double>(x[c]))) throw NonFiniteState("SEIR integration produced a non-finite compartment");
    if (x[c] < Scalar(0)) {
      if (x[c] < floor) throw NonFiniteState("SEIR integration produced a negative compartment; step too coarse");
      x[c] = Scalar(0);
    }
  }
}

template <typename Scalar>
void check_conservation(const SeirVector<Scalar>& x, Scalar n_pop) {
  using std::abs;
  if (abs(x.sum() - n_pop) > Scalar(1e-6) * n_pop) {
    throw NonFiniteState("SEIR state violates conservation S+E+I+R = N");
  }
}

}  // namespace detail

/// Fixed-step classical RK4. States are recorded at integer day marks.
template <typename Scalar>
Trajectory<Scalar> integrate(const SeirState<Scalar>& initial, const SeirParams<Scalar>& params, int days,
                             int substeps_per_day = 10, Date start = Date{}) {
  params.validate();
  if (days < 1) throw InvalidArgument("integrate: days must be >= 1");
  if (substeps_per_day < 1) throw InvalidArgument("integrate: substeps_per_day must be >= 1");
  {
    using std::abs;
    if (abs(initial.total() - params.n_pop) > Scalar(1e-6) * params.n_pop) {
      throw InvalidArgument("integrate: initial state does not sum to n_pop");
    }
  }

  Trajectory<Scalar> traj;
  traj.start = start;
  traj.params = params;
  traj.states.resize(4, days + 1);
  traj.states.col(0) = initial.vector();

  const Scalar h = Scalar(1) / Scalar(substeps_per_day);
  SeirVector<Scalar> x = initial.vector();
  for (int d = 1; d <= days; ++d) {
    for (int s = 0; s < substeps_per_day; ++s) {
      const SeirVector<Scalar> k1 = seir_rates(x, params);
      const SeirVector<Scalar> k2 = seir_rates(x + (h / 2) * k1, params);
      const SeirVector<Scalar> k3 = seir_rates(x + (h / 2) * k2, params);
      const SeirVector<Scalar> k4 = seir_rates(x + h * k3, params);
      x += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
      detail::clamp_roundoff(x, params.n_pop);
    }
    detail::check_conservation(x, params.n_pop);
    traj.states.col(d) = x;
  }
  return traj;
}

/// Cumulative ever-infected count I+ = E + I + R, evaluated as N - S so that
/// it is exactly non-decreasing whenever S is non-increasing.
template <typename Scalar>
DatedSeries cumulative_infected(const Trajectory<Scalar>& traj) {
  std::vector<DatedSeries::Value> out(static_cast<std::size_t>(traj.size()));
  for (Eigen::Index d = 0; d < traj.size(); ++d) {
    out[static_cast<std::size_t>(d)] = static_cast<double>(traj.params.n_pop - traj.states(kSusceptible, d));
  }
  return DatedSeries(traj.start, std::move(out));
}

/// First difference of cumulative_infected: entry t is I+(t+1) - I+(t).
template <typename Scalar>
DatedSeries daily_new_infected(const Trajectory<Scalar>& traj) {
  if (traj.size() < 2) throw InvalidArgument("daily_new_infected needs at least two states");
  std::vector<DatedSeries::Value> out(static_cast<std::size_t>(traj.size() - 1));
  for (Eigen::Index d = 0; d + 1 < traj.size(); ++d) {
    out[static_cast<std::size_t>(d)] =
        static_cast<double>(traj.states(kSusceptible, d) - traj.states(kSusceptible, d + 1));
  }
  return DatedSeries(traj.start, std::move(out));
}

}  // namespace rtkit
