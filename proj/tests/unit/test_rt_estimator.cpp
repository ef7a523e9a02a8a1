#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"
#include "rtkit/rt_estimator.hpp"
#include "synthetic.hpp"

using namespace rtkit;

namespace {

const Date kStart = make_date(2020, 3, 1);

CountryPanel panel_from(std::vector<double> confirmed, double population = 1e6, std::vector<double> recovered = {},
                        std::vector<double> deaths = {}) {
  CountryPanel p;
  p.country = "Testland";
  p.population = population;
  if (recovered.empty()) recovered.assign(confirmed.size(), 0.0);
  if (deaths.empty()) deaths.assign(confirmed.size(), 0.0);
  p.confirmed = DatedSeries::dense(kStart, confirmed);
  p.recovered = DatedSeries::dense(kStart, recovered);
  p.deaths = DatedSeries::dense(kStart, deaths);
  return p;
}

CountryPanel growing_panel() {
  return smooth_cases(testing::seir_panel([](int) { return 0.12; }, 90, testing::seed_state(1e7), kStart));
}

}  // namespace

TEST_SUITE("rt_estimator") {
  TEST_CASE("config defaults and validation") {
    EstimatorConfig c;
    CHECK(c.window_days == 7);
    CHECK(c.case_threshold == 1000);
    CHECK(c.incubation_shift_days == 5);
    CHECK(c.asymptomatic_fraction == 0.43);
    CHECK(c.gamma == 1.0 / 30.0);
    CHECK(c.k == 1.0 / 5.0);
    CHECK_FALSE(c.active_infected_init);
    c.window_days = 1;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.asymptomatic_fraction = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.case_threshold = 0.5;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
  }

  TEST_CASE("find_t0") {
    CHECK(find_t0(panel_from({400, 900, 1200, 5000}), 1000) == add_days(kStart, 2));
    CHECK(find_t0(panel_from({1001, 2000}), 1000) == kStart);
    CHECK(find_t0(panel_from({999, 1000, 1001}), 1000) == add_days(kStart, 2));
    CHECK_THROWS_AS(find_t0(panel_from({10, 500, 1000}), 1000), ThresholdNeverReached);
  }

  TEST_CASE("find_t0 reads raw counts even when smoothed ones exist") {
    // Smoothed: 400, 450, 600, ... raw crosses on day 2.
    const CountryPanel p = smooth_cases(panel_from({400, 500, 1001, 1002}));
    CHECK(find_t0(p, 1000) == add_days(kStart, 2));
  }

  TEST_CASE("exposed_effective") {
    const EstimatorConfig cfg;
    const DatedSeries v = DatedSeries::dense(kStart, std::vector<double>{570, 0, 0, 0, 0, 0, 0});
    CHECK(exposed_effective(v, add_days(kStart, 5), cfg) == doctest::Approx(1000.0).epsilon(1e-12));
    const DatedSeries zeros = DatedSeries::dense(kStart, std::vector<double>(7, 0.0));
    CHECK(exposed_effective(zeros, add_days(kStart, 6), cfg) == 0.0);
    EstimatorConfig none;
    none.asymptomatic_fraction = 0.0;
    CHECK(exposed_effective(v, add_days(kStart, 5), none) == 570.0);
    CHECK_THROWS_AS(exposed_effective(v, add_days(kStart, 4), cfg), InsufficientHistory);
  }

  TEST_CASE("initial_state") {
    const EstimatorConfig cfg;
    SUBCASE("direct substitution") {
      // V(t-5) = 855 gives E_eff = 1500.
      const CountryPanel p = panel_from({855, 900, 1000, 1200, 1500, 2000}, 1e6, {0, 0, 0, 0, 0, 450},
                                        {0, 0, 0, 0, 0, 50});
      const auto x = initial_state(p, add_days(kStart, 5), cfg);
      CHECK(x.s() == doctest::Approx(996000.0).epsilon(1e-12));
      CHECK(x.e() == doctest::Approx(1500.0).epsilon(1e-12));
      CHECK(x.i() == 2000.0);
      CHECK(x.r() == 500.0);
      CHECK(x.total() == doctest::Approx(1e6).epsilon(1e-15));
    }
    SUBCASE("nothing observed") {
      const auto x = initial_state(panel_from(std::vector<double>(6, 0.0)), add_days(kStart, 5), cfg);
      CHECK(x == SeirState<double>(1e6, 0, 0, 0));
    }
    SUBCASE("more cases than people") {
      CHECK_THROWS_AS(initial_state(panel_from({1e6, 1e6, 1e6, 1e6, 1e6, 1e6}), add_days(kStart, 5), cfg),
                      NegativeCompartment);
    }
    SUBCASE("active-infected variant") {
      EstimatorConfig active;
      active.active_infected_init = true;
      const CountryPanel p = panel_from({855, 900, 1000, 1200, 1500, 2000}, 1e6, {0, 0, 0, 0, 0, 450},
                                        {0, 0, 0, 0, 0, 50});
      const auto x = initial_state(p, add_days(kStart, 5), active);
      CHECK(x.i() == 1500.0);
      CHECK(x.r() == 500.0);
      CHECK(x.total() == doctest::Approx(1e6).epsilon(1e-15));
    }
    SUBCASE("history too short") {
      CHECK_THROWS_AS(initial_state(panel_from({1, 2, 3}), add_days(kStart, 2), cfg), InsufficientHistory);
    }
  }

  TEST_CASE("observed new cases are clamped differences") {
    EstimatorConfig cfg;
    cfg.window_days = 4;
    const CountryPanel p = panel_from({10, 15, 14, 20, 20});
    CHECK(observed_new_cases(p, kStart, cfg) == std::vector<double>{5, 0, 6, 0});
  }

  TEST_CASE("fit_window recovers beta from a self-consistent window") {
    const EstimatorConfig cfg;
    const SeirState<double> x0(1e7 - 9000, 2000, 5000, 2000);
    const Date ws = make_date(2020, 4, 1);
    const CountryPanel p = testing::consistent_window_panel(x0, 0.12, ws, cfg.window_days);
    const WindowFit fit = fit_window(p, ws, cfg);
    CHECK(std::abs(fit.beta_star - 0.12) <= 1e-3);
    CHECK(fit.converged);

    double scale = 0;
    for (double v : observed_new_cases(p, ws, cfg)) scale += v * v;
    CHECK(fit.residual <= 1e-10 * scale);

    SUBCASE("agrees with a dense grid over the same cost") {
      const auto x = initial_state(p, ws, cfg);
      const auto obs = observed_new_cases(p, ws, cfg);
      const auto grid = testing::grid_minimum(
          [&](double b) { return window_cost(x, obs, b, p.population, cfg); }, 0.0, 2.0, 1e-4);
      CHECK(std::abs(grid.x - fit.beta_star) <= 1e-3);
      // the grid lands on 0.12 exactly; golden-section stops within its x tolerance
      CHECK(fit.residual <= grid.f + 1e-10 * scale);
    }
  }

  TEST_CASE("fit_window recovers a range of betas") {
    const EstimatorConfig cfg;
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> beta(0.02, 0.6), share(0.0001, 0.01);
    for (int trial = 0; trial < 10; ++trial) {
      const double n = 1e7;
      const double e = n * share(rng), i = n * share(rng), r = n * share(rng);
      const double b = beta(rng);
      const Date ws = make_date(2020, 5, 1);
      const CountryPanel p = testing::consistent_window_panel({n - e - i - r, e, i, r}, b, ws, cfg.window_days);
      CAPTURE(b);
      CHECK(std::abs(fit_window(p, ws, cfg).beta_star - b) <= 1e-3);
    }
  }

  TEST_CASE("no new cases pins beta to the lower bound") {
    const CountryPanel p = panel_from(std::vector<double>(20, 5000.0), 1e6);
    const WindowFit fit = fit_window(p, add_days(kStart, 6), EstimatorConfig{});
    CHECK(fit.beta_star == 0.0);
    CHECK(fit.residual == 0.0);
  }

  TEST_CASE("an unstable integration surfaces as NonFiniteObjective") {
    EstimatorConfig cfg;
    cfg.substeps_per_day = 1;
    cfg.minimizer.upper_bound = 5000.0;
    const SeirState<double> x0(5e5, 1e5, 3e5, 1e5);
    const Date ws = make_date(2020, 4, 1);
    const CountryPanel p = testing::consistent_window_panel(x0, 0.1, ws, cfg.window_days);
    CHECK_THROWS_AS(fit_window(p, ws, cfg), NonFiniteObjective);
  }

  TEST_CASE("estimate_rt bookkeeping") {
    const CountryPanel p = growing_panel();
    const EstimatorConfig cfg;
    const RtResult r = estimate_rt(p, cfg, p.confirmed.last());
    REQUIRE_FALSE(r.rt.empty());
    CHECK(r.t0 == find_t0(p, cfg.case_threshold));
    CHECK(r.rt.start() == add_days(r.t0, cfg.window_days));
    CHECK(r.rt.last() == p.confirmed.last());
    for (const DatedSeries* s : {&r.beta, &r.residual, &r.converged}) {
      CHECK(s->start() == r.rt.start());
      CHECK(s->size() == r.rt.size());
    }
    for (std::size_t i = 0; i < r.rt.size(); ++i) {
      REQUIRE(r.rt[i]);
      CHECK(*r.rt[i] == *r.beta[i] / cfg.gamma);
      CHECK(*r.rt[i] >= 0.0);
      CHECK(*r.rt[i] <= cfg.minimizer.upper_bound / cfg.gamma);
      CHECK(*r.converged[i] == 1.0);
    }
  }

  TEST_CASE("with gamma = 1/30 R_t is exactly 30 beta") {
    const CountryPanel p = growing_panel();
    const RtResult r = estimate_rt(p, EstimatorConfig{}, make_date(2020, 4, 30));
    for (std::size_t i = 0; i < r.rt.size(); ++i) CHECK(*r.rt[i] == *r.beta[i] / (1.0 / 30.0));
  }

  TEST_CASE("each residual is no worse than the cost at either bound") {
    const CountryPanel p = growing_panel();
    const EstimatorConfig cfg;
    const RtResult r = estimate_rt(p, cfg, make_date(2020, 5, 10));
    for (std::size_t i = 0; i < r.rt.size(); ++i) {
      const Date ws = add_days(r.rt.date_at(i), -cfg.window_days);
      const auto x0 = initial_state(p, ws, cfg);
      const auto obs = observed_new_cases(p, ws, cfg);
      CHECK(*r.residual[i] <= window_cost(x0, obs, cfg.minimizer.lower_bound, p.population, cfg));
      CHECK(*r.residual[i] <= window_cost(x0, obs, cfg.minimizer.upper_bound, p.population, cfg));
    }
  }

  TEST_CASE("two runs are bit-identical") {
    const CountryPanel p = growing_panel();
    const RtResult a = estimate_rt(p, EstimatorConfig{}, p.confirmed.last());
    const RtResult b = estimate_rt(p, EstimatorConfig{}, p.confirmed.last());
    CHECK(a.rt == b.rt);
    CHECK(a.beta == b.beta);
    CHECK(a.residual == b.residual);
    CHECK(a.converged == b.converged);
    CHECK(a.diagnostics == b.diagnostics);
  }

  TEST_CASE("scaling population and counts leaves beta in place") {
    const double c = 4.0;
    const CountryPanel base = testing::seir_panel([](int) { return 0.12; }, 90, testing::seed_state(1e7), kStart);
    CountryPanel scaled = base;
    auto times = [&](const DatedSeries& s) {
      std::vector<DatedSeries::Value> v = s.values();
      for (auto& x : v) *x *= c;
      return DatedSeries(s.start(), v);
    };
    scaled.population *= c;
    scaled.confirmed = times(base.confirmed);
    scaled.recovered = times(base.recovered);
    scaled.deaths = times(base.deaths);
    const RtResult a = estimate_rt(smooth_cases(base), EstimatorConfig{}, base.confirmed.last());
    const RtResult b = estimate_rt(smooth_cases(scaled), EstimatorConfig{}, base.confirmed.last());
    CHECK(b.t0 <= a.t0);
    std::size_t compared = 0;
    for (std::size_t i = 0; i < a.beta.size(); ++i) {
      const auto other = b.beta.at(a.beta.date_at(i));
      REQUIRE(other);
      CHECK(std::abs(*other - *a.beta[i]) <= 2e-3);
      ++compared;
    }
    CHECK(compared > 50);
  }

  TEST_CASE("degenerate and partial inputs") {
    SUBCASE("too short after t0") {
      std::vector<double> v{100, 500, 900, 1200, 1300, 1400};
      const RtResult r = estimate_rt(panel_from(v), EstimatorConfig{}, add_days(kStart, 5));
      CHECK(r.rt.empty());
      CHECK_FALSE(r.diagnostics.empty());
    }
    SUBCASE("end date past the data is clipped with a note") {
      const CountryPanel p = growing_panel();
      const RtResult r = estimate_rt(p, EstimatorConfig{}, make_date(2021, 1, 1));
      CHECK(r.rt.last() == p.confirmed.last());
      CHECK(r.diagnostics.front().find("past the data") != std::string::npos);
    }
    SUBCASE("no recoveries is noted but not fatal") {
      CountryPanel p = growing_panel();
      p.recovered = DatedSeries::dense(p.confirmed.start(), std::vector<double>(p.confirmed.size(), 0.0));
      p.recovered_smoothed = p.recovered;
      const RtResult r = estimate_rt(p, EstimatorConfig{}, p.confirmed.last());
      CHECK(r.rt.present_count() == r.rt.size());
      bool noted = false;
      for (const auto& d : r.diagnostics) noted = noted || d.find("no recoveries") != std::string::npos;
      CHECK(noted);
    }
    SUBCASE("a failed window leaves a gap") {
      CountryPanel p = growing_panel();
      const RtResult full = estimate_rt(p, EstimatorConfig{}, p.confirmed.last());
      // Drop one smoothed value; every window needing it is skipped.
      const Date hole = add_days(full.t0, 20);
      p.confirmed_smoothed.set(hole, std::nullopt);
      const RtResult r = estimate_rt(p, EstimatorConfig{}, p.confirmed.last());
      CHECK(r.rt.size() == full.rt.size());
      CHECK(r.rt.present_count() < full.rt.size());
      CHECK_FALSE(r.rt.at(add_days(hole, 1)).has_value());
      CHECK(r.rt.at(add_days(hole, 30)) == full.rt.at(add_days(hole, 30)));
      std::size_t skipped = 0;
      for (const auto& d : r.diagnostics) skipped += d.find("window skipped") != std::string::npos;
      CHECK(skipped == full.rt.size() - r.rt.present_count());
    }
  }
}
