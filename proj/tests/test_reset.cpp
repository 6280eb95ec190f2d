#include "doctest.h"

#include <cmath>
#include <random>

#include "cqad/error.hpp"
#include "cqad/reset.hpp"

using namespace cqad;

namespace {

TimeSeries series(std::vector<double> values, double dt = 1.0) {
  TimeSeries ts;
  for (std::size_t i = 0; i < values.size(); ++i) ts.times.push_back(dt * static_cast<double>(i));
  ts.values = std::move(values);
  return ts;
}

}  // namespace

TEST_SUITE("reset") {

TEST_CASE("reset time definition") {
  CHECK(reset_time(series({0.0, 0.5, 0.98, 0.995, 0.999}), 0.99) == doctest::Approx(3.0));
  // A dip after the first crossing moves t* past the dip.
  CHECK(reset_time(series({0.0, 0.995, 0.97, 0.992, 0.999}), 0.99) == doctest::Approx(3.0));
  CHECK_FALSE(reset_time(series({0.0, 0.5, 0.9}), 0.99).has_value());
  CHECK(reset_time(series({0.995, 0.999}), 0.99) == doctest::Approx(0.0));
  CHECK_THROWS_AS(reset_time(TimeSeries{}, 0.99), InvalidArgument);
}

TEST_CASE("a more lenient threshold never takes longer") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(40);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(1.0, u(rng) * 0.2 + 0.8 * static_cast<double>(i) / 30.0);
    const TimeSeries ts = series(v);
    const auto strict = reset_time(ts, 0.99);
    const auto lenient = reset_time(ts, 0.9);
    if (strict) {
      REQUIRE(lenient.has_value());
      CHECK(*strict >= *lenient);
    }
  }
}

TEST_CASE("weak coupling lower bound") {
  ResetConfig cfg;
  cfg.ratios = {0.01};
  const auto rows = sweep_reset(cfg);
  REQUIRE(rows.front().reset_times.front().has_value());
  CHECK(*rows.front().reset_times.front() >= 10.0 / (kTwoPi * cfg.kappa_r));
}

TEST_CASE("minimum of the 99% curve sits near g = kappa") {
  ResetConfig cfg;
  const auto rows = sweep_reset(cfg);
  const auto minima = sweep_minima(cfg, rows);
  REQUIRE(minima.size() == 2);
  REQUIRE(minima[0].ratio.has_value());
  CHECK(*minima[0].ratio >= 0.25);
  CHECK(*minima[0].ratio <= 4.0);
  // Monotone decrease from the weakest coupling down to the minimum.
  for (std::size_t i = 1; i < rows.size() && rows[i].ratio <= *minima[0].ratio; ++i) {
    CHECK(*rows[i].reset_times[0] < *rows[i - 1].reset_times[0]);
  }
}

TEST_CASE("engine and closed-form dynamics agree within one sample") {
  ResetConfig cfg;
  cfg.ratios = {0.05, 0.3, 1.0, 3.0};
  cfg.t_max = 6.0;
  cfg.dt = 1e-2;
  const auto a = sweep_reset(cfg);
  cfg.dynamics = ResetDynamics::engine;
  EvolveStats stats;
  const auto b = sweep_reset(cfg, &stats);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
      CAPTURE(a[i].ratio);
      REQUIRE(a[i].reset_times[k].has_value() == b[i].reset_times[k].has_value());
      if (a[i].reset_times[k]) CHECK(std::abs(*a[i].reset_times[k] - *b[i].reset_times[k]) <= cfg.dt + 1e-12);
    }
  }
  CHECK(stats.hygiene.trace_drift < 1e-8);
}

TEST_CASE("Purcell impact and its inversion") {
  CHECK(purcell_impact(0.0, 2.5, 300.0, 0.2) == 0.0);
  CHECK(purcell_impact(26.83, 2.5, 300.0, 0.2) == doctest::Approx(0.1).epsilon(1e-3));
  ResetConfig cfg;
  const std::vector<double> levels{0.01, 0.05, 0.10, 0.04};
  const auto xs = impact_crossings(cfg, levels);
  CHECK(xs[0] == doctest::Approx(3.39).epsilon(0.01));
  CHECK(xs[1] == doctest::Approx(7.59).epsilon(0.01));
  CHECK(xs[2] == doctest::Approx(10.73).epsilon(0.01));
  CHECK(xs[3] == doctest::Approx(2.0 * xs[0]).epsilon(1e-12));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double g = xs[i] * cfg.kappa_r;
    CHECK(purcell_impact(g, cfg.kappa_r, cfg.delta_r, cfg.gamma) == doctest::Approx(levels[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(purcell_impact(1.0, 2.5, 0.0, 0.2), InvalidArgument);
  CHECK_THROWS_AS(purcell_impact(1.0, 2.5, 300.0, 0.0), InvalidArgument);
}

TEST_CASE("config checks") {
  ResetConfig cfg;
  CHECK_NOTHROW(cfg.check());
  CHECK(ResetConfig::default_ratios().size() == 81);
  CHECK(ResetConfig::default_ratios().front() == doctest::Approx(0.01));
  CHECK(ResetConfig::default_ratios().back() == doctest::Approx(100.0));
  cfg.thresholds = {1.0};
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
  cfg = ResetConfig{};
  cfg.ratios = {0.0};
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
}

}
