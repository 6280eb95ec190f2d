#include "doctest.h"

#include <cmath>
#include <string>

#include "cqad/error.hpp"
#include "cqad/model.hpp"
#include "cqad/reference_device.hpp"

using namespace cqad;

TEST_SUITE("model") {

TEST_CASE("seven-mode reference system validates") {
  const SystemParams p = reference::seven_mode_system(reference::kCouplingMaxMHz);
  CHECK_NOTHROW(validate(p));
  CHECK(p.modes.size() == 7);
  CHECK(p.position_of(6) == 5);
  CHECK(p.mode(4).f == doctest::Approx(4557.6));
}

TEST_CASE("zero kappa is rejected with the field path") {
  SystemParams p;
  p.qubit = {4768.5, 171.0, 0.0};
  p.modes = {{1, 4587.4, 0.0, 0.5}};
  try {
    validate(p);
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("non-positive rate") != std::string::npos);
    CHECK(msg.find("modes[0].kappa_mhz") != std::string::npos);
  }
}

TEST_CASE("duplicate mode frequency is rejected") {
  SystemParams p;
  p.qubit = {4768.5, 171.0, 0.0};
  p.modes = {{1, 4557.6, 1.0, 0.1}, {2, 4557.6, 1.0, 0.1}};
  CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("duplicate mode frequency"), InvalidArgument);
}

TEST_CASE("other invariants") {
  SystemParams p;
  p.qubit = {4768.5, 171.0, 0.0};
  p.modes = {{2, 4500.0, 1.0, 0.1}, {1, 4600.0, 1.0, 0.1}};
  CHECK_THROWS_AS(validate(p), InvalidArgument);  // indices not ascending
  p.modes = {{1, 4500.0, 1.0, 0.1}};
  p.qubit.gamma = -1e-3;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p.qubit.gamma = 0.0;
  p.qubit.ec = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p.qubit.ec = 171.0;
  p.modes[0].index = 0;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
}

TEST_CASE("rates decay as exp(-2 pi r t)") {
  // Mode 5: kappa 0.68 MHz against the tabulated 233.1 ns lifetime.
  const double kappa = reference::kModeKappaMHz[4];
  const double one_over_e = 1.0 / (kTwoPi * kappa);
  CHECK(std::abs(one_over_e - 0.2331) / 0.2331 < 0.01);
}

TEST_CASE("serialize -> parse -> serialize is byte-identical") {
  const SystemParams p = reference::seven_mode_system(reference::kCouplingWeakMHz, 4768.5, 12.2e-3);
  const std::string a = serialize(p);
  const std::string b = serialize(parse_system_params(a));
  CHECK(a == b);
  const SystemParams q = parse_system_params(a);
  CHECK(q.modes[5].g == p.modes[5].g);
  CHECK(q.qubit.gamma == p.qubit.gamma);
}

TEST_CASE("malformed system JSON") {
  CHECK_THROWS_AS(parse_system_params("{"), InvalidArgument);
  CHECK_THROWS_AS(parse_system_params(R"({"qubit": {"f01_mhz": 1}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_system_params(R"({"qubit": {"f01_mhz": "x", "ec_mhz": 1, "gamma_mhz": 0}, "modes": []})"),
                  InvalidArgument);
}

TEST_CASE("Hilbert space dimension and cap") {
  HilbertSpec s = HilbertSpec::uniform(2, 7, 2);
  CHECK(s.total_dim() == 256);
  s.mode_levels[5] = 3;
  CHECK(s.total_dim() == 384);
  CHECK(s.slot_dim(0) == 2);
  CHECK(s.slot_dim(6) == 3);
  CHECK_NOTHROW(s.check());
  const HilbertSpec big = HilbertSpec::uniform(2, 7, 3);  // 4374 > 4096
  CHECK_THROWS_AS(big.check(), InvalidArgument);
  HilbertSpec bad = HilbertSpec::uniform(2, 1, 1);
  CHECK_THROWS_AS(bad.check(), InvalidArgument);
}

TEST_CASE("time grid and series checks") {
  const auto g = time_grid(1.0, 0.3);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(time_grid(3.0, 0.01).size() == 301);
  TimeSeries ts;
  ts.times = {0.0, 1.0, 1.0};
  ts.values = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(ts.check(), InvalidArgument);
  ts.times = {0.0, 1.0};
  CHECK_THROWS_AS(ts.check(), InvalidArgument);
}

}
