#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cqad/cli.hpp"
#include "cqad/error.hpp"
#include "cqad/io.hpp"

using namespace cqad;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cqad");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cqad_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting") {
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333");
  CHECK(io::format_number(123456789012.0) == "1.23456789e+11");
  CHECK(io::format_number(INFINITY) == "inf");
  CHECK(io::format_number(-INFINITY) == "-inf");
  CHECK(io::format_optional(std::nullopt) == "inf");
  CHECK(io::format_optional(2.5) == "2.5");
}

TEST_CASE("CSV writer and reader") {
  io::CsvWriter w({"t_us", "pe"});
  w.add_row(std::vector<double>{0.0, 1.0});
  w.add_row(std::vector<double>{0.5, 0.25});
  CHECK(w.str() == "t_us,pe\n0,1\n0.5,0.25\n");
  CHECK_THROWS_AS(w.add_row(std::vector<double>{1.0}), InvalidArgument);

  const TimeSeries ts = io::parse_time_series_csv(w.str());
  CHECK(ts.times == std::vector<double>{0.0, 0.5});
  CHECK(ts.values == std::vector<double>{1.0, 0.25});
  const auto cols = io::parse_csv("a,b,c\n1,2,3\n4,5,6\n");
  CHECK(cols.column("c") == std::vector<double>{3.0, 6.0});
  const TimeSeries picked = io::parse_time_series_csv("a,b,c\n1,2,3\n4,5,6\n", "a", "c");
  CHECK(picked.values == std::vector<double>{3.0, 6.0});
  CHECK_THROWS_AS(io::parse_csv("a,b\n1,x\n"), InvalidArgument);
  CHECK_THROWS_AS(io::parse_csv("a,b\n1,2,3\n"), InvalidArgument);
  CHECK_THROWS_AS(cols.column("z"), InvalidArgument);
}

TEST_CASE("atomic write creates directories") {
  const fs::path dir = scratch("atomic");
  const fs::path f = dir / "nested" / "x.txt";
  io::write_atomic(f, "hello\n");
  CHECK(io::read_file(f) == "hello\n");
  io::write_atomic(f, "again\n");
  CHECK(io::read_file(f) == "again\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "nested")) ++entries;
  CHECK(entries == 1);
}

}

TEST_SUITE("cli") {

TEST_CASE("no arguments prints usage and exits 1") {
  CHECK(run_cli({}) == cli::kUsage);
  CHECK(run_cli({"bogus"}) == cli::kUsage);
}

TEST_CASE("tof writes the geometry and a manifest") {
  const fs::path out = scratch("tof");
  REQUIRE(run_cli({"tof", "--out", out.string()}) == cli::kOk);
  const auto j = nlohmann::json::parse(io::read_file(out / "tof.json"));
  CHECK(j["geometry"]["v_e_m_per_s"].get<double>() == doctest::Approx(3937.8).epsilon(1e-4));
  CHECK(j["geometry"]["d0_um"].get<double>() == doctest::Approx(5.91).epsilon(0.005));
  CHECK(j["geometry"]["L_c_um"].get<double>() == doctest::Approx(53.2).epsilon(0.005));
  const auto m = nlohmann::json::parse(io::read_file(out / "manifest.json"));
  CHECK(m["subcommand"] == "tof");
  CHECK(m["exit_code"] == 0);
}

TEST_CASE("reset-sweep CSV has its 99% minimum near g = kappa") {
  const fs::path out = scratch("reset");
  REQUIRE(run_cli({"reset-sweep", "--out", out.string()}) == cli::kOk);
  const auto cols = io::parse_csv(io::read_file(out / "reset_sweep.csv"));
  const auto& ratio = cols.column("ratio");
  const auto& t99 = cols.column("t_reset_99_us");
  REQUIRE(ratio.size() == 81);
  std::size_t best = 0;
  for (std::size_t i = 1; i < t99.size(); ++i) {
    if (t99[i] < t99[best]) best = i;
  }
  CHECK(ratio[best] >= 0.25);
  CHECK(ratio[best] <= 4.0);
}

TEST_CASE("identical runs give byte-identical CSV") {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  const fs::path cfg = write(a / "cfg.json", R"({"modes": [4], "t_max_us": 1.0, "dt_us": 0.05})");
  REQUIRE(run_cli({"evolve", "--config", cfg.string(), "--out", a.string(), "--seed", "3"}) == cli::kOk);
  REQUIRE(run_cli({"evolve", "--config", cfg.string(), "--out", b.string(), "--seed", "3"}) == cli::kOk);
  CHECK(io::read_file(a / "evolve.csv") == io::read_file(b / "evolve.csv"));
  CHECK(io::read_file(a / "evolve.csv").rfind("t_us,pe_engine_m4,pe_exact_m4\n", 0) == 0);
  for (const char* sub : {"stark", "purcell", "regimes", "echo"}) {
    REQUIRE(run_cli({sub, "--out", a.string()}) == cli::kOk);
    REQUIRE(run_cli({sub, "--out", b.string()}) == cli::kOk);
  }
  for (const char* f : {"stark.csv", "purcell.csv", "regimes.csv", "echo.csv"}) {
    CAPTURE(f);
    CHECK(io::read_file(a / f) == io::read_file(b / f));
  }
}

TEST_CASE("fit round trip through a CSV file") {
  const fs::path out = scratch("fit");
  io::CsvWriter w({"t_us", "pe"});
  for (int i = 0; i <= 300; ++i) {
    const double t = 0.25 * i;
    w.add_row(std::vector<double>{t, 0.9 * std::exp(-t / 15.0) + 0.05});
  }
  const fs::path data = write(out / "t1.csv", w.str());
  REQUIRE(run_cli({"fit", "--data", data.string(), "--model", "exponential", "--out", out.string()}) == cli::kOk);
  const auto j = nlohmann::json::parse(io::read_file(out / "fit.json"));
  CHECK(j["params"]["T1"]["value"].get<double>() == doctest::Approx(15.0).epsilon(1e-6));
  CHECK(run_cli({"fit", "--data", data.string(), "--model", "nope", "--out", out.string()}) == cli::kUsage);
  CHECK(run_cli({"fit", "--data", data.string(), "--model", "resonant", "--out", out.string()}) == cli::kUsage);
}

TEST_CASE("bad configs exit 1 and still write a manifest") {
  const fs::path out = scratch("badcfg");
  const fs::path malformed = write(out / "bad.json", "{ \"p_nm\": ");
  CHECK(run_cli({"tof", "--config", malformed.string(), "--out", out.string()}) == cli::kUsage);
  const auto m = nlohmann::json::parse(io::read_file(out / "manifest.json"));
  CHECK(m["exit_code"] == 1);
  CHECK(m["error"].get<std::string>().find("malformed JSON") != std::string::npos);

  const fs::path unknown = write(out / "unknown.json", R"({"p_nm": 864, "dt_1_ns": 3})");
  CHECK(run_cli({"tof", "--config", unknown.string(), "--out", out.string()}) == cli::kUsage);
  const auto m2 = nlohmann::json::parse(io::read_file(out / "manifest.json"));
  CHECK(m2["error"].get<std::string>().find("unknown key 'dt_1_ns'") != std::string::npos);

  const fs::path wrong_type = write(out / "type.json", R"({"dt1_ns": "three"})");
  CHECK(run_cli({"tof", "--config", wrong_type.string(), "--out", out.string()}) == cli::kUsage);

  const fs::path bad_value = write(out / "value.json", R"({"dt1_ns": 1.0})");
  CHECK(run_cli({"tof", "--config", bad_value.string(), "--out", out.string()}) == cli::kUsage);
  CHECK(run_cli({"tof", "--config", (out / "missing.json").string()}) == cli::kUsage);
}

TEST_CASE("output directory from the environment") {
  const fs::path out = scratch("env");
  setenv("CQAD_OUTPUT_DIR", out.string().c_str(), 1);
  const int code = run_cli({"stark"});
  unsetenv("CQAD_OUTPUT_DIR");
  REQUIRE(code == cli::kOk);
  CHECK(fs::exists(out / "stark.csv"));
  CHECK(fs::exists(out / "manifest.json"));
}

}
