#include "cqad/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqad/acceptance.hpp"
#include "cqad/analytic.hpp"
#include "cqad/engine.hpp"
#include "cqad/error.hpp"
#include "cqad/fitting.hpp"
#include "cqad/io.hpp"
#include "cqad/reference_device.hpp"
#include "cqad/reset.hpp"
#include "cqad/tof.hpp"

#ifndef CQAD_VERSION
#define CQAD_VERSION "0.0.0"
#endif

namespace cqad::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
namespace ref = cqad::reference;

namespace {

// --- config helpers --------------------------------------------------------

double number(const json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number()) throw InvalidArgument(std::string("config: '") + key + "' must be a number");
  return j[key].get<double>();
}

std::string text(const json& j, const char* key, const std::string& def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_string()) throw InvalidArgument(std::string("config: '") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key, std::vector<double> def) {
  if (!j.contains(key)) return def;
  const json& a = j[key];
  if (!a.is_array()) throw InvalidArgument(std::string("config: '") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw InvalidArgument(std::string("config: '") + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// Rejects keys the subcommand does not read; "comment" is always allowed.
void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (key == "comment") continue;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) {
      std::string list;
      for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
      throw InvalidArgument("config: unknown key '" + key + "' in " + where + " (allowed: " +
                            (list.empty() ? std::string("none") : list) + ")");
    }
  }
}

void check_config_keys(const std::string& sub, const json& cfg) {
  if (sub == "evolve") {
    check_keys(cfg, sub, {"system", "intrinsic_gamma_mhz", "modes", "t_max_us", "dt_us", "method"});
  } else if (sub == "stark") {
    check_keys(cfg, sub, {"system", "nbar"});
  } else if (sub == "purcell") {
    check_keys(cfg, sub, {"system", "intrinsic_gamma_mhz", "idle_f01_mhz", "idle_gamma0_mhz"});
  } else if (sub == "regimes") {
    check_keys(cfg, sub, {"system", "intrinsic_gamma_mhz"});
  } else if (sub == "fit") {
    check_keys(cfg, sub, {"data", "model", "time_column", "value_column", "gamma_p_mhz"});
  } else if (sub == "tof") {
    check_keys(cfg, sub, {"p_nm", "f_center_mhz", "d1_um", "dt1_ns", "dt2_ns"});
  } else if (sub == "echo") {
    check_keys(cfg, sub, {"tof", "x_in_um", "mirror_reflectivity", "loss_per_us", "sample_dt_ns", "pulse_len_ns",
                          "envelope", "total_time_ns"});
    if (cfg.contains("tof")) {
      if (!cfg["tof"].is_object()) throw InvalidArgument("config: 'tof' must be an object");
      check_keys(cfg["tof"], "echo.tof", {"p_nm", "f_center_mhz", "d1_um", "dt1_ns", "dt2_ns"});
    }
  } else if (sub == "reset-sweep") {
    check_keys(cfg, sub, {"gamma_mhz", "kappa_r_mhz", "delta_r_mhz", "ratios", "thresholds", "t_max_us", "dt_us",
                          "dynamics", "impact_levels"});
  } else if (sub == "selftest") {
    check_keys(cfg, sub, {});
  }
}

std::vector<double> to_vector(const std::array<double, ref::kModeCount>& a) { return {a.begin(), a.end()}; }

SystemParams system_from(const json& cfg, const std::array<double, ref::kModeCount>& default_couplings) {
  if (cfg.contains("system")) return system_params_from_json(cfg["system"]);
  return ref::seven_mode_system(default_couplings);
}

// Intrinsic qubit decay when tuned to each mode; falls back to the system's
// qubit.gamma_mhz when the system is given explicitly.
std::vector<double> intrinsic_gammas(const json& cfg, const SystemParams& p) {
  const std::vector<double> def = cfg.contains("system") ? std::vector<double>(p.modes.size(), p.qubit.gamma)
                                                         : to_vector(ref::kIntrinsicGammaMHz);
  std::vector<double> g = numbers(cfg, "intrinsic_gamma_mhz", def);
  if (g.size() != p.modes.size()) throw InvalidArgument("config: 'intrinsic_gamma_mhz' needs one entry per mode");
  return g;
}

SystemParams with_gamma(SystemParams p, double gamma) {
  p.qubit.gamma = gamma;
  return p;
}

struct Context {
  json cfg = json::object();
  fs::path out;
  long long seed = 0;
};

void write_json(const fs::path& path, const json& j) { io::write_atomic(path, j.dump(2) + "\n"); }

json number_or_null(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// --- subcommands -----------------------------------------------------------

int cmd_evolve(const Context& ctx) {
  const SystemParams base = system_from(ctx.cfg, ref::kCouplingMaxMHz);
  validate(base);
  const std::vector<double> gammas = intrinsic_gammas(ctx.cfg, base);
  std::vector<int> modes;
  if (ctx.cfg.contains("modes")) {
    for (const auto& m : ctx.cfg["modes"]) {
      if (!m.is_number_integer()) throw InvalidArgument("config: 'modes' must be an array of mode indices");
      modes.push_back(m.get<int>());
    }
  } else {
    for (const auto& m : base.modes) modes.push_back(m.index);
  }
  const double t_max = number(ctx.cfg, "t_max_us", 3.0);
  const double dt = number(ctx.cfg, "dt_us", 0.01);
  const std::string method = text(ctx.cfg, "method", "both");
  if (method != "both" && method != "engine" && method != "exact") {
    throw InvalidArgument("config: 'method' must be one of both, engine, exact");
  }
  const std::vector<double> times = time_grid(t_max, dt);

  std::vector<std::string> header = {"t_us"};
  std::vector<std::vector<double>> columns;
  json summary = json::array();
  for (int idx : modes) {
    const std::size_t pos = base.position_of(idx);
    const SystemParams p = with_gamma(base, gammas[pos]);
    const ModeParams& mode = p.modes[pos];
    const double gp = gamma_prime(p, idx);
    json entry = {{"mode", idx}, {"g_mhz", mode.g}, {"kappa_mhz", mode.kappa}, {"gamma_prime_mhz", gp},
                  {"regime", std::string(to_string(classify_regime(mode.g, gp, mode.kappa).regime))}};
    std::vector<double> exact(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) exact[i] = pe_exact(times[i], mode.g, gp, mode.kappa);
    if (method != "exact") {
      EvolveStats stats;
      const HilbertSpec spec = resonant_spec(p, idx);
      const TimeSeries pe = simulate_resonant_pe(p, spec, idx, times, {}, &stats);
      double dev = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) dev = std::max(dev, std::abs(pe.values[i] - exact[i]));
      header.push_back("pe_engine_m" + std::to_string(idx));
      columns.push_back(pe.values);
      entry["dim"] = spec.total_dim();
      entry["max_engine_exact_deviation"] = dev;
      entry["trace_drift"] = stats.hygiene.trace_drift;
      entry["hermiticity_residual"] = stats.hygiene.hermiticity_residual;
      entry["min_eigenvalue"] = stats.hygiene.min_eigenvalue;
      entry["accepted_steps"] = stats.accepted_steps;
    }
    if (method != "engine") {
      header.push_back("pe_exact_m" + std::to_string(idx));
      columns.push_back(exact);
    }
    summary.push_back(entry);
  }
  io::CsvWriter csv(header);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row = {times[i]};
    for (const auto& c : columns) row.push_back(c[i]);
    csv.add_row(row);
  }
  io::write_atomic(ctx.out / "evolve.csv", csv.str());
  write_json(ctx.out / "evolve.json", json{{"modes", summary}});
  std::cout << "wrote " << (ctx.out / "evolve.csv").string() << "\n";
  return kOk;
}

int cmd_stark(const Context& ctx) {
  const SystemParams p = validate(system_from(ctx.cfg, ref::kCouplingWeakMHz));
  const double nbar = number(ctx.cfg, "nbar", 1.0);
  io::CsvWriter csv({"mode", "f_mhz", "g_mhz", "delta_mhz", "chi_mhz", "stark_shift_mhz"});
  for (const auto& m : p.modes) {
    const double delta = p.qubit.f01 - m.f;
    const double chi = chi_dispersive(m.g, delta, p.qubit.ec);
    csv.add_row(std::vector<double>{static_cast<double>(m.index), m.f, m.g, delta, chi, stark_shift(chi, nbar)});
  }
  io::write_atomic(ctx.out / "stark.csv", csv.str());
  std::cout << "wrote " << (ctx.out / "stark.csv").string() << "\n";
  return kOk;
}

int cmd_purcell(const Context& ctx) {
  const SystemParams base = validate(system_from(ctx.cfg, ref::kCouplingMaxMHz));
  const std::vector<double> gammas = intrinsic_gammas(ctx.cfg, base);
  const double f_idle = number(ctx.cfg, "idle_f01_mhz", base.qubit.f01);
  const double gamma0 = number(ctx.cfg, "idle_gamma0_mhz", ref::kIntrinsicGammaMHz[5]);
  io::CsvWriter csv({"mode", "f_mhz", "g_mhz", "kappa_mhz", "intrinsic_gamma_mhz", "gamma_prime_mhz"});
  for (std::size_t k = 0; k < base.modes.size(); ++k) {
    const auto& m = base.modes[k];
    const double gp = gamma_prime(with_gamma(base, gammas[k]), m.index);
    csv.add_row(std::vector<double>{static_cast<double>(m.index), m.f, m.g, m.kappa, gammas[k], gp});
  }
  const double idle = purcell_idle(base, f_idle, gamma0);
  io::write_atomic(ctx.out / "purcell.csv", csv.str());
  write_json(ctx.out / "purcell.json", json{{"idle_f01_mhz", f_idle},
                                            {"idle_gamma0_mhz", gamma0},
                                            {"idle_gamma_mhz", idle},
                                            {"idle_t1_us", 1.0 / (kTwoPi * idle)}});
  std::cout << "wrote " << (ctx.out / "purcell.csv").string() << "\n";
  return kOk;
}

int cmd_regimes(const Context& ctx) {
  const SystemParams base = validate(system_from(ctx.cfg, ref::kCouplingMaxMHz));
  const std::vector<double> gammas = intrinsic_gammas(ctx.cfg, base);
  io::CsvWriter csv({"mode", "g_mhz", "gamma_prime_mhz", "kappa_mhz", "ep_coupling_mhz", "discriminant_mhz",
                     "regime"});
  for (std::size_t k = 0; k < base.modes.size(); ++k) {
    const auto& m = base.modes[k];
    const double gp = gamma_prime(with_gamma(base, gammas[k]), m.index);
    const RegimeLabel label = classify_regime(m.g, gp, m.kappa);
    csv.add_row({std::to_string(m.index), io::format_number(m.g), io::format_number(gp), io::format_number(m.kappa),
                 io::format_number(exceptional_point_coupling(gp, m.kappa)), io::format_number(label.discriminant),
                 std::string(to_string(label.regime))});
  }
  io::write_atomic(ctx.out / "regimes.csv", csv.str());
  std::cout << csv.str();
  return kOk;
}

json fit_to_json(const std::string& model, const FitResult& r) {
  json params = json::object();
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    params[r.param_names[i]] = {{"value", r.values[i]}, {"std_error", r.std_errors[i]}};
  }
  return {{"model", model},        {"params", params},         {"residual_rms", r.residual_rms},
          {"iterations", r.iterations}, {"converged", r.converged}, {"notes", r.notes}};
}

struct FitArgs {
  std::string data;
  std::string model;
  std::optional<double> gamma_p;
};

int cmd_fit(const Context& ctx, const FitArgs& args) {
  const std::string data_path = args.data.empty() ? text(ctx.cfg, "data", "") : args.data;
  if (data_path.empty()) throw InvalidArgument("fit: no data file (use --data or 'data' in the config)");
  const std::string model = args.model.empty() ? text(ctx.cfg, "model", "exponential") : args.model;
  const std::string tcol = text(ctx.cfg, "time_column", "");
  const std::string vcol = text(ctx.cfg, "value_column", "");
  const std::string content = io::read_file(data_path);

  FitResult r;
  if (model == "exponential") {
    r = fit_exponential(io::parse_time_series_csv(content, tcol, vcol));
  } else if (model == "resonant" || model == "resonant-paper") {
    const double gp = args.gamma_p ? *args.gamma_p : number(ctx.cfg, "gamma_p_mhz", NAN);
    if (!std::isfinite(gp)) throw InvalidArgument("fit: resonant models need gamma_p_mhz (or --gamma-p)");
    r = fit_resonant(io::parse_time_series_csv(content, tcol, vcol), gp,
                     model == "resonant" ? ResonantModel::exact : ResonantModel::paper);
  } else if (model == "coupling-profile") {
    const TimeSeries ts = io::parse_time_series_csv(content, tcol, vcol);
    std::vector<std::pair<int, double>> pts;
    for (std::size_t i = 0; i < ts.size(); ++i) pts.emplace_back(static_cast<int>(std::lround(ts.times[i])), ts.values[i]);
    r = fit_coupling_profile(pts);
  } else {
    throw InvalidArgument("fit: unknown model '" + model +
                          "' (expected exponential, resonant, resonant-paper, coupling-profile)");
  }
  const json j = fit_to_json(model, r);
  write_json(ctx.out / "fit.json", j);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

TofInput tof_input_from(const json& j, double default_dt1) {
  TofInput in;
  in.p_nm = number(j, "p_nm", 864.0);
  in.f_center_mhz = number(j, "f_center_mhz", 4557.6);
  in.d1_um = number(j, "d1_um", 2.2);
  in.dt1_ns = number(j, "dt1_ns", default_dt1);
  in.dt2_ns = number(j, "dt2_ns", 27.0);
  return in;
}

int cmd_tof(const Context& ctx) {
  const TofInput in = tof_input_from(ctx.cfg, 3.0);
  const TofGeometry g = geometry_from_timing(in);
  const json j = {{"input",
                   {{"p_nm", in.p_nm}, {"f_center_mhz", in.f_center_mhz}, {"d1_um", in.d1_um},
                    {"dt1_ns", in.dt1_ns}, {"dt2_ns", in.dt2_ns}}},
                  {"geometry",
                   {{"v_e_m_per_s", g.v_e}, {"d0_um", g.d0}, {"L_p_um", g.L_p}, {"r_s", g.r_s}, {"L_c_um", g.L_c}}}};
  write_json(ctx.out / "tof.json", j);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_echo(const Context& ctx) {
  const json tof_cfg = ctx.cfg.contains("tof") ? ctx.cfg["tof"] : json::object();
  const TofGeometry geo = geometry_from_timing(tof_input_from(tof_cfg, 3.5));
  const EchoModel model = echo_model_for(geo, number(ctx.cfg, "x_in_um", 1.0), number(ctx.cfg, "mirror_reflectivity", 0.98),
                                         number(ctx.cfg, "loss_per_us", 0.5), number(ctx.cfg, "sample_dt_ns", 1.0));
  const double pulse = number(ctx.cfg, "pulse_len_ns", 12.0);
  const std::string env = text(ctx.cfg, "envelope", "gaussian");
  if (env != "gaussian" && env != "rectangular") throw InvalidArgument("config: 'envelope' must be gaussian or rectangular");
  const Envelope envelope = env == "gaussian" ? Envelope::gaussian : Envelope::rectangular;
  const double total = number(ctx.cfg, "total_time_ns", 300.0);

  const TimeSeries trace = simulate_echo(model, pulse, envelope, total);
  io::CsvWriter csv({"t_ns", "amplitude"});
  for (std::size_t i = 0; i < trace.size(); ++i) csv.add_row(std::vector<double>{trace.times[i], trace.values[i]});
  io::write_atomic(ctx.out / "echo.csv", csv.str());

  const SubechoFeature f = detect_subecho(trace, model, pulse);
  json summary = {{"pulse_len_ns", pulse},
                  {"envelope", env},
                  {"round_trip_ns", model.round_trip_ns()},
                  {"subecho_delay_ns", model.subecho_delay_ns()},
                  {"subecho_present", f.present},
                  {"subecho_dip_fraction", f.dip_fraction}};
  try {
    summary["period_ns"] = echo_period(trace);
  } catch (const NumericalError&) {
    summary["period_ns"] = nullptr;
  }
  write_json(ctx.out / "echo.json", summary);
  std::cout << "wrote " << (ctx.out / "echo.csv").string() << "\n";
  return kOk;
}

std::string threshold_tag(double th) {
  std::string s = io::format_number(th);
  if (s.rfind("0.", 0) == 0) s = s.substr(2);
  for (char& ch : s) {
    if (ch == '.' || ch == '-') ch = '_';
  }
  return s;
}

int cmd_reset_sweep(const Context& ctx) {
  ResetConfig cfg;
  cfg.gamma = number(ctx.cfg, "gamma_mhz", cfg.gamma);
  cfg.kappa_r = number(ctx.cfg, "kappa_r_mhz", cfg.kappa_r);
  cfg.delta_r = number(ctx.cfg, "delta_r_mhz", cfg.delta_r);
  cfg.ratios = numbers(ctx.cfg, "ratios", cfg.ratios);
  cfg.thresholds = numbers(ctx.cfg, "thresholds", cfg.thresholds);
  cfg.t_max = number(ctx.cfg, "t_max_us", cfg.t_max);
  cfg.dt = number(ctx.cfg, "dt_us", cfg.dt);
  const std::string dyn = text(ctx.cfg, "dynamics", "analytic");
  if (dyn != "analytic" && dyn != "engine") throw InvalidArgument("config: 'dynamics' must be analytic or engine");
  cfg.dynamics = dyn == "engine" ? ResetDynamics::engine : ResetDynamics::analytic;
  const std::vector<double> levels = numbers(ctx.cfg, "impact_levels", {0.01, 0.05, 0.10});
  cfg.check();

  const auto rows = sweep_reset(cfg);
  std::vector<std::string> header = {"ratio"};
  for (double th : cfg.thresholds) header.push_back("t_reset_" + threshold_tag(th) + "_us");
  io::CsvWriter csv(header);
  io::CsvWriter impact({"ratio", "g_r_mhz", "purcell_impact"});
  for (const auto& r : rows) {
    std::vector<std::string> cells = {io::format_number(r.ratio)};
    for (const auto& t : r.reset_times) cells.push_back(io::format_optional(t));
    csv.add_row(std::move(cells));
    const double g = r.ratio * cfg.kappa_r;
    impact.add_row(std::vector<double>{r.ratio, g, purcell_impact(g, cfg.kappa_r, cfg.delta_r, cfg.gamma)});
  }
  io::write_atomic(ctx.out / "reset_sweep.csv", csv.str());
  io::write_atomic(ctx.out / "purcell_impact.csv", impact.str());

  json minima = json::array();
  for (const auto& m : sweep_minima(cfg, rows)) {
    minima.push_back({{"threshold", m.threshold}, {"ratio", number_or_null(m.ratio)}, {"reset_time_us", number_or_null(m.time)}});
  }
  json crossings = json::array();
  const auto xs = impact_crossings(cfg, levels);
  for (std::size_t i = 0; i < levels.size(); ++i) crossings.push_back({{"level", levels[i]}, {"ratio", xs[i]}});
  write_json(ctx.out / "reset_summary.json", json{{"minima", minima}, {"impact_crossings", crossings}});
  std::cout << "wrote " << (ctx.out / "reset_sweep.csv").string() << "\n";
  return kOk;
}

int cmd_selftest(const Context& ctx, const std::vector<int>& only) {
  acceptance::Options opt;
  if (ctx.seed != 0) opt.seed = static_cast<std::uint64_t>(ctx.seed);
  opt.only = only;
  const auto results = acceptance::run_all(opt);
  json j = json::array();
  int failed = 0;
  for (const auto& r : results) {
    std::cout << acceptance::format_line(r) << "\n";
    j.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    if (!r.passed) ++failed;
  }
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
  write_json(ctx.out / "selftest.json", j);
  return failed == 0 ? kOk : kNumerical;
}

}  // namespace

std::string manifest_json(const RunManifest& m) {
  const json j = {{"subcommand", m.subcommand}, {"config_path", m.config_path}, {"output_dir", m.output_dir},
                  {"seed", m.seed},             {"tool_version", m.tool_version}, {"wall_time_s", m.wall_time},
                  {"exit_code", m.exit_code},   {"error", m.error}};
  return j.dump(2) + "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Simulation and parameter-estimation tools for a transmon coupled to a multimode SAW resonator", "cqad"};
  app.set_version_flag("--version", std::string(CQAD_VERSION));

  std::string config_path;
  std::string out_dir;
  long long seed = 0;
  FitArgs fit_args;
  double gamma_p = NAN;
  std::vector<int> only;

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"evolve", "resonant evolution of the qubit with each mode (engine and closed form)"},
      {"stark", "dispersive shifts and AC Stark shift per photon"},
      {"purcell", "decay rate while resonant with each mode, and the idle Purcell rate"},
      {"fit", "fit a CSV time series with a named model"},
      {"tof", "resonator geometry from time-of-flight intervals"},
      {"echo", "delay-line echo train for a pulse"},
      {"reset-sweep", "reset time versus coupling and Purcell impact"},
      {"regimes", "coupling-regime classification per mode"},
      {"selftest", "run the acceptance suite"},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: $CQAD_OUTPUT_DIR or .)");
    sub->add_option("--seed", seed, "random seed recorded in the manifest (selftest uses it for synthetic noise)");
    if (std::string(s.name) == "fit") {
      sub->add_option("--data", fit_args.data, "CSV file with a header row");
      sub->add_option("--model", fit_args.model, "exponential | resonant | resonant-paper | coupling-profile");
      sub->add_option("--gamma-p", gamma_p, "qubit decay while resonant, MHz (resonant models)");
    }
    if (std::string(s.name) == "selftest") {
      sub->add_option("--only", only, "criterion numbers to run")->check(CLI::Range(1, acceptance::kCriterionCount));
    }
  }
  app.require_subcommand(0, 1);

  if (argc <= 1) {
    std::cout << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  const auto chosen = app.get_subcommands();
  if (chosen.empty()) {
    std::cout << app.help();
    return kUsage;
  }
  const std::string name = chosen.front()->get_name();
  if (!std::isnan(gamma_p)) fit_args.gamma_p = gamma_p;

  Context ctx;
  if (!out_dir.empty()) {
    ctx.out = out_dir;
  } else if (const char* env = std::getenv("CQAD_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    ctx.out = env;
  } else {
    ctx.out = ".";
  }
  ctx.seed = seed;

  RunManifest manifest;
  manifest.subcommand = name;
  manifest.config_path = config_path;
  manifest.output_dir = ctx.out.string();
  manifest.seed = seed;
  manifest.tool_version = CQAD_VERSION;

  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (!config_path.empty()) {
      try {
        ctx.cfg = json::parse(io::read_file(config_path));
      } catch (const json::parse_error& e) {
        throw InvalidArgument("config " + config_path + ": malformed JSON: " + e.what());
      }
      if (!ctx.cfg.is_object()) throw InvalidArgument("config " + config_path + ": top level must be an object");
      check_config_keys(name, ctx.cfg);
    }
    static const std::map<std::string, std::function<int(const Context&)>> table = {
        {"evolve", cmd_evolve},   {"stark", cmd_stark},       {"purcell", cmd_purcell},
        {"tof", cmd_tof},         {"echo", cmd_echo},         {"reset-sweep", cmd_reset_sweep},
        {"regimes", cmd_regimes},
    };
    if (name == "fit") {
      code = cmd_fit(ctx, fit_args);
    } else if (name == "selftest") {
      code = cmd_selftest(ctx, only);
    } else {
      code = table.at(name)(ctx);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "cqad " << name << ": " << e.what() << "\n";
    manifest.error = e.what();
    code = kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "cqad " << name << ": config: " << e.what() << "\n";
    manifest.error = e.what();
    code = kUsage;
  } catch (const std::exception& e) {
    std::cerr << "cqad " << name << ": " << e.what() << "\n";
    manifest.error = e.what();
    code = kNumerical;
  }
  manifest.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest.exit_code = code;
  try {
    io::write_atomic(ctx.out / "manifest.json", manifest_json(manifest));
  } catch (const std::exception& e) {
    std::cerr << "cqad: could not write manifest: " << e.what() << "\n";
    if (code == kOk) code = kNumerical;
  }
  return code;
}

}  // namespace cqad::cli
