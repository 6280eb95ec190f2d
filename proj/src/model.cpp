#include "cqad/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cqad/error.hpp"

namespace cqad {

namespace {

std::string mode_path(std::size_t i, const char* field) {
  std::ostringstream os;
  os << "modes[" << i << "]." << field;
  return os.str();
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidArgument(path + ": " + what);
}

}  // namespace

std::size_t SystemParams::position_of(int mode_index) const {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].index == mode_index) return i;
  }
  throw InvalidArgument("no mode with index " + std::to_string(mode_index));
}

std::size_t HilbertSpec::total_dim() const {
  std::size_t d = static_cast<std::size_t>(std::max(qubit_levels, 0));
  for (int l : mode_levels) d *= static_cast<std::size_t>(std::max(l, 0));
  return d;
}

int HilbertSpec::slot_dim(std::size_t slot) const {
  if (slot == 0) return qubit_levels;
  if (slot > mode_levels.size()) {
    throw InvalidArgument("slot " + std::to_string(slot) + " out of range (" +
                          std::to_string(mode_levels.size()) + " modes)");
  }
  return mode_levels[slot - 1];
}

void HilbertSpec::check() const {
  if (qubit_levels < 2) throw InvalidArgument("qubit_levels must be >= 2");
  for (std::size_t i = 0; i < mode_levels.size(); ++i) {
    if (mode_levels[i] < 2) {
      throw InvalidArgument("mode_levels[" + std::to_string(i) + "] must be >= 2");
    }
  }
  // Overflow-safe running product.
  std::size_t d = static_cast<std::size_t>(qubit_levels);
  for (int l : mode_levels) {
    if (d > max_dim) break;
    d *= static_cast<std::size_t>(l);
  }
  if (d > max_dim) {
    throw InvalidArgument("Hilbert dimension exceeds cap of " + std::to_string(max_dim));
  }
}

HilbertSpec HilbertSpec::uniform(int qubit_levels, std::size_t n_modes, int mode_levels) {
  HilbertSpec spec;
  spec.qubit_levels = qubit_levels;
  spec.mode_levels.assign(n_modes, mode_levels);
  return spec;
}

void TimeSeries::check() const {
  if (times.size() != values.size()) {
    throw InvalidArgument("time series '" + label + "': times and values differ in length");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw InvalidArgument("time series '" + label + "': times not strictly ascending at sample " +
                            std::to_string(i));
    }
  }
}

SystemParams validate(const SystemParams& params) {
  const auto& q = params.qubit;
  if (!(q.f01 > 0.0) || !std::isfinite(q.f01)) fail("qubit.f01_mhz", "non-positive frequency");
  if (!(q.ec > 0.0) || !std::isfinite(q.ec)) fail("qubit.ec_mhz", "non-positive anharmonicity");
  if (!(q.gamma >= 0.0) || !std::isfinite(q.gamma)) fail("qubit.gamma_mhz", "negative rate");

  for (std::size_t i = 0; i < params.modes.size(); ++i) {
    const auto& m = params.modes[i];
    if (m.index < 1) fail(mode_path(i, "index"), "mode index must be >= 1");
    if (i > 0 && m.index <= params.modes[i - 1].index) {
      fail(mode_path(i, "index"), "mode indices must be unique and ascending");
    }
    if (!(m.f > 0.0) || !std::isfinite(m.f)) fail(mode_path(i, "f_mhz"), "non-positive frequency");
    if (!(m.kappa > 0.0) || !std::isfinite(m.kappa)) fail(mode_path(i, "kappa_mhz"), "non-positive rate");
    if (!std::isfinite(m.g)) fail(mode_path(i, "g_mhz"), "non-finite coupling");
    for (std::size_t j = 0; j < i; ++j) {
      if (params.modes[j].f == m.f) fail(mode_path(i, "f_mhz"), "duplicate mode frequency");
    }
  }
  return params;
}

std::vector<double> time_grid(double t_max, double dt) {
  if (!(t_max >= 0.0) || !(dt > 0.0)) throw InvalidArgument("time_grid: need t_max >= 0 and dt > 0");
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> t;
  t.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) t.push_back(static_cast<double>(k) * dt);
  if (t_max - t.back() > 1e-9 * dt) t.push_back(t_max);
  return t;
}

nlohmann::ordered_json to_json(const SystemParams& params) {
  nlohmann::ordered_json j;
  j["qubit"]["f01_mhz"] = params.qubit.f01;
  j["qubit"]["ec_mhz"] = params.qubit.ec;
  j["qubit"]["gamma_mhz"] = params.qubit.gamma;
  j["modes"] = nlohmann::ordered_json::array();
  for (const auto& m : params.modes) {
    nlohmann::ordered_json jm;
    jm["index"] = m.index;
    jm["f_mhz"] = m.f;
    jm["kappa_mhz"] = m.kappa;
    jm["g_mhz"] = m.g;
    j["modes"].push_back(std::move(jm));
  }
  return j;
}

namespace {

double number_at(const nlohmann::ordered_json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw InvalidArgument(path + "." + key + ": missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw InvalidArgument(path + "." + key + ": expected a number");
  return v.get<double>();
}

}  // namespace

SystemParams system_params_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("qubit")) throw InvalidArgument("qubit: missing section");
  SystemParams p;
  const auto& q = j.at("qubit");
  p.qubit.f01 = number_at(q, "f01_mhz", "qubit");
  p.qubit.ec = number_at(q, "ec_mhz", "qubit");
  p.qubit.gamma = q.contains("gamma_mhz") ? number_at(q, "gamma_mhz", "qubit") : 0.0;
  if (j.contains("modes")) {
    const auto& ms = j.at("modes");
    if (!ms.is_array()) throw InvalidArgument("modes: expected an array");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string path = "modes[" + std::to_string(i) + "]";
      const auto& jm = ms[i];
      ModeParams m;
      if (!jm.is_object() || !jm.contains("index") || !jm.at("index").is_number_integer()) {
        throw InvalidArgument(path + ".index: missing or not an integer");
      }
      m.index = jm.at("index").get<int>();
      m.f = number_at(jm, "f_mhz", path);
      m.kappa = number_at(jm, "kappa_mhz", path);
      m.g = jm.contains("g_mhz") ? number_at(jm, "g_mhz", path) : 0.0;
      p.modes.push_back(m);
    }
  }
  return p;
}

std::string serialize(const SystemParams& params) {
  return to_json(params).dump(2) + "\n";
}

SystemParams parse_system_params(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  return system_params_from_json(j);
}

}  // namespace cqad
