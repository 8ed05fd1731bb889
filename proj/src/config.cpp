#include "usc/config.hpp"

#include "usc/error.hpp"
#include "usc/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace usc::cli {

std::vector<double> Axis::values() const {
  if (steps == 1) return {start};
  if (!log) return linspace(start, stop, steps);
  std::vector<double> out(static_cast<std::size_t>(steps));
  const double a = std::log(start);
  const double b = std::log(stop);
  for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (steps - 1));
  out.front() = start;
  out.back() = stop;
  return out;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return device == o.device && baths == o.baths && point.variant == o.point.variant &&
         point.level_window == o.point.level_window &&
         point.liouvillian.secular_only == o.point.liouvillian.secular_only &&
         point.liouvillian.min_transition_ghz == o.point.liouvillian.min_transition_ghz &&
         floquet == o.floquet && sweep == o.sweep && drive == o.drive && levels == o.levels &&
         melems == o.melems && output == o.output && threads == o.threads;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what) {
  throw Error(ErrorCode::Parse, "key '" + std::string(key) + "': cannot read '" +
                                    std::string(value) + "' as " + std::string(what));
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "a boolean");
}

std::vector<std::string_view> split(std::string_view v, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = v.find(sep);
    out.push_back(trim(v.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    v.remove_prefix(pos + 1);
  }
  return out;
}

std::string_view to_string(ElementOperator e) { return e == ElementOperator::X ? "x" : "script_x"; }

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::optional<std::string>(const RunConfig&)>;

struct Field {
  Setter set;
  Getter get;
};


template <class Access>
Field real_field(Access access) {
  return {[access](RunConfig& c, std::string_view k, std::string_view v) { access(c) = to_double(k, v); },
          [access](const RunConfig& c) -> std::optional<std::string> {
            return format_double(access(const_cast<RunConfig&>(c)));
          }};
}

template <class Access>
Field int_field(Access access) {
  return {[access](RunConfig& c, std::string_view k, std::string_view v) { access(c) = to_int(k, v); },
          [access](const RunConfig& c) -> std::optional<std::string> {
            return std::to_string(access(const_cast<RunConfig&>(c)));
          }};
}

template <class Access>
Field bool_field(Access access) {
  return {[access](RunConfig& c, std::string_view k, std::string_view v) { access(c) = to_bool(k, v); },
          [access](const RunConfig& c) -> std::optional<std::string> {
            return access(const_cast<RunConfig&>(c)) ? "true" : "false";
          }};
}

Truncation with_cutoffs(const Truncation& t, std::optional<int> n1, std::optional<int> n2) {
  const int a = n1.value_or(t.n1());
  const int b = n2.value_or(t.n2());
  if (a < 2) throw Error(ErrorCode::Validation, "truncation.n1 must be >= 2");
  if (b < 2) throw Error(ErrorCode::Validation, "truncation.n2 must be >= 2");
  return Truncation(a, b);
}

void add_axis(std::map<std::string, Field, std::less<>>& f, const std::string& name,
              std::optional<Axis> RunConfig::Sweep::*member, bool log_default) {
  auto axis = [member, log_default](RunConfig& c) -> Axis& {
    auto& opt = c.sweep.*member;
    if (!opt) opt = Axis{0.0, 0.0, 1, log_default};
    return *opt;
  };
  auto read = [member](const RunConfig& c) { return c.sweep.*member; };
  f["sweep." + name + ".start"] = {
      [axis](RunConfig& c, std::string_view k, std::string_view v) { axis(c).start = to_double(k, v); },
      [read](const RunConfig& c) -> std::optional<std::string> {
        if (auto a = read(c)) return format_double(a->start);
        return std::nullopt;
      }};
  f["sweep." + name + ".stop"] = {
      [axis](RunConfig& c, std::string_view k, std::string_view v) { axis(c).stop = to_double(k, v); },
      [read](const RunConfig& c) -> std::optional<std::string> {
        if (auto a = read(c)) return format_double(a->stop);
        return std::nullopt;
      }};
  f["sweep." + name + ".steps"] = {
      [axis](RunConfig& c, std::string_view k, std::string_view v) { axis(c).steps = to_int(k, v); },
      [read](const RunConfig& c) -> std::optional<std::string> {
        if (auto a = read(c)) return std::to_string(a->steps);
        return std::nullopt;
      }};
  f["sweep." + name + ".log"] = {
      [axis](RunConfig& c, std::string_view k, std::string_view v) { axis(c).log = to_bool(k, v); },
      [read](const RunConfig& c) -> std::optional<std::string> {
        if (auto a = read(c)) return a->log ? "true" : "false";
        return std::nullopt;
      }};
}

void add_power(std::map<std::string, Field, std::less<>>& f, const std::string& prefix,
               std::optional<PowerSpec> RunConfig::Drive::*member) {
  auto setter = [member](PowerSpec::Unit unit, bool dbm) {
    return [member, unit, dbm](RunConfig& c, std::string_view k, std::string_view v) {
      const double x = to_double(k, v);
      (c.drive.*member) = PowerSpec{unit, dbm ? 1e-3 * std::pow(10.0, x / 10.0) : x};
    };
  };
  auto getter = [member](PowerSpec::Unit unit) {
    return [member, unit](const RunConfig& c) -> std::optional<std::string> {
      const auto& p = c.drive.*member;
      if (p && p->unit == unit) return format_double(p->value);
      return std::nullopt;
    };
  };
  f[prefix + ".nbar"] = {setter(PowerSpec::Unit::Nbar, false), getter(PowerSpec::Unit::Nbar)};
  f[prefix + ".power_w"] = {setter(PowerSpec::Unit::Watts, false), getter(PowerSpec::Unit::Watts)};
  f[prefix + ".power_dbm"] = {setter(PowerSpec::Unit::Watts, true),
                              [](const RunConfig&) -> std::optional<std::string> { return std::nullopt; }};
}

const std::map<std::string, Field, std::less<>>& fields() {
  static const auto table = [] {
    std::map<std::string, Field, std::less<>> f;
    f["qubit.delta_ghz"] = real_field([](RunConfig& c) -> double& { return c.device.qubit.tunnel_splitting_ghz; });
    f["qubit.ip_na"] = real_field([](RunConfig& c) -> double& { return c.device.qubit.persistent_current_na; });
    f["qubit.kappa_ghz"] = real_field([](RunConfig& c) -> double& { return c.device.qubit.loss_rate_ghz; });
    f["qubit.kappa_dep_ghz"] = real_field([](RunConfig& c) -> double& { return c.device.qubit.dephasing_rate_ghz; });
    f["mode1.omega0_ghz"] = real_field([](RunConfig& c) -> double& { return c.device.mode1.base_frequency_ghz; });
    f["mode1.beta"] = real_field([](RunConfig& c) -> double& { return c.device.mode1.v_shape_beta_per_phi0; });
    f["mode1.g_ghz"] = real_field([](RunConfig& c) -> double& { return c.device.mode1.coupling_ghz; });
    f["mode2.omega0_ghz"] = real_field([](RunConfig& c) -> double& { return c.device.mode2.base_frequency_ghz; });
    f["mode2.beta"] = real_field([](RunConfig& c) -> double& { return c.device.mode2.v_shape_beta_per_phi0; });
    f["mode2.g_ghz"] = real_field([](RunConfig& c) -> double& { return c.device.mode2.coupling_ghz; });
    f["bath.kappa_in_ghz"] = real_field([](RunConfig& c) -> double& { return c.baths.kappa_in_ghz; });
    f["bath.kappa_out_ghz"] = real_field([](RunConfig& c) -> double& { return c.baths.kappa_out_ghz; });
    f["bath.kappa_int_ghz"] = real_field([](RunConfig& c) -> double& { return c.baths.kappa_int_ghz; });
    f["bath.temperature_k"] = real_field([](RunConfig& c) -> double& { return c.baths.temperature_k; });

    f["truncation.n1"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) {
          c.device.truncation = with_cutoffs(c.device.truncation, to_int(k, v), std::nullopt);
        },
        [](const RunConfig& c) -> std::optional<std::string> {
          return std::to_string(c.device.truncation.n1());
        }};
    f["truncation.n2"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) {
          c.device.truncation = with_cutoffs(c.device.truncation, std::nullopt, to_int(k, v));
        },
        [](const RunConfig& c) -> std::optional<std::string> {
          return std::to_string(c.device.truncation.n2());
        }};
    f["truncation.window"] = real_field([](RunConfig& c) -> double& { return c.point.level_window; });

    f["model.variant"] = {
        [](RunConfig& c, std::string_view, std::string_view v) { c.point.variant = parse_variant(v); },
        [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.point.variant)); }};
    f["liouvillian.secular"] = bool_field([](RunConfig& c) -> bool& { return c.point.liouvillian.secular_only; });
    f["liouvillian.min_transition_ghz"] =
        real_field([](RunConfig& c) -> double& { return c.point.liouvillian.min_transition_ghz; });

    f["floquet.m_max"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) { c.floquet.m_max = to_int(k, v); },
        [](const RunConfig& c) -> std::optional<std::string> {
          if (c.floquet.m_max) return std::to_string(*c.floquet.m_max);
          return std::nullopt;
        }};
    f["floquet.cutoff_check"] = bool_field([](RunConfig& c) -> bool& { return c.floquet.check_cutoff; });
    f["floquet.cutoff_tol"] = real_field([](RunConfig& c) -> double& { return c.floquet.cutoff_tolerance; });

    add_axis(f, "flux", &RunConfig::Sweep::flux, false);
    add_axis(f, "freq", &RunConfig::Sweep::freq, false);
    add_axis(f, "nbar", &RunConfig::Sweep::nbar, true);
    add_axis(f, "phase", &RunConfig::Sweep::phase, false);
    add_axis(f, "control_nbar", &RunConfig::Sweep::control_nbar, false);

    f["drive.flux_mphi0"] = real_field([](RunConfig& c) -> double& { return c.drive.flux_mphi0; });
    f["drive.frequency_ghz"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) { c.drive.frequency_ghz = to_double(k, v); },
        [](const RunConfig& c) -> std::optional<std::string> {
          if (c.drive.frequency_ghz) return format_double(*c.drive.frequency_ghz);
          return std::nullopt;
        }};
    f["drive.signal_harmonic"] = int_field([](RunConfig& c) -> int& { return c.drive.signal_harmonic; });
    add_power(f, "drive.signal", &RunConfig::Drive::signal);
    add_power(f, "drive.control", &RunConfig::Drive::control);

    f["levels.max_level"] = int_field([](RunConfig& c) -> int& { return c.levels.max_level; });
    f["levels.variants"] = {
        [](RunConfig& c, std::string_view, std::string_view v) {
          c.levels.variants.clear();
          for (auto name : split(v, ',')) c.levels.variants.push_back(parse_variant(name));
        },
        [](const RunConfig& c) -> std::optional<std::string> {
          std::string s;
          for (auto var : c.levels.variants) {
            if (!s.empty()) s += ',';
            s += to_string(var);
          }
          return s;
        }};
    f["melems.operator"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) {
          if (v == "x") c.melems.op = ElementOperator::X;
          else if (v == "script_x") c.melems.op = ElementOperator::ScriptX;
          else bad_value(k, v, "'x' or 'script_x'");
        },
        [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.melems.op)); }};
    f["melems.pairs"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) {
          c.melems.pairs.clear();
          for (auto item : split(v, ',')) {
            const auto parts = split(item, '-');
            if (parts.size() != 2) bad_value(k, item, "a 'j-k' pair");
            c.melems.pairs.emplace_back(to_int(k, parts[0]), to_int(k, parts[1]));
          }
        },
        [](const RunConfig& c) -> std::optional<std::string> {
          std::string s;
          for (auto [j, k] : c.melems.pairs) {
            if (!s.empty()) s += ',';
            s += std::to_string(j) + "-" + std::to_string(k);
          }
          return s;
        }};

    f["output.path"] = {
        [](RunConfig& c, std::string_view, std::string_view v) { c.output.path = std::string(v); },
        [](const RunConfig& c) -> std::optional<std::string> {
          if (c.output.path.empty()) return std::nullopt;
          return c.output.path;
        }};
    f["output.format"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) {
          if (v != "csv" && v != "json") bad_value(k, v, "'csv' or 'json'");
          c.output.format = std::string(v);
        },
        [](const RunConfig& c) -> std::optional<std::string> { return c.output.format; }};
    f["run.threads"] = int_field([](RunConfig& c) -> int& { return c.threads; });
    return f;
  }();
  return table;
}

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Validation, field + ": " + what);
}

void check_positive(const std::string& field, double v) {
  if (!(v > 0) || !std::isfinite(v)) invalid(field, "must be a positive finite number");
}

void check_nonnegative(const std::string& field, double v) {
  if (!(v >= 0) || !std::isfinite(v)) invalid(field, "must be a non-negative finite number");
}

void check_axis(const std::string& name, const std::optional<Axis>& axis) {
  if (!axis) return;
  const std::string field = "sweep." + name;
  if (axis->steps < 1) invalid(field + ".steps", "must be >= 1");
  if (!std::isfinite(axis->start) || !std::isfinite(axis->stop)) invalid(field, "bounds must be finite");
  if (axis->start > axis->stop) invalid(field, "start must not exceed stop");
  if (axis->log && !(axis->start > 0)) invalid(field + ".start", "log axis needs start > 0");
}

}  // namespace

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& f = fields();
  const auto it = f.find(key);
  if (it == f.end()) throw Error(ErrorCode::Parse, "unknown key '" + std::string(key) + "'");
  it->second.set(cfg, key, value);
}

void validate_config(const RunConfig& cfg) {
  const auto& q = cfg.device.qubit;
  check_positive("qubit.delta_ghz", q.tunnel_splitting_ghz);
  check_nonnegative("qubit.ip_na", q.persistent_current_na);
  check_nonnegative("qubit.kappa_ghz", q.loss_rate_ghz);
  check_nonnegative("qubit.kappa_dep_ghz", q.dephasing_rate_ghz);
  for (const auto& [name, m] : {std::pair{"mode1", &cfg.device.mode1}, std::pair{"mode2", &cfg.device.mode2}}) {
    check_positive(std::string(name) + ".omega0_ghz", m->base_frequency_ghz);
    check_nonnegative(std::string(name) + ".beta", m->v_shape_beta_per_phi0);
    if (!std::isfinite(m->coupling_ghz)) invalid(std::string(name) + ".g_ghz", "must be finite");
  }
  check_nonnegative("bath.kappa_in_ghz", cfg.baths.kappa_in_ghz);
  check_nonnegative("bath.kappa_out_ghz", cfg.baths.kappa_out_ghz);
  check_nonnegative("bath.kappa_int_ghz", cfg.baths.kappa_int_ghz);
  check_nonnegative("bath.temperature_k", cfg.baths.temperature_k);
  if (!std::isfinite(cfg.point.level_window)) invalid("truncation.window", "must be finite");
  check_nonnegative("liouvillian.min_transition_ghz", cfg.point.liouvillian.min_transition_ghz);
  if (cfg.floquet.m_max && *cfg.floquet.m_max < 1) invalid("floquet.m_max", "must be >= 1");
  check_positive("floquet.cutoff_tol", cfg.floquet.cutoff_tolerance);
  check_axis("flux", cfg.sweep.flux);
  check_axis("freq", cfg.sweep.freq);
  check_axis("nbar", cfg.sweep.nbar);
  check_axis("phase", cfg.sweep.phase);
  check_axis("control_nbar", cfg.sweep.control_nbar);
  if (cfg.sweep.freq && !(cfg.sweep.freq->start > 0)) invalid("sweep.freq.start", "must be > 0");
  if (cfg.sweep.nbar && cfg.sweep.nbar->start < 0) invalid("sweep.nbar.start", "must be >= 0");
  if (cfg.sweep.control_nbar && cfg.sweep.control_nbar->start < 0) {
    invalid("sweep.control_nbar.start", "must be >= 0");
  }
  if (!std::isfinite(cfg.drive.flux_mphi0)) invalid("drive.flux_mphi0", "must be finite");
  if (cfg.drive.frequency_ghz) check_positive("drive.frequency_ghz", *cfg.drive.frequency_ghz);
  if (cfg.drive.signal_harmonic != 1 && cfg.drive.signal_harmonic != 2) {
    invalid("drive.signal_harmonic", "must be 1 or 2");
  }
  if (cfg.drive.signal) check_nonnegative("drive.signal", cfg.drive.signal->value);
  if (cfg.drive.control) check_nonnegative("drive.control", cfg.drive.control->value);
  if (cfg.levels.max_level < 1) invalid("levels.max_level", "must be >= 1");
  if (cfg.levels.variants.empty()) invalid("levels.variants", "needs at least one variant");
  for (auto [j, k] : cfg.melems.pairs) {
    if (j < 0 || k < 0) invalid("melems.pairs", "indices must be >= 0");
  }
  if (cfg.output.format != "csv" && cfg.output.format != "json") invalid("output.format", "csv or json");
  if (cfg.threads < 1) invalid("run.threads", "must be >= 1");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  int line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (text.empty()) break;
      continue;
    }
    const auto eq = line.find('=');
    const std::string prefix = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Parse, prefix + "expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::Parse, prefix + "missing key");
    if (value.empty()) throw Error(ErrorCode::Parse, prefix + "missing value for '" + std::string(key) + "'");
    try {
      set_config_value(cfg, key, value);
    } catch (const Error& e) {
      throw Error(e.code(), prefix + e.what());
    }
    if (text.empty()) break;
  }
  validate_config(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& [key, field] : fields()) {
    if (auto v = field.get(cfg)) out << key << " = " << *v << '\n';
  }
  return out.str();
}

}  // namespace usc::cli
