#include "usc/config.hpp"
#include "usc/error.hpp"
#include "usc/parallel.hpp"
#include "usc/validation.hpp"

#include "json.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace usc::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Status {
  std::string text = "ok";
  bool failed = false;
};

template <class Fn>
Status guarded(Fn&& fn) {
  try {
    const auto warnings = fn();
    if (!warnings.empty()) return {"warn:" + warnings.front(), false};
    return {};
  } catch (const Error& e) {
    return {"failed:" + std::string(to_string(e.code())), true};
  }
}

const Axis& require(const std::optional<Axis>& axis, std::string_view name, Command cmd) {
  if (!axis) {
    throw Error(ErrorCode::Usage, std::string(to_string(cmd)) + " needs the sweep." +
                                      std::string(name) + " axis");
  }
  return *axis;
}

double tone_power(const OperatingPoint& op, const PowerSpec& p, int mode) {
  return p.unit == PowerSpec::Unit::Watts ? p.value : power_for_mode_photons(op, mode, p.value);
}

std::vector<OperatingPoint> prepare_all(const RunConfig& cfg, const std::vector<double>& flux) {
  return parallel_map(flux.size(), cfg.threads, [&](std::size_t i) {
    return prepare_operating_point(cfg.device, cfg.baths, FluxPoint{flux[i]}, cfg.point);
  });
}

FloquetOptions floquet_options(const RunConfig& cfg) {
  return {cfg.floquet.check_cutoff, cfg.floquet.cutoff_tolerance};
}

OutputTable levels(const RunConfig& cfg) {
  OutputTable t;
  t.header = {"flux_mphi0", "variant", "j", "omega_tilde_ghz"};
  const auto grid = require(cfg.sweep.flux, "flux", Command::Levels).values();
  for (auto v : cfg.levels.variants) {
    for (const auto& r : level_scan(cfg.device, grid, v, cfg.levels.max_level, cfg.threads)) {
      t.add_row({r.flux_mphi0, std::string(to_string(r.variant)), std::int64_t{r.j}, r.omega_tilde_ghz});
    }
  }
  return t;
}

OutputTable melems(const RunConfig& cfg) {
  OutputTable t;
  t.header = {"flux_mphi0", "pair", "abs_sq"};
  const auto grid = require(cfg.sweep.flux, "flux", Command::Melems).values();
  const auto rows = matrix_element_scan(cfg.device, grid, cfg.melems.op, cfg.melems.pairs,
                                        cfg.point.variant, cfg.threads);
  for (const auto& r : rows) {
    t.add_row({r.flux_mphi0, std::to_string(r.j) + "-" + std::to_string(r.k), r.abs_sq});
  }
  return t;
}

CommandResult spectral(const RunConfig& cfg, bool shg) {
  const Command cmd = shg ? Command::Shg : Command::S21;
  const auto flux = require(cfg.sweep.flux, "flux", cmd).values();
  const auto freq = require(cfg.sweep.freq, "freq", cmd).values();
  const PowerSpec signal = cfg.drive.signal.value_or(PowerSpec{PowerSpec::Unit::Nbar, shg ? 0.25 : 0.01});
  const int m_max = cfg.floquet.m_max.value_or(shg ? 3 : 2);
  const auto ops = prepare_all(cfg, flux);

  struct Point {
    double a = kNaN, b = kNaN, c = kNaN;
    Status status;
  };
  const std::size_t nf = freq.size();
  const auto points = parallel_map(flux.size() * nf, cfg.threads, [&](std::size_t idx) {
    const auto& op = ops[idx / nf];
    const double f = freq[idx % nf];
    Point p;
    p.status = guarded([&] {
      const auto tone = DriveTone::from_power(1, tone_power(op, signal, 1), f);
      const auto sol = solve_driven(op, {tone}, f, m_max, floquet_options(cfg));
      if (shg) {
        p.a = shg_amplitude(sol, op.x_plus());
      } else {
        const Complex s = transmission_s21(sol, op.x_plus(), cfg.baths.kappa_out_ghz, f,
                                           op.omegas.omega1_ghz, tone.photon_rate);
        p.a = s.real();
        p.b = s.imag();
        p.c = std::abs(s);
      }
      return sol.warnings;
    });
    return p;
  });

  CommandResult r;
  auto& t = r.table;
  if (shg) {
    t.header = {"flux_mphi0", "two_f_ghz", "amplitude_au", "status"};
  } else {
    t.header = {"flux_mphi0", "f_ghz", "re_s21", "im_s21", "abs_s21", "status"};
  }
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& p = points[idx];
    const double fl = flux[idx / nf];
    const double f = freq[idx % nf];
    if (shg) t.add_row({fl, 2.0 * f, p.a, p.status.text});
    else t.add_row({fl, f, p.a, p.b, p.c, p.status.text});
    r.failed_rows += p.status.failed;
  }
  return r;
}

double drive_frequency(const RunConfig& cfg, const OperatingPoint& op) {
  return cfg.drive.frequency_ghz.value_or(op.eig.transitions_ghz(1));
}

CommandResult shg_power(const RunConfig& cfg) {
  const auto nbar = require(cfg.sweep.nbar, "nbar", Command::ShgPower).values();
  const auto op = prepare_operating_point(cfg.device, cfg.baths, FluxPoint{cfg.drive.flux_mphi0}, cfg.point);
  const double f = drive_frequency(cfg, op);
  const int m_max = cfg.floquet.m_max.value_or(3);
  struct Point {
    double amp = kNaN;
    Status status;
  };
  const auto points = parallel_map(nbar.size(), cfg.threads, [&](std::size_t i) {
    Point p;
    p.status = guarded([&] {
      const auto tone = DriveTone::from_power(1, power_for_mode_photons(op, 1, nbar[i]), f);
      const auto sol = solve_driven(op, {tone}, f, m_max, floquet_options(cfg));
      p.amp = shg_amplitude(sol, op.x_plus());
      return sol.warnings;
    });
    return p;
  });
  CommandResult r;
  r.table.header = {"nbar1", "amplitude_au", "status"};
  for (std::size_t i = 0; i < nbar.size(); ++i) {
    r.table.add_row({nbar[i], points[i].amp, points[i].status.text});
    r.failed_rows += points[i].status.failed;
  }
  r.table.metadata.emplace_back("drive.frequency_ghz.effective", format_double(f));
  return r;
}

CommandResult interference(const RunConfig& cfg) {
  const auto phases = require(cfg.sweep.phase, "phase", Command::Interference).values();
  const auto op = prepare_operating_point(cfg.device, cfg.baths, FluxPoint{cfg.drive.flux_mphi0}, cfg.point);
  const double w = drive_frequency(cfg, op);
  const int m_max = cfg.floquet.m_max.value_or(3);
  const int sh = cfg.drive.signal_harmonic;
  const int ch = 3 - sh;
  const PowerSpec signal =
      cfg.drive.signal.value_or(PowerSpec{PowerSpec::Unit::Nbar, sh == 1 ? 0.25 : 0.13});
  const auto signal_tone = DriveTone::from_power(sh, tone_power(op, signal, sh), w);

  std::vector<PowerSpec> controls;
  if (cfg.sweep.control_nbar) {
    for (double n : cfg.sweep.control_nbar->values()) controls.push_back({PowerSpec::Unit::Nbar, n});
  } else {
    controls.push_back(cfg.drive.control.value_or(PowerSpec{PowerSpec::Unit::Nbar, 1.0}));
  }

  CommandResult r;
  r.table.header = {"phase_rad", "control_nbar", "gain", "status"};
  for (const auto& c : controls) {
    const double power = tone_power(op, c, ch);
    const auto budget = photon_budget(op, power);
    const double nbar = ch == 1 ? budget.mean_photons_mode1 : budget.mean_photons_mode2;
    const auto control_tone = DriveTone::from_power(ch, power, w);
    std::vector<GainPoint> curve;
    Status status = guarded([&] {
      curve = interference_gain(op, signal_tone, control_tone, phases, sh, w, m_max, cfg.threads);
      return std::vector<std::string>{};
    });
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const double g = status.failed ? kNaN : curve[i].gain;
      r.table.add_row({phases[i], nbar, g, status.text});
      r.failed_rows += status.failed;
    }
  }
  r.table.metadata.emplace_back("drive.frequency_ghz.effective", format_double(w));
  return r;
}

CommandResult validate(const RunConfig& cfg) {
  ValidationOptions opt;
  opt.device = cfg.device;
  opt.baths = cfg.baths;
  opt.threads = cfg.threads;
  CommandResult r;
  r.table.header = {"check_name", "expected", "actual", "tolerance", "pass"};
  for (const auto& c : run_validation(opt)) {
    r.table.add_row({"c" + std::to_string(c.criterion) + "." + c.name, c.expected_text(), c.actual,
                     c.tolerance, std::string(c.pass ? "true" : "false")});
    r.validation_failed |= !c.pass;
  }
  return r;
}

void append_json_cell(nlohmann::ordered_json& row, const Cell& c) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(v)) row.push_back(v);
          else row.push_back(nullptr);
        } else {
          row.push_back(v);
        }
      },
      c);
}

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else return v;
      },
      c);
}

}  // namespace

void OutputTable::add_row(std::vector<Cell> row) {
  if (row.size() != header.size()) {
    throw Error(ErrorCode::Shape, "row has " + std::to_string(row.size()) + " cells, header has " +
                                      std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

std::string to_csv(const OutputTable& table) {
  std::ostringstream out;
  for (const auto& [k, v] : table.metadata) out << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string to_json(const OutputTable& table) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.metadata) doc["metadata"][k] = v;
  doc["columns"] = table.header;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) append_json_cell(r, c);
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::Levels, Command::Melems, Command::S21, Command::Shg, Command::ShgPower,
                 Command::Interference, Command::Validate}) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::Usage, "unknown command '" + std::string(name) + "'");
}

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Levels: return "levels";
    case Command::Melems: return "melems";
    case Command::S21: return "s21";
    case Command::Shg: return "shg";
    case Command::ShgPower: return "shg-power";
    case Command::Interference: return "interference";
    case Command::Validate: return "validate";
  }
  return "?";
}

CommandResult run_command(Command cmd, const RunConfig& cfg) {
  validate_config(cfg);
  CommandResult r;
  switch (cmd) {
    case Command::Levels: r.table = levels(cfg); break;
    case Command::Melems: r.table = melems(cfg); break;
    case Command::S21: r = spectral(cfg, false); break;
    case Command::Shg: r = spectral(cfg, true); break;
    case Command::ShgPower: r = shg_power(cfg); break;
    case Command::Interference: r = interference(cfg); break;
    case Command::Validate: r = validate(cfg); break;
  }
  std::vector<std::pair<std::string, std::string>> meta{{"artifact_version", std::string(kVersion)},
                                                         {"command", std::string(to_string(cmd))}};
  std::istringstream lines(serialize_config(cfg));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    meta.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  meta.insert(meta.end(), r.table.metadata.begin(), r.table.metadata.end());
  r.table.metadata = std::move(meta);
  return r;
}

}  // namespace usc::cli
