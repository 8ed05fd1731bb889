#include "doctest.h"

#include "usc/config.hpp"
#include "usc/error.hpp"

#include "json.hpp"

#include <cmath>
#include <string>

using namespace usc;
using namespace usc::cli;

namespace {

ErrorCode code_of(const std::string& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;  // sentinel: no error
}

std::string message_of(const std::string& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty document gives the fitted defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.device.mode1.base_frequency_ghz == 5.0);
  CHECK(c.device.mode2.base_frequency_ghz == 9.7);
  CHECK(c.device.mode1.coupling_ghz == 2.815);
  CHECK(c.device.mode2.coupling_ghz == 2.180);
  CHECK(c.device.mode1.v_shape_beta_per_phi0 == 0.775);
  CHECK(c.device.mode2.v_shape_beta_per_phi0 == 0.919);
  CHECK(c.device.qubit.tunnel_splitting_ghz == 12.3);
  CHECK(c.device.qubit.persistent_current_na == 60.0);
  CHECK(c.baths.kappa_in_ghz + c.baths.kappa_out_ghz == doctest::Approx(2.6e-3));
  CHECK(c.baths.kappa_out_ghz == doctest::Approx(3 * c.baths.kappa_in_ghz));
  CHECK(c.baths.kappa_int_ghz == 10.4e-3);
  CHECK(c.device.qubit.loss_rate_ghz == 0.2);
  CHECK(c.device.qubit.dephasing_rate_ghz == 0.2);
  CHECK(c.baths.temperature_k == 0.02);
  CHECK(c == RunConfig{});
  CHECK(parse_config("\n# only a comment\n   \n") == RunConfig{});
}

TEST_CASE("parse values and comments") {
  const RunConfig c = parse_config(
      "truncation.n1 = 6   # inline comment\n"
      "truncation.n2=4\n"
      "model.variant = jc\n"
      "sweep.flux.start = -100\n"
      "sweep.flux.stop = 0\n"
      "sweep.flux.steps = 201\n"
      "drive.signal.power_dbm = -100\n"
      "melems.pairs = 1-0, 3-1\n"
      "levels.variants = rabi_flux,no_parity\n");
  CHECK(c.device.truncation == Truncation(6, 4));
  CHECK(c.point.variant == HamiltonianVariant::JaynesCummings);
  REQUIRE(c.sweep.flux.has_value());
  CHECK(c.sweep.flux->values().size() == 201);
  REQUIRE(c.drive.signal.has_value());
  CHECK(c.drive.signal->unit == PowerSpec::Unit::Watts);
  CHECK(c.drive.signal->value == doctest::Approx(1e-13).epsilon(1e-12));
  CHECK(c.melems.pairs == std::vector<std::pair<int, int>>{{1, 0}, {3, 1}});
  CHECK(c.levels.variants.size() == 2);
}

TEST_CASE("errors carry line numbers and field names") {
  CHECK(code_of("truncation.n1 = 1") == ErrorCode::Validation);
  CHECK(message_of("truncation.n1 = 1").find("truncation.n1") != std::string::npos);
  CHECK(code_of("a.b = 1") == ErrorCode::Parse);
  CHECK(message_of("\n\nnot a pair\n").find("line 3") != std::string::npos);
  CHECK(code_of("qubit.delta_ghz = twelve") == ErrorCode::Parse);
  CHECK(code_of("qubit.delta_ghz = 12.3x") == ErrorCode::Parse);
  CHECK(code_of("qubit.delta_ghz =") == ErrorCode::Parse);
  CHECK(code_of("qubit.delta_ghz = -1") == ErrorCode::Validation);
  CHECK(message_of("qubit.delta_ghz = -1").find("qubit.delta_ghz") != std::string::npos);
  CHECK(code_of("sweep.flux.start = 1\nsweep.flux.stop = 0\nsweep.flux.steps = 3") == ErrorCode::Validation);
  CHECK(code_of("sweep.freq.start = 4\nsweep.freq.stop = 5\nsweep.freq.steps = 0") == ErrorCode::Validation);
  CHECK(code_of("output.format = xml") == ErrorCode::Parse);
  CHECK(code_of("model.variant = dicke") == ErrorCode::Validation);
  CHECK(code_of("drive.signal_harmonic = 3") == ErrorCode::Validation);
}

TEST_CASE("serialize round-trip") {
  const std::string doc =
      "qubit.ip_na = 61.5\n"
      "bath.temperature_k = 0.035\n"
      "truncation.n1 = 7\n"
      "truncation.window = 2.5\n"
      "floquet.m_max = 4\n"
      "floquet.cutoff_check = true\n"
      "sweep.nbar.start = 0.001\n"
      "sweep.nbar.stop = 10\n"
      "sweep.nbar.steps = 9\n"
      "sweep.phase.start = 0\n"
      "sweep.phase.stop = 6.283185307179586\n"
      "sweep.phase.steps = 41\n"
      "drive.frequency_ghz = 4.905\n"
      "drive.signal.nbar = 0.25\n"
      "drive.control.power_dbm = -120\n"
      "melems.operator = script_x\n"
      "output.format = json\n"
      "run.threads = 2\n";
  const RunConfig a = parse_config(doc);
  const std::string text = serialize_config(a);
  const RunConfig b = parse_config(text);
  CHECK(a == b);
  CHECK(serialize_config(b) == text);
  CHECK(text.find("drive.control.power_w") != std::string::npos);
  CHECK(text.find("power_dbm") == std::string::npos);
  CHECK(parse_config(serialize_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("axis values") {
  const Axis lin{-1.0, 1.0, 3, false};
  CHECK(lin.values() == std::vector<double>{-1.0, 0.0, 1.0});
  const Axis lg{1e-3, 10.0, 5, true};
  const auto v = lg.values();
  CHECK(v.front() == 1e-3);
  CHECK(v.back() == 10.0);
  CHECK(v[2] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("shortest round-trip formatting") {
  for (double x : {0.1, 1.0 / 3.0, -47.0, 5.076123456789, 1e-300, 6.02214076e23}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-47.0) == "-47");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("output tables") {
  OutputTable t;
  t.header = {"a", "b", "c"};
  t.metadata = {{"k", "v"}};
  t.add_row({0.5, std::int64_t{3}, std::string("x")});
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
  CHECK(to_csv(t) == "# k = v\na,b,c\n0.5,3,x\n");
  const auto j = nlohmann::json::parse(to_json(t));
  CHECK(j["columns"].size() == 3);
  CHECK(j["rows"][0][0].get<double>() == 0.5);
  CHECK(j["metadata"]["k"] == "v");
}

TEST_CASE("commands") {
  RunConfig cfg;
  CHECK(parse_command("shg-power") == Command::ShgPower);
  CHECK_THROWS_AS(parse_command("plot"), Error);

  try {
    run_command(Command::Levels, cfg);
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Usage);
  }

  SUBCASE("levels locate the anticrossing") {
    cfg.sweep.flux = Axis{-100.0, 0.0, 201};
    cfg.levels.max_level = 3;
    const auto r = run_command(Command::Levels, cfg);
    CHECK(r.table.header == std::vector<std::string>{"flux_mphi0", "variant", "j", "omega_tilde_ghz"});
    CHECK(r.table.rows.size() == 603);
    double best = 1e9, at = 0;
    for (std::size_t i = 0; i + 2 < r.table.rows.size(); i += 3) {
      const double gap = std::get<double>(r.table.rows[i + 2][3]) - std::get<double>(r.table.rows[i + 1][3]);
      if (gap < best) {
        best = gap;
        at = std::get<double>(r.table.rows[i][0]);
      }
    }
    CHECK(at < -42.0);
    CHECK(at > -56.0);
    bool has_version = false;
    for (const auto& [k, v] : r.table.metadata) has_version |= k == "artifact_version";
    CHECK(has_version);
    CHECK(to_csv(r.table) == to_csv(run_command(Command::Levels, cfg).table));
  }

  SUBCASE("metadata reproduces the run") {
    cfg.sweep.flux = Axis{-50.0, -40.0, 3};
    cfg.melems.pairs = {{1, 0}};
    const auto r = run_command(Command::Melems, cfg);
    std::string doc;
    for (const auto& [k, v] : r.table.metadata) {
      if (k != "artifact_version" && k != "command") doc += k + " = " + v + "\n";
    }
    CHECK(parse_config(doc) == cfg);
    CHECK(r.table.rows.size() == 3);
    CHECK(std::get<std::string>(r.table.rows[0][1]) == "1-0");
  }

  SUBCASE("s21 on an empty symmetric cavity") {
    cfg.device.mode1.coupling_ghz = 0.0;
    cfg.device.mode2.coupling_ghz = 0.0;
    cfg.baths = {1.3e-3, 1.3e-3, 0.0, 0.02};
    cfg.sweep.flux = Axis{0.0, 0.0, 1};
    cfg.sweep.freq = Axis{4.99, 5.01, 21};
    const auto r = run_command(Command::S21, cfg);
    CHECK(r.failed_rows == 0);
    double peak = 0, at = 0;
    for (const auto& row : r.table.rows) {
      if (std::get<double>(row[4]) > peak) {
        peak = std::get<double>(row[4]);
        at = std::get<double>(row[1]);
      }
      CHECK(std::get<std::string>(row[5]) == "ok");
    }
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(at == doctest::Approx(5.0).epsilon(1e-12));
  }

  SUBCASE("solver failures are recorded per row") {
    cfg.sweep.flux = Axis{-46.0, -46.0, 1};
    cfg.sweep.freq = Axis{4.9, 4.9, 1};
    cfg.floquet.m_max = 1;
    const auto r = run_command(Command::Shg, cfg);
    CHECK(r.failed_rows == 1);
    CHECK(std::isnan(std::get<double>(r.table.rows[0][2])));
    CHECK(std::get<std::string>(r.table.rows[0][3]).rfind("failed:", 0) == 0);
  }

  SUBCASE("shg-power and interference tables") {
    cfg.sweep.nbar = Axis{0.01, 0.1, 2, true};
    cfg.drive.flux_mphi0 = -45.0;
    cfg.drive.frequency_ghz = 4.9;
    const auto p = run_command(Command::ShgPower, cfg);
    CHECK(p.table.header == std::vector<std::string>{"nbar1", "amplitude_au", "status"});
    CHECK(p.table.rows.size() == 2);

    cfg.sweep.phase = Axis{0.0, 3.0, 2};
    cfg.drive.control = PowerSpec{PowerSpec::Unit::Nbar, 0.13};
    const auto g = run_command(Command::Interference, cfg);
    CHECK(g.table.header == std::vector<std::string>{"phase_rad", "control_nbar", "gain", "status"});
    CHECK(std::get<double>(g.table.rows[0][1]) == doctest::Approx(0.13).epsilon(1e-12));
  }
}
