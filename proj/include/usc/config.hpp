#pragma once

#include "usc/dissipators.hpp"
#include "usc/model.hpp"
#include "usc/observables.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace usc::cli {

/// Inclusive sweep axis. Geometric spacing when `log` is set.
struct Axis {
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
  bool log = false;

  std::vector<double> values() const;
  bool operator==(const Axis&) const = default;
};

/// Input strength of one tone. dBm is converted to watts while parsing.
struct PowerSpec {
  enum class Unit { Watts, Nbar };
  Unit unit = Unit::Nbar;
  double value = 0.0;

  bool operator==(const PowerSpec&) const = default;
};

struct RunConfig {
  DeviceParams device;
  BathSpec baths;
  PointOptions point;

  struct Floquet {
    std::optional<int> m_max;
    bool check_cutoff = false;
    double cutoff_tolerance = 1e-3;
    bool operator==(const Floquet&) const = default;
  } floquet;

  struct Sweep {
    std::optional<Axis> flux;
    std::optional<Axis> freq;
    std::optional<Axis> nbar;
    std::optional<Axis> phase;
    std::optional<Axis> control_nbar;
    bool operator==(const Sweep&) const = default;
  } sweep;

  struct Drive {
    double flux_mphi0 = -46.0;
    std::optional<double> frequency_ghz;
    int signal_harmonic = 1;
    std::optional<PowerSpec> signal;
    std::optional<PowerSpec> control;
    bool operator==(const Drive&) const = default;
  } drive;

  struct Levels {
    int max_level = 6;
    std::vector<HamiltonianVariant> variants{HamiltonianVariant::RabiFluxBasis};
    bool operator==(const Levels&) const = default;
  } levels;

  struct Melems {
    ElementOperator op = ElementOperator::X;
    std::vector<std::pair<int, int>> pairs{{1, 0}, {3, 1}, {3, 0}, {2, 1}, {2, 0}};
    bool operator==(const Melems&) const = default;
  } melems;

  struct Output {
    std::string path;
    std::string format = "csv";
    bool operator==(const Output&) const = default;
  } output;

  int threads = 1;

  bool operator==(const RunConfig& o) const;
};

/// Parses the flat `dotted.key = value` document. Lines starting with '#' and
/// blank lines are ignored. Unknown keys and malformed lines are errors.
RunConfig parse_config(std::string_view text);

/// Canonical document that parses back to an equal config.
std::string serialize_config(const RunConfig& cfg);

/// Applies one key/value pair; shared by the parser and CLI overrides.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

void validate_config(const RunConfig& cfg);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

using Cell = std::variant<double, std::int64_t, std::string>;

struct OutputTable {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_row(std::vector<Cell> row);
};

std::string to_csv(const OutputTable& table);
std::string to_json(const OutputTable& table);

enum class Command { Levels, Melems, S21, Shg, ShgPower, Interference, Validate };

Command parse_command(std::string_view name);
std::string_view to_string(Command c) noexcept;

struct CommandResult {
  OutputTable table;
  int failed_rows = 0;
  bool validation_failed = false;
};

CommandResult run_command(Command cmd, const RunConfig& cfg);

inline constexpr std::string_view kVersion = "0.3.0";

}  // namespace usc::cli
