#include "usc/config.hpp"
#include "usc/error.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kSolver = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usc::Error(usc::ErrorCode::Usage, "cannot open config '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace usc;
  CLI::App app{"Driven-dissipative simulation of a two-mode resonator coupled to a flux qubit"};
  app.set_version_flag("--version", std::string(cli::kVersion));

  std::string command;
  std::string config_path;
  std::optional<std::string> out_path, format;
  std::optional<double> flux_start, flux_stop, fmin, fmax, nbar;
  std::optional<int> flux_steps, fsteps, mmax, n1, n2, threads;

  app.add_option("command", command, "levels | melems | s21 | shg | shg-power | interference | validate")
      ->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--flux-start", flux_start, "flux sweep start, mPhi0");
  app.add_option("--flux-stop", flux_stop, "flux sweep stop, mPhi0");
  app.add_option("--flux-steps", flux_steps, "flux sweep points");
  app.add_option("--fmin", fmin, "drive frequency sweep start, GHz");
  app.add_option("--fmax", fmax, "drive frequency sweep stop, GHz");
  app.add_option("--fsteps", fsteps, "drive frequency sweep points");
  app.add_option("--nbar", nbar, "signal strength as mean photon number");
  app.add_option("--mmax", mmax, "Fourier cutoff of the Floquet solve");
  app.add_option("--n1", n1, "mode 1 photon cutoff");
  app.add_option("--n2", n2, "mode 2 photon cutoff");
  app.add_option("--threads", threads, "worker threads (env USC_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  cli::CommandResult result;
  cli::RunConfig cfg;
  try {
    const auto cmd = cli::parse_command(command);
    if (!config_path.empty()) cfg = cli::parse_config(read_file(config_path));
    if (const char* env = std::getenv("USC_THREADS"); env && !threads) {
      cli::set_config_value(cfg, "run.threads", env);
    }
    auto set = [&](const char* key, const auto& v) {
      if (!v) return;
      if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>) {
        cli::set_config_value(cfg, key, cli::format_double(*v));
      } else if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, int>) {
        cli::set_config_value(cfg, key, std::to_string(*v));
      } else {
        cli::set_config_value(cfg, key, *v);
      }
    };
    set("output.path", out_path);
    set("output.format", format);
    set("sweep.flux.start", flux_start);
    set("sweep.flux.stop", flux_stop);
    set("sweep.flux.steps", flux_steps);
    set("sweep.freq.start", fmin);
    set("sweep.freq.stop", fmax);
    set("sweep.freq.steps", fsteps);
    set("drive.signal.nbar", nbar);
    set("floquet.m_max", mmax);
    set("truncation.n1", n1);
    set("truncation.n2", n2);
    set("run.threads", threads);
    cli::validate_config(cfg);
    result = cli::run_command(cmd, cfg);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::Parse:
      case ErrorCode::Validation:
      case ErrorCode::Usage:
      case ErrorCode::InvalidTruncation:
        return kUsage;
      default:
        return kSolver;
    }
  }

  const std::string text =
      cfg.output.format == "json" ? cli::to_json(result.table) : cli::to_csv(result.table);
  if (cfg.output.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output.path);
    if (!out) {
      std::cerr << "error: cannot write '" << cfg.output.path << "'\n";
      return kUsage;
    }
    out << text;
  }
  if (result.validation_failed) return kValidation;
  if (result.failed_rows > 0) {
    std::cerr << result.failed_rows << " row(s) failed\n";
    return kSolver;
  }
  return kOk;
}
