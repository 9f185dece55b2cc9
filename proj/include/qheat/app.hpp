#pragma once

// Command-line front end: config file handling, deterministic CSV/text
// serialization, and the four subcommands (coeffs, trajectory, fig2, sweep).
// Split from main() so tests can drive the full CLI in process.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheat {

// Flat key=value run configuration. Defaults reproduce the canonical
// two-qubit setup. `scenario` left empty means: infer zero_cc when a p value
// was given explicitly, product otherwise.
struct RunConfig {
  std::string scenario;  // "product", "zero_cc", or empty = infer
  double p = 0.5;
  bool p_set = false;
  double t_a = 15.0;
  double t_b = 10.0;
  double omega = 100.0;
  double gamma = 10.0;
  double t_max = 0.5;
  double dt = 1e-3;
  double fd_dt = 5e-4;
  bool emit_coeffs = false;
  bool verify = false;
  int workers = 1;
  std::string out_path;  // empty = write to the provided stream
  std::string sweep_param;
  double sweep_start = 0.0;
  double sweep_stop = 0.0;
  int sweep_count = 0;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Apply `key = value` lines (# comments and blank lines allowed) onto cfg.
// Unknown keys and malformed values raise ConfigError with the line number.
void parse_config(std::istream& in, RunConfig& cfg);

// Shortest representation that round-trips through double parsing; CSV cells
// use this so identical runs produce byte-identical files. Infinities and
// NaN render as inf/-inf/nan.
std::string format_double(double v);

// 6-significant-digit rendering for the human-facing coeffs report.
std::string format_g6(double v);

// Subcommand bodies. On success they write their report to `out` (or the
// config's out_path) and return 0; 1 is a usage/config problem, 2 a failed
// --verify identity check (details on `err`).
int cmd_coeffs(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_trajectory(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_fig2(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full CLI: args includes the program name at index 0.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qheat
