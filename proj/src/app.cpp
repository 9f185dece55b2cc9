#include "qheat/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "qheat/dynamics.hpp"
#include "qheat/expansion.hpp"
#include "qheat/measures.hpp"
#include "qheat/scenarios.hpp"
#include "qheat/states.hpp"

namespace qheat {

// ---------------------------------------------------------------------------
// Config file

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double_value(const std::string& value, int line_no) {
  double v = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream msg;
    msg << "config line " << line_no << ": expected a number, got '" << value << "'";
    throw ConfigError(msg.str());
  }
  return v;
}

int parse_int_value(const std::string& value, int line_no) {
  int v = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream msg;
    msg << "config line " << line_no << ": expected an integer, got '" << value << "'";
    throw ConfigError(msg.str());
  }
  return v;
}

bool parse_bool_value(const std::string& value, int line_no) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  std::ostringstream msg;
  msg << "config line " << line_no << ": expected true/false/1/0, got '" << value
      << "'";
  throw ConfigError(msg.str());
}

}  // namespace

void parse_config(std::istream& in, RunConfig& cfg) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config line " << line_no << ": expected key = value, got '"
          << stripped << "'";
      throw ConfigError(msg.str());
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      std::ostringstream msg;
      msg << "config line " << line_no << ": empty key or value";
      throw ConfigError(msg.str());
    }

    if (key == "scenario") {
      if (value != "product" && value != "zero_cc") {
        std::ostringstream msg;
        msg << "config line " << line_no
            << ": scenario must be product or zero_cc, got '" << value << "'";
        throw ConfigError(msg.str());
      }
      cfg.scenario = value;
    } else if (key == "p") {
      cfg.p = parse_double_value(value, line_no);
      cfg.p_set = true;
    } else if (key == "T_A") {
      cfg.t_a = parse_double_value(value, line_no);
    } else if (key == "T_B") {
      cfg.t_b = parse_double_value(value, line_no);
    } else if (key == "omega") {
      cfg.omega = parse_double_value(value, line_no);
    } else if (key == "gamma") {
      cfg.gamma = parse_double_value(value, line_no);
    } else if (key == "t_max") {
      cfg.t_max = parse_double_value(value, line_no);
    } else if (key == "dt") {
      cfg.dt = parse_double_value(value, line_no);
    } else if (key == "fd_dt") {
      cfg.fd_dt = parse_double_value(value, line_no);
    } else if (key == "emit_coeffs") {
      cfg.emit_coeffs = parse_bool_value(value, line_no);
    } else if (key == "verify") {
      cfg.verify = parse_bool_value(value, line_no);
    } else if (key == "workers") {
      cfg.workers = parse_int_value(value, line_no);
    } else if (key == "out") {
      cfg.out_path = value;
    } else if (key == "sweep_param") {
      cfg.sweep_param = value;
    } else if (key == "sweep_start") {
      cfg.sweep_start = parse_double_value(value, line_no);
    } else if (key == "sweep_stop") {
      cfg.sweep_stop = parse_double_value(value, line_no);
    } else if (key == "sweep_count") {
      cfg.sweep_count = parse_int_value(value, line_no);
    } else {
      std::ostringstream msg;
      msg << "config line " << line_no << ": unknown key '" << key << "'";
      throw ConfigError(msg.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Serialization

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // collapse the -0.0 artifact of exact cancellations
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_g6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

// g2 is the one cell that renders its divergence as a signed infinity
// instead of the 0-plus-status convention: the sign is known and there is no
// adjacent status cell to carry it.
std::string format_g2_g6(const ExpansionCoefficients& c) {
  if (!c.g2_ln_divergent) return format_g6(c.g2);
  if (c.g2_divergence_sign > 0) return "inf";
  if (c.g2_divergence_sign < 0) return "-inf";
  return "nan";
}

// ---------------------------------------------------------------------------
// Scenario resolution shared by the subcommands

std::string effective_scenario(const RunConfig& cfg) {
  if (!cfg.scenario.empty()) return cfg.scenario;
  return cfg.p_set ? "zero_cc" : "product";
}

TwoQubitParams params_from(const RunConfig& cfg) {
  TwoQubitParams params;
  params.t_a = cfg.t_a;
  params.t_b = cfg.t_b;
  params.omega = cfg.omega;
  params.gamma = cfg.gamma;
  return params;
}

DensityMatrix initial_state(const RunConfig& cfg, const TwoQubitParams& params) {
  if (effective_scenario(cfg) == "zero_cc") return zero_cc_scenario(params, cfg.p);
  return product_scenario(params);
}

// Writes `text` to cfg.out_path if set, else to fallback. Returns false (with
// a message on err) when the file cannot be opened.
bool deliver(const RunConfig& cfg, const std::string& text, std::ostream& fallback,
             std::ostream& err) {
  if (cfg.out_path.empty()) {
    fallback << text;
    return true;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) {
    err << "error: cannot open output file '" << cfg.out_path << "'\n";
    return false;
  }
  file << text;
  return file.good();
}

// ---------------------------------------------------------------------------
// --verify identity checks

// First violated identity as a message, or nullopt when everything holds.
std::optional<std::string> verify_coefficients(const BipartiteSystem& sys,
                                               const DensityMatrix& rho,
                                               const ExpansionCoefficients& c) {
  const DivergibleReal skew = skew_information(sys.h_total, rho);
  if (c.drift_pinched_norm <= 1e-9) {
    if (std::abs(c.f1) > 1e-9 || std::abs(c.g1) > 1e-9 || std::abs(c.g2r) > 1e-9) {
      std::ostringstream msg;
      msg << "vanishing pinched drift but f1 = " << c.f1 << ", g1 = " << c.g1
          << ", g2r = " << c.g2r;
      return msg.str();
    }
    if (skew.divergent != c.g2_divergent)
      return std::string("skew divergence flag disagrees with g2 divergence flag");
    if (!skew.divergent && std::abs(0.5 * skew.value - c.g2) > 1e-9) {
      std::ostringstream msg;
      msg << "g2 = " << c.g2 << " does not match half the skew information "
          << 0.5 * skew.value;
      return msg.str();
    }
    if (!c.g2_divergent && c.g2 < -1e-12) {
      std::ostringstream msg;
      msg << "negative quadratic coherence coefficient g2 = " << c.g2;
      return msg.str();
    }
  }
  return std::nullopt;
}

std::optional<std::string> verify_trajectory(const std::vector<TrajectoryRecord>& recs) {
  if (recs.empty()) return std::string("empty trajectory");
  const double s_ab0 = recs.front().s_ab;
  const double e_tot0 = recs.front().e_a + recs.front().e_b + recs.front().e_int;
  const double e_scale = std::max(1.0, std::abs(e_tot0));
  for (const TrajectoryRecord& r : recs) {
    if (std::abs(r.s_ab - s_ab0) > 1e-8) {
      std::ostringstream msg;
      msg << "t = " << r.t << ": joint entropy drifted by " << r.s_ab - s_ab0;
      return msg.str();
    }
    const double e_tot = r.e_a + r.e_b + r.e_int;
    if (std::abs(e_tot - e_tot0) > 1e-8 * e_scale) {
      std::ostringstream msg;
      msg << "t = " << r.t << ": total energy drifted by " << e_tot - e_tot0;
      return msg.str();
    }
    if (r.coherence < -1e-10 || r.mutual_info < -1e-10) {
      std::ostringstream msg;
      msg << "t = " << r.t << ": negative coherence or mutual information ("
          << r.coherence << ", " << r.mutual_info << ")";
      return msg.str();
    }
    if (std::abs(r.mutual_info - r.coherence - r.classical) > 1e-10) {
      std::ostringstream msg;
      msg << "t = " << r.t << ": I - C - J = "
          << r.mutual_info - r.coherence - r.classical;
      return msg.str();
    }
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Subcommands

int cmd_coeffs(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TwoQubitParams params = params_from(cfg);
  const BipartiteSystem sys = build_two_qubit_system(params);
  const DensityMatrix rho0 = initial_state(cfg, params);
  const ExpansionCoefficients c = coefficients(rho0, sys);
  const RatioResult r = ratio(c);

  if (cfg.verify) {
    if (const auto violation = verify_coefficients(sys, rho0, c)) {
      err << "verify: " << *violation << "\n";
      return 2;
    }
  }

  std::ostringstream text;
  text << "f1 = " << format_g6(c.f1) << "\n";
  text << "f2 = " << format_g6(c.f2) << "\n";
  text << "g1 = " << format_g6(c.g1) << "\n";
  text << "g2 = " << format_g2_g6(c) << "\n";
  text << "g2r = " << format_g6(c.g2r) << "\n";
  text << "ratio = " << format_g6(r.value) << "\n";
  text << "ratio_status = " << to_string(r.status) << "\n";
  text << "order_used = " << r.order_used << "\n";
  text << "scenario = " << to_string(r.scenario) << "\n";

  if (r.status == RatioStatus::kIndeterminate) {
    // Both expansion orders vanished; offer the finite-difference quotient
    // over one probe step as a numerical fallback.
    const ComplexMatrix u = propagator(sys.h_total, cfg.fd_dt);
    const DensityMatrix probe = evolve(rho0, u);
    const HermitianOperator marg_a = HermitianOperator(
        partial_trace(rho0.matrix(), sys.dim_a, sys.dim_b, Subsystem::A), 1e-10);
    const HermitianOperator marg_b = HermitianOperator(
        partial_trace(rho0.matrix(), sys.dim_a, sys.dim_b, Subsystem::B), 1e-10);
    const MatrixLogResult log_a = matrix_log_psd(marg_a);
    const MatrixLogResult log_b = matrix_log_psd(marg_b);
    double fd = 0.0;
    bool fd_divergent = true;
    if (!log_a.singular && !log_b.singular) {
      const ComplexMatrix log_prod =
          kron(log_a.log, ComplexMatrix::identity(sys.dim_b)) +
          kron(ComplexMatrix::identity(sys.dim_a), log_b.log);
      const ComplexMatrix drho = probe.matrix() - rho0.matrix();
      const double num = -trace_product(drho, log_prod).real();
      const double den = correlated_coherence(probe, sys.basis_a, sys.basis_b) -
                         correlated_coherence(rho0, sys.basis_a, sys.basis_b);
      if (std::abs(den) >= 1e-14) {
        fd = num / den;
        fd_divergent = false;
      }
    }
    text << "ratio_fd = " << format_g6(fd) << "\n";
    text << "ratio_fd_status = " << (fd_divergent ? "divergent" : "ok") << "\n";
  }

  return deliver(cfg, text.str(), out, err) ? 0 : 1;
}

int cmd_trajectory(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TwoQubitParams params = params_from(cfg);
  const BipartiteSystem sys = build_two_qubit_system(params);
  const DensityMatrix rho0 = initial_state(cfg, params);

  EvolutionConfig evo;
  evo.t_max = cfg.t_max;
  evo.dt = cfg.dt;
  evo.fd_dt = cfg.fd_dt;
  evo.record_coeffs = cfg.emit_coeffs;
  const std::vector<TrajectoryRecord> recs = run_trajectory(sys, rho0, evo);

  if (cfg.verify) {
    if (const auto violation = verify_trajectory(recs)) {
      err << "verify: " << *violation << "\n";
      return 2;
    }
  }

  std::string text = "t,E_A,E_B,dE_cum,S_A,S_B,S_AB,I,C,J,ratio_fd,ratio_status";
  if (cfg.emit_coeffs) text += ",f1,g1,f2,g2,g2r";
  text += "\n";
  for (const TrajectoryRecord& r : recs) {
    text += format_double(r.t);
    text += ',';
    text += format_double(r.e_a);
    text += ',';
    text += format_double(r.e_b);
    text += ',';
    text += format_double(r.de_cum);
    text += ',';
    text += format_double(r.s_a);
    text += ',';
    text += format_double(r.s_b);
    text += ',';
    text += format_double(r.s_ab);
    text += ',';
    text += format_double(r.mutual_info);
    text += ',';
    text += format_double(r.coherence);
    text += ',';
    text += format_double(r.classical);
    text += ',';
    text += format_double(r.ratio_fd_status == FdStatus::kOk ? r.ratio_fd : 0.0);
    text += ',';
    text += r.ratio_fd_status == FdStatus::kOk ? "ok" : "divergent";
    if (cfg.emit_coeffs) {
      const ExpansionCoefficients& c = *r.coeffs;
      text += ',';
      text += format_double(c.f1);
      text += ',';
      text += format_double(c.g1);
      text += ',';
      text += format_double(c.f2);
      text += ',';
      if (c.g2_ln_divergent)
        text += c.g2_divergence_sign > 0   ? "inf"
                : c.g2_divergence_sign < 0 ? "-inf"
                                           : "nan";
      else
        text += format_double(c.g2);
      text += ',';
      text += format_double(c.g2r);
    }
    text += '\n';
  }
  return deliver(cfg, text, out, err) ? 0 : 1;
}

int cmd_fig2(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TwoQubitParams params = params_from(cfg);
  const std::vector<ScenarioComparisonRow> rows =
      compare_scenarios(params, cfg.t_max, cfg.dt);

  if (cfg.verify) {
    // The t = 0 row is fully characterized: both regular scenarios start at
    // a vanishing pinched drift (order-2 ratio defined and near 1 for the
    // product), and the singular one is divergent-to-zero.
    const ScenarioComparisonRow& first = rows.front();
    if (std::abs(first.ratio_product - 1.0) > 1e-6) {
      err << "verify: product ratio at t = 0 is " << first.ratio_product
          << ", expected 1\n";
      return 2;
    }
    if (first.status_p0 != RatioStatus::kDivergentToZero) {
      err << "verify: singular scenario at t = 0 reported "
          << to_string(first.status_p0) << ", expected divergent-to-zero\n";
      return 2;
    }
  }

  std::string text = "t,ratio_product,ratio_p05,ratio_p0,status_p0\n";
  for (const ScenarioComparisonRow& r : rows) {
    text += format_double(r.t);
    text += ',';
    text += format_double(r.ratio_product);
    text += ',';
    text += format_double(r.ratio_p05);
    text += ',';
    text += format_double(r.ratio_p0);
    text += ',';
    text += to_string(r.status_p0);
    text += '\n';
  }
  return deliver(cfg, text, out, err) ? 0 : 1;
}

namespace {

struct SweepRow {
  double value = 0.0;
  bool error = false;
  std::string error_detail;
  ExpansionCoefficients coeffs;
  RatioResult ratio_result;
  DivergibleReal skew;
};

SweepRow compute_sweep_row(const RunConfig& cfg, double value) {
  SweepRow row;
  row.value = value;
  try {
    RunConfig local = cfg;
    if (cfg.sweep_param == "p") {
      local.p = value;
      local.p_set = true;
      local.scenario = "zero_cc";
    } else if (cfg.sweep_param == "gamma") {
      local.gamma = value;
    } else if (cfg.sweep_param == "omega") {
      local.omega = value;
    } else if (cfg.sweep_param == "T_A") {
      local.t_a = value;
    } else if (cfg.sweep_param == "T_B") {
      local.t_b = value;
    }
    const TwoQubitParams params = params_from(local);
    const BipartiteSystem sys = build_two_qubit_system(params);
    const DensityMatrix rho0 = initial_state(local, params);
    row.coeffs = coefficients(rho0, sys);
    row.ratio_result = ratio(row.coeffs);
    row.skew = skew_information(sys.h_total, rho0);
  } catch (const std::exception& e) {
    row.error = true;
    row.error_detail = e.what();
  }
  return row;
}

}  // namespace

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  static const char* kParams[] = {"p", "gamma", "omega", "T_A", "T_B"};
  const bool known =
      std::any_of(std::begin(kParams), std::end(kParams),
                  [&](const char* p) { return cfg.sweep_param == p; });
  if (!known) {
    err << "error: sweep_param must be one of p, gamma, omega, T_A, T_B; got '"
        << cfg.sweep_param << "'\n";
    return 1;
  }
  if (cfg.sweep_count < 1) {
    err << "error: sweep_count must be at least 1, got " << cfg.sweep_count << "\n";
    return 1;
  }
  if (cfg.workers < 1) {
    err << "error: workers must be at least 1, got " << cfg.workers << "\n";
    return 1;
  }

  std::vector<double> values(cfg.sweep_count);
  for (int i = 0; i < cfg.sweep_count; ++i) {
    values[i] = cfg.sweep_count == 1
                    ? cfg.sweep_start
                    : cfg.sweep_start + (cfg.sweep_stop - cfg.sweep_start) *
                                            static_cast<double>(i) /
                                            static_cast<double>(cfg.sweep_count - 1);
  }

  // Rows are independent; workers stripe over indices and write to
  // preallocated slots, so the output order never depends on thread timing.
  std::vector<SweepRow> rows(values.size());
  const int workers = std::min<int>(cfg.workers, static_cast<int>(values.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < values.size(); ++i)
      rows[i] = compute_sweep_row(cfg, values[i]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < values.size(); i += workers)
          rows[i] = compute_sweep_row(cfg, values[i]);
      });
    for (std::thread& th : pool) th.join();
  }

  if (cfg.verify) {
    for (const SweepRow& row : rows) {
      if (row.error) continue;
      if (std::abs(row.coeffs.f1) <= 1e-9 && std::abs(row.coeffs.g1) <= 1e-9 &&
          row.skew.divergent != row.coeffs.g2_divergent) {
        err << "verify: value " << format_double(row.value)
            << ": skew and g2 divergence flags disagree\n";
        return 2;
      }
    }
  }

  std::string text =
      "value,f1,g1,f2,g2,g2r,ratio,ratio_status,order_used,scenario,skew_info,status\n";
  for (const SweepRow& row : rows) {
    text += format_double(row.value);
    if (row.error) {
      // Ten empty cells keep the column count stable for naive parsers.
      text += ",,,,,,,,,,,error\n";
      err << "sweep: value " << format_double(row.value) << " failed: "
          << row.error_detail << "\n";
      continue;
    }
    const ExpansionCoefficients& c = row.coeffs;
    text += ',';
    text += format_double(c.f1);
    text += ',';
    text += format_double(c.g1);
    text += ',';
    text += format_double(c.f2);
    text += ',';
    if (c.g2_ln_divergent)
      text += c.g2_divergence_sign > 0   ? "inf"
              : c.g2_divergence_sign < 0 ? "-inf"
                                         : "nan";
    else
      text += format_double(c.g2);
    text += ',';
    text += format_double(c.g2r);
    text += ',';
    text += format_double(row.ratio_result.value);
    text += ',';
    text += to_string(row.ratio_result.status);
    text += ',';
    text += std::to_string(row.ratio_result.order_used);
    text += ',';
    text += to_string(row.ratio_result.scenario);
    text += ',';
    text += row.skew.divergent ? "inf" : format_double(row.skew.value);
    text += ",ok\n";
  }
  return deliver(cfg, text, out, err) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// CLI wiring

namespace {

struct StagedFlags {
  std::string config_path;
  std::string out_path;
  bool verify = false;
  bool emit_coeffs = false;
  int workers = 1;
  double t_a = 0.0, t_b = 0.0, omega = 0.0, gamma = 0.0, p = 0.0;
  double t_max = 0.0, dt = 0.0, fd_dt = 0.0;
};

void wire_common(CLI::App* sub, StagedFlags& s) {
  sub->add_option("--config", s.config_path, "key = value config file");
  sub->add_option("--out", s.out_path, "write the report to this file");
  sub->add_flag("--verify", s.verify, "re-check the documented identities (exit 2 on violation)");
  sub->add_option("--workers", s.workers, "worker threads for sweep rows");
  sub->add_option("--T-A", s.t_a, "temperature of subsystem A");
  sub->add_option("--T-B", s.t_b, "temperature of subsystem B");
  sub->add_option("--omega", s.omega, "shared level splitting");
  sub->add_option("--gamma", s.gamma, "exchange coupling strength");
  sub->add_option("--p", s.p, "zero-coherence interpolation parameter (selects the zero_cc family unless a config file pins the scenario)");
  sub->add_option("--t-max", s.t_max, "trajectory end time");
  sub->add_option("--dt", s.dt, "trajectory grid spacing");
  sub->add_option("--fd-dt", s.fd_dt, "finite-difference probe offset");
  sub->add_flag("--emit-coeffs", s.emit_coeffs, "append expansion-coefficient columns");
}

void merge_flags(const CLI::App* sub, const StagedFlags& s, RunConfig& cfg) {
  if (sub->count("--out")) cfg.out_path = s.out_path;
  if (sub->count("--verify")) cfg.verify = true;
  if (sub->count("--workers")) cfg.workers = s.workers;
  if (sub->count("--T-A")) cfg.t_a = s.t_a;
  if (sub->count("--T-B")) cfg.t_b = s.t_b;
  if (sub->count("--omega")) cfg.omega = s.omega;
  if (sub->count("--gamma")) cfg.gamma = s.gamma;
  if (sub->count("--p")) {
    cfg.p = s.p;
    cfg.p_set = true;
  }
  if (sub->count("--t-max")) cfg.t_max = s.t_max;
  if (sub->count("--dt")) cfg.dt = s.dt;
  if (sub->count("--fd-dt")) cfg.fd_dt = s.fd_dt;
  if (sub->count("--emit-coeffs")) cfg.emit_coeffs = true;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"quasi-static energy and coherence transport between two finite thermal systems"};
  app.require_subcommand(1);

  StagedFlags staged;
  CLI::App* sub_coeffs = app.add_subcommand(
      "coeffs", "expansion coefficients and ratio of the initial state");
  CLI::App* sub_trajectory =
      app.add_subcommand("trajectory", "time series of energies, entropies, and correlations (CSV)");
  CLI::App* sub_fig2 = app.add_subcommand(
      "fig2", "ratio-versus-time comparison of the three canonical initial states (CSV)");
  CLI::App* sub_sweep = app.add_subcommand(
      "sweep", "initial-state diagnostics swept over one parameter (CSV)");
  for (CLI::App* sub : {sub_coeffs, sub_trajectory, sub_fig2, sub_sweep})
    wire_common(sub, staged);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  const CLI::App* sub = app.get_subcommands().front();

  RunConfig cfg;
  try {
    if (sub->count("--config")) {
      std::ifstream file(staged.config_path);
      if (!file) {
        err << "error: cannot open config file '" << staged.config_path << "'\n";
        return 1;
      }
      parse_config(file, cfg);
    }
    merge_flags(sub, staged, cfg);

    if (sub == sub_coeffs) return cmd_coeffs(cfg, out, err);
    if (sub == sub_trajectory) return cmd_trajectory(cfg, out, err);
    if (sub == sub_fig2) return cmd_fig2(cfg, out, err);
    return cmd_sweep(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qheat
