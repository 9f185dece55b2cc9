#include "qheat/scenarios.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qheat {

namespace {

void check_params(const TwoQubitParams& params) {
  if (!(params.t_a > 0.0) || !(params.t_b > 0.0)) {
    std::ostringstream msg;
    msg << "two-qubit params: temperatures must be positive, got t_a = "
        << params.t_a << ", t_b = " << params.t_b;
    throw std::invalid_argument(msg.str());
  }
  if (!(params.omega > 0.0)) {
    std::ostringstream msg;
    msg << "two-qubit params: omega must be positive, got " << params.omega;
    throw std::invalid_argument(msg.str());
  }
  if (params.gamma < 0.0) {
    std::ostringstream msg;
    msg << "two-qubit params: gamma must be non-negative, got " << params.gamma;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

BipartiteSystem build_two_qubit_system(const TwoQubitParams& params) {
  check_params(params);
  ComplexMatrix h_local = pauli_z();
  h_local *= Complex(-params.omega / 2.0, 0.0);

  ComplexMatrix h_int = kron(qubit_sigma_plus(), qubit_sigma_minus()) +
                        kron(qubit_sigma_minus(), qubit_sigma_plus());
  h_int *= Complex(params.gamma / 2.0, 0.0);

  return BipartiteSystem::assemble(HermitianOperator(h_local),
                                   HermitianOperator(h_local),
                                   HermitianOperator(std::move(h_int)));
}

DensityMatrix product_scenario(const TwoQubitParams& params) {
  check_params(params);
  ComplexMatrix h_local = pauli_z();
  h_local *= Complex(-params.omega / 2.0, 0.0);
  const HermitianOperator h(std::move(h_local));
  const DensityMatrix rho_a = thermal_state(h, ThermalParams{params.t_a});
  const DensityMatrix rho_b = thermal_state(h, ThermalParams{params.t_b});
  return validate_state(kron(rho_a.matrix(), rho_b.matrix()));
}

DensityMatrix zero_cc_scenario(const TwoQubitParams& params, double p) {
  check_params(params);
  ComplexMatrix h_local = pauli_z();
  h_local *= Complex(-params.omega / 2.0, 0.0);
  const HermitianOperator h(std::move(h_local));
  const DensityMatrix rho_a = thermal_state(h, ThermalParams{params.t_a});
  const DensityMatrix rho_b = thermal_state(h, ThermalParams{params.t_b});
  return zero_cc_state(rho_a, rho_b, p);
}

std::vector<ScenarioComparisonRow> compare_scenarios(const TwoQubitParams& params,
                                                     double t_max, double dt) {
  if (!(t_max > 0.0) || !(dt > 0.0) || dt > t_max)
    throw std::invalid_argument("compare_scenarios: need 0 < dt <= t_max");

  const BipartiteSystem sys = build_two_qubit_system(params);
  const SpectralDecomposition dec = hermitian_eig(sys.h_total);
  const DensityMatrix initials[3] = {product_scenario(params),
                                     zero_cc_scenario(params, 0.5),
                                     zero_cc_scenario(params, 0.0)};

  const std::size_t steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<ScenarioComparisonRow> rows;
  rows.reserve(steps + 1);

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const ComplexMatrix u = propagator(dec, t);

    ScenarioComparisonRow row;
    row.t = t;
    double* values[3] = {&row.ratio_product, &row.ratio_p05, &row.ratio_p0};
    for (int s = 0; s < 3; ++s) {
      const DensityMatrix rho_t = evolve(initials[s], u);
      const RatioResult r = ratio(coefficients(rho_t, sys));
      *values[s] = r.value;
      if (s == 2) row.status_p0 = r.status;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qheat
