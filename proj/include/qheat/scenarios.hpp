#pragma once

// Canonical two-qubit exchange setup: resonant qubits with an excitation
// swapping coupling, thermal at different temperatures, plus the three-way
// comparison of the energy-to-coherence ratio across initial-state families.

#include <vector>

#include "qheat/dynamics.hpp"
#include "qheat/expansion.hpp"
#include "qheat/states.hpp"

namespace qheat {

struct TwoQubitParams {
  double t_a = 15.0;    // temperature of qubit A
  double t_b = 10.0;    // temperature of qubit B
  double omega = 100.0; // shared level splitting (resonance)
  double gamma = 10.0;  // exchange coupling strength
};

// H_A = H_B = -(omega/2) sigma_z (so |0> is the ground state) and
// H_int = (gamma/2)(sigma_+ (x) sigma_- + sigma_- (x) sigma_+), which hops a
// single excitation between the qubits and conserves the excitation number.
BipartiteSystem build_two_qubit_system(const TwoQubitParams& params);

// Thermal product state at (t_a, t_b).
DensityMatrix product_scenario(const TwoQubitParams& params);

// Diagonal correlated state with the same thermal marginals, at interpolation
// parameter p (p = pA0 recovers the product state up to roundoff).
DensityMatrix zero_cc_scenario(const TwoQubitParams& params, double p);

struct ScenarioComparisonRow {
  double t = 0.0;
  double ratio_product = 0.0;
  double ratio_p05 = 0.0;
  double ratio_p0 = 0.0;
  RatioStatus status_p0 = RatioStatus::kOk;
};

// Ratio-versus-time for three initial states sharing the same marginals:
// the thermal product, the zero-coherence state at p = 0.5, and the singular
// zero-coherence state at p = 0. Rows at t_k = k * dt up to t_max. The p = 0
// column carries its status because its t = 0 ratio is divergent-to-zero
// (value emitted as 0); the other two stay finite on this grid.
std::vector<ScenarioComparisonRow> compare_scenarios(const TwoQubitParams& params,
                                                     double t_max = 0.5,
                                                     double dt = 1e-3);

}  // namespace qheat
