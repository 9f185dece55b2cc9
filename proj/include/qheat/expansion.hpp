#pragma once

// Short-time expansion coefficients of the energy-exchange and coherence
// functionals, and the classification of their leading-order ratio.
//
// For a state rho evolving under H, two families of first and second
// derivatives at t = 0 are computed:
//   f1, f2: derivatives of -tr(rho(t) L) against the frozen log of the
//           product of marginals, L = ln(rho_A (x) rho_B);
//   g1, g2: the same derivatives against ln(dephased rho);
//   g2r:    the remainder quadratic form tr(P(drift)^2 P(rho)^{-1})/2 with
//           P the dephasing projection, inverse taken on the support.
// The ratio f/g at the lowest non-vanishing order measures how much of the
// exchanged energy is accounted for by coherence production.

#include <optional>

#include "qheat/linalg.hpp"
#include "qheat/measures.hpp"
#include "qheat/states.hpp"

namespace qheat {

struct ExpansionCoefficients {
  double f1 = 0.0;
  double f2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double g2r = 0.0;
  // Set when the dephased state is singular and its kernel couples to the
  // dynamics, which sends the order-2 denominator to infinity in exact
  // arithmetic. The finite fields then hold the support-restricted sums.
  bool g2_divergent = false;
  // Direction of the g2 divergence: +1 for +infinity, -1 for -infinity, 0
  // when the ln channel is finite or indefinite (e.g. only g2r diverges).
  int g2_divergence_sign = 0;
  // Which piece diverged; g2_divergent is their union.
  bool g2_ln_divergent = false;
  bool g2r_divergent = false;
  // ||P(drift)||_F. Zero (to roundoff) exactly when the state satisfies the
  // vanishing-pinched-drift premise that forces f1 = g1 = g2r = 0.
  double drift_pinched_norm = 0.0;
};

// All five coefficients at t = 0 for the given state. Requires full-rank
// marginals (the frozen log is undefined otherwise); throws invalid_argument
// when a marginal is singular at eig_floor resolution.
ExpansionCoefficients coefficients(const DensityMatrix& rho, const BipartiteSystem& sys,
                                   double eig_floor = 1e-12);

struct RatioTolerances {
  double f_tol = 1e-9;         // below this, a numerator counts as vanished
  double g_tol = 1e-9;         // below this, a denominator counts as vanished
  double scenario_tol = 1e-3;  // half-width of the ratio windows around 1 and 0
};

enum class RatioStatus {
  kOk,
  kDivergentToZero,      // denominator infinite: ratio -> 0
  kDivergentToInfinity,  // denominator vanished under a live numerator
  kIndeterminate,        // both orders vanished
};

enum class Scenario {
  kCoherenceMandated,    // ratio within scenario_tol of 1
  kClassicallyMandated,  // ratio divergent to infinity
  kInterConversion,      // ratio within scenario_tol of 0, or divergent to zero
  kMixed,                // any other finite ratio
  kUnclassified,         // indeterminate ratio
};

struct RatioResult {
  double value = 0.0;
  RatioStatus status = RatioStatus::kIndeterminate;
  int order_used = 2;  // 1 when the first-order pair decided, else 2
  Scenario scenario = Scenario::kUnclassified;
};

// Lowest-non-vanishing-order ratio: f1/g1 when either first-order coefficient
// is live, otherwise f2/(g2 - g2r) with the divergence cases mapped to the
// statuses above. The scenario field is filled by classify_scenario.
RatioResult ratio(const ExpansionCoefficients& c, const RatioTolerances& tol = {});

Scenario classify_scenario(const RatioResult& r, double scenario_tol = 1e-3);

const char* to_string(RatioStatus status);
const char* to_string(Scenario scenario);

// Leading growth coefficient of the correlated coherence from a dephase-fixed
// initial state: half the skew information of rho0 under the total
// Hamiltonian. Throws when rho0 is not a dephasing fixed point (the quadratic
// growth law presumes zero initial coherence); divergent when rho0 is
// singular with kernel coupling.
DivergibleReal initial_acceleration(const DensityMatrix& rho0, const BipartiteSystem& sys,
                                    double eig_floor = 1e-12);

}  // namespace qheat
