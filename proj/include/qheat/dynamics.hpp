#pragma once

// Closed-system evolution and trajectory recording. States along a trajectory
// are produced directly from the spectral form of the propagator at each grid
// time, so there is no step-to-step error accumulation; the small Taylor
// stepper exists only as a convergence reference for tests.

#include <optional>
#include <vector>

#include "qheat/expansion.hpp"
#include "qheat/linalg.hpp"
#include "qheat/measures.hpp"
#include "qheat/states.hpp"

namespace qheat {

// exp(-i h t), assembled from the eigendecomposition.
ComplexMatrix propagator(const HermitianOperator& h, double t);

// Same, from a precomputed decomposition; callers evaluating many times
// against one Hamiltonian avoid re-diagonalizing per call.
ComplexMatrix propagator(const SpectralDecomposition& dec, double t);

// u rho u†. Rejects u unless it is unitary within unitary_tol.
DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& u,
                     double unitary_tol = 1e-10);

// One explicit second-order step rho - i[h,rho] dt - [h,[h,rho]] dt^2 / 2,
// with local error O(dt^3). Warns on stderr when ||h|| dt > 0.1 (the series
// is useless that far out). Convergence-test reference, not a production
// integrator.
DensityMatrix taylor_step(const DensityMatrix& rho, const HermitianOperator& h,
                          double dt);

struct EvolutionConfig {
  double t_max = 0.5;
  double dt = 1e-3;
  // Probe offset for the finite-difference ratio column.
  double fd_dt = 5e-4;
  bool record_coeffs = false;
};

enum class FdStatus { kOk, kDivergent };

struct TrajectoryRecord {
  double t = 0.0;
  double e_a = 0.0;
  double e_b = 0.0;
  double de_cum = 0.0;  // energy received by B since t = 0
  double e_int = 0.0;   // coupling-term energy (conservation bookkeeping)
  double s_a = 0.0;
  double s_b = 0.0;
  double s_ab = 0.0;
  double mutual_info = 0.0;
  double coherence = 0.0;
  double classical = 0.0;
  // Finite-difference energy-to-coherence ratio over [t, t + fd_dt]:
  // -tr(drho L_t) / dC with L_t the log of the product of the marginals at t.
  // Divergent-tagged (value 0) when dC is below 1e-14 and the quotient would
  // be noise.
  double ratio_fd = 0.0;
  FdStatus ratio_fd_status = FdStatus::kOk;
  std::optional<ExpansionCoefficients> coeffs;
};

// Exact states at t_k = k * dt for every k with k * dt <= t_max (inclusive,
// with a half-ulp grace so t_max itself is kept), each measured and paired
// with the finite-difference ratio toward t_k + fd_dt.
std::vector<TrajectoryRecord> run_trajectory(const BipartiteSystem& sys,
                                             const DensityMatrix& rho0,
                                             const EvolutionConfig& cfg);

}  // namespace qheat
