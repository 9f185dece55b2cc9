#include "qheat/dynamics.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace qheat {

namespace {

double unitarity_defect(const ComplexMatrix& u) {
  ComplexMatrix uu = u * adjoint(u);
  uu -= ComplexMatrix::identity(u.rows());
  return max_abs(uu);
}

}  // namespace

ComplexMatrix propagator(const SpectralDecomposition& dec, double t) {
  if (!std::isfinite(t)) {
    std::ostringstream msg;
    msg << "propagator: time must be finite, got " << t;
    throw std::invalid_argument(msg.str());
  }
  const std::size_t n = dec.dim();
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += dec.eigenvectors(i, k) * std::polar(1.0, -dec.eigenvalues[k] * t) *
               std::conj(dec.eigenvectors(j, k));
      u(i, j) = acc;
    }
  const double defect = unitarity_defect(u);
  if (defect > 1e-12) {
    std::ostringstream msg;
    msg << "propagator: assembled matrix fails unitarity by " << defect;
    throw std::runtime_error(msg.str());
  }
  return u;
}

ComplexMatrix propagator(const HermitianOperator& h, double t) {
  return propagator(hermitian_eig(h), t);
}

DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& u,
                     double unitary_tol) {
  if (!u.is_square() || u.rows() != rho.dim()) {
    std::ostringstream msg;
    msg << "evolve: propagator shape " << u.rows() << "x" << u.cols()
        << " does not match state dim " << rho.dim();
    throw std::invalid_argument(msg.str());
  }
  const double defect = unitarity_defect(u);
  if (defect > unitary_tol) {
    std::ostringstream msg;
    msg << "evolve: matrix is not unitary, max |U U† - 1| element = " << defect;
    throw std::invalid_argument(msg.str());
  }
  return validate_state(u * rho.matrix() * adjoint(u));
}

DensityMatrix taylor_step(const DensityMatrix& rho, const HermitianOperator& h,
                          double dt) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    std::ostringstream msg;
    msg << "taylor_step: dt must be non-negative and finite, got " << dt;
    throw std::invalid_argument(msg.str());
  }
  const SpectralDecomposition dec = hermitian_eig(h);
  const double h_norm =
      std::max(std::abs(dec.eigenvalues.front()), std::abs(dec.eigenvalues.back()));
  if (h_norm * dt > 0.1)
    std::cerr << "warning: taylor_step with ||H||*dt = " << h_norm * dt
              << "; the truncated series is unreliable beyond ~0.1\n";

  const ComplexMatrix x1 = commutator(h.matrix(), rho.matrix());
  const ComplexMatrix x2 = commutator(h.matrix(), x1);
  ComplexMatrix next = rho.matrix();
  ComplexMatrix first = x1;
  first *= Complex(0.0, -dt);
  ComplexMatrix second = x2;
  second *= Complex(-0.5 * dt * dt, 0.0);
  next += first;
  next += second;
  return validate_state(next);
}

std::vector<TrajectoryRecord> run_trajectory(const BipartiteSystem& sys,
                                             const DensityMatrix& rho0,
                                             const EvolutionConfig& cfg) {
  if (rho0.dim() != sys.dim()) {
    std::ostringstream msg;
    msg << "run_trajectory: state dim " << rho0.dim() << " != system dim "
        << sys.dim();
    throw std::invalid_argument(msg.str());
  }
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max))
    throw std::invalid_argument("run_trajectory: t_max must be positive");
  if (!(cfg.dt > 0.0) || cfg.dt > cfg.t_max)
    throw std::invalid_argument("run_trajectory: need 0 < dt <= t_max");
  if (!(cfg.fd_dt > 0.0) || cfg.fd_dt > cfg.dt)
    throw std::invalid_argument("run_trajectory: need 0 < fd_dt <= dt");

  const SpectralDecomposition dec = hermitian_eig(sys.h_total);
  // Grid index range with a half-ulp grace so t_max lands on the grid even
  // when t_max/dt is off by a rounding error.
  const std::size_t steps =
      static_cast<std::size_t>(std::floor(cfg.t_max / cfg.dt + 1e-9));

  std::vector<TrajectoryRecord> records;
  records.reserve(steps + 1);

  double e_b0 = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const DensityMatrix rho_t = evolve(rho0, propagator(dec, t));
    const MeasureReport rep = measure(rho_t, sys);

    TrajectoryRecord rec;
    rec.t = t;
    rec.e_a = rep.e_a;
    rec.e_b = rep.e_b;
    rec.e_int = energy(rho_t, sys.h_int);
    rec.s_a = rep.s_a;
    rec.s_b = rep.s_b;
    rec.s_ab = rep.s_ab;
    rec.mutual_info = rep.mutual_info;
    rec.coherence = rep.coherence;
    rec.classical = rep.classical;
    if (k == 0) e_b0 = rep.e_b;
    rec.de_cum = rep.e_b - e_b0;

    // Finite-difference ratio toward t + fd_dt, with the log factor taken at
    // the marginals of the left endpoint.
    const DensityMatrix probe = evolve(rho0, propagator(dec, t + cfg.fd_dt));
    const HermitianOperator marg_a = HermitianOperator(
        partial_trace(rho_t.matrix(), sys.dim_a, sys.dim_b, Subsystem::A), 1e-10);
    const HermitianOperator marg_b = HermitianOperator(
        partial_trace(rho_t.matrix(), sys.dim_a, sys.dim_b, Subsystem::B), 1e-10);
    const MatrixLogResult log_a = matrix_log_psd(marg_a);
    const MatrixLogResult log_b = matrix_log_psd(marg_b);
    if (log_a.singular || log_b.singular) {
      rec.ratio_fd_status = FdStatus::kDivergent;
    } else {
      const ComplexMatrix log_prod =
          kron(log_a.log, ComplexMatrix::identity(sys.dim_b)) +
          kron(ComplexMatrix::identity(sys.dim_a), log_b.log);
      const ComplexMatrix drho = probe.matrix() - rho_t.matrix();
      const double num = -trace_product(drho, log_prod).real();
      const double den =
          correlated_coherence(probe, sys.basis_a, sys.basis_b) - rec.coherence;
      if (std::abs(den) < 1e-14) {
        rec.ratio_fd_status = FdStatus::kDivergent;
      } else {
        rec.ratio_fd = num / den;
        rec.ratio_fd_status = FdStatus::kOk;
      }
    }

    if (cfg.record_coeffs) rec.coeffs = coefficients(rho_t, sys);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace qheat
