#include "qheat/measures.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qheat {

double von_neumann_entropy(const DensityMatrix& rho, double eig_floor) {
  const SpectralDecomposition dec = hermitian_eig(rho.hermitian());
  double s = 0.0;
  for (double lambda : dec.eigenvalues)
    if (lambda > eig_floor) s -= lambda * std::log(lambda);
  return s;
}

DivergibleReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                double support_tol, double eig_floor) {
  if (rho.dim() != sigma.dim()) {
    std::ostringstream msg;
    msg << "relative_entropy: dimension mismatch " << rho.dim() << " vs "
        << sigma.dim();
    throw std::invalid_argument(msg.str());
  }

  const SpectralDecomposition dec = hermitian_eig(sigma.hermitian());
  const std::size_t n = dec.dim();

  // Weight of rho on sigma's kernel: sum over kernel eigenvectors v of
  // <v| rho |v>. Any appreciable weight makes the -tr(rho ln sigma) term
  // infinite, so report divergence instead of a number.
  double kernel_weight = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (dec.eigenvalues[k] > eig_floor) continue;
    Complex w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        w += std::conj(dec.eigenvectors(i, k)) * rho.matrix()(i, j) *
             dec.eigenvectors(j, k);
    kernel_weight += w.real();
  }
  if (kernel_weight > support_tol) return {0.0, true};

  const MatrixLogResult log_sigma = matrix_log_psd(sigma.hermitian(), eig_floor);
  const double cross = trace_product(rho.matrix(), log_sigma.log).real();
  const double s_rho = von_neumann_entropy(rho, eig_floor);
  return {-s_rho - cross, false};
}

double mutual_information(const DensityMatrix& rho, std::size_t dim_a,
                          std::size_t dim_b) {
  const DensityMatrix rho_a =
      validate_state(partial_trace(rho.matrix(), dim_a, dim_b, Subsystem::A));
  const DensityMatrix rho_b =
      validate_state(partial_trace(rho.matrix(), dim_a, dim_b, Subsystem::B));
  return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) -
         von_neumann_entropy(rho);
}

double correlated_coherence(const DensityMatrix& rho, const SpectralDecomposition& basis_a,
                            const SpectralDecomposition& basis_b) {
  const DensityMatrix pinched = dephase(rho, basis_a, basis_b);
  return von_neumann_entropy(pinched) - von_neumann_entropy(rho);
}

double classical_correlation(const DensityMatrix& rho, const SpectralDecomposition& basis_a,
                             const SpectralDecomposition& basis_b) {
  return mutual_information(rho, basis_a.dim(), basis_b.dim()) -
         correlated_coherence(rho, basis_a, basis_b);
}

double energy(const DensityMatrix& rho, const HermitianOperator& h) {
  if (rho.dim() != h.dim()) {
    std::ostringstream msg;
    msg << "energy: dimension mismatch " << rho.dim() << " vs " << h.dim();
    throw std::invalid_argument(msg.str());
  }
  return trace_product(rho.matrix(), h.matrix()).real();
}

DivergibleReal skew_information(const HermitianOperator& h, const DensityMatrix& rho,
                                double eig_floor) {
  if (rho.dim() != h.dim()) {
    std::ostringstream msg;
    msg << "skew_information: dimension mismatch " << rho.dim() << " vs " << h.dim();
    throw std::invalid_argument(msg.str());
  }
  const SpectralDecomposition dec = hermitian_eig(rho.hermitian());
  const std::size_t n = dec.dim();

  // h in rho's eigenbasis.
  const ComplexMatrix h_tilde =
      adjoint(dec.eigenvectors) * h.matrix() * dec.eigenvectors;
  const double coupling_tol = 1e-12 * std::max(1.0, max_abs(h_tilde));

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool i_kernel = dec.eigenvalues[i] <= eig_floor;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool j_kernel = dec.eigenvalues[j] <= eig_floor;
      if (i_kernel && j_kernel) continue;  // both factors vanish in the limit
      const double coupling = std::abs(h_tilde(i, j));
      if (i_kernel || j_kernel) {
        if (coupling > coupling_tol) return {0.0, true};
        continue;
      }
      const double dl = dec.eigenvalues[i] - dec.eigenvalues[j];
      const double dlog = std::log(dec.eigenvalues[i]) - std::log(dec.eigenvalues[j]);
      total += 2.0 * coupling * coupling * dl * dlog;
    }
  }
  return {total, false};
}

MeasureReport measure(const DensityMatrix& rho, const BipartiteSystem& sys) {
  if (rho.dim() != sys.dim()) {
    std::ostringstream msg;
    msg << "measure: state dim " << rho.dim() << " != system dim " << sys.dim();
    throw std::invalid_argument(msg.str());
  }
  const DensityMatrix rho_a =
      validate_state(partial_trace(rho.matrix(), sys.dim_a, sys.dim_b, Subsystem::A));
  const DensityMatrix rho_b =
      validate_state(partial_trace(rho.matrix(), sys.dim_a, sys.dim_b, Subsystem::B));

  MeasureReport report;
  report.s_a = von_neumann_entropy(rho_a);
  report.s_b = von_neumann_entropy(rho_b);
  report.s_ab = von_neumann_entropy(rho);
  report.mutual_info = report.s_a + report.s_b - report.s_ab;
  report.coherence = correlated_coherence(rho, sys.basis_a, sys.basis_b);
  report.classical = report.mutual_info - report.coherence;
  report.e_a = energy(rho_a, sys.h_a);
  report.e_b = energy(rho_b, sys.h_b);
  return report;
}

}  // namespace qheat
