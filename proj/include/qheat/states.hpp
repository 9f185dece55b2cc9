#pragma once

// Quantum state construction and the bipartite system container: thermal
// (Gibbs) states, dephasing onto local energy eigenbases, product-of-marginals
// and zero-coherence interpolation states, plus a validation gate for
// user-supplied matrices.

#include <cstddef>
#include <optional>

#include "qheat/linalg.hpp"

namespace qheat {

// Density matrix checked on construction: Hermitian within 1e-12, unit trace
// within 1e-10, eigenvalues >= -1e-10. Instances are trusted downstream.
class DensityMatrix {
 public:
  static constexpr double kHermTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigTol = 1e-10;

  explicit DensityMatrix(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }
  HermitianOperator hermitian() const { return HermitianOperator(m_, kHermTol); }

 private:
  ComplexMatrix m_;
};

struct ValidationReport {
  double clipped = 0.0;       // total magnitude of negative eigenvalues clipped
  double trace_defect = 0.0;  // |tr - 1| before renormalization
};

// Repair gate for matrices of uncertain provenance: symmetrizes roundoff-level
// asymmetry, clips eigenvalues in [-1e-10, 0) to zero, renormalizes the trace.
// Rejects |tr - 1| > 1e-6, eigenvalues below -1e-10, or asymmetry above 1e-9.
// Inputs already satisfying the strict invariants pass through bit-identical.
DensityMatrix validate_state(const ComplexMatrix& m, ValidationReport* report = nullptr);

struct ThermalParams {
  double temperature = 0.0;  // required > 0, natural units (k = 1)

  double beta() const { return 1.0 / temperature; }
};

// Gibbs state exp(-beta H)/Z. Computed in H's eigenbasis with the exponent
// shifted by the smallest eigenvalue, so large beta*||H|| cannot overflow.
DensityMatrix thermal_state(const HermitianOperator& h, const ThermalParams& params);

// Group indices of near-degenerate eigenvalues: entry i gets the group id of
// eigenvalue i, where a new group starts when the gap to the previous
// (ascending) eigenvalue reaches 1e-10 * max(1, largest |eigenvalue|).
std::vector<std::size_t> degenerate_groups(const SpectralDecomposition& dec);

// Projection onto the blocks of the product eigenbasis of the two local
// decompositions (degenerate local levels are projected jointly). Removes
// exactly the coherences the correlated-coherence measure counts.
DensityMatrix dephase(const DensityMatrix& rho, const SpectralDecomposition& basis_a,
                      const SpectralDecomposition& basis_b);

// Same projection applied to an arbitrary equal-dimension operator (used for
// the drift term when checking pinched-derivative conditions).
ComplexMatrix pinch_operator(const ComplexMatrix& m, const SpectralDecomposition& basis_a,
                             const SpectralDecomposition& basis_b);

DensityMatrix product_of_marginals(const DensityMatrix& rho, std::size_t dim_a,
                                   std::size_t dim_b);

// Diagonal two-qubit state with the given diagonal single-qubit marginals and
// interpolation parameter p in [0, 1]: populations
//   (pA0 - p*pB1, p*pB1, pB0 + p*pB1 - pA0, (1-p)*pB1)
// in the product basis {|00>, |01>, |10>, |11>}. The marginals fix three of
// the four populations; p parametrizes the remaining freedom. Throws when a
// population would go negative, naming the offending basis state; the
// admissible interval is max(0, (pA0-pB0)/pB1) <= p <= min(1, pA0/pB1).
DensityMatrix zero_cc_state(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                            double p);

// Two finite-dimensional systems with local Hamiltonians and a coupling term.
// The local eigendecompositions double as the reference (dephasing) bases.
struct BipartiteSystem {
  std::size_t dim_a;
  std::size_t dim_b;
  HermitianOperator h_a;
  HermitianOperator h_b;
  HermitianOperator h_int;
  HermitianOperator h_total;  // h_a (x) 1 + 1 (x) h_b + h_int
  SpectralDecomposition basis_a;
  SpectralDecomposition basis_b;
  // Spectral-norm ratio ||h_int|| / min(||h_a||, ||h_b||). The perturbative
  // expansions assume this is small; assemble() warns on stderr above 0.5.
  double coupling_ratio;

  std::size_t dim() const { return dim_a * dim_b; }

  static BipartiteSystem assemble(HermitianOperator h_a, HermitianOperator h_b,
                                  HermitianOperator h_int);
};

}  // namespace qheat
