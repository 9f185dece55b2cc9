#pragma once

// Information-theoretic and energetic functionals of states: entropies,
// mutual information and its split into basis coherence and classical
// correlation, energies, and the commutator-based skew information.
// All entropies are in nats (natural log).

#include "qheat/linalg.hpp"
#include "qheat/states.hpp"

namespace qheat {

// A real quantity that may be +infinite in exact arithmetic. When `divergent`
// is set the `value` field carries no information; consumers decide how to
// render or propagate the divergence.
struct DivergibleReal {
  double value = 0.0;
  bool divergent = false;
};

// -tr(rho ln rho); eigenvalues at or below eig_floor contribute zero.
double von_neumann_entropy(const DensityMatrix& rho, double eig_floor = 1e-12);

// tr(rho (ln rho - ln sigma)). Divergent when rho puts more than support_tol
// of weight on sigma's kernel.
DivergibleReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                double support_tol = 1e-10, double eig_floor = 1e-12);

// S_A + S_B - S_AB.
double mutual_information(const DensityMatrix& rho, std::size_t dim_a,
                          std::size_t dim_b);

// Entropy gained by projecting onto the local eigenbasis blocks:
// S(dephased rho) - S(rho). Zero exactly when rho is already block-diagonal.
double correlated_coherence(const DensityMatrix& rho, const SpectralDecomposition& basis_a,
                            const SpectralDecomposition& basis_b);

// Mutual information minus correlated coherence: the part of the correlations
// that survives dephasing.
double classical_correlation(const DensityMatrix& rho, const SpectralDecomposition& basis_a,
                             const SpectralDecomposition& basis_b);

// tr(rho h).
double energy(const DensityMatrix& rho, const HermitianOperator& h);

// -tr{[h, rho][h, ln rho]}, evaluated in rho's eigenbasis as
// sum_{ij} |h_ij|^2 (lambda_i - lambda_j)(ln lambda_i - ln lambda_j), which is
// non-negative term by term. Divergent when h couples rho's kernel to its
// support (the ln factor has no finite limit there).
DivergibleReal skew_information(const HermitianOperator& h, const DensityMatrix& rho,
                                double eig_floor = 1e-12);

// One-shot bundle of the standard per-state diagnostics for a bipartite
// system. `divergent` is always false here; the field exists so callers can
// merge in divergence-capable quantities under one reporting type.
struct MeasureReport {
  double s_a = 0.0;
  double s_b = 0.0;
  double s_ab = 0.0;
  double mutual_info = 0.0;
  double coherence = 0.0;
  double classical = 0.0;
  double e_a = 0.0;
  double e_b = 0.0;
  bool divergent = false;
};

MeasureReport measure(const DensityMatrix& rho, const BipartiteSystem& sys);

}  // namespace qheat
