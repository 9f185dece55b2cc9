#pragma once

// Shared helpers for the unit and acceptance tests: seeded generators for
// random Hermitian matrices, density matrices, and random two-qubit exchange
// systems with diagonal zero-coherence states. Everything is driven by
// std::mt19937_64 with explicit seeds so failures reproduce exactly.

#include <cmath>
#include <random>

#include "qheat/linalg.hpp"
#include "qheat/states.hpp"

namespace qheat::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
  return m;
}

inline HermitianOperator random_hermitian(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix g = random_matrix(rng, n);
  ComplexMatrix h = g + adjoint(g);
  h *= 0.5;
  // Exact symmetrization so the constructor tolerance is never an issue.
  for (std::size_t i = 0; i < n; ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
  return HermitianOperator(std::move(h));
}

// Full-rank random state G G† / tr(G G†).
inline DensityMatrix random_density(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix g = random_matrix(rng, n);
  ComplexMatrix rho = g * adjoint(g);
  // Add a small multiple of the identity to keep eigenvalues well off zero.
  ComplexMatrix eye = ComplexMatrix::identity(n);
  eye *= Complex(0.05 * static_cast<double>(n), 0.0);
  rho += eye;
  const double tr = trace(rho).real();
  rho *= Complex(1.0 / tr, 0.0);
  return validate_state(rho);
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  return hermitian_eig(random_hermitian(rng, n)).eigenvectors;
}

// Random two-qubit instance: local level splittings, a phase-twisted exchange
// coupling, thermal marginals, and a diagonal zero-coherence state at an
// interpolation parameter drawn from the interior of the admissible interval.
struct ExchangeInstance {
  BipartiteSystem sys;
  DensityMatrix rho;
};

// Returns false (leaving `out` empty) when the drawn parameters give a state
// with a population below 1e-8; callers skip those draws.
inline bool random_exchange_instance(std::mt19937_64& rng,
                                     std::optional<ExchangeInstance>& out) {
  const double omega_a = uniform(rng, 20.0, 150.0);
  const double omega_b = uniform(rng, 20.0, 150.0);
  const double gamma = uniform(rng, 0.5, 20.0);
  const double t_a = uniform(rng, 5.0, 50.0);
  const double t_b = uniform(rng, 5.0, 50.0);
  const double phi = uniform(rng, 0.0, 2.0 * M_PI);

  ComplexMatrix ha = pauli_z();
  ha *= Complex(-omega_a / 2.0, 0.0);
  ComplexMatrix hb = pauli_z();
  hb *= Complex(-omega_b / 2.0, 0.0);

  const Complex twist = std::polar(gamma / 2.0, phi);
  ComplexMatrix hi = kron(qubit_sigma_plus(), qubit_sigma_minus());
  hi *= twist;
  ComplexMatrix hi_dag = adjoint(hi);
  hi += hi_dag;

  BipartiteSystem sys = BipartiteSystem::assemble(
      HermitianOperator(std::move(ha)), HermitianOperator(std::move(hb)),
      HermitianOperator(std::move(hi)));

  const DensityMatrix rho_a = thermal_state(sys.h_a, ThermalParams{t_a});
  const DensityMatrix rho_b = thermal_state(sys.h_b, ThermalParams{t_b});
  const double a0 = rho_a.matrix()(0, 0).real();
  const double b0 = rho_b.matrix()(0, 0).real();
  const double b1 = rho_b.matrix()(1, 1).real();

  const double p_min = std::max(0.0, (a0 - b0) / b1);
  const double p_max = std::min(1.0, a0 / b1);
  const double margin = 0.05 * (p_max - p_min);
  const double p = uniform(rng, p_min + margin, p_max - margin);

  const double pops[4] = {a0 - p * b1, p * b1, b0 + p * b1 - a0, (1.0 - p) * b1};
  for (double q : pops)
    if (q < 1e-8) return false;

  DensityMatrix rho = zero_cc_state(rho_a, rho_b, p);
  out.emplace(ExchangeInstance{std::move(sys), std::move(rho)});
  return true;
}

}  // namespace qheat::testing
