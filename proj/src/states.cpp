#include "qheat/states.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qheat {

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_square() || m_.rows() == 0)
    throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");

  const double defect = hermiticity_defect(m_);
  if (defect > kHermTol) {
    std::ostringstream msg;
    msg << "DensityMatrix: not Hermitian, max |A - A†| element = " << defect;
    throw std::invalid_argument(msg.str());
  }

  const double trace_defect = std::abs(trace(m_) - Complex(1.0, 0.0));
  if (trace_defect > kTraceTol) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace deviates from 1 by " << trace_defect;
    throw std::invalid_argument(msg.str());
  }

  const SpectralDecomposition dec = hermitian_eig(HermitianOperator(m_, kHermTol));
  if (dec.eigenvalues.front() < -kEigTol) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << dec.eigenvalues.front();
    throw std::invalid_argument(msg.str());
  }
}

DensityMatrix validate_state(const ComplexMatrix& m, ValidationReport* report) {
  if (!m.is_square() || m.rows() == 0)
    throw std::invalid_argument("validate_state: matrix must be square and non-empty");

  const double defect = hermiticity_defect(m);
  if (defect > 1e-9) {
    std::ostringstream msg;
    msg << "validate_state: asymmetry " << defect << " too large to repair";
    throw std::invalid_argument(msg.str());
  }

  const double tr = trace(m).real();
  const double trace_defect = std::abs(trace(m) - Complex(1.0, 0.0));
  if (trace_defect > 1e-6) {
    std::ostringstream msg;
    msg << "validate_state: trace deviates from 1 by " << trace_defect;
    throw std::invalid_argument(msg.str());
  }
  if (report) report->trace_defect = trace_defect;

  ComplexMatrix sym = m;
  if (defect > 0.0) {
    ComplexMatrix adj = adjoint(m);
    sym += adj;
    sym *= Complex(0.5, 0.0);
    for (std::size_t i = 0; i < sym.rows(); ++i)
      sym(i, i) = Complex(sym(i, i).real(), 0.0);
  }

  SpectralDecomposition dec = hermitian_eig(HermitianOperator(sym, 1e-9));
  double clipped = 0.0;
  for (double& lambda : dec.eigenvalues) {
    if (lambda < -DensityMatrix::kEigTol) {
      std::ostringstream msg;
      msg << "validate_state: eigenvalue " << lambda << " below -"
          << DensityMatrix::kEigTol << ", not a state";
      throw std::invalid_argument(msg.str());
    }
    if (lambda < 0.0) {
      clipped += -lambda;
      lambda = 0.0;
    }
  }
  if (report) report->clipped = clipped;

  // Nothing to repair: hand the caller's matrix through untouched.
  if (defect == 0.0 && clipped == 0.0 && trace_defect <= DensityMatrix::kTraceTol)
    return DensityMatrix(m);

  const std::size_t n = sym.rows();
  double sum = 0.0;
  for (double lambda : dec.eigenvalues) sum += lambda;
  (void)tr;
  ComplexMatrix repaired(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += dec.eigenvectors(i, k) * (dec.eigenvalues[k] / sum) *
               std::conj(dec.eigenvectors(j, k));
      repaired(i, j) = acc;
    }
  for (std::size_t i = 0; i < n; ++i)
    repaired(i, i) = Complex(repaired(i, i).real(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (repaired(i, j) + std::conj(repaired(j, i)));
      repaired(i, j) = avg;
      repaired(j, i) = std::conj(avg);
    }
  return DensityMatrix(std::move(repaired));
}

DensityMatrix thermal_state(const HermitianOperator& h, const ThermalParams& params) {
  if (!(params.temperature > 0.0) || !std::isfinite(params.temperature)) {
    std::ostringstream msg;
    msg << "thermal_state: temperature must be positive and finite, got "
        << params.temperature;
    throw std::invalid_argument(msg.str());
  }
  const double beta = params.beta();
  const SpectralDecomposition dec = hermitian_eig(h);
  const double lambda_min = dec.eigenvalues.front();

  const std::size_t n = dec.dim();
  std::vector<double> weights(n);
  double z = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // Shifted exponent: exp(-beta*(E - E_min)) is at most 1, so deep
    // low-temperature parameters cannot overflow; underflow to 0 is benign.
    weights[k] = std::exp(-beta * (dec.eigenvalues[k] - lambda_min));
    z += weights[k];
  }

  ComplexMatrix rho(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += dec.eigenvectors(i, k) * (weights[k] / z) *
               std::conj(dec.eigenvectors(j, k));
      rho(i, j) = acc;
    }
  for (std::size_t i = 0; i < n; ++i) rho(i, i) = Complex(rho(i, i).real(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = avg;
      rho(j, i) = std::conj(avg);
    }
  return DensityMatrix(std::move(rho));
}

std::vector<std::size_t> degenerate_groups(const SpectralDecomposition& dec) {
  const std::size_t n = dec.dim();
  std::vector<std::size_t> groups(n, 0);
  if (n == 0) return groups;
  double max_abs_eig = 0.0;
  for (double lambda : dec.eigenvalues)
    max_abs_eig = std::max(max_abs_eig, std::abs(lambda));
  const double gap_tol = 1e-10 * std::max(1.0, max_abs_eig);

  std::size_t group = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (dec.eigenvalues[i] - dec.eigenvalues[i - 1] >= gap_tol) ++group;
    groups[i] = group;
  }
  return groups;
}

namespace {

ComplexMatrix pinch_impl(const ComplexMatrix& m, const SpectralDecomposition& basis_a,
                         const SpectralDecomposition& basis_b) {
  const std::size_t da = basis_a.dim();
  const std::size_t db = basis_b.dim();
  if (m.rows() != da * db || !m.is_square()) {
    std::ostringstream msg;
    msg << "pinch: operator dim " << m.rows() << " != " << da << "*" << db;
    throw std::invalid_argument(msg.str());
  }
  const std::vector<std::size_t> ga = degenerate_groups(basis_a);
  const std::vector<std::size_t> gb = degenerate_groups(basis_b);

  const ComplexMatrix u = kron(basis_a.eigenvectors, basis_b.eigenvectors);
  ComplexMatrix tilde = adjoint(u) * m * u;
  // Kill every element connecting distinct local eigenvalue groups; elements
  // inside a degenerate block survive, which is what makes the projection a
  // basis-independent pinching rather than plain diagonal truncation.
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < db; ++k)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t l = 0; l < db; ++l)
          if (ga[i] != ga[j] || gb[k] != gb[l]) tilde(i * db + k, j * db + l) = 0.0;
  return u * tilde * adjoint(u);
}

}  // namespace

DensityMatrix dephase(const DensityMatrix& rho, const SpectralDecomposition& basis_a,
                      const SpectralDecomposition& basis_b) {
  ComplexMatrix pinched = pinch_impl(rho.matrix(), basis_a, basis_b);
  return validate_state(pinched);
}

ComplexMatrix pinch_operator(const ComplexMatrix& m, const SpectralDecomposition& basis_a,
                             const SpectralDecomposition& basis_b) {
  return pinch_impl(m, basis_a, basis_b);
}

DensityMatrix product_of_marginals(const DensityMatrix& rho, std::size_t dim_a,
                                   std::size_t dim_b) {
  const ComplexMatrix ra = partial_trace(rho.matrix(), dim_a, dim_b, Subsystem::A);
  const ComplexMatrix rb = partial_trace(rho.matrix(), dim_a, dim_b, Subsystem::B);
  const DensityMatrix rho_a = validate_state(ra);
  const DensityMatrix rho_b = validate_state(rb);
  return validate_state(kron(rho_a.matrix(), rho_b.matrix()));
}

DensityMatrix zero_cc_state(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                            double p) {
  if (rho_a.dim() != 2 || rho_b.dim() != 2)
    throw std::invalid_argument("zero_cc_state: defined for two-level marginals only");
  const double off_a = std::abs(rho_a.matrix()(0, 1));
  const double off_b = std::abs(rho_b.matrix()(0, 1));
  if (off_a > 1e-12 || off_b > 1e-12) {
    std::ostringstream msg;
    msg << "zero_cc_state: marginals must be diagonal, off-diagonal magnitudes "
        << off_a << ", " << off_b;
    throw std::invalid_argument(msg.str());
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "zero_cc_state: p must lie in [0, 1], got " << p;
    throw std::invalid_argument(msg.str());
  }

  const double a0 = rho_a.matrix()(0, 0).real();
  const double b0 = rho_b.matrix()(0, 0).real();
  const double b1 = rho_b.matrix()(1, 1).real();

  const double pops[4] = {a0 - p * b1, p * b1, b0 + p * b1 - a0, (1.0 - p) * b1};
  static const char* kLabels[4] = {"|00>", "|01>", "|10>", "|11>"};
  for (int i = 0; i < 4; ++i) {
    if (pops[i] < -1e-14) {
      std::ostringstream msg;
      msg << "zero_cc_state: population of " << kLabels[i] << " would be "
          << pops[i] << " at p = " << p
          << "; admissible p range is [max(0,(pA0-pB0)/pB1), min(1, pA0/pB1)]";
      throw std::invalid_argument(msg.str());
    }
  }

  ComplexMatrix rho(4, 4);
  for (int i = 0; i < 4; ++i) rho(i, i) = std::max(pops[i], 0.0);
  return validate_state(rho);
}

BipartiteSystem BipartiteSystem::assemble(HermitianOperator h_a, HermitianOperator h_b,
                                          HermitianOperator h_int) {
  const std::size_t da = h_a.dim();
  const std::size_t db = h_b.dim();
  if (h_int.dim() != da * db) {
    std::ostringstream msg;
    msg << "BipartiteSystem: coupling dim " << h_int.dim() << " != " << da << "*"
        << db;
    throw std::invalid_argument(msg.str());
  }

  ComplexMatrix total = kron(h_a.matrix(), ComplexMatrix::identity(db)) +
                        kron(ComplexMatrix::identity(da), h_b.matrix()) +
                        h_int.matrix();

  SpectralDecomposition basis_a = hermitian_eig(h_a);
  SpectralDecomposition basis_b = hermitian_eig(h_b);

  const auto spectral_norm = [](const HermitianOperator& h) {
    const SpectralDecomposition dec = hermitian_eig(h);
    return std::max(std::abs(dec.eigenvalues.front()), std::abs(dec.eigenvalues.back()));
  };
  const double local_norm = std::min(spectral_norm(h_a), spectral_norm(h_b));
  const double int_norm = spectral_norm(h_int);
  double ratio;
  if (local_norm > 0.0)
    ratio = int_norm / local_norm;
  else
    ratio = int_norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;

  if (ratio > 0.5)
    std::cerr << "warning: coupling ratio " << ratio
              << " exceeds 0.5; the perturbative expansion assumes weak coupling\n";

  return BipartiteSystem{da,
                         db,
                         std::move(h_a),
                         std::move(h_b),
                         std::move(h_int),
                         HermitianOperator(std::move(total)),
                         std::move(basis_a),
                         std::move(basis_b),
                         ratio};
}

}  // namespace qheat
