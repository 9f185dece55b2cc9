#include "qheat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qheat {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << op << ": shape mismatch, " << a.rows() << "x" << a.cols() << " vs "
        << b.rows() << "x" << b.cols();
    throw std::invalid_argument(msg.str());
  }
}

void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.is_square()) {
    std::ostringstream msg;
    msg << op << ": matrix must be square, got " << a.rows() << "x" << a.cols();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& v : data_) v *= scalar;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix a) { return a *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "operator*: inner dimension mismatch, " << a.cols() << " vs " << b.rows();
    throw std::invalid_argument(msg.str());
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

Complex trace(const ComplexMatrix& a) {
  require_square(a, "trace");
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    std::ostringstream msg;
    msg << "trace_product: incompatible shapes " << a.rows() << "x" << a.cols()
        << " and " << b.rows() << "x" << b.cols();
    throw std::invalid_argument(msg.str());
  }
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.is_square()) return max_abs(a);  // non-square can't be Hermitian
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a,
                            std::size_t dim_b, Subsystem keep) {
  require_square(m, "partial_trace");
  if (m.rows() != dim_a * dim_b) {
    std::ostringstream msg;
    msg << "partial_trace: matrix dim " << m.rows() << " != " << dim_a << "*"
        << dim_b;
    throw std::invalid_argument(msg.str());
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_b; ++k)
          out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t k = 0; k < dim_b; ++k)
    for (std::size_t l = 0; l < dim_b; ++l)
      for (std::size_t i = 0; i < dim_a; ++i)
        out(k, l) += m(i * dim_b + k, i * dim_b + l);
  return out;
}

HermitianOperator::HermitianOperator(ComplexMatrix m, double tol) : m_(std::move(m)) {
  require_square(m_, "HermitianOperator");
  const double defect = hermiticity_defect(m_);
  if (defect > tol) {
    std::ostringstream msg;
    msg << "HermitianOperator: matrix is not Hermitian, max |A - A†| element = "
        << defect << " exceeds tolerance " << tol;
    throw std::invalid_argument(msg.str());
  }
}

namespace {

// Off-diagonal Frobenius norm, the Jacobi convergence measure.
double off_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) sum += std::norm(a(i, j));
  return std::sqrt(2.0 * sum);
}

// Fix each eigenvector's global phase: rotate the largest-magnitude component
// (first such index on ties) onto the positive real axis.
void fix_phases(ComplexMatrix& v) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = 0;
    double best_mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, j));
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    if (best_mag == 0.0) continue;
    const Complex phase = std::conj(v(best, j)) / best_mag;
    for (std::size_t i = 0; i < n; ++i) v(i, j) *= phase;
  }
}

}  // namespace

SpectralDecomposition hermitian_eig(const HermitianOperator& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  // The Frobenius norm is invariant under the rotations, so thresholds
  // computed once stay valid for the whole iteration.
  const double scale = frobenius_norm(a);
  const double conv_tol = 1e-14 * scale;
  // Per-element skip threshold chosen so that when every off-diagonal entry
  // is at or below it, the off-diagonal norm is already at or below conv_tol;
  // a sweep can then never stall with the convergence test unsatisfied.
  const double skip_tol =
      n > 1 ? conv_tol / std::sqrt(static_cast<double>(n * (n - 1))) : 0.0;

  constexpr int kMaxSweeps = 128;
  int sweep = 0;
  while (n > 1 && off_norm(a) > conv_tol) {
    if (++sweep > kMaxSweeps) {
      std::ostringstream msg;
      msg << "hermitian_eig: no convergence after " << kMaxSweeps
          << " sweeps, off-diagonal norm = " << off_norm(a);
      throw std::runtime_error(msg.str());
    }
    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= skip_tol) continue;

        // 2x2 rotation zeroing a(p,q). With a(p,q) = r e^{i phi}, the complex
        // Givens parameters are c real and s = t*c*e^{-i phi} where t solves
        // t^2 - 2*tau*t - 1 = 0, tau = (a_qq - a_pp)/(2r); the smaller root is
        // taken for numerical stability.
        const Complex phase = apq / r;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = tau >= 0.0
                             ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const Complex s = t * c * std::conj(phase);

        // A <- U† A U and V <- V U with U acting on columns p, q:
        // U_pp = U_qq = c, U_qp = s, U_pq = -conj(s).
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp + s * akq;
          a(k, q) = -std::conj(s) * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + std::conj(s) * aqk;
          a(q, k) = -s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp + s * vkq;
          v(k, q) = -std::conj(s) * vkp + c * vkq;
        }
        // Clean the entries the rotation zeroed analytically.
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  SpectralDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    dec.eigenvalues[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) dec.eigenvectors(i, j) = v(i, order[j]);
  }
  fix_phases(dec.eigenvectors);
  return dec;
}

namespace {

ComplexMatrix assemble_function(const SpectralDecomposition& dec,
                                const std::vector<Complex>& fvals) {
  const std::size_t n = dec.dim();
  // V diag(f) V†, assembled column-scaled to avoid a third matrix product.
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += dec.eigenvectors(i, k) * fvals[k] * std::conj(dec.eigenvectors(j, k));
      out(i, j) = acc;
    }
  return out;
}

}  // namespace

ComplexMatrix func_hermitian(const HermitianOperator& a,
                             const std::function<double(double)>& f) {
  return func_hermitian_complex(a, [&f](double x) { return Complex(f(x), 0.0); });
}

ComplexMatrix func_hermitian_complex(const HermitianOperator& a,
                                     const std::function<Complex(double)>& f) {
  const SpectralDecomposition dec = hermitian_eig(a);
  std::vector<Complex> fvals(dec.dim());
  for (std::size_t k = 0; k < dec.dim(); ++k) {
    fvals[k] = f(dec.eigenvalues[k]);
    if (!std::isfinite(fvals[k].real()) || !std::isfinite(fvals[k].imag())) {
      std::ostringstream msg;
      msg << "func_hermitian: function not finite at eigenvalue "
          << dec.eigenvalues[k];
      throw std::invalid_argument(msg.str());
    }
  }
  return assemble_function(dec, fvals);
}

MatrixLogResult matrix_log_psd(const HermitianOperator& a, double eig_floor) {
  const SpectralDecomposition dec = hermitian_eig(a);
  MatrixLogResult result;
  std::vector<Complex> fvals(dec.dim());
  for (std::size_t k = 0; k < dec.dim(); ++k) {
    const double lambda = dec.eigenvalues[k];
    if (lambda < -eig_floor) {
      std::ostringstream msg;
      msg << "matrix_log_psd: eigenvalue " << lambda
          << " below -" << eig_floor << ", input is not positive semidefinite";
      throw std::invalid_argument(msg.str());
    }
    if (lambda <= eig_floor) {
      result.singular = true;
      fvals[k] = 0.0;  // kernel direction, excluded from the log
    } else {
      fvals[k] = std::log(lambda);
    }
  }
  result.log = assemble_function(dec, fvals);
  return result;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m(0, 1) = Complex(0.0, -1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

ComplexMatrix qubit_sigma_plus() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix qubit_sigma_minus() {
  ComplexMatrix m(2, 2);
  m(1, 0) = 1.0;
  return m;
}

}  // namespace qheat
