#pragma once

// Dense complex linear algebra for small Hermitian problems (dims up to a few
// dozen). Deterministic by construction: a cyclic Jacobi eigensolver with a
// fixed sweep order and a fixed eigenvector phase convention, so repeated runs
// produce bit-identical results.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qheat {

using Complex = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, ComplexMatrix a);

ComplexMatrix adjoint(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);
// tr(a*b) accumulated directly, without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
// max element magnitude of a - a†.
double hermiticity_defect(const ComplexMatrix& a);

enum class Subsystem { A, B };

// Partial trace of a (dim_a*dim_b)-dimensional square matrix, keeping the
// requested factor and tracing out the other.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a,
                            std::size_t dim_b, Subsystem keep);

// Square matrix checked Hermitian on construction.
class HermitianOperator {
 public:
  static constexpr double kDefaultTol = 1e-12;

  explicit HermitianOperator(ComplexMatrix m, double tol = kDefaultTol);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns, phase-fixed

  std::size_t dim() const { return eigenvalues.size(); }
};

// Cyclic complex Jacobi diagonalization. Converged when the off-diagonal
// Frobenius norm falls below 1e-14 * ||A||_F. Eigenvalues are sorted
// ascending (stable under ties) and each eigenvector is rescaled so its
// largest-magnitude component (first such index on ties) is real positive.
SpectralDecomposition hermitian_eig(const HermitianOperator& a);

// V f(Lambda) V†. Throws if f produces a non-finite value at some eigenvalue.
// The _complex variant is for spectral maps with complex range (phases).
ComplexMatrix func_hermitian(const HermitianOperator& a,
                             const std::function<double(double)>& f);
ComplexMatrix func_hermitian_complex(const HermitianOperator& a,
                                     const std::function<Complex(double)>& f);

struct MatrixLogResult {
  ComplexMatrix log;     // log on the support; kernel directions contribute zero
  bool singular = false; // some eigenvalue was at or below the floor
};

// Matrix log of a positive semidefinite operator. Eigenvalues at or below
// eig_floor are treated as kernel and skipped (flagged via `singular`) so the
// caller can decide whether the kernel actually couples to anything.
// Eigenvalues below -eig_floor are rejected: the input was not PSD.
MatrixLogResult matrix_log_psd(const HermitianOperator& a, double eig_floor = 1e-12);

// Qubit operators in the {|0>, |1>} basis.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix qubit_sigma_plus();   // |0><1|
ComplexMatrix qubit_sigma_minus(); // |1><0|

}  // namespace qheat
