#include "qheat/expansion.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qheat {

namespace {

constexpr double kKernelCouplingTol = 1e-12;
constexpr double kFixedPointTol = 1e-10;

// Kernel coupling scale: entries of an operator expressed in some eigenbasis
// are compared against this to decide whether a formally divergent term has
// an actual nonzero coefficient.
double coupling_scale(const ComplexMatrix& m) {
  return kKernelCouplingTol * std::max(1.0, max_abs(m));
}

}  // namespace

ExpansionCoefficients coefficients(const DensityMatrix& rho, const BipartiteSystem& sys,
                                   double eig_floor) {
  if (rho.dim() != sys.dim()) {
    std::ostringstream msg;
    msg << "coefficients: state dim " << rho.dim() << " != system dim " << sys.dim();
    throw std::invalid_argument(msg.str());
  }
  const ComplexMatrix& h = sys.h_total.matrix();

  // First and second commutators: the drift is -i X1 and the second time
  // derivative of the state is -X2.
  const ComplexMatrix x1 = commutator(h, rho.matrix());
  const ComplexMatrix x2 = commutator(h, x1);

  // Frozen log of the product of marginals. A singular marginal makes it
  // undefined, and unlike the dephased-state channel there is no meaningful
  // support-restricted reading, so reject outright.
  const HermitianOperator rho_a = HermitianOperator(
      partial_trace(rho.matrix(), sys.dim_a, sys.dim_b, Subsystem::A), 1e-10);
  const HermitianOperator rho_b = HermitianOperator(
      partial_trace(rho.matrix(), sys.dim_a, sys.dim_b, Subsystem::B), 1e-10);
  const MatrixLogResult log_a = matrix_log_psd(rho_a, eig_floor);
  const MatrixLogResult log_b = matrix_log_psd(rho_b, eig_floor);
  if (log_a.singular || log_b.singular) {
    std::ostringstream msg;
    msg << "coefficients: singular marginal (subsystem "
        << (log_a.singular ? "A" : "B") << "), frozen-log derivatives undefined";
    throw std::invalid_argument(msg.str());
  }
  const ComplexMatrix log_prod =
      kron(log_a.log, ComplexMatrix::identity(sys.dim_b)) +
      kron(ComplexMatrix::identity(sys.dim_a), log_b.log);

  ExpansionCoefficients out;
  // d/dt[-tr(rho L)] = -tr(-i[H,rho] L) = -Im tr(X1 L) and the second
  // derivative brings in X2 with a Hermitian (real-trace) integrand.
  out.f1 = -trace_product(x1, log_prod).imag();
  out.f2 = 0.5 * trace_product(x2, log_prod).real();

  // Everything in the g family lives in the eigenbasis of the dephased state.
  const DensityMatrix pinched = dephase(rho, sys.basis_a, sys.basis_b);
  const SpectralDecomposition dec = hermitian_eig(pinched.hermitian());
  const std::size_t n = dec.dim();
  const ComplexMatrix& v = dec.eigenvectors;

  const ComplexMatrix x1_t = adjoint(v) * x1 * v;
  const ComplexMatrix x2_t = adjoint(v) * x2 * v;
  const ComplexMatrix drift_pinched =
      pinch_operator(x1, sys.basis_a, sys.basis_b);  // times -i, norm unchanged
  out.drift_pinched_norm = frobenius_norm(drift_pinched);
  const ComplexMatrix drift_t = adjoint(v) * drift_pinched * v;

  std::vector<bool> kernel(n);
  for (std::size_t k = 0; k < n; ++k) kernel[k] = dec.eigenvalues[k] <= eig_floor;

  // g1 and g2: traces against ln(pinched rho). The log is block diagonal, so
  // only the diagonal of X in the pinched eigenbasis enters; kernel diagonal
  // entries multiply ln(0) and flag a divergence when actually nonzero.
  const double tol_x1 = coupling_scale(x1_t);
  const double tol_x2 = coupling_scale(x2_t);
  double g1 = 0.0;
  double g2 = 0.0;
  double g2_kernel_sum = 0.0;
  bool ln_divergent = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (kernel[k]) {
      if (std::abs(x1_t(k, k)) > tol_x1) ln_divergent = true;
      if (std::abs(x2_t(k, k)) > tol_x2) {
        ln_divergent = true;
        g2_kernel_sum += x2_t(k, k).real();
      }
      continue;
    }
    const double lw = std::log(dec.eigenvalues[k]);
    g1 -= x1_t(k, k).imag() * lw;
    g2 += 0.5 * x2_t(k, k).real() * lw;
  }
  out.g1 = g1;
  out.g2 = g2;
  out.g2_ln_divergent = ln_divergent;
  if (ln_divergent) {
    // ln(w -> 0+) = -infinity, so the limit direction is set by the sign of
    // the kernel-diagonal sum of X2 (halved, like the finite part).
    const double s = 0.5 * g2_kernel_sum;
    if (std::abs(s) > tol_x2)
      out.g2_divergence_sign = s < 0.0 ? +1 : -1;
    else
      out.g2_divergence_sign = 0;
  }

  // g2r = tr(P(drift)^2 P(rho)^{-1})/2 on the support; a kernel row of the
  // pinched drift with any weight makes the inverse blow up.
  const double tol_drift = coupling_scale(drift_t);
  double g2r = 0.0;
  bool g2r_div = false;
  for (std::size_t k = 0; k < n; ++k) {
    double row = 0.0;
    for (std::size_t l = 0; l < n; ++l) row += std::norm(drift_t(k, l));
    if (kernel[k]) {
      if (std::sqrt(row) > tol_drift) g2r_div = true;
      continue;
    }
    g2r += 0.5 * row / dec.eigenvalues[k];
  }
  out.g2r = g2r;
  out.g2r_divergent = g2r_div;
  out.g2_divergent = out.g2_ln_divergent || out.g2r_divergent;
  return out;
}

RatioResult ratio(const ExpansionCoefficients& c, const RatioTolerances& tol) {
  RatioResult r;
  const bool f1_live = std::abs(c.f1) > tol.f_tol;
  const bool g1_live = std::abs(c.g1) > tol.g_tol;

  if (f1_live || g1_live) {
    r.order_used = 1;
    if (!g1_live) {
      r.status = RatioStatus::kDivergentToInfinity;
    } else {
      r.value = c.f1 / c.g1;
      r.status = RatioStatus::kOk;
    }
  } else {
    r.order_used = 2;
    const bool f2_live = std::abs(c.f2) > tol.f_tol;
    if (c.g2_divergent) {
      // Infinite denominator under a finite numerator.
      r.status = RatioStatus::kDivergentToZero;
    } else {
      const double denom = c.g2 - c.g2r;
      if (std::abs(denom) > tol.g_tol) {
        r.value = c.f2 / denom;
        r.status = RatioStatus::kOk;
      } else if (f2_live) {
        r.status = RatioStatus::kDivergentToInfinity;
      } else {
        r.status = RatioStatus::kIndeterminate;
      }
    }
  }
  r.scenario = classify_scenario(r, tol.scenario_tol);
  return r;
}

Scenario classify_scenario(const RatioResult& r, double scenario_tol) {
  switch (r.status) {
    case RatioStatus::kIndeterminate:
      return Scenario::kUnclassified;
    case RatioStatus::kDivergentToInfinity:
      return Scenario::kClassicallyMandated;
    case RatioStatus::kDivergentToZero:
      return Scenario::kInterConversion;
    case RatioStatus::kOk:
      break;
  }
  if (std::abs(r.value - 1.0) < scenario_tol) return Scenario::kCoherenceMandated;
  if (std::abs(r.value) < scenario_tol) return Scenario::kInterConversion;
  return Scenario::kMixed;
}

const char* to_string(RatioStatus status) {
  switch (status) {
    case RatioStatus::kOk:
      return "ok";
    case RatioStatus::kDivergentToZero:
      return "divergent-to-zero";
    case RatioStatus::kDivergentToInfinity:
      return "divergent-to-infinity";
    case RatioStatus::kIndeterminate:
      return "indeterminate";
  }
  return "unknown";
}

const char* to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kCoherenceMandated:
      return "coherence-mandated";
    case Scenario::kClassicallyMandated:
      return "classically-mandated";
    case Scenario::kInterConversion:
      return "inter-conversion";
    case Scenario::kMixed:
      return "mixed";
    case Scenario::kUnclassified:
      return "unclassified";
  }
  return "unknown";
}

DivergibleReal initial_acceleration(const DensityMatrix& rho0, const BipartiteSystem& sys,
                                    double eig_floor) {
  if (rho0.dim() != sys.dim()) {
    std::ostringstream msg;
    msg << "initial_acceleration: state dim " << rho0.dim() << " != system dim "
        << sys.dim();
    throw std::invalid_argument(msg.str());
  }
  const DensityMatrix pinched = dephase(rho0, sys.basis_a, sys.basis_b);
  const double defect = frobenius_norm(pinched.matrix() - rho0.matrix());
  if (defect > kFixedPointTol) {
    std::ostringstream msg;
    msg << "initial_acceleration: state is not a dephasing fixed point, "
        << "||dephased - rho|| = " << defect;
    throw std::invalid_argument(msg.str());
  }
  const DivergibleReal skew = skew_information(sys.h_total, rho0, eig_floor);
  if (skew.divergent) return {0.0, true};
  return {0.5 * skew.value, false};
}

}  // namespace qheat
