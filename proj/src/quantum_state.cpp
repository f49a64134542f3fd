#include "qoc/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qoc {

DensityValidation validate_density(const Mat2& m) {
  DensityValidation r;
  r.hermiticity_residual =
      std::max({std::abs(m[0] - std::conj(m[0])), std::abs(m[1] - std::conj(m[2])),
                std::abs(m[3] - std::conj(m[3]))});
  r.trace_residual = std::abs(trace(m) - Complex(1.0));
  // det >= 0 is the positivity criterion for Hermitian unit-trace 2x2.
  r.determinant = std::real(m[0] * m[3] - m[1] * m[2]);
  r.hermitian = r.hermiticity_residual <= tol::density_validation;
  r.unit_trace = r.trace_residual <= tol::density_validation;
  r.positive = r.determinant >= -tol::density_validation;
  return r;
}

DensityMatrix::DensityMatrix(const Mat2& m) : m_(m) {
  const DensityValidation v = validate_density(m);
  if (!v.pass()) {
    std::ostringstream msg;
    msg << "invalid density matrix:";
    if (!v.hermitian)
      msg << " hermiticity residual " << v.hermiticity_residual << ";";
    if (!v.unit_trace) msg << " trace residual " << v.trace_residual << ";";
    if (!v.positive) msg << " determinant " << v.determinant << " < 0;";
    throw InvalidDensity(msg.str());
  }
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
  const Mat2& m = rho.elements();
  return {2.0 * std::real(m[1]), -2.0 * std::imag(m[1]),
          std::real(m[0] - m[3])};
}

DensityMatrix density_from_bloch(const BlochVector& x) {
  if (!x.in_ball()) {
    std::ostringstream msg;
    msg << "Bloch vector outside the unit ball: |x|^2 = " << x.norm2();
    throw OutsideBlochBall(msg.str());
  }
  return DensityMatrix{{0.5 * Complex(1.0 + x.x3),
                        0.5 * Complex(x.x1, -x.x2),
                        0.5 * Complex(x.x1, x.x2),
                        0.5 * Complex(1.0 - x.x3)}};
}

Vec3 bloch_image(const Mat2& m) {
  return {std::real(trace(m * pauli::x)), std::real(trace(m * pauli::y)),
          std::real(trace(m * pauli::z))};
}

Mat2 master_rhs_density(const DensityMatrix& rho, double v, double n,
                        const SystemParams& params) {
  if (n < 0.0)
    throw NegativeIncoherentControl("incoherent control n < 0: n = " +
                                    std::to_string(n));
  const Mat2& r = rho.elements();
  // H/hbar: only omega and kappa = mu/hbar enter observable dynamics.
  const Mat2 h{0.0, params.kappa * v, params.kappa * v, params.omega};
  const Mat2 spontaneous =
      pauli::plus * r * pauli::minus -
      0.5 * anticommutator(pauli::minus * pauli::plus, r);
  const Mat2 stimulated =
      pauli::plus * r * pauli::minus + pauli::minus * r * pauli::plus -
      0.5 * anticommutator(pauli::minus * pauli::plus +
                               pauli::plus * pauli::minus,
                           r);
  return Complex(0.0, -1.0) * commutator(h, r) +
         params.gamma * (n * stimulated + spontaneous);
}

}  // namespace qoc
