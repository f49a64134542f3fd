#pragma once

#include <array>
#include <complex>

#include "qoc/errors.hpp"
#include "qoc/types.hpp"

namespace qoc {

using Complex = std::complex<double>;

/// 2x2 complex matrix, row-major.
using Mat2 = std::array<Complex, 4>;

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
inline Mat2 operator*(Complex s, const Mat2& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}
inline Mat2 operator*(double s, const Mat2& a) { return Complex(s) * a; }
inline Complex trace(const Mat2& a) { return a[0] + a[3]; }
inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }
inline Mat2 anticommutator(const Mat2& a, const Mat2& b) {
  return a * b + b * a;
}

namespace pauli {
inline const Mat2 id{1.0, 0.0, 0.0, 1.0};
inline const Mat2 x{0.0, 1.0, 1.0, 0.0};
inline const Mat2 y{0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0};
inline const Mat2 z{1.0, 0.0, 0.0, -1.0};
inline const Mat2 plus{0.0, 1.0, 0.0, 0.0};   // raising, sigma^+
inline const Mat2 minus{0.0, 0.0, 1.0, 0.0};  // lowering, sigma^-
}  // namespace pauli

/// Per-invariant residuals of a candidate density matrix.
struct DensityValidation {
  double hermiticity_residual = 0.0;  // max |m[i][j] - conj(m[j][i])|
  double trace_residual = 0.0;        // |Tr m - 1|
  double determinant = 0.0;           // Re det m; >= -tol iff positive
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;

  bool pass() const { return hermitian && unit_trace && positive; }
};

DensityValidation validate_density(const Mat2& m);

/// Physical state: Hermitian, unit-trace, positive 2x2 matrix.
/// Construction validates; instances are immutable.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat2& m);

  const Mat2& elements() const { return m_; }
  Complex operator()(int i, int j) const { return m_[2 * i + j]; }

 private:
  Mat2 m_;
};

/// x_i = Tr(rho sigma_i).
BlochVector bloch_from_density(const DensityMatrix& rho);

/// rho = (I + x1 sigma1 + x2 sigma2 + x3 sigma3) / 2. Throws OutsideBlochBall.
DensityMatrix density_from_bloch(const BlochVector& x);

/// Bloch image of an arbitrary matrix: (Tr m sigma_1, Tr m sigma_2, Tr m sigma_3).
/// Real parts only; used to map RHS matrices, which are Hermitian.
Vec3 bloch_image(const Mat2& m);

/// Master-equation RHS at the density-matrix level,
///   -i [omega diag(0,1) + kappa v sigma_x, rho] + gamma D(rho, n),
/// kept as the independent oracle for the Bloch RHS. Throws
/// NegativeIncoherentControl for n < 0.
Mat2 master_rhs_density(const DensityMatrix& rho, double v, double n,
                        const SystemParams& params);

}  // namespace qoc
