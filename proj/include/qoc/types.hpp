#pragma once

#include <array>
#include <cmath>

namespace qoc {

// Numerical tolerances, kept in one place.
namespace tol {
// Density-matrix invariant residuals (hermiticity, trace, positivity).
inline constexpr double density_validation = 1e-12;
// Slack on ||x|| <= 1 when accepting a Bloch vector.
inline constexpr double ball_membership = 1e-9;
// Slack on ball membership along integrated trajectories.
inline constexpr double trajectory_ball = 1e-6;
// Match between the density-matrix and Bloch right-hand sides.
inline constexpr double oracle_match = 1e-10;
}  // namespace tol

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline bool finite(const Vec3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

/// Point in the closed unit ball representing a density matrix.
struct BlochVector {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  Vec3 vec() const { return {x1, x2, x3}; }
  double norm2() const { return x1 * x1 + x2 * x2 + x3 * x3; }
  bool in_ball(double slack = tol::ball_membership) const {
    return norm2() <= 1.0 + slack;
  }
  static BlochVector from(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

/// Costate of the Bloch system.
struct AdjointVector {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;

  Vec3 vec() const { return {p1, p2, p3}; }
  static AdjointVector from(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

/// Model constants of the two-level system. Only omega, gamma and the
/// combined coupling kappa = mu/hbar enter the observable dynamics.
struct SystemParams {
  double omega = 1.0;   // transition frequency, rad/time
  double gamma = 2e-3;  // dissipation strength, 1/time
  double kappa = 1e-2;  // dipole coupling mu/hbar

  bool valid() const { return omega > 0.0 && gamma > 0.0 && kappa != 0.0; }
};

/// Box Q = [v_min, v_max] x [0, n_max] for the control pair (v, n).
struct ControlBounds {
  double v_min = -10.0;
  double v_max = 10.0;
  double n_max = 1.0;

  bool valid() const { return v_min <= v_max && n_max >= 0.0; }
  bool contains(double v, double n, double slack = 0.0) const {
    return v >= v_min - slack && v <= v_max + slack && n >= -slack &&
           n <= n_max + slack;
  }
};

}  // namespace qoc
