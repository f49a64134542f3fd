#pragma once

#include "qoc/types.hpp"

namespace qoc {

/// Controlled Bloch system. Controls are taken as-is; bound enforcement
/// belongs to the optimizer's projection step.
inline Vec3 bloch_rhs(const BlochVector& x, double v, double n,
                      const SystemParams& prm) {
  const double g = prm.gamma, w = prm.omega, k = prm.kappa;
  return {-0.5 * g * x.x1 + w * x.x2 - g * x.x1 * n,
          -w * x.x1 - 0.5 * g * x.x2 - 2.0 * k * x.x3 * v - g * x.x2 * n,
          2.0 * k * x.x2 * v - g * x.x3 + g - 2.0 * g * x.x3 * n};
}

/// Conjugate system. Linear homogeneous in p; does not depend on x.
inline Vec3 adjoint_rhs(const AdjointVector& p, double v, double n,
                        const SystemParams& prm) {
  const double g = prm.gamma, w = prm.omega, k = prm.kappa;
  return {0.5 * g * p.p1 + g * p.p1 * n + w * p.p2,
          -w * p.p1 + 0.5 * g * p.p2 + g * p.p2 * n - 2.0 * k * p.p3 * v,
          2.0 * k * p.p2 * v + g * p.p3 + 2.0 * g * p.p3 * n};
}

struct Switching {
  double k_v = 0.0;  // dH/dv
  double k_n = 0.0;  // dH/dn
};

inline Switching switching_functions(const AdjointVector& p,
                                     const BlochVector& x,
                                     const SystemParams& prm) {
  return {2.0 * prm.kappa * (p.p3 * x.x2 - p.p2 * x.x3),
          -prm.gamma * (p.p1 * x.x1 + p.p2 * x.x2 + 2.0 * p.p3 * x.x3)};
}

/// Transversality condition p(T) = -2 (x(T) - x_target).
inline AdjointVector terminal_adjoint(const BlochVector& x_T,
                                      const BlochVector& x_target) {
  return {-2.0 * (x_T.x1 - x_target.x1), -2.0 * (x_T.x2 - x_target.x2),
          -2.0 * (x_T.x3 - x_target.x3)};
}

/// H(p, x, u) = K_v v + K_n n + H~(p, x); equals dot(p, bloch_rhs(x, v, n)).
inline double pontryagin_h(const AdjointVector& p, const BlochVector& x,
                           double v, double n, const SystemParams& prm) {
  const double g = prm.gamma, w = prm.omega;
  const Switching K = switching_functions(p, x, prm);
  const double h_free = p.p1 * (-0.5 * g * x.x1 + w * x.x2) +
                        p.p2 * (-w * x.x1 - 0.5 * g * x.x2) +
                        p.p3 * (g - g * x.x3);
  return K.k_v * v + K.k_n * n + h_free;
}

}  // namespace qoc
