#pragma once

// Physical fluxes and two-point numerical fluxes. Directions are 0-based:
// dir = 0 .. Dim-1 selects the x_{dir+1} flux F_{dir+1}.

#include <cassert>
#include <cmath>

#include "urel/state.hpp"

namespace urel {

/// Momentum rows p delta_ik + 4 p u_i u_k, energy row 4 p u_k sqrt(1 + |u|^2).
template <int Dim>
ConsVec<Dim> physical_flux(const PrimState<Dim>& s, int dir) {
  assert(dir >= 0 && dir < Dim);
  const double pu = 4.0 * s.p() * s.u(dir);
  ConsVec<Dim> f;
  for (int i = 0; i < Dim; ++i) f[i] = pu * s.u(i);
  f[dir] += s.p();
  f[Dim] = pu * s.lorentz();
  return f;
}

/// D_w F_dir. The momentum block is
///   -2 lf/g e_k u^T + (u_k/lf) I + (1/lf) u e_k^T + 2 u_k/(lf g) u u^T
/// with lf = sqrt(1+|u|^2), g = 3 + 2|u|^2; the last column is
///   (1+2|u|^2)/g e_k - 4 u_k/g u,
/// and the energy row is e_k^T extended by 0.
template <int Dim>
Matrix<Dim + 1> flux_jacobian(const PrimState<Dim>& s, int dir) {
  assert(dir >= 0 && dir < Dim);
  const double u2 = s.u_sq();
  const double lf = s.lorentz();
  const double g = 3.0 + 2.0 * u2;
  const double uk = s.u(dir);
  Matrix<Dim + 1> jac{};
  for (int i = 0; i < Dim; ++i) {
    for (int j = 0; j < Dim; ++j) {
      double a = 2.0 * uk / (lf * g) * s.u(i) * s.u(j);
      if (i == j) a += uk / lf;
      if (i == dir) a -= 2.0 * lf / g * s.u(j);
      if (j == dir) a += s.u(i) / lf;
      jac[i][j] = a;
    }
    jac[i][Dim] = -4.0 * uk / g * s.u(i) + (i == dir ? (1.0 + 2.0 * u2) / g : 0.0);
  }
  jac[Dim][dir] = 1.0;
  return jac;
}

/// Per-state quantities entering the entropy-conservative flux.
template <int Dim>
struct EcPoint {
  double p;
  double sqrt_p;
  /// u_i p^{-1/4}
  Vec<Dim> z;
  /// p^{-1/4} sqrt(1 + |u|^2)
  double e;

  explicit EcPoint(const PrimState<Dim>& s) : p(s.p()), sqrt_p(std::sqrt(s.p())) {
    const double r = 1.0 / std::sqrt(sqrt_p);
    for (int i = 0; i < Dim; ++i) z[i] = s.u(i) * r;
    e = r * s.lorentz();
  }
};

/// Entropy-conservative two-point flux:
///   F_i     = 2 (p_L sqrt(p_R) + p_R sqrt(p_L)) {u_i p^{-1/4}} {u_k p^{-1/4}} + {p} delta_ik
///   F_{d+1} = 2 (p_L sqrt(p_R) + p_R sqrt(p_L)) {p^{-1/4} sqrt(1+|u|^2)} {u_k p^{-1/4}}
/// with {a} the arithmetic mean. Every operation is commutative in (L, R),
/// so the flux is bitwise symmetric.
template <int Dim>
ConsVec<Dim> ec_flux(const EcPoint<Dim>& a, const EcPoint<Dim>& b, int dir) {
  const double pre = 2.0 * (a.p * b.sqrt_p + b.p * a.sqrt_p);
  const double zk = 0.5 * (a.z[dir] + b.z[dir]);
  const double pz = pre * zk;
  ConsVec<Dim> f;
  for (int i = 0; i < Dim; ++i) f[i] = pz * (0.5 * (a.z[i] + b.z[i]));
  f[dir] += 0.5 * (a.p + b.p);
  f[Dim] = pz * (0.5 * (a.e + b.e));
  return f;
}

template <int Dim>
ConsVec<Dim> ec_flux(const PrimState<Dim>& left, const PrimState<Dim>& right, int dir) {
  assert(dir >= 0 && dir < Dim);
  return ec_flux(EcPoint<Dim>(left), EcPoint<Dim>(right), dir);
}

/// Upper bound on all characteristic speeds: the speed of light.
template <int Dim>
constexpr double max_wave_speed(const PrimState<Dim>&, const PrimState<Dim>&) {
  return 1.0;
}

/// Local Lax-Friedrichs flux from precomputed physical fluxes and conserved vectors.
template <int Dim>
ConsVec<Dim> rusanov_flux(const ConsVec<Dim>& f_left, const ConsVec<Dim>& f_right,
                          const ConsVec<Dim>& w_left, const ConsVec<Dim>& w_right,
                          double lambda) {
  ConsVec<Dim> f;
  for (int i = 0; i <= Dim; ++i) {
    f[i] = 0.5 * (f_left[i] + f_right[i]) - 0.5 * lambda * (w_right[i] - w_left[i]);
  }
  return f;
}

template <int Dim>
ConsVec<Dim> rusanov_flux(const PrimState<Dim>& left, const PrimState<Dim>& right, int dir) {
  return rusanov_flux<Dim>(physical_flux(left, dir), physical_flux(right, dir),
                           cons_vector(left), cons_vector(right),
                           max_wave_speed(left, right));
}

}  // namespace urel
