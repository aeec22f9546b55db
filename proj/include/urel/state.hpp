#pragma once

// State algebra of the ultra-relativistic perfect gas (equation of state e = 3p).
//
// Conserved variables (d momentum densities followed by the energy density):
//   w_j     = 4 p u_j sqrt(1 + |u|^2),   j = 1..d
//   w_{d+1} = p (3 + 4 |u|^2)
// where p > 0 is the pressure and u the spatial part of the four-velocity.
// The physical entropy eta = p^{3/4} sqrt(1 + |u|^2) is concave in w.

#include <array>
#include <cmath>
#include <sstream>

#include "urel/errors.hpp"

namespace urel {

template <int Dim>
using Vec = std::array<double, Dim>;

template <int Dim>
using ConsVec = std::array<double, Dim + 1>;

template <int N>
using Matrix = std::array<std::array<double, N>, N>;

template <int Dim>
inline double dot(const Vec<Dim>& a, const Vec<Dim>& b) {
  double s = 0.0;
  for (int i = 0; i < Dim; ++i) s += a[i] * b[i];
  return s;
}

/// Pressure and spatial four-velocity. Validated at construction.
template <int Dim>
class PrimState {
  static_assert(Dim >= 1 && Dim <= 3, "dimension must be 1, 2 or 3");

 public:
  static constexpr int dim = Dim;

  PrimState(double p, const Vec<Dim>& u) : p_(p), u_(u) {
    bool finite = std::isfinite(p);
    for (double c : u) finite = finite && std::isfinite(c);
    if (!finite || !(p > 0.0)) {
      std::ostringstream msg;
      msg << "invalid primitive state: p = " << p;
      throw DegenerateState(msg.str());
    }
    u_sq_ = dot<Dim>(u_, u_);
    lorentz_ = std::sqrt(1.0 + u_sq_);
  }

  double p() const { return p_; }
  const Vec<Dim>& u() const { return u_; }
  double u(int i) const { return u_[i]; }
  /// |u|^2
  double u_sq() const { return u_sq_; }
  /// u_0 = sqrt(1 + |u|^2), the Lorentz factor.
  double lorentz() const { return lorentz_; }

 private:
  double p_;
  Vec<Dim> u_;
  double u_sq_;
  double lorentz_;
};

/// Conserved vector w. Requires w_{d+1} > 0 and 3|w_bar|^2 < 4 w_{d+1}^2.
template <int Dim>
class ConsState {
 public:
  static constexpr int dim = Dim;

  explicit ConsState(const ConsVec<Dim>& w) : w_(w) {
    bool finite = true;
    for (double c : w) finite = finite && std::isfinite(c);
    const double e = w[Dim];
    double m_sq = 0.0;
    for (int i = 0; i < Dim; ++i) m_sq += w[i] * w[i];
    if (!finite || !(e > 0.0) || !(4.0 * e * e - 3.0 * m_sq > 0.0)) {
      std::ostringstream msg;
      msg << "inadmissible conserved state: energy = " << e
          << ", |momentum|^2 = " << m_sq;
      throw DegenerateState(msg.str());
    }
  }

  const ConsVec<Dim>& w() const { return w_; }
  double operator[](int i) const { return w_[i]; }
  double energy() const { return w_[Dim]; }
  Vec<Dim> momentum() const {
    Vec<Dim> m;
    for (int i = 0; i < Dim; ++i) m[i] = w_[i];
    return m;
  }

 private:
  ConsVec<Dim> w_;
};

template <int Dim>
ConsVec<Dim> cons_vector(const PrimState<Dim>& s) {
  ConsVec<Dim> w;
  const double scale = 4.0 * s.p() * s.lorentz();
  for (int i = 0; i < Dim; ++i) w[i] = scale * s.u(i);
  w[Dim] = s.p() * (3.0 + 4.0 * s.u_sq());
  return w;
}

template <int Dim>
ConsState<Dim> cons_from_prim(const PrimState<Dim>& s) {
  return ConsState<Dim>(cons_vector(s));
}

/// Pressure from the positive root of the quadratic, then u_j = w_j / sqrt(4p(w_{d+1} + p)).
template <int Dim>
PrimState<Dim> prim_from_cons(const ConsVec<Dim>& w) {
  const double e = w[Dim];
  double m_sq = 0.0;
  for (int i = 0; i < Dim; ++i) m_sq += w[i] * w[i];
  const double radicand = 4.0 * e * e - 3.0 * m_sq;
  if (!(e > 0.0) || !(radicand > 0.0)) {
    std::ostringstream msg;
    msg << "pressure root undefined: energy = " << e << ", radicand = " << radicand;
    throw DegenerateState(msg.str());
  }
  const double p = (std::sqrt(radicand) - e) / 3.0;
  if (!(p > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive pressure " << p << " recovered from energy " << e;
    throw DegenerateState(msg.str());
  }
  const double inv = 1.0 / std::sqrt(4.0 * p * (e + p));
  Vec<Dim> u;
  for (int i = 0; i < Dim; ++i) u[i] = w[i] * inv;
  return PrimState<Dim>(p, u);
}

template <int Dim>
PrimState<Dim> prim_from_cons(const ConsState<Dim>& w) {
  return prim_from_cons<Dim>(w.w());
}

/// eta = p^{3/4} sqrt(1 + |u|^2)
template <int Dim>
double entropy(const PrimState<Dim>& s) {
  return std::pow(s.p(), 0.75) * s.lorentz();
}

/// q = p^{3/4} u
template <int Dim>
Vec<Dim> entropy_flux(const PrimState<Dim>& s) {
  const double scale = std::pow(s.p(), 0.75);
  Vec<Dim> q;
  for (int i = 0; i < Dim; ++i) q[i] = scale * s.u(i);
  return q;
}

/// Gradient of eta with respect to w (the main field).
template <int Dim>
ConsVec<Dim> entropy_variables(const PrimState<Dim>& s) {
  const double quarter_eta_over_p = 0.25 * entropy(s) / s.p();
  ConsVec<Dim> omega;
  for (int i = 0; i < Dim; ++i) omega[i] = -quarter_eta_over_p * s.u(i) / s.lorentz();
  omega[Dim] = quarter_eta_over_p;
  return omega;
}

/// psi_k = omega . F_k - q_k = -(1/4) eta u_k / sqrt(1 + |u|^2)
template <int Dim>
Vec<Dim> flux_potential(const PrimState<Dim>& s) {
  const double scale = -0.25 * entropy(s) / s.lorentz();
  Vec<Dim> psi;
  for (int i = 0; i < Dim; ++i) psi[i] = scale * s.u(i);
  return psi;
}

template <int Dim>
struct EntropyState {
  double eta;
  ConsVec<Dim> omega;
  Vec<Dim> psi;
  /// phi = omega . w - eta = -eta / 4
  double phi;
};

template <int Dim>
EntropyState<Dim> entropy_state(const PrimState<Dim>& s) {
  const double eta = entropy(s);
  return {eta, entropy_variables(s), flux_potential(s), -0.25 * eta};
}

/// Derivatives of (p, u) with respect to w.
template <int Dim>
struct PrimGradients {
  ConsVec<Dim> dp_dw;
  /// du_dw[i][j] = d u_i / d w_j
  std::array<ConsVec<Dim>, Dim> du_dw;
};

template <int Dim>
PrimGradients<Dim> prim_gradients(const PrimState<Dim>& s) {
  const double p = s.p();
  const double lf = s.lorentz();
  const double u2 = s.u_sq();
  const double g = 3.0 + 2.0 * u2;
  PrimGradients<Dim> out;
  for (int j = 0; j < Dim; ++j) out.dp_dw[j] = -2.0 * s.u(j) * lf / g;
  out.dp_dw[Dim] = (1.0 + 2.0 * u2) / g;

  const double diag = 1.0 / (4.0 * p * lf);
  const double cross = (5.0 + 4.0 * u2) / (4.0 * p * lf * g);
  for (int i = 0; i < Dim; ++i) {
    for (int j = 0; j < Dim; ++j) {
      out.du_dw[i][j] = s.u(i) * s.u(j) * cross + (i == j ? diag : 0.0);
    }
    out.du_dw[i][Dim] = -(s.u(i) / p) * (1.0 + u2) / g;
  }
  return out;
}

/// Hessian of eta with respect to w; negative definite.
template <int Dim>
Matrix<Dim + 1> entropy_hessian(const PrimState<Dim>& s) {
  const double u2 = s.u_sq();
  const double lf = s.lorentz();
  const double g = 3.0 + 2.0 * u2;
  const double base = 16.0 * std::pow(s.p(), 1.25) * g;
  const double block = base * lf;
  Matrix<Dim + 1> h{};
  for (int i = 0; i < Dim; ++i) {
    for (int j = 0; j < Dim; ++j) {
      h[i][j] = -((i == j ? g : 0.0) + s.u(i) * s.u(j) * (7.0 + 6.0 * u2)) / block;
    }
    h[i][Dim] = h[Dim][i] = s.u(i) * (5.0 + 6.0 * u2) / base;
  }
  h[Dim][Dim] = -lf * (1.0 + 6.0 * u2) / base;
  return h;
}

/// dq_dw[i][j] = d q_i / d w_j
template <int Dim>
std::array<ConsVec<Dim>, Dim> entropy_flux_gradient(const PrimState<Dim>& s) {
  const double u2 = s.u_sq();
  const double g = 3.0 + 2.0 * u2;
  const double p14 = std::pow(s.p(), 0.25);
  const double denom = 4.0 * p14 * s.lorentz() * g;
  std::array<ConsVec<Dim>, Dim> out;
  for (int i = 0; i < Dim; ++i) {
    for (int j = 0; j < Dim; ++j) {
      out[i][j] = ((i == j ? g : 0.0) - s.u(i) * s.u(j) * (1.0 + 2.0 * u2)) / denom;
    }
    out[i][Dim] = -s.u(i) * (1.0 - 2.0 * u2) / (4.0 * p14 * g);
  }
  return out;
}

/// v = u / sqrt(1 + |u|^2), the velocity in units of the speed of light.
template <int Dim>
Vec<Dim> lorentz_velocity(const PrimState<Dim>& s) {
  Vec<Dim> v;
  for (int i = 0; i < Dim; ++i) v[i] = s.u(i) / s.lorentz();
  return v;
}

inline double lorentz_velocity(double u) { return u / std::sqrt(1.0 + u * u); }

/// Inverse of lorentz_velocity for a scalar speed, |v| < 1.
inline double four_velocity(double v) { return v / std::sqrt((1.0 - v) * (1.0 + v)); }

/// Inverse of lorentz_velocity componentwise on the vector, |v| < 1.
template <int Dim>
Vec<Dim> four_velocity(const Vec<Dim>& v) {
  const double v2 = dot<Dim>(v, v);
  const double scale = 1.0 / std::sqrt(1.0 - v2);
  Vec<Dim> u;
  for (int i = 0; i < Dim; ++i) u[i] = v[i] * scale;
  return u;
}

}  // namespace urel
