#pragma once

// Randomised property checks shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>

#include "urel/fluxes.hpp"
#include "urel/state.hpp"

namespace urel::checks {

template <int Dim>
PrimState<Dim> random_state(std::mt19937_64& rng, double u_max = 10.0) {
  std::uniform_real_distribution<double> logp(-3.0, 3.0);
  std::uniform_real_distribution<double> uc(-u_max, u_max);
  Vec<Dim> u;
  for (auto& c : u) c = uc(rng);
  return PrimState<Dim>(std::pow(10.0, logp(rng)), u);
}

template <int N>
double max_abs(const std::array<double, N>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

template <int Dim>
double wnorm(const ConsVec<Dim>& w) {
  double s = 0.0;
  for (double c : w) s += c * c;
  return std::sqrt(s);
}

struct MaxTracker {
  double worst = 0.0;
  void add(double x) { worst = std::max(worst, std::isnan(x) ? INFINITY : x); }
};

// Central difference of f(w) along component j with step h = rel max(1, |w|).
// rel = 1e-6 for the entropy gradient; the Jacobians use 1e-7, which keeps the
// O(h^2) truncation error of the strongly relativistic states (|u| ~ 15)
// well below the tolerance.
constexpr double kGradientStep = 1e-6;
constexpr double kJacobianStep = 1e-7;

template <int Dim, class F>
auto fd_column(const ConsVec<Dim>& w, int j, F&& f, double rel = kGradientStep) {
  const double h = rel * std::max(1.0, wnorm<Dim>(w));
  ConsVec<Dim> wp = w;
  ConsVec<Dim> wm = w;
  wp[j] += h;
  wm[j] -= h;
  auto fp = f(wp);
  auto fm = f(wm);
  for (std::size_t i = 0; i < fp.size(); ++i) fp[i] = (fp[i] - fm[i]) / (2.0 * h);
  return fp;
}

template <int Dim>
PrimState<Dim> prim_of(const ConsVec<Dim>& w) {
  return prim_from_cons<Dim>(w);
}

/// max relative error of entropy_variables against finite differences of eta(w).
template <int Dim>
double entropy_variables_error(const PrimState<Dim>& s) {
  const auto w = cons_vector(s);
  const auto omega = entropy_variables(s);
  ConsVec<Dim> diff{};
  for (int j = 0; j <= Dim; ++j) {
    auto col = fd_column<Dim>(w, j, [](const ConsVec<Dim>& x) {
      return std::array<double, 1>{entropy(prim_of<Dim>(x))};
    });
    diff[j] = col[0] - omega[j];
  }
  return max_abs<Dim + 1>(diff) / max_abs<Dim + 1>(omega);
}

/// max relative error of prim_gradients (p row and u rows, each normalised by its own size).
template <int Dim>
double prim_gradients_error(const PrimState<Dim>& s) {
  const auto w = cons_vector(s);
  const auto g = prim_gradients(s);
  double err_p = 0.0;
  double err_u = 0.0;
  double scale_u = 0.0;
  for (int i = 0; i < Dim; ++i) scale_u = std::max(scale_u, max_abs<Dim + 1>(g.du_dw[i]));
  for (int j = 0; j <= Dim; ++j) {
    auto col = fd_column<Dim>(w, j, [](const ConsVec<Dim>& x) {
      const auto q = prim_of<Dim>(x);
      std::array<double, Dim + 1> out;
      out[0] = q.p();
      for (int i = 0; i < Dim; ++i) out[i + 1] = q.u(i);
      return out;
    }, kJacobianStep);
    err_p = std::max(err_p, std::abs(col[0] - g.dp_dw[j]));
    for (int i = 0; i < Dim; ++i) err_u = std::max(err_u, std::abs(col[i + 1] - g.du_dw[i][j]));
  }
  return std::max(err_p / max_abs<Dim + 1>(g.dp_dw), err_u / scale_u);
}

template <int Dim>
double flux_jacobian_error(const PrimState<Dim>& s, int dir) {
  const auto w = cons_vector(s);
  const auto jac = flux_jacobian(s, dir);
  double err = 0.0;
  double scale = 0.0;
  for (int j = 0; j <= Dim; ++j) {
    auto col = fd_column<Dim>(
        w, j, [dir](const ConsVec<Dim>& x) { return physical_flux(prim_of<Dim>(x), dir); },
        kJacobianStep);
    for (int i = 0; i <= Dim; ++i) {
      err = std::max(err, std::abs(col[i] - jac[i][j]));
      scale = std::max(scale, std::abs(jac[i][j]));
    }
  }
  return err / scale;
}

/// Hessian against central differences of the entropy gradient omega(w).
/// Plain second differences of eta cannot reach 1e-5 in double precision for
/// the strongly relativistic states, so the already verified gradient is
/// differenced instead.
template <int Dim>
double entropy_hessian_error(const PrimState<Dim>& s) {
  const auto w = cons_vector(s);
  const auto hess = entropy_hessian(s);
  double err = 0.0;
  double scale = 0.0;
  for (int j = 0; j <= Dim; ++j) {
    auto col = fd_column<Dim>(
        w, j, [](const ConsVec<Dim>& x) { return entropy_variables(prim_of<Dim>(x)); },
        kJacobianStep);
    for (int i = 0; i <= Dim; ++i) {
      err = std::max(err, std::abs(col[i] - hess[i][j]));
      scale = std::max(scale, std::abs(hess[i][j]));
    }
  }
  return err / scale;
}

/// Largest eigenvalue bound check: returns true if -H is positive definite (Cholesky).
template <int Dim>
bool hessian_negative_definite(const PrimState<Dim>& s) {
  constexpr int n = Dim + 1;
  auto a = entropy_hessian(s);
  for (auto& row : a)
    for (auto& x : row) x = -x;
  for (int j = 0; j < n; ++j) {
    double d = a[j][j];
    for (int k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[j][j] = d;
    for (int i = j + 1; i < n; ++i) {
      double v = a[i][j];
      for (int k = 0; k < j; ++k) v -= a[i][k] * a[j][k];
      a[i][j] = v / d;
    }
  }
  return true;
}

/// Relative mismatch of grad q_k^T = omega^T D_w F_k.
template <int Dim>
double entropy_flux_relation_error(const PrimState<Dim>& s, int dir) {
  const auto omega = entropy_variables(s);
  const auto jac = flux_jacobian(s, dir);
  const auto dq = entropy_flux_gradient(s);
  double err = 0.0;
  double scale = 0.0;
  for (int j = 0; j <= Dim; ++j) {
    double lhs = 0.0;
    double mag = 0.0;
    for (int i = 0; i <= Dim; ++i) {
      lhs += omega[i] * jac[i][j];
      mag += std::abs(omega[i] * jac[i][j]);
    }
    err = std::max(err, std::abs(lhs - dq[dir][j]));
    scale = std::max(scale, mag);
  }
  return err / scale;
}

struct EcResult {
  double condition = 0.0;    // |[[omega]].F - [[psi]]| / scale
  bool symmetric = true;
  double consistency = 0.0;  // |F~(s,s) - F(s)| / |F(s)|
};

template <int Dim>
void ec_certificate(const PrimState<Dim>& a, const PrimState<Dim>& b, int dir, EcResult& out) {
  const auto f = ec_flux(a, b, dir);
  const auto g = ec_flux(b, a, dir);
  for (int i = 0; i <= Dim; ++i) out.symmetric = out.symmetric && f[i] == g[i];
  const auto oa = entropy_variables(a);
  const auto ob = entropy_variables(b);
  const double psi_a = flux_potential(a)[dir];
  const double psi_b = flux_potential(b)[dir];
  double cond = -(psi_b - psi_a);
  double scale = std::abs(psi_a) + std::abs(psi_b);
  for (int i = 0; i <= Dim; ++i) {
    cond += (ob[i] - oa[i]) * f[i];
    scale += (std::abs(oa[i]) + std::abs(ob[i])) * std::abs(f[i]);
  }
  out.condition = std::max(out.condition, std::abs(cond) / scale);

  const auto fs = ec_flux(a, a, dir);
  const auto fp = physical_flux(a, dir);
  ConsVec<Dim> d;
  for (int i = 0; i <= Dim; ++i) d[i] = fs[i] - fp[i];
  out.consistency = std::max(out.consistency, wnorm<Dim>(d) / wnorm<Dim>(fp));
}

}  // namespace urel::checks
