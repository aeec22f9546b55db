#pragma once

// Self-similar solutions p = P(theta), v = V(theta) of the radially symmetric
// problem with constant initial data (p0, v0) and theta = t / x:
//   V' = (d-1) V (V - theta)(1 - V^2) / D,
//   P' = 4 (d-1) P V (theta V - 1) / D,
//   D  = 3 (theta V - 1)^2 - (V - theta)^2,
// integrated from theta = 0 with the classical fourth-order Runge-Kutta method.

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace urel {

struct ShockData {
  double theta_tilde = 0.0;
  double s_tilde = 0.0;
  double p_plus = 0.0;
  double v_plus = 0.0;
  double p_minus = 0.0;
};

struct SelfSimilarSolution {
  int dim = 2;
  double p0 = 1.0;
  double v0 = 0.0;
  double h = 1e-6;
  int stride = 100;
  std::vector<double> thetas;
  std::vector<double> V;
  std::vector<double> P;
  /// True if integration ended because the denominator (nearly) vanished.
  bool sonic_stop = false;
  std::optional<ShockData> shock;
};

/// Denominator D(theta, V).
double lai_denominator(double theta, double v);
/// Right-hand side (V', P').
std::pair<double, double> lai_rhs(int dim, double theta, double v, double p);

/// Integrates until theta_cap or until D falls below 1e-10 (or changes sign).
/// Every `stride`-th step is stored, together with the final state.
SelfSimilarSolution integrate_lai(int dim, double p0, double v0, double h, double theta_cap,
                                  int stride = 100);

/// Upper bound sqrt(v0^2 + 3) - v0 of the shock coordinate.
double theta_upper_bound(double v0);

/// First theta > sqrt(3) with V = 3/(2 theta) - theta/2, refined by bisection on
/// the sub-step length inside the bracketing RK4 step until |g| <= tol.
/// Throws SonicDenominator if integration stopped at a sonic point first and
/// NoShockFound if no sign change occurs before theta_cap.
ShockData find_theta_tilde(const SelfSimilarSolution& sol, double tol = 1e-9);

/// Integrates with theta_cap = theta_upper_bound(v0) and attaches the shock data.
SelfSimilarSolution shock_solution(int dim, double p0, double v0, double h = 1e-6);

/// (p, v) at (t, x), t > 0, x > 0. Inside the shock (x < s t) the state is
/// (p_minus, 0); otherwise linear interpolation in theta, clamped to the table.
std::pair<double, double> evaluate_reference(const SelfSimilarSolution& sol, double t, double x);

/// Rows x,p,v at time t.
void write_reference_csv(std::ostream& out, const SelfSimilarSolution& sol, double t,
                         const std::vector<double>& xs);

}  // namespace urel
