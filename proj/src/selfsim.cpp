#include "urel/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "urel/errors.hpp"

namespace urel {

namespace {

constexpr double kSonicTol = 1e-10;

struct LaiPoint {
  double theta;
  double v;
  double p;
};

// One classical RK4 step of length h.
LaiPoint rk4(int dim, const LaiPoint& s, double h) {
  const auto [k1v, k1p] = lai_rhs(dim, s.theta, s.v, s.p);
  const auto [k2v, k2p] = lai_rhs(dim, s.theta + 0.5 * h, s.v + 0.5 * h * k1v, s.p + 0.5 * h * k1p);
  const auto [k3v, k3p] = lai_rhs(dim, s.theta + 0.5 * h, s.v + 0.5 * h * k2v, s.p + 0.5 * h * k2p);
  const auto [k4v, k4p] = lai_rhs(dim, s.theta + h, s.v + h * k3v, s.p + h * k3p);
  return {s.theta + h, s.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
          s.p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)};
}

double shock_gap(const LaiPoint& s) { return s.v - (1.5 / s.theta - 0.5 * s.theta); }

}  // namespace

double lai_denominator(double theta, double v) {
  const double a = theta * v - 1.0;
  const double b = v - theta;
  return 3.0 * a * a - b * b;
}

std::pair<double, double> lai_rhs(int dim, double theta, double v, double p) {
  const double den = lai_denominator(theta, v);
  const double k = dim - 1.0;
  return {k * v * (v - theta) * (1.0 - v * v) / den, 4.0 * k * p * v * (theta * v - 1.0) / den};
}

double theta_upper_bound(double v0) { return std::sqrt(v0 * v0 + 3.0) - v0; }

SelfSimilarSolution integrate_lai(int dim, double p0, double v0, double h, double theta_cap,
                                  int stride) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (!(v0 > -1.0 && v0 < 1.0)) throw std::invalid_argument("v0 must lie in (-1, 1)");
  if (!(p0 > 0.0)) throw std::invalid_argument("p0 must be positive");
  if (!(h > 0.0) || !(theta_cap > 0.0) || stride < 1) {
    throw std::invalid_argument("step size, theta_cap and stride must be positive");
  }
  SelfSimilarSolution sol;
  sol.dim = dim;
  sol.p0 = p0;
  sol.v0 = v0;
  sol.h = h;
  sol.stride = stride;

  LaiPoint s{0.0, v0, p0};
  auto store = [&](const LaiPoint& q) {
    sol.thetas.push_back(q.theta);
    sol.V.push_back(q.v);
    sol.P.push_back(q.p);
  };
  store(s);
  const long total = static_cast<long>(std::ceil(theta_cap / h - 1e-9));
  for (long step = 1; step <= total; ++step) {
    const double hs = std::min(h, theta_cap - s.theta);
    if (!(hs > 0.0)) break;
    const LaiPoint next = rk4(dim, s, hs);
    const double den = lai_denominator(next.theta, next.v);
    if (!(den > kSonicTol) || !std::isfinite(next.v) || !std::isfinite(next.p) ||
        !(std::abs(next.v) < 1.0) || !(next.p > 0.0)) {
      sol.sonic_stop = true;
      break;
    }
    s = next;
    if (step % stride == 0 || step == total) store(s);
  }
  if (sol.thetas.back() != s.theta) store(s);
  return sol;
}

ShockData find_theta_tilde(const SelfSimilarSolution& sol, double tol) {
  if (!(sol.v0 < 0.0)) throw NoShockFound("shock search needs v0 < 0");
  const double root3 = std::sqrt(3.0);
  const auto& th = sol.thetas;
  std::size_t bracket = 0;
  for (std::size_t k = 1; k < th.size(); ++k) {
    if (th[k] <= root3) continue;
    const LaiPoint a{th[k - 1], sol.V[k - 1], sol.P[k - 1]};
    const LaiPoint b{th[k], sol.V[k], sol.P[k]};
    if (a.theta > 0.0 && shock_gap(a) * shock_gap(b) <= 0.0) {
      bracket = k;
      break;
    }
  }
  if (bracket == 0) {
    if (sol.sonic_stop) throw SonicDenominator("denominator vanished before the shock condition");
    throw NoShockFound("no shock condition crossing before theta_cap");
  }

  // Re-integrate the bracketing stretch step by step.
  LaiPoint s{th[bracket - 1], sol.V[bracket - 1], sol.P[bracket - 1]};
  const double end = th[bracket];
  double g0 = shock_gap(s);
  while (s.theta < end) {
    const double hs = std::min(sol.h, end - s.theta);
    const LaiPoint next = rk4(sol.dim, s, hs);
    const double g1 = shock_gap(next);
    if (s.theta > root3 && g0 * g1 > 0.0) {
      s = next;
      g0 = g1;
      continue;
    }
    if (!(s.theta > root3) && !(next.theta > root3 && g0 * g1 <= 0.0)) {
      s = next;
      g0 = g1;
      continue;
    }
    // Bisection on the sub-step length within [0, hs], carried to the
    // resolution limit; |g| <= tol is required at the end.
    double lo = 0.0;
    double hi = hs;
    LaiPoint best = std::abs(g1) < std::abs(g0) ? next : s;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * end; ++it) {
      const double mid = 0.5 * (lo + hi);
      const LaiPoint m = rk4(sol.dim, s, mid);
      const double gm = shock_gap(m);
      if (std::abs(gm) <= std::abs(shock_gap(best))) best = m;
      if (gm * g0 > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!(std::abs(shock_gap(best)) <= tol)) {
      throw NoShockFound("shock condition not resolved to the requested tolerance");
    }
    ShockData out;
    out.theta_tilde = best.theta;
    out.s_tilde = 1.0 / best.theta;
    out.v_plus = best.v;
    out.p_plus = best.p;
    const double s2 = out.s_tilde * out.s_tilde;
    out.p_minus = out.p_plus * 3.0 * (1.0 - s2) / (9.0 * s2 - 1.0);
    return out;
  }
  throw NoShockFound("shock condition bracket lost during refinement");
}

SelfSimilarSolution shock_solution(int dim, double p0, double v0, double h) {
  SelfSimilarSolution sol = integrate_lai(dim, p0, v0, h, theta_upper_bound(v0));
  sol.shock = find_theta_tilde(sol);
  return sol;
}

std::pair<double, double> evaluate_reference(const SelfSimilarSolution& sol, double t, double x) {
  if (!(t > 0.0) || !(x > 0.0)) throw std::invalid_argument("reference needs t > 0 and x > 0");
  if (sol.shock && x < sol.shock->s_tilde * t) return {sol.shock->p_minus, 0.0};
  const double theta = t / x;
  const auto& th = sol.thetas;
  if (theta >= th.back()) return {sol.P.back(), sol.V.back()};
  const auto it = std::upper_bound(th.begin(), th.end(), theta);
  const std::size_t k = static_cast<std::size_t>(it - th.begin());
  const double w = (theta - th[k - 1]) / (th[k] - th[k - 1]);
  return {(1.0 - w) * sol.P[k - 1] + w * sol.P[k], (1.0 - w) * sol.V[k - 1] + w * sol.V[k]};
}

void write_reference_csv(std::ostream& out, const SelfSimilarSolution& sol, double t,
                         const std::vector<double>& xs) {
  out << "x,p,v\n" << std::setprecision(17);
  for (double x : xs) {
    const auto [p, v] = evaluate_reference(sol, t, x);
    out << x << ',' << p << ',' << v << '\n';
  }
}

}  // namespace urel
