#include "urel/lgl.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace urel {
namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_and_derivative(int n, double x, double& value, double& slope) {
  double p_prev = 1.0;
  double p = x;
  double dp_prev = 0.0;
  double dp = 1.0;
  if (n == 0) {
    value = 1.0;
    slope = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    const double dp_next = dp_prev + (2.0 * k - 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  value = p;
  slope = dp;
}

}  // namespace

double legendre(int n, double x) {
  double v = 0.0;
  double s = 0.0;
  legendre_and_derivative(n, x, v, s);
  return v;
}

LglOperator lgl_operator(int order) {
  if (order < 1 || order > 15) {
    throw std::invalid_argument("LGL order must lie in [1, 15]");
  }
  const int n = order + 1;
  LglOperator op;
  op.order = order;
  op.nodes.assign(n, 0.0);
  op.weights.assign(n, 0.0);

  op.nodes[0] = -1.0;
  op.nodes[order] = 1.0;
  // Interior nodes are the roots of P_N'; Newton from Chebyshev-Gauss-Lobatto guesses.
  // P_N'' follows from the Legendre ODE: (1-x^2) P'' = 2x P' - N(N+1) P.
  for (int j = 1; j < order; ++j) {
    double x = -std::cos(std::numbers::pi * j / order);
    for (int it = 0; it < 100; ++it) {
      double pv = 0.0;
      double dpv = 0.0;
      legendre_and_derivative(order, x, pv, dpv);
      const double d2p = (2.0 * x * dpv - order * (order + 1.0) * pv) / (1.0 - x * x);
      const double step = dpv / d2p;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    op.nodes[j] = x;
  }
  // Enforce exact symmetry about 0.
  for (int j = 0; j < n / 2; ++j) {
    const double m = 0.5 * (op.nodes[order - j] - op.nodes[j]);
    op.nodes[j] = -m;
    op.nodes[order - j] = m;
  }
  if (n % 2 == 1) op.nodes[order / 2] = 0.0;

  for (int j = 0; j < n; ++j) {
    const double pn = legendre(order, op.nodes[j]);
    op.weights[j] = 2.0 / (order * (order + 1.0) * pn * pn);
  }

  // Barycentric weights and differentiation matrix; diagonal by negative row sum.
  std::vector<double> bary(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k != j) bary[j] *= op.nodes[j] - op.nodes[k];
    }
    bary[j] = 1.0 / bary[j];
  }
  op.diff.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dij = bary[j] / bary[i] / (op.nodes[i] - op.nodes[j]);
      op.diff[i * n + j] = dij;
      row += dij;
    }
    op.diff[i * n + i] = -row;
  }
  return op;
}

std::vector<double> lagrange_basis(const std::vector<double>& nodes, double xi) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> l(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k != j) l[j] *= (xi - nodes[k]) / (nodes[j] - nodes[k]);
    }
  }
  return l;
}

}  // namespace urel
