#pragma once

#include <vector>

namespace urel {

/// Gauss-Lobatto-Legendre nodes, weights and the nodal differentiation
/// matrix on [-1, 1] for polynomial degree `order`.
struct LglOperator {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  /// Row-major (order+1) x (order+1).
  std::vector<double> diff;

  int size() const { return order + 1; }
  double d(int i, int j) const { return diff[i * size() + j]; }
};

/// Supported for 1 <= order <= 15.
LglOperator lgl_operator(int order);

/// Values of the Lagrange basis on `nodes` at the point `xi`.
std::vector<double> lagrange_basis(const std::vector<double>& nodes, double xi);

/// Legendre polynomial P_n(x).
double legendre(int n, double x);

}  // namespace urel
