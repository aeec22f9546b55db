#pragma once

// Benchmark harness: initial data of the five test problems and the entropy
// test, run orchestration for the three solvers, profile extraction along
// rays and comparison metrics.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "urel/dgsem.hpp"
#include "urel/radial.hpp"
#include "urel/selfsim.hpp"

namespace urel {

enum class Example { ex1 = 1, ex2 = 2, ex3 = 3, ex4 = 4, ex5 = 5, entropy_test = 6 };
enum class SolverKind { dgsem, radial, selfsim };

std::string to_string(Example e);
std::string to_string(SolverKind s);
/// Accepts "1".."5", "ex1".."ex5" and "entropy_test" / "entropy-test".
Example parse_example(const std::string& s);
SolverKind parse_solver(const std::string& s);

/// Radial initial data: pressure and radial velocity v as functions of r > 0.
double initial_pressure(Example e, double r);
double initial_velocity(Example e, double r);

/// Multi-dimensional initial data. Throws OriginUndefined at x = 0 for
/// examples whose velocity direction is x/|x| with non-zero magnitude.
template <int Dim>
PrimState<Dim> initial_condition(Example e, const Vec<Dim>& x);

/// As initial_condition, with u = 0 substituted at the origin.
template <int Dim>
PrimState<Dim> initial_condition_or_rest(Example e, const Vec<Dim>& x);

/// Entropy-test data with the radial speed ramped to zero over |x| < radius
/// by a C^2 quintic smoothstep.
template <int Dim>
PrimState<Dim> mollified_entropy_data(const Vec<Dim>& x, double radius = 0.1);

struct BenchmarkSpec {
  Example example = Example::ex1;
  int dim = 2;
  SolverKind solver = SolverKind::dgsem;
  double lower = -2.0;
  double upper = 2.0;
  int elements = 64;
  int order = 3;
  int radial_cells = 5000;
  double radial_x_max = 4.0;
  double t_end = 1.0;
  std::vector<double> output_times;
  std::string output_dir = "out";
  SolverConfig dg;
  Reconstruction reconstruction = Reconstruction::muscl;
  double radial_cfl = 0.45;
  /// Directions averaged when turning a multi-dimensional field into a radial profile.
  int rays = 16;
  /// Cells of the radial reference for Examples 3 to 5.
  int reference_cells = 5000;
  /// Comparison interval; x_max <= 0 selects the domain half-width.
  double compare_x_min = 0.05;
  double compare_x_max = 0.0;
  double compare_dx = 1e-3;

  /// Default domains and end times per example; dirichlet_initial for t_end = 1 and
  /// outflow for the long runs.
  static BenchmarkSpec defaults(Example e, int dim);
  void validate() const;
};

/// Radial profile sampled on a grid.
struct RadialProfileData {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> v;
};

struct ComparisonReport {
  double x_min = 0.0;
  double x_max = 0.0;
  /// Integral norms over [x_min, x_max] (trapezoidal rule on the comparison grid).
  double l1_p = 0.0;
  double linf_p = 0.0;
  double l1_v = 0.0;
  double linf_v = 0.0;
  /// Position of the steepest pressure gradient; NaN when not evaluated.
  double shock_position = NAN;
  double reference_shock_position = NAN;
  double shock_error = NAN;
  double max_p = 0.0;
  double max_p_reference = 0.0;
};

/// Piecewise-linear interpolation with constant extension.
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at);

/// Location of the largest |dp/dx| between neighbouring samples inside [lo, hi].
double steepest_gradient(const RadialProfileData& prof, double lo, double hi);

/// Errors of `numeric` against `reference` on the grid of the reference
/// restricted to [x_min, x_max].
ComparisonReport compare_profiles(const RadialProfileData& numeric,
                                  const RadialProfileData& reference, double x_min, double x_max);

/// Unit directions: equally spaced angles in 2D, a Fibonacci sphere in 3D.
template <int Dim>
std::vector<Vec<Dim>> ray_directions(int count);

/// Ray-averaged pressure and radial velocity at the radii `r`.
template <int Dim>
RadialProfileData ray_profile(const Dgsem<Dim>& solver, const DGField<Dim>& field,
                              const std::vector<double>& r, int rays);

/// Mean over rays of the per-ray steepest-gradient radius inside [lo, hi].
template <int Dim>
double ray_shock_radius(const Dgsem<Dim>& solver, const DGField<Dim>& field, int rays, double lo,
                        double hi, double dr);

/// Quadrature mean of the nodal pressure over nodes with |x| < radius.
template <int Dim>
double inner_mean_pressure(const Dgsem<Dim>& solver, const DGField<Dim>& field, double radius);

/// Reference profile at time t on `xs`: the self-similar solution for
/// Examples 1 and 2, the radial solver with `radial_cells` cells otherwise.
RadialProfileData reference_profile(Example e, int dim, double t, const std::vector<double>& xs,
                                    int radial_cells = 5000);

/// Shock states of Example 1 for d = 2 and 3.
struct Table2Row {
  int dim;
  double s_tilde;
  double p_minus;
  double p_plus;
  double v_plus;
};
std::vector<Table2Row> compute_table2(double h = 1e-6);
/// Reference values to five decimals (d = 2 and 3).
std::vector<Table2Row> table2_reference();

struct BenchmarkOutcome {
  std::optional<ComparisonReport> report;
  /// Example 1, dgsem: quadrature mean of p over |x| < 0.3 and the ray-averaged shock radius.
  double inner_pressure = NAN;
  double shock_radius = NAN;
  /// Radial solver: time of maximum innermost-cell pressure.
  double focusing_time = NAN;
  double t = 0.0;
  long steps = 0;
  std::vector<std::string> files;
  RadialProfileData profile;
};

/// Runs the configured solver, writes CSV output and a JSON report into
/// spec.output_dir (created if needed; empty string disables file output).
BenchmarkOutcome run_benchmark(const BenchmarkSpec& spec);

struct EntropyExperimentResult {
  std::vector<EntropyRecord> log;
  long rhs_evaluations = 0;
  /// max |dS/dt| / |S| over all RHS evaluations.
  double max_relative_rate = 0.0;
  bool passed = false;
};

/// All-EC fluxes, no blending or limiting, periodic [-2, 2]^d, mollified
/// entropy-test data; `steps` time steps at the CFL limit.
EntropyExperimentResult entropy_experiment(int dim, int elements, int order = 3, int steps = 60,
                                           double tolerance = 1e-12);

}  // namespace urel
