#pragma once

// Finite-volume solver for radially symmetric flows. With r = |x| and the
// radial four-velocity u, the pair
//   a = p (3 + 4u^2),   b = 4 p u sqrt(1 + u^2)
// obeys
//   (r^{d-1} a)_t + (r^{d-1} b)_x = 0,
//   (r^{d-1} b)_t + (r^{d-1} c)_x = (d-1)/2 r^{d-2} (a - c),
// with c = p + 4 p u^2 = (5/3) a - (2/3) sqrt(4a^2 - 3b^2).

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace urel {

struct RadialState {
  double a = 3.0;
  double b = 0.0;
};

/// Throws InvalidRadialState unless |b| < a.
void check_radial(const RadialState& s);

/// Radial momentum flux c; throws InvalidRadialState if |b| >= a.
double c_of_ab(const RadialState& s);

/// (p, u) -> (a, b). Requires p > 0.
RadialState theta_map(double p, double u);
/// (a, b) -> (p, u); throws InvalidRadialState if |b| >= a.
std::pair<double, double> theta_inv(const RadialState& s);

/// Cells [i dx, (i+1) dx] on [0, x_max], centres x_i = (i + 1/2) dx.
struct RadialGrid {
  int cells = 0;
  double x_max = 1.0;

  RadialGrid(int n, double xmax);
  double dx() const { return x_max / cells; }
  double center(int i) const { return (i + 0.5) * dx(); }
  double face(int i) const { return i * dx(); }
};

enum class Reconstruction { first_order, muscl };
const char* to_string(Reconstruction r);
Reconstruction parse_reconstruction(const std::string& s);

struct RadialConfig {
  /// Space dimension d of the underlying multi-dimensional problem (1, 2 or 3).
  int dim = 2;
  double cfl = 0.45;
  double t_end = 1.0;
  Reconstruction reconstruction = Reconstruction::muscl;
  int max_dt_halvings = 10;

  void validate() const;
};

/// Semidiscrete tendencies of (a, b) per cell. Local Lax-Friedrichs fluxes
/// (lambda = 1) weighted by r^{d-1} at faces, exact cell volumes
/// (r_{i+1/2}^d - r_{i-1/2}^d)/d, source integrated with cell-centre a - c.
/// Reflection at r = 0 (a even, b odd), zero-order extrapolation at x_max.
void radial_rhs(const RadialGrid& grid, int dim, Reconstruction recon,
                const std::vector<RadialState>& states, std::vector<RadialState>& tend);

struct RadialProfile {
  double t = 0.0;
  std::vector<double> p;
  std::vector<double> v;
};

struct RadialResult {
  std::vector<RadialProfile> profiles;
  /// Pressure in the innermost cell after every accepted step (t, p).
  std::vector<std::pair<double, double>> inner_pressure;
  std::vector<RadialState> final_states;
  double t = 0.0;
  long steps = 0;
};

using RadialInitial = std::function<double(double)>;

/// Third-order SSP Runge-Kutta with dt = cfl dx; steps are shortened to hit
/// `output_times`. A step that leaves the admissible set is retried with
/// dt/2 (at most max_dt_halvings times).
RadialResult run_radial(const RadialGrid& grid, const RadialInitial& p0, const RadialInitial& v0,
                        const RadialConfig& config, const std::vector<double>& output_times = {});

/// Primitive profile (p, v) of a state vector.
RadialProfile radial_profile(double t, const std::vector<RadialState>& states);

/// Time of the largest innermost-cell pressure (after the initial instant).
double focusing_time(const RadialResult& result);

/// Rows t,x,p,v for every stored profile.
void write_radial_csv(std::ostream& out, const RadialGrid& grid,
                      const std::vector<RadialProfile>& profiles);

}  // namespace urel
