#include "urel/radial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "urel/errors.hpp"
#include "urel/state.hpp"

namespace urel {

void check_radial(const RadialState& s) {
  if (!(std::abs(s.b) < s.a) || !std::isfinite(s.a)) {
    std::ostringstream msg;
    msg << "radial state outside |b| < a: a = " << s.a << ", b = " << s.b;
    throw InvalidRadialState(msg.str());
  }
}

double c_of_ab(const RadialState& s) {
  check_radial(s);
  return (5.0 / 3.0) * s.a - (2.0 / 3.0) * std::sqrt(4.0 * s.a * s.a - 3.0 * s.b * s.b);
}

RadialState theta_map(double p, double u) {
  const auto w = cons_vector(PrimState<1>(p, {u}));
  return {w[1], w[0]};
}

std::pair<double, double> theta_inv(const RadialState& s) {
  check_radial(s);
  // (sqrt(4a^2 - 3b^2) - a)/3 rewritten without the final cancellation.
  const double root = std::sqrt(4.0 * s.a * s.a - 3.0 * s.b * s.b);
  const double p = (s.a - s.b) * (s.a + s.b) / (root + s.a);
  if (!(p > 0.0)) throw InvalidRadialState("radial state with non-positive pressure");
  return {p, s.b / std::sqrt(4.0 * p * (s.a + p))};
}

RadialGrid::RadialGrid(int n, double xmax) : cells(n), x_max(xmax) {
  if (n < 2) throw std::invalid_argument("radial grid needs at least 2 cells");
  if (!(xmax > 0.0)) throw std::invalid_argument("radial grid needs x_max > 0");
}

const char* to_string(Reconstruction r) {
  return r == Reconstruction::muscl ? "muscl" : "first_order";
}

Reconstruction parse_reconstruction(const std::string& s) {
  if (s == "muscl") return Reconstruction::muscl;
  if (s == "first_order" || s == "first") return Reconstruction::first_order;
  throw std::invalid_argument("unknown reconstruction '" + s + "'");
}

void RadialConfig::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("radial dimension must be 1, 2 or 3");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
}

namespace {

double minmod(double x, double y) {
  if (x * y <= 0.0) return 0.0;
  return std::abs(x) < std::abs(y) ? x : y;
}

double power(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

struct FaceFlux {
  double a;
  double b;
};

FaceFlux llf(const RadialState& l, const RadialState& r) {
  const double cl = c_of_ab(l);
  const double cr = c_of_ab(r);
  return {0.5 * (l.b + r.b) - 0.5 * (r.a - l.a), 0.5 * (cl + cr) - 0.5 * (r.b - l.b)};
}

}  // namespace

void radial_rhs(const RadialGrid& grid, int dim, Reconstruction recon,
                const std::vector<RadialState>& s, std::vector<RadialState>& tend) {
  const int n = grid.cells;
  if (static_cast<int>(s.size()) != n) throw std::invalid_argument("state size mismatch");
  tend.assign(n, RadialState{0.0, 0.0});

  // Extended array with two ghost cells per side.
  std::vector<RadialState> e(n + 4);
  for (int i = 0; i < n; ++i) e[i + 2] = s[i];
  e[1] = {s[0].a, -s[0].b};
  e[0] = {s[1].a, -s[1].b};
  e[n + 2] = s[n - 1];
  e[n + 3] = s[n - 1];

  // Face values from each cell: left (x_{i-1/2}) and right (x_{i+1/2}).
  std::vector<RadialState> lo(n + 4), hi(n + 4);
  for (int k = 0; k < n + 4; ++k) lo[k] = hi[k] = e[k];
  if (recon == Reconstruction::muscl) {
    // Limited slopes of r+ = a + b and r- = a - b; both stay positive.
    for (int k = 1; k < n + 3; ++k) {
      const double rp = e[k].a + e[k].b;
      const double rm = e[k].a - e[k].b;
      const double sp = minmod(rp - (e[k - 1].a + e[k - 1].b), (e[k + 1].a + e[k + 1].b) - rp);
      const double sm = minmod(rm - (e[k - 1].a - e[k - 1].b), (e[k + 1].a - e[k + 1].b) - rm);
      const double rp_hi = rp + 0.5 * sp, rp_lo = rp - 0.5 * sp;
      const double rm_hi = rm + 0.5 * sm, rm_lo = rm - 0.5 * sm;
      hi[k] = {0.5 * (rp_hi + rm_hi), 0.5 * (rp_hi - rm_hi)};
      lo[k] = {0.5 * (rp_lo + rm_lo), 0.5 * (rp_lo - rm_lo)};
    }
  }

  std::vector<FaceFlux> flux(n + 1);
  std::vector<double> weight(n + 1);
  for (int f = 0; f <= n; ++f) {
    // Face f separates cells f-1 and f, i.e. extended k = f+1 and f+2.
    weight[f] = power(grid.face(f), dim - 1);
    flux[f] = weight[f] == 0.0 ? FaceFlux{0.0, 0.0} : llf(hi[f + 1], lo[f + 2]);
  }
  for (int i = 0; i < n; ++i) {
    const double volume = (power(grid.face(i + 1), dim) - power(grid.face(i), dim)) / dim;
    const double dw = weight[i + 1] - weight[i];
    const double c = c_of_ab(s[i]);
    const double source = dim > 1 ? 0.5 * (s[i].a - c) * dw : 0.0;
    tend[i].a = -(weight[i + 1] * flux[i + 1].a - weight[i] * flux[i].a) / volume;
    tend[i].b = (-(weight[i + 1] * flux[i + 1].b - weight[i] * flux[i].b) + source) / volume;
  }
}

RadialProfile radial_profile(double t, const std::vector<RadialState>& states) {
  RadialProfile prof;
  prof.t = t;
  prof.p.reserve(states.size());
  prof.v.reserve(states.size());
  for (const auto& s : states) {
    const auto [p, u] = theta_inv(s);
    prof.p.push_back(p);
    prof.v.push_back(lorentz_velocity(u));
  }
  return prof;
}

RadialResult run_radial(const RadialGrid& grid, const RadialInitial& p0, const RadialInitial& v0,
                        const RadialConfig& config, const std::vector<double>& output_times) {
  config.validate();
  const int n = grid.cells;
  std::vector<RadialState> u(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.center(i);
    u[i] = theta_map(p0(x), four_velocity(v0(x)));
  }

  RadialResult result;
  std::vector<double> outputs = output_times;
  std::sort(outputs.begin(), outputs.end());
  std::size_t next_out = 0;
  double t = 0.0;
  auto emit = [&] {
    while (next_out < outputs.size() && outputs[next_out] <= t * (1.0 + 1e-12) + 1e-14) {
      result.profiles.push_back(radial_profile(t, u));
      ++next_out;
    }
  };
  emit();
  result.inner_pressure.emplace_back(0.0, theta_inv(u[0]).first);

  const double dt_cfl = config.cfl * grid.dx();
  std::vector<RadialState> k(n), s1(n), s2(n);
  auto axpy = [&](std::vector<RadialState>& out, double ca, const std::vector<RadialState>& x,
                  double cb, const std::vector<RadialState>& y, double cdt,
                  const std::vector<RadialState>& dy) {
    for (int i = 0; i < n; ++i) {
      out[i].a = ca * x[i].a + cb * y[i].a + cdt * dy[i].a;
      out[i].b = ca * x[i].b + cb * y[i].b + cdt * dy[i].b;
      check_radial(out[i]);
    }
  };

  const double t_end = config.t_end;
  while (t < t_end * (1.0 - 1e-14)) {
    double dt = std::min(dt_cfl, t_end - t);
    if (next_out < outputs.size() && outputs[next_out] < t_end) {
      dt = std::min(dt, outputs[next_out] - t);
    }
    for (int attempt = 0;; ++attempt) {
      try {
        radial_rhs(grid, config.dim, config.reconstruction, u, k);
        axpy(s1, 1.0, u, 0.0, u, dt, k);
        radial_rhs(grid, config.dim, config.reconstruction, s1, k);
        axpy(s2, 0.75, u, 0.25, s1, 0.25 * dt, k);
        radial_rhs(grid, config.dim, config.reconstruction, s2, k);
        axpy(s1, 1.0 / 3.0, u, 2.0 / 3.0, s2, 2.0 / 3.0 * dt, k);
        u.swap(s1);
        break;
      } catch (const InvalidRadialState&) {
        if (attempt >= config.max_dt_halvings) throw;
        dt *= 0.5;
      }
    }
    t += dt;
    ++result.steps;
    result.inner_pressure.emplace_back(t, theta_inv(u[0]).first);
    emit();
  }
  while (next_out < outputs.size()) {
    result.profiles.push_back(radial_profile(t, u));
    ++next_out;
  }
  result.t = t;
  result.final_states = std::move(u);
  return result;
}

double focusing_time(const RadialResult& result) {
  double best_t = 0.0;
  double best_p = -1.0;
  for (std::size_t i = 1; i < result.inner_pressure.size(); ++i) {
    if (result.inner_pressure[i].second > best_p) {
      best_p = result.inner_pressure[i].second;
      best_t = result.inner_pressure[i].first;
    }
  }
  return best_t;
}

void write_radial_csv(std::ostream& out, const RadialGrid& grid,
                      const std::vector<RadialProfile>& profiles) {
  out << "t,x,p,v\n" << std::setprecision(17);
  for (const auto& prof : profiles) {
    for (int i = 0; i < grid.cells; ++i) {
      out << prof.t << ',' << grid.center(i) << ',' << prof.p[i] << ',' << prof.v[i] << '\n';
    }
  }
}

}  // namespace urel
