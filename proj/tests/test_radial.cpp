#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "urel/errors.hpp"
#include "urel/radial.hpp"
#include "urel/selfsim.hpp"
#include "urel/state.hpp"

using namespace urel;
using doctest::Approx;

TEST_CASE("c_of_ab examples") {
  CHECK(c_of_ab({3.0, 0.0}) == Approx(1.0).epsilon(1e-15));
  CHECK(c_of_ab({7.0, 4.0 * std::sqrt(2.0)}) == Approx(5.0).epsilon(1e-14));
  CHECK(c_of_ab({7.0, -4.0 * std::sqrt(2.0)}) == c_of_ab({7.0, 4.0 * std::sqrt(2.0)}));
  CHECK_THROWS_AS(c_of_ab({1.0, 1.0}), InvalidRadialState);
  CHECK_THROWS_AS(c_of_ab({1.0, -2.0}), InvalidRadialState);
}

TEST_CASE("theta map and inverse") {
  auto s = theta_map(1.0, 0.0);
  CHECK(s.a == 3.0);
  CHECK(s.b == 0.0);
  s = theta_map(1.0, 1.0);
  CHECK(s.a == Approx(7.0).epsilon(1e-15));
  CHECK(s.b == Approx(4.0 * std::sqrt(2.0)).epsilon(1e-15));
  const auto [p, u] = theta_inv({7.0, 4.0 * std::sqrt(2.0)});
  CHECK(p == Approx(1.0).epsilon(1e-14));
  CHECK(u == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(theta_inv({1.0, 1.0}), InvalidRadialState);

  std::mt19937_64 rng(17);
  // Rounding in (a, b) is amplified by about 1 + 4u^2 in p, so |u| <= 5 (|v| <= 0.98).
  std::uniform_real_distribution<double> logp(-3.0, 3.0), uu(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double p0 = std::pow(10.0, logp(rng));
    const double u0 = uu(rng);
    const auto st = theta_map(p0, u0);
    const auto [p1, u1] = theta_inv(st);
    worst = std::max({worst, std::abs(p1 - p0) / p0, std::abs(u1 - u0) / std::max(1.0, std::abs(u0))});
    CHECK(c_of_ab(st) == Approx(p0 + 4.0 * p0 * u0 * u0).epsilon(1e-10));
  }
  CHECK(worst <= 1e-13);

  // Other direction on states of S~ with |b| <= 0.9 a.
  std::uniform_real_distribution<double> ratio(-0.9, 0.9);
  worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double a = std::pow(10.0, logp(rng));
    const RadialState s0{a, ratio(rng) * a};
    const auto [p1, u1] = theta_inv(s0);
    const auto s1 = theta_map(p1, u1);
    worst = std::max({worst, std::abs(s1.a - s0.a) / a, std::abs(s1.b - s0.b) / a});
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("well-balanced rest state") {
  for (int d : {1, 2, 3}) {
    for (auto recon : {Reconstruction::first_order, Reconstruction::muscl}) {
      RadialGrid grid(200, 4.0);
      std::vector<RadialState> s(200, theta_map(2.5, 0.0));
      std::vector<RadialState> t;
      radial_rhs(grid, d, recon, s, t);
      double worst = 0.0;
      for (const auto& x : t) worst = std::max({worst, std::abs(x.a), std::abs(x.b)});
      CHECK(worst <= 1e-13 * 7.5 * 200);

      RadialConfig cfg;
      cfg.dim = d;
      cfg.t_end = 1.0;
      cfg.reconstruction = recon;
      const auto res = run_radial(
          grid, [](double) { return 2.5; }, [](double) { return 0.0; }, cfg, {1.0});
      double dev = 0.0;
      for (int i = 0; i < grid.cells; ++i) {
        dev = std::max({dev, std::abs(res.profiles[0].p[i] - 2.5) / 2.5,
                        std::abs(res.profiles[0].v[i])});
      }
      CHECK(dev <= 1e-12);
    }
  }
}

TEST_CASE("single cell balance by hand, first order") {
  // Three interior cells of a d = 2 grid with dx = 1.
  RadialGrid grid(4, 4.0);
  std::vector<RadialState> s = {theta_map(1.0, 0.1), theta_map(1.2, 0.2), theta_map(1.4, 0.3),
                                theta_map(1.6, 0.4)};
  std::vector<RadialState> t;
  radial_rhs(grid, 2, Reconstruction::first_order, s, t);
  auto flux = [](const RadialState& l, const RadialState& r) {
    return std::pair<double, double>{0.5 * (l.b + r.b) - 0.5 * (r.a - l.a),
                                     0.5 * (c_of_ab(l) + c_of_ab(r)) - 0.5 * (r.b - l.b)};
  };
  // Cell 1 spans [1, 2]: volume (4 - 1)/2 = 1.5, face weights 1 and 2.
  const auto fl = flux(s[0], s[1]);
  const auto fr = flux(s[1], s[2]);
  const double c1 = c_of_ab(s[1]);
  const double ta = -(2.0 * fr.first - 1.0 * fl.first) / 1.5;
  const double tb = (-(2.0 * fr.second - 1.0 * fl.second) + 0.5 * (s[1].a - c1) * 1.0) / 1.5;
  CHECK(t[1].a == Approx(ta).epsilon(1e-14));
  CHECK(t[1].b == Approx(tb).epsilon(1e-14));
}

TEST_CASE("mirror symmetry of the planar case") {
  // d = 1 with reflection at 0 equals a full-line problem with even p and odd v:
  // a symmetric pulse at rest stays at rest in the first cell only by symmetry.
  RadialGrid grid(400, 4.0);
  RadialConfig cfg;
  cfg.dim = 1;
  cfg.t_end = 0.5;
  const auto res = run_radial(
      grid, [](double x) { return 1.0 + std::exp(-20.0 * (x - 1.0) * (x - 1.0)); },
      [](double) { return 0.0; }, cfg, {0.5});
  // Mass of a is conserved for d = 1 until waves reach x_max.
  double a0 = 0.0;
  double a1 = 0.0;
  for (int i = 0; i < grid.cells; ++i) {
    const double x = grid.center(i);
    a0 += theta_map(1.0 + std::exp(-20.0 * (x - 1.0) * (x - 1.0)), 0.0).a;
    a1 += theta_map(res.profiles[0].p[i], four_velocity(res.profiles[0].v[i])).a;
  }
  CHECK(a1 == Approx(a0).epsilon(1e-12));
}

TEST_CASE("inner pressure history and csv") {
  RadialGrid grid(100, 12.0);
  RadialConfig cfg;
  cfg.dim = 2;
  cfg.t_end = 0.5;
  const auto res = run_radial(
      grid, [](double x) { return x <= 1.0 ? 1.0 : 0.1; }, [](double) { return 0.0; }, cfg,
      {0.25, 0.5});
  CHECK(res.profiles.size() == 2);
  CHECK(res.profiles[0].t == Approx(0.25));
  CHECK(res.inner_pressure.size() == static_cast<std::size_t>(res.steps + 1));
  std::ostringstream out;
  write_radial_csv(out, grid, res.profiles);
  CHECK(out.str().rfind("t,x,p,v\n", 0) == 0);
  CHECK_THROWS_AS(RadialGrid(1, 1.0), std::invalid_argument);
  RadialConfig bad;
  bad.cfl = 2.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("Example 1 shock position converges") {
  const double s = 0.45502892;
  double prev = 1.0;
  for (int n : {625, 1250, 2500, 5000}) {
    RadialGrid grid(n, 4.0);
    RadialConfig cfg;
    cfg.dim = 2;
    cfg.t_end = 1.0;
    const auto res = run_radial(
        grid, [](double) { return 1.0; }, [](double) { return -1.0 / std::sqrt(2.0); }, cfg, {1.0});
    const auto& p = res.profiles[0].p;
    double best = 0.0;
    double where = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const double g = std::abs(p[i + 1] - p[i]);
      if (grid.center(i) > 0.1 && grid.center(i) < 1.5 && g > best) {
        best = g;
        where = grid.face(i + 1);
      }
    }
    const double err = std::abs(where - s);
    CAPTURE(n);
    CHECK(err <= 2.0 * grid.dx());
    CHECK(err <= prev + 0.5 * grid.dx());
    prev = err;
  }
}
