#include <cmath>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "urel/errors.hpp"
#include "urel/fluxes.hpp"
#include "urel/selfsim.hpp"

using namespace urel;
using doctest::Approx;

namespace {
const double v_ex1 = -1.0 / std::sqrt(2.0);
}

TEST_CASE("right-hand side at theta = 0") {
  const auto [dv, dp] = lai_rhs(2, 0.0, v_ex1, 1.0);
  CHECK(dv == Approx(0.1).epsilon(1e-14));
  CHECK(dp == Approx(4.0 / std::sqrt(2.0) / 2.5).epsilon(1e-14));
  CHECK(dp == Approx(1.1313708).epsilon(1e-7));
}

TEST_CASE("v0 = 0 is a fixed point") {
  const auto sol = integrate_lai(2, 3.0, 0.0, 1e-3, 5.0);
  for (std::size_t i = 0; i < sol.thetas.size(); ++i) {
    CHECK(sol.V[i] == 0.0);
    CHECK(sol.P[i] == 3.0);
  }
  CHECK_THROWS_AS(integrate_lai(2, 1.0, 1.0, 1e-3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_lai(2, -1.0, 0.0, 1e-3, 1.0), std::invalid_argument);
}

TEST_CASE("Example 1 shock states") {
  const auto s2 = shock_solution(2, 1.0, v_ex1);
  REQUIRE(s2.shock);
  CHECK(std::abs(s2.shock->s_tilde - 0.45503) <= 1e-4);
  CHECK(std::abs(s2.shock->p_minus - 15.75505) <= 1e-4);
  CHECK(std::abs(s2.shock->p_plus - 5.71869) <= 1e-4);
  CHECK(std::abs(s2.shock->v_plus - -0.41629) <= 1e-4);
  const auto s3 = shock_solution(3, 1.0, v_ex1);
  REQUIRE(s3.shock);
  CHECK(std::abs(s3.shock->s_tilde - 0.52314) <= 1e-4);
  CHECK(std::abs(s3.shock->p_minus - 25.56463) <= 1e-4);
  CHECK(std::abs(s3.shock->p_plus - 17.16524) <= 1e-4);
  CHECK(std::abs(s3.shock->v_plus - -0.17106) <= 1e-4);

  for (const auto* s : {&s2, &s3}) {
    const auto& k = *s->shock;
    CHECK(std::abs(k.v_plus - (1.5 * k.s_tilde - 0.5 / k.s_tilde)) <= 1e-8);
  }
}

TEST_CASE("step-size robustness") {
  for (int d : {2, 3}) {
    const auto a = *shock_solution(d, 1.0, v_ex1, 1e-6).shock;
    const auto b = *shock_solution(d, 1.0, v_ex1, 5e-7).shock;
    CHECK(std::abs(a.s_tilde - b.s_tilde) <= 1e-8);
    CHECK(std::abs(a.p_minus - b.p_minus) <= 1e-8 * a.p_minus);
    CHECK(std::abs(a.p_plus - b.p_plus) <= 1e-8 * a.p_plus);
    CHECK(std::abs(a.v_plus - b.v_plus) <= 1e-8);
  }
}

TEST_CASE("shock bounds and Rankine-Hugoniot") {
  for (int d : {2, 3}) {
    for (double v0 : {-0.1, -0.3, v_ex1, -0.9}) {
      CAPTURE(d);
      CAPTURE(v0);
      const auto k = *shock_solution(d, 1.0, v0, 1e-5).shock;
      CHECK(k.s_tilde > 1.0 / 3.0);
      CHECK(k.s_tilde < 1.0 / std::sqrt(3.0));
      CHECK(k.p_plus > 0.0);
      CHECK(k.p_plus < k.p_minus);
      CHECK(k.theta_tilde > std::sqrt(3.0));
      CHECK(k.theta_tilde < theta_upper_bound(v0));

      const PrimState<1> inner(k.p_minus, {0.0});
      const PrimState<1> outer(k.p_plus, {four_velocity(k.v_plus)});
      const auto wi = cons_vector(inner);
      const auto wo = cons_vector(outer);
      const auto fi = physical_flux(inner, 0);
      const auto fo = physical_flux(outer, 0);
      for (int c = 0; c < 2; ++c) {
        const double lhs = k.s_tilde * (wo[c] - wi[c]);
        const double rhs = fo[c] - fi[c];
        CHECK(std::abs(lhs - rhs) <= 1e-7 * (std::abs(fo[c]) + std::abs(fi[c])));
      }
    }
  }
}

TEST_CASE("no shock for expanding data") {
  const auto sol = integrate_lai(2, 1.0, 1.0 / std::sqrt(5.0), 1e-5, 50.0);
  CHECK(sol.sonic_stop);
  CHECK_THROWS_AS(find_theta_tilde(sol), NoShockFound);
  // A cap below the shock coordinate: no crossing.
  const auto short_sol = integrate_lai(2, 1.0, v_ex1, 1e-5, 1.9);
  CHECK_THROWS_AS(find_theta_tilde(short_sol), NoShockFound);
}

TEST_CASE("evaluate_reference") {
  const auto sol = shock_solution(2, 1.0, v_ex1);
  auto [p, v] = evaluate_reference(sol, 1.0, 0.1);
  CHECK(std::abs(p - 15.75505) <= 1e-4);
  CHECK(v == 0.0);
  std::tie(p, v) = evaluate_reference(sol, 1.0, 1e12);
  CHECK(p == Approx(1.0).epsilon(1e-9));
  CHECK(v == Approx(v_ex1).epsilon(1e-9));
  CHECK_THROWS_AS(evaluate_reference(sol, 0.0, 1.0), std::invalid_argument);

  const double v2 = 1.0 / std::sqrt(5.0);
  const auto a = integrate_lai(2, 1.0, v2, 1e-6, 50.0);
  const auto b = integrate_lai(2, 1.0, v2, 5e-7, 50.0);
  const auto ra = evaluate_reference(a, 1.0, 2.0);
  const auto rb = evaluate_reference(b, 1.0, 2.0);
  CHECK(ra.first == Approx(rb.first).epsilon(1e-8));
  CHECK(ra.second == Approx(rb.second).epsilon(1e-8));

  std::ostringstream out;
  write_reference_csv(out, sol, 1.0, {0.1, 0.5, 1.0});
  CHECK(out.str().rfind("x,p,v\n", 0) == 0);
}
