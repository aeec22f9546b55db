// Acceptance runner: one PASS/FAIL line per criterion, exit code 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "checks.hpp"
#include "urel/bench.hpp"

using namespace urel;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome table2() {
  const auto got = compute_table2();
  const auto ref = table2_reference();
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    worst = std::max({worst, std::abs(got[i].s_tilde - ref[i].s_tilde),
                      std::abs(got[i].p_minus - ref[i].p_minus),
                      std::abs(got[i].p_plus - ref[i].p_plus),
                      std::abs(got[i].v_plus - ref[i].v_plus)});
  }
  return {worst <= 1e-4, fmt("max |diff| = %.3g over 8 entries (tol 1e-4)", worst)};
}

template <int D>
void ec_pairs(long n, std::uint64_t seed, checks::EcResult& r) {
  std::mt19937_64 rng(seed);
  for (long i = 0; i < n; ++i) {
    const auto a = checks::random_state<D>(rng);
    const auto b = checks::random_state<D>(rng);
    for (int k = 0; k < D; ++k) checks::ec_certificate(a, b, k, r);
  }
}

Outcome ec_certificate() {
  checks::EcResult r;
  ec_pairs<2>(100000, 11, r);
  ec_pairs<3>(100000, 12, r);
  const bool ok = r.condition <= 1e-12 && r.symmetric && r.consistency <= 1e-14;
  return {ok, fmt("2x1e5 pairs: condition %.3g (1e-12), symmetric %s, consistency %.3g (1e-14)",
                  r.condition, r.symmetric ? "yes" : "no", r.consistency)};
}

template <int D>
void derivative_suite(long n, std::uint64_t seed, checks::MaxTracker& grad,
                      checks::MaxTracker& prim, checks::MaxTracker& jac,
                      checks::MaxTracker& hess, checks::MaxTracker& rel, bool& concave) {
  std::mt19937_64 rng(seed);
  for (long i = 0; i < n; ++i) {
    const auto s = checks::random_state<D>(rng);
    grad.add(checks::entropy_variables_error(s));
    prim.add(checks::prim_gradients_error(s));
    hess.add(checks::entropy_hessian_error(s));
    concave = concave && checks::hessian_negative_definite(s);
    for (int k = 0; k < D; ++k) {
      jac.add(checks::flux_jacobian_error(s, k));
      rel.add(checks::entropy_flux_relation_error(s, k));
    }
  }
}

Outcome derivatives() {
  checks::MaxTracker grad, prim, jac, hess, rel;
  bool concave = true;
  derivative_suite<2>(10000, 21, grad, prim, jac, hess, rel, concave);
  derivative_suite<3>(10000, 22, grad, prim, jac, hess, rel, concave);
  const bool ok = grad.worst <= 1e-6 && prim.worst <= 1e-6 && jac.worst <= 1e-6 &&
                  hess.worst <= 1e-5 && concave && rel.worst <= 1e-10;
  return {ok, fmt("omega %.2g, prim %.2g, jacobian %.2g, hessian %.2g (neg. def. %s), "
                  "entropy-flux identity %.2g",
                  grad.worst, prim.worst, jac.worst, hess.worst, concave ? "yes" : "no",
                  rel.worst)};
}

Outcome entropy_rates() {
  const auto ec = entropy_experiment(2, 16, 3, 60);

  // Rusanov interfaces with blending and limiting, Example 3 data.
  SolverConfig cfg;
  cfg.interface_flux = TwoPointFlux::rusanov;
  cfg.boundary = BoundaryMode::periodic;
  cfg.t_end = 2.0;
  auto ic = [](const Vec<2>& x) { return initial_condition_or_rest<2>(Example::ex3, x); };
  Dgsem<2> solver(CartesianMesh<2>::cube(-6.0, 6.0, 32), 3, cfg, ic);
  double worst = INFINITY;
  long evals = 0;
  solver.run(solver.initial_field(), {},
             [&](double, const DGField<2>& f, const DGField<2>& t) {
               const auto b = solver.total_entropy_and_rate(f, t);
               worst = std::min(worst, b.rate / std::abs(b.total));
               ++evals;
             });
  const bool ok = ec.passed && ec.rhs_evaluations >= 200 && worst >= -1e-12;
  return {ok, fmt("EC: max |dS/dt|/|S| = %.3g over %ld evaluations; Rusanov/Ex.3: "
                  "min (dS/dt)/|S| = %.3g over %ld evaluations",
                  ec.max_relative_rate, ec.rhs_evaluations, worst, evals)};
}

template <int D>
double free_stream_deviation(int elements, int order, int steps) {
  Vec<D> u;
  for (int i = 0; i < D; ++i) u[i] = 0.4 - 0.3 * i;
  const PrimState<D> s(1.3, u);
  SolverConfig cfg;
  cfg.boundary = BoundaryMode::periodic;
  Dgsem<D> probe(CartesianMesh<D>::cube(0.0, 1.0, elements), order, cfg,
                 [&](const Vec<D>&) { return s; });
  cfg.t_end = steps * probe.cfl_dt();
  Dgsem<D> solver(CartesianMesh<D>::cube(0.0, 1.0, elements), order, cfg,
                  [&](const Vec<D>&) { return s; });
  const auto f0 = solver.initial_field();
  const auto res = solver.run(f0);
  double dev = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < f0.values.size(); ++i) {
    dev = std::max(dev, std::abs(res.final_field.values[i] - f0.values[i]));
    scale = std::max(scale, std::abs(f0.values[i]));
  }
  if (res.steps < steps) return INFINITY;
  return dev / scale;
}

Outcome conservation() {
  SolverConfig cfg;
  cfg.boundary = BoundaryMode::periodic;
  cfg.t_end = 1.0;
  auto ic = [](const Vec<2>& x) {
    const double pi = std::acos(-1.0);
    return PrimState<2>(1.0 + 0.8 * std::exp(-8.0 * (x[0] * x[0] + x[1] * x[1])),
                        {0.5 * std::sin(pi * x[1]), 0.3 * std::cos(pi * x[0])});
  };
  Dgsem<2> solver(CartesianMesh<2>::cube(-1.0, 1.0, 16), 3, cfg, ic);
  const auto f0 = solver.initial_field();
  const auto res = solver.run(f0);
  const auto a = solver.total_conserved(f0);
  const auto b = solver.total_conserved(res.final_field);
  double drift = 0.0;
  for (int i = 0; i < 3; ++i) drift = std::max(drift, std::abs(a[i] - b[i]) / std::abs(a[2]));

  const double fs2 = free_stream_deviation<2>(64, 3, 100);
  const double fs3 = free_stream_deviation<3>(8, 3, 100);
  const bool ok = drift <= 1e-12 && fs2 <= 1e-12 && fs3 <= 1e-12;
  return {ok, fmt("periodic drift %.3g (%ld steps); free stream 2D 64^2: %.3g, 3D 8^3: %.3g",
                  drift, res.steps, fs2, fs3)};
}

Outcome example1() {
  auto spec = BenchmarkSpec::defaults(Example::ex1, 2);
  spec.output_dir = "";
  const auto dg = run_benchmark(spec);
  const double ref_pm = 15.75505;
  const double ref_s = 0.45503;
  const double width = (spec.upper - spec.lower) / spec.elements;
  const double inner_err = std::abs(dg.inner_pressure - ref_pm) / ref_pm;
  const double shock_err = std::abs(dg.shock_radius - ref_s);

  auto rs = spec;
  rs.solver = SolverKind::radial;
  rs.compare_x_min = 0.05;
  rs.compare_x_max = 2.0;
  const auto rad = run_benchmark(rs);
  const auto& rep = *rad.report;
  const bool ok = inner_err <= 0.05 && shock_err <= 2.0 * width && rep.l1_p <= 0.05 &&
                  rep.shock_error <= 1e-2;
  return {ok, fmt("dgsem: inner p %.5g (%.2f%%), shock r %.4g (|diff| %.3g, 2 widths %.3g); "
                  "radial: L1(p) %.3g on [0.05,2], shock %.4g vs %.4g",
                  dg.inner_pressure, 100.0 * inner_err, dg.shock_radius, shock_err, 2.0 * width,
                  rep.l1_p, rep.shock_position, rep.reference_shock_position)};
}

Outcome example2() {
  auto spec = BenchmarkSpec::defaults(Example::ex2, 2);
  spec.output_dir = "";
  spec.compare_x_min = 0.1;
  spec.compare_x_max = 2.0;
  const auto dg = run_benchmark(spec);
  auto rs = spec;
  rs.solver = SolverKind::radial;
  const auto rad = run_benchmark(rs);
  const bool ok = dg.report->l1_v <= 0.02 && rad.report->l1_v <= 0.02;
  return {ok, fmt("L1(v) on [0.1,2]: radial %.3g, dgsem %.3g (tol 0.02)", rad.report->l1_v,
                  dg.report->l1_v)};
}

Outcome example3() {
  double t[2];
  for (int d : {2, 3}) {
    auto spec = BenchmarkSpec::defaults(Example::ex3, d);
    spec.solver = SolverKind::radial;
    spec.output_dir = "";
    t[d - 2] = run_benchmark(spec).focusing_time;
  }
  const double e2 = std::abs(t[0] - 5.032) / 5.032;
  const double e3 = std::abs(t[1] - 4.165) / 4.165;
  return {e2 <= 0.02 && e3 <= 0.02,
          fmt("focusing time d=2 %.4f (%.2f%%), d=3 %.4f (%.2f%%)", t[0], 100 * e2, t[1], 100 * e3)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "shock-state table", table2},
      {2, "EC flux certificate", ec_certificate},
      {3, "Analytic-derivative suite", derivatives},
      {4, "Semidiscrete entropy conservation / stability", entropy_rates},
      {5, "Conservation and free stream", conservation},
      {6, "Example 1 end-to-end", example1},
      {7, "Example 2 rarefaction", example2},
      {8, "Example 3 focusing time", example3},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s [%.1f s]\n", o.ok ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
