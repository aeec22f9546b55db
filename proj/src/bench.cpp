#include "urel/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace urel {

namespace fs = std::filesystem;

std::string to_string(Example e) {
  switch (e) {
    case Example::ex1:
      return "1";
    case Example::ex2:
      return "2";
    case Example::ex3:
      return "3";
    case Example::ex4:
      return "4";
    case Example::ex5:
      return "5";
    case Example::entropy_test:
      return "entropy_test";
  }
  return "?";
}

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::dgsem:
      return "dgsem";
    case SolverKind::radial:
      return "radial";
    case SolverKind::selfsim:
      return "selfsim";
  }
  return "?";
}

Example parse_example(const std::string& s) {
  std::string t = s;
  if (t.rfind("ex", 0) == 0) t = t.substr(2);
  if (t == "1") return Example::ex1;
  if (t == "2") return Example::ex2;
  if (t == "3") return Example::ex3;
  if (t == "4") return Example::ex4;
  if (t == "5") return Example::ex5;
  if (t == "entropy_test" || t == "entropy-test" || t == "6") return Example::entropy_test;
  throw std::invalid_argument("unknown example '" + s + "'");
}

SolverKind parse_solver(const std::string& s) {
  if (s == "dgsem") return SolverKind::dgsem;
  if (s == "radial") return SolverKind::radial;
  if (s == "selfsim") return SolverKind::selfsim;
  throw std::invalid_argument("unknown solver '" + s + "'");
}

namespace {

// Magnitude of the radial four-velocity.
double radial_u(Example e, double r) {
  switch (e) {
    case Example::ex1:
      return -1.0;
    case Example::ex2:
      return 0.5;
    case Example::entropy_test:
      return -0.2;
    case Example::ex3:
    case Example::ex4:
      return 0.0;
    case Example::ex5:
      return r < 1.0 ? std::sin(2.0 * std::numbers::pi * r) : 0.0;
  }
  return 0.0;
}

bool direction_needed(Example e) {
  return e == Example::ex1 || e == Example::ex2 || e == Example::entropy_test;
}

template <int Dim>
double norm(const Vec<Dim>& x) {
  return std::sqrt(dot<Dim>(x, x));
}

double smoothstep5(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

}  // namespace

double initial_pressure(Example e, double r) {
  switch (e) {
    case Example::ex3:
      return r <= 1.0 ? 1.0 : 0.1;
    case Example::ex4:
      return r <= 1.0 ? 0.1 : 1.0;
    default:
      return 1.0;
  }
}

double initial_velocity(Example e, double r) { return lorentz_velocity(radial_u(e, r)); }

template <int Dim>
PrimState<Dim> initial_condition(Example e, const Vec<Dim>& x) {
  const double r = norm<Dim>(x);
  const double p = initial_pressure(e, r);
  Vec<Dim> u{};
  if (r == 0.0) {
    if (direction_needed(e)) throw OriginUndefined("velocity direction undefined at the origin");
    return PrimState<Dim>(p, u);
  }
  const double mag = radial_u(e, r);
  for (int i = 0; i < Dim; ++i) u[i] = mag * x[i] / r;
  return PrimState<Dim>(p, u);
}

template <int Dim>
PrimState<Dim> initial_condition_or_rest(Example e, const Vec<Dim>& x) {
  try {
    return initial_condition<Dim>(e, x);
  } catch (const OriginUndefined&) {
    return PrimState<Dim>(initial_pressure(e, 0.0), Vec<Dim>{});
  }
}

template <int Dim>
PrimState<Dim> mollified_entropy_data(const Vec<Dim>& x, double radius) {
  const double r = norm<Dim>(x);
  Vec<Dim> u{};
  if (r > 0.0) {
    const double mag = radial_u(Example::entropy_test, r) * smoothstep5(r / radius);
    for (int i = 0; i < Dim; ++i) u[i] = mag * x[i] / r;
  }
  return PrimState<Dim>(1.0, u);
}

BenchmarkSpec BenchmarkSpec::defaults(Example e, int dim) {
  BenchmarkSpec s;
  s.example = e;
  s.dim = dim;
  double half = 2.0;
  s.t_end = 1.0;
  s.dg.boundary = BoundaryMode::dirichlet_initial;
  switch (e) {
    case Example::ex3:
    case Example::ex4:
      half = 6.0;
      s.t_end = 6.0;
      s.dg.boundary = BoundaryMode::outflow;
      break;
    case Example::ex5:
      half = 5.0;
      s.t_end = 6.0;
      s.dg.boundary = BoundaryMode::outflow;
      break;
    default:
      break;
  }
  s.lower = -half;
  s.upper = half;
  s.radial_x_max = 2.0 * half;
  s.elements = dim == 3 ? 16 : 64;
  s.dg.t_end = s.t_end;
  s.compare_x_min = e == Example::ex2 ? 0.1 : 0.05;
  return s;
}

void BenchmarkSpec::validate() const {
  if (dim < 2 || dim > 3) throw std::invalid_argument("benchmark dimension must be 2 or 3");
  if (!(upper > lower)) throw std::invalid_argument("empty domain");
  if (elements < 1) throw std::invalid_argument("elements must be positive");
  if (radial_cells < 2) throw std::invalid_argument("radial cells must be at least 2");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (rays < 1) throw std::invalid_argument("rays must be positive");
  if (!(compare_dx > 0.0)) throw std::invalid_argument("compare_dx must be positive");
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (x.empty()) throw std::invalid_argument("interpolation on an empty table");
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double w = (at - x[k - 1]) / (x[k] - x[k - 1]);
  return (1.0 - w) * y[k - 1] + w * y[k];
}

double steepest_gradient(const RadialProfileData& prof, double lo, double hi) {
  double best = -1.0;
  double where = NAN;
  for (std::size_t i = 0; i + 1 < prof.x.size(); ++i) {
    if (prof.x[i] < lo || prof.x[i + 1] > hi) continue;
    const double g = std::abs(prof.p[i + 1] - prof.p[i]) / (prof.x[i + 1] - prof.x[i]);
    if (g > best) {
      best = g;
      where = 0.5 * (prof.x[i] + prof.x[i + 1]);
    }
  }
  return where;
}

ComparisonReport compare_profiles(const RadialProfileData& numeric,
                                  const RadialProfileData& reference, double x_min, double x_max) {
  ComparisonReport rep;
  rep.x_min = x_min;
  rep.x_max = x_max;
  RadialProfileData num_on_ref;
  RadialProfileData ref;
  for (std::size_t i = 0; i < reference.x.size(); ++i) {
    const double x = reference.x[i];
    if (x < x_min || x > x_max) continue;
    ref.x.push_back(x);
    ref.p.push_back(reference.p[i]);
    ref.v.push_back(reference.v[i]);
    num_on_ref.x.push_back(x);
    num_on_ref.p.push_back(interpolate(numeric.x, numeric.p, x));
    num_on_ref.v.push_back(interpolate(numeric.x, numeric.v, x));
  }
  if (ref.x.size() < 2) throw std::invalid_argument("comparison interval holds fewer than 2 points");
  for (std::size_t i = 0; i < ref.x.size(); ++i) {
    const double ep = std::abs(num_on_ref.p[i] - ref.p[i]);
    const double ev = std::abs(num_on_ref.v[i] - ref.v[i]);
    rep.linf_p = std::max(rep.linf_p, ep);
    rep.linf_v = std::max(rep.linf_v, ev);
    rep.max_p = std::max(rep.max_p, num_on_ref.p[i]);
    rep.max_p_reference = std::max(rep.max_p_reference, ref.p[i]);
    if (i + 1 < ref.x.size()) {
      const double h = ref.x[i + 1] - ref.x[i];
      rep.l1_p += 0.5 * h * (ep + std::abs(num_on_ref.p[i + 1] - ref.p[i + 1]));
      rep.l1_v += 0.5 * h * (ev + std::abs(num_on_ref.v[i + 1] - ref.v[i + 1]));
    }
  }
  rep.shock_position = steepest_gradient(num_on_ref, x_min, x_max);
  rep.reference_shock_position = steepest_gradient(ref, x_min, x_max);
  rep.shock_error = std::abs(rep.shock_position - rep.reference_shock_position);
  return rep;
}

template <int Dim>
std::vector<Vec<Dim>> ray_directions(int count) {
  std::vector<Vec<Dim>> dirs;
  if constexpr (Dim == 1) {
    dirs.push_back({1.0});
  } else if constexpr (Dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / count;
      dirs.push_back({std::cos(phi), std::sin(phi)});
    }
  } else {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double rho = std::sqrt(1.0 - z * z);
      dirs.push_back({rho * std::cos(golden * k), rho * std::sin(golden * k), z});
    }
  }
  return dirs;
}

template <int Dim>
RadialProfileData ray_profile(const Dgsem<Dim>& solver, const DGField<Dim>& field,
                              const std::vector<double>& r, int rays) {
  const auto dirs = ray_directions<Dim>(rays);
  RadialProfileData prof;
  prof.x = r;
  prof.p.assign(r.size(), 0.0);
  prof.v.assign(r.size(), 0.0);
  for (const auto& d : dirs) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      Vec<Dim> x;
      for (int k = 0; k < Dim; ++k) x[k] = r[i] * d[k];
      const auto [p, v] = solver.sample(field, x, d);
      prof.p[i] += p / dirs.size();
      prof.v[i] += v / dirs.size();
    }
  }
  return prof;
}

template <int Dim>
double ray_shock_radius(const Dgsem<Dim>& solver, const DGField<Dim>& field, int rays, double lo,
                        double hi, double dr) {
  std::vector<double> r;
  for (double x = lo; x <= hi + 1e-12; x += dr) r.push_back(x);
  double sum = 0.0;
  const auto dirs = ray_directions<Dim>(rays);
  for (const auto& d : dirs) {
    RadialProfileData prof;
    prof.x = r;
    for (double ri : r) {
      Vec<Dim> x;
      for (int k = 0; k < Dim; ++k) x[k] = ri * d[k];
      prof.p.push_back(solver.sample(field, x, d).first);
    }
    sum += steepest_gradient(prof, lo, hi);
  }
  return sum / dirs.size();
}

template <int Dim>
double inner_mean_pressure(const Dgsem<Dim>& solver, const DGField<Dim>& field, double radius) {
  double num = 0.0;
  double den = 0.0;
  const int npe = solver.nodes_per_element();
  for (long e = 0; e < field.num_elements(); ++e) {
    for (int n = 0; n < npe; ++n) {
      if (norm<Dim>(solver.node_position(e, n)) >= radius) continue;
      const double w = solver.node_weight(n);
      num += w * prim_from_cons<Dim>(field.cons(e * npe + n)).p();
      den += w;
    }
  }
  if (!(den > 0.0)) throw std::invalid_argument("no nodes inside the requested radius");
  return num / den;
}

RadialProfileData reference_profile(Example e, int dim, double t, const std::vector<double>& xs,
                                    int radial_cells) {
  RadialProfileData prof;
  prof.x = xs;
  if (e == Example::ex1 || e == Example::ex2 || e == Example::entropy_test) {
    const double v0 = initial_velocity(e, 1.0);
    SelfSimilarSolution sol = v0 < 0.0 ? shock_solution(dim, 1.0, v0)
                                       : integrate_lai(dim, 1.0, v0, 1e-6, 50.0);
    for (double x : xs) {
      const auto [p, v] = evaluate_reference(sol, t, std::max(x, 1e-300));
      prof.p.push_back(p);
      prof.v.push_back(v);
    }
    return prof;
  }
  double half = e == Example::ex5 ? 5.0 : 6.0;
  RadialGrid grid(radial_cells, 2.0 * half);
  RadialConfig cfg;
  cfg.dim = dim;
  cfg.t_end = t;
  const auto res = run_radial(
      grid, [e](double r) { return initial_pressure(e, r); },
      [e](double r) { return initial_velocity(e, r); }, cfg, {t});
  std::vector<double> centers(grid.cells);
  for (int i = 0; i < grid.cells; ++i) centers[i] = grid.center(i);
  const auto& last = res.profiles.back();
  for (double x : xs) {
    prof.p.push_back(interpolate(centers, last.p, x));
    prof.v.push_back(interpolate(centers, last.v, x));
  }
  return prof;
}

std::vector<Table2Row> compute_table2(double h) {
  std::vector<Table2Row> rows;
  for (int d : {2, 3}) {
    const auto sol = shock_solution(d, 1.0, -1.0 / std::sqrt(2.0), h);
    const auto& s = *sol.shock;
    rows.push_back({d, s.s_tilde, s.p_minus, s.p_plus, s.v_plus});
  }
  return rows;
}

std::vector<Table2Row> table2_reference() {
  return {{2, 0.45503, 15.75505, 5.71869, -0.41629}, {3, 0.52314, 25.56463, 17.16524, -0.17106}};
}

namespace {

std::vector<double> grid_between(double lo, double hi, double step) {
  std::vector<double> xs;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) xs.push_back(lo + i * step);
  return xs;
}

void write_profile_csv(const std::string& path, const RadialProfileData& prof) {
  std::ofstream out(path);
  out << "x,p,v\n" << std::setprecision(17);
  for (std::size_t i = 0; i < prof.x.size(); ++i) {
    out << prof.x[i] << ',' << prof.p[i] << ',' << prof.v[i] << '\n';
  }
}

nlohmann::json report_json(const ComparisonReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); };
  return {{"x_min", r.x_min},
          {"x_max", r.x_max},
          {"l1_p", r.l1_p},
          {"linf_p", r.linf_p},
          {"l1_v", r.l1_v},
          {"linf_v", r.linf_v},
          {"shock_position", num(r.shock_position)},
          {"reference_shock_position", num(r.reference_shock_position)},
          {"shock_error", num(r.shock_error)},
          {"max_p", r.max_p},
          {"max_p_reference", r.max_p_reference}};
}

bool has_reference(Example e) { return e != Example::entropy_test; }

double compare_hi(const BenchmarkSpec& spec) {
  return spec.compare_x_max > 0.0 ? spec.compare_x_max : 0.5 * (spec.upper - spec.lower);
}

template <int Dim>
void run_dgsem(const BenchmarkSpec& spec, BenchmarkOutcome& out, const std::string& dir) {
  SolverConfig cfg = spec.dg;
  cfg.t_end = spec.t_end;
  CartesianMesh<Dim> mesh;
  mesh.lower.fill(spec.lower);
  mesh.upper.fill(spec.upper);
  mesh.elements_per_axis = spec.elements;
  const Example e = spec.example;
  typename Dgsem<Dim>::InitialCondition ic = [e](const Vec<Dim>& x) {
    return e == Example::entropy_test ? mollified_entropy_data<Dim>(x)
                                      : initial_condition_or_rest<Dim>(e, x);
  };
  Dgsem<Dim> solver(mesh, spec.order, cfg, ic);
  std::vector<double> times = spec.output_times.empty() ? std::vector<double>{spec.t_end}
                                                        : spec.output_times;
  const auto res = solver.run(solver.initial_field(), times);
  out.t = res.t;
  out.steps = res.steps;

  const double hi = compare_hi(spec);
  const double half = 0.5 * (spec.upper - spec.lower);
  const auto radii = grid_between(0.0, half, spec.compare_dx);
  out.profile = ray_profile(solver, res.final_field, radii, spec.rays);

  if (e == Example::ex1) {
    out.inner_pressure = inner_mean_pressure(solver, res.final_field, 0.3);
    out.shock_radius = ray_shock_radius(solver, res.final_field, spec.rays, 0.1,
                                        std::min(hi, 0.5 * half + 0.5), spec.compare_dx);
  }
  std::optional<RadialProfileData> ref;
  if (has_reference(e)) {
    const auto xs = grid_between(spec.compare_x_min, hi, spec.compare_dx);
    ref = reference_profile(e, Dim, res.t, xs, spec.reference_cells);
    out.report = compare_profiles(out.profile, *ref, spec.compare_x_min, hi);
  }

  if (dir.empty()) return;
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    const std::string path = dir + "/snapshot_" + std::to_string(i) + ".csv";
    std::ofstream f(path);
    write_snapshot_csv(f, solver, res.snapshots[i]);
    out.files.push_back(path);
  }
  {
    const std::string path = dir + "/entropy.csv";
    std::ofstream f(path);
    write_entropy_csv(f, res.entropy_log);
    out.files.push_back(path);
  }
  write_profile_csv(dir + "/profile.csv", out.profile);
  out.files.push_back(dir + "/profile.csv");
  if (ref) {
    write_profile_csv(dir + "/reference.csv", *ref);
    out.files.push_back(dir + "/reference.csv");
  }
}

void run_radial_bench(const BenchmarkSpec& spec, BenchmarkOutcome& out, const std::string& dir) {
  RadialGrid grid(spec.radial_cells, spec.radial_x_max);
  RadialConfig cfg;
  cfg.dim = spec.dim;
  cfg.t_end = spec.t_end;
  cfg.cfl = spec.radial_cfl;
  cfg.reconstruction = spec.reconstruction;
  const Example e = spec.example;
  std::vector<double> times = spec.output_times.empty() ? std::vector<double>{spec.t_end}
                                                        : spec.output_times;
  const auto res = run_radial(
      grid, [e](double r) { return initial_pressure(e, r); },
      [e](double r) { return initial_velocity(e, r); }, cfg, times);
  out.t = res.t;
  out.steps = res.steps;
  out.focusing_time = focusing_time(res);
  const auto& last = res.profiles.back();
  for (int i = 0; i < grid.cells; ++i) out.profile.x.push_back(grid.center(i));
  out.profile.p = last.p;
  out.profile.v = last.v;

  std::optional<RadialProfileData> ref;
  if (e == Example::ex1 || e == Example::ex2) {
    const double hi = compare_hi(spec);
    const auto xs = grid_between(spec.compare_x_min, hi, spec.compare_dx);
    ref = reference_profile(e, spec.dim, res.t, xs);
    out.report = compare_profiles(out.profile, *ref, spec.compare_x_min, hi);
  }

  if (dir.empty()) return;
  {
    const std::string path = dir + "/radial.csv";
    std::ofstream f(path);
    write_radial_csv(f, grid, res.profiles);
    out.files.push_back(path);
  }
  {
    const std::string path = dir + "/inner_pressure.csv";
    std::ofstream f(path);
    f << "t,p\n" << std::setprecision(17);
    for (const auto& [t, p] : res.inner_pressure) f << t << ',' << p << '\n';
    out.files.push_back(path);
  }
  write_profile_csv(dir + "/profile.csv", out.profile);
  out.files.push_back(dir + "/profile.csv");
  if (ref) {
    write_profile_csv(dir + "/reference.csv", *ref);
    out.files.push_back(dir + "/reference.csv");
  }
}

void run_selfsim_bench(const BenchmarkSpec& spec, BenchmarkOutcome& out, const std::string& dir) {
  if (spec.example != Example::ex1 && spec.example != Example::ex2) {
    throw std::invalid_argument("the self-similar solver covers Examples 1 and 2 only");
  }
  const auto xs = grid_between(spec.compare_x_min, compare_hi(spec), spec.compare_dx);
  out.profile = reference_profile(spec.example, spec.dim, spec.t_end, xs);
  out.t = spec.t_end;
  if (dir.empty()) return;
  write_profile_csv(dir + "/reference.csv", out.profile);
  out.files.push_back(dir + "/reference.csv");
}

}  // namespace

BenchmarkOutcome run_benchmark(const BenchmarkSpec& spec) {
  spec.validate();
  BenchmarkOutcome out;
  const std::string dir = spec.output_dir;
  if (!dir.empty()) fs::create_directories(dir);
  switch (spec.solver) {
    case SolverKind::dgsem:
      if (spec.dim == 2) {
        run_dgsem<2>(spec, out, dir);
      } else {
        run_dgsem<3>(spec, out, dir);
      }
      break;
    case SolverKind::radial:
      run_radial_bench(spec, out, dir);
      break;
    case SolverKind::selfsim:
      run_selfsim_bench(spec, out, dir);
      break;
  }
  if (!dir.empty()) {
    nlohmann::json j = {{"example", to_string(spec.example)},
                        {"dim", spec.dim},
                        {"solver", to_string(spec.solver)},
                        {"t", out.t},
                        {"steps", out.steps}};
    if (std::isfinite(out.inner_pressure)) j["inner_pressure"] = out.inner_pressure;
    if (std::isfinite(out.shock_radius)) j["shock_radius"] = out.shock_radius;
    if (std::isfinite(out.focusing_time)) j["focusing_time"] = out.focusing_time;
    if (out.report) j["comparison"] = report_json(*out.report);
    std::ofstream f(dir + "/report.json");
    f << std::setw(2) << j << '\n';
    out.files.push_back(dir + "/report.json");
  }
  return out;
}

EntropyExperimentResult entropy_experiment(int dim, int elements, int order, int steps,
                                           double tolerance) {
  EntropyExperimentResult result;
  auto body = [&](auto tag) {
    constexpr int D = decltype(tag)::value;
    SolverConfig cfg;
    cfg.volume_flux = TwoPointFlux::ec;
    cfg.interface_flux = TwoPointFlux::ec;
    cfg.blending = false;
    cfg.positivity_limit = false;
    cfg.boundary = BoundaryMode::periodic;
    Dgsem<D> probe(CartesianMesh<D>::cube(-2.0, 2.0, elements), order, cfg,
                   [](const Vec<D>& x) { return mollified_entropy_data<D>(x); });
    cfg.t_end = steps * probe.cfl_dt();
    Dgsem<D> solver(CartesianMesh<D>::cube(-2.0, 2.0, elements), order, cfg,
                    [](const Vec<D>& x) { return mollified_entropy_data<D>(x); });
    auto observer = [&](double t, const DGField<D>& f, const DGField<D>& tend) {
      const auto b = solver.total_entropy_and_rate(f, tend);
      result.log.push_back({t, b.total, b.rate});
      result.max_relative_rate = std::max(result.max_relative_rate, std::abs(b.rate / b.total));
    };
    const auto res = solver.run(solver.initial_field(), {}, observer);
    result.rhs_evaluations = res.rhs_evaluations;
  };
  if (dim == 2) {
    body(std::integral_constant<int, 2>{});
  } else if (dim == 3) {
    body(std::integral_constant<int, 3>{});
  } else {
    throw std::invalid_argument("entropy experiment dimension must be 2 or 3");
  }
  result.passed = result.max_relative_rate <= tolerance;
  return result;
}

#define UREL_INSTANTIATE_BENCH(D)                                                              \
  template PrimState<D> initial_condition<D>(Example, const Vec<D>&);                          \
  template PrimState<D> initial_condition_or_rest<D>(Example, const Vec<D>&);                  \
  template PrimState<D> mollified_entropy_data<D>(const Vec<D>&, double);                      \
  template std::vector<Vec<D>> ray_directions<D>(int);                                         \
  template RadialProfileData ray_profile<D>(const Dgsem<D>&, const DGField<D>&,                \
                                            const std::vector<double>&, int);                  \
  template double ray_shock_radius<D>(const Dgsem<D>&, const DGField<D>&, int, double, double, \
                                      double);                                                 \
  template double inner_mean_pressure<D>(const Dgsem<D>&, const DGField<D>&, double);

UREL_INSTANTIATE_BENCH(2)
UREL_INSTANTIATE_BENCH(3)

#undef UREL_INSTANTIATE_BENCH

}  // namespace urel
