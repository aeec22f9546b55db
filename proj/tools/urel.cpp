#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "urel/bench.hpp"
#include "urel/errors.hpp"

using namespace urel;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key = value lines become "--key value"; '#' starts a comment.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (auto& c : key) {
      if (c == '_') c = '-';
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

// Pulls "--config FILE" / "--config=FILE" out of argv and splices the file's
// flags in right after the subcommand, so later command-line flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (!path) return args;
  std::size_t at = 0;
  while (at < args.size() && args[at].rfind("-", 0) == 0) ++at;
  const auto extra = config_args(*path);
  args.insert(args.begin() + std::min(at + 1, args.size()), extra.begin(), extra.end());
  return args;
}

std::vector<double> parse_grid(const std::string& spec) {
  double a = 0.0;
  double step = 0.0;
  double b = 0.0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(spec);
  if (!(in >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) {
    throw std::invalid_argument("grid must be a:step:b with step > 0 and b >= a");
  }
  std::vector<double> xs;
  const long n = std::lround(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= n; ++i) xs.push_back(a + static_cast<double>(i) * step);
  return xs;
}

void write_profile(std::ostream& out, const RadialProfileData& prof) {
  out << "x,p,v\n" << std::setprecision(17);
  for (std::size_t i = 0; i < prof.x.size(); ++i) {
    out << prof.x[i] << ',' << prof.p[i] << ',' << prof.v[i] << '\n';
  }
}

// Reads x,p,v columns; with a t column only the rows of the last time are kept.
RadialProfileData read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> cols;
  {
    std::istringstream h(line);
    std::string c;
    while (std::getline(h, c, ',')) cols.push_back(trim(c));
  }
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int ix = col("x");
  const int ip = col("p");
  const int iv = col("v");
  const int it = col("t");
  if (ix < 0 || ip < 0 || iv < 0) throw std::runtime_error(path + ": needs x, p and v columns");
  RadialProfileData prof;
  double t_last = -INFINITY;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::istringstream r(line);
    std::string c;
    while (std::getline(r, c, ',')) row.push_back(std::stod(c));
    if (static_cast<int>(row.size()) != static_cast<int>(cols.size())) {
      throw std::runtime_error(path + ": ragged row");
    }
    if (it >= 0 && row[it] != t_last) {
      if (row[it] < t_last) throw std::runtime_error(path + ": t not increasing");
      t_last = row[it];
      prof = {};
    }
    prof.x.push_back(row[ix]);
    prof.p.push_back(row[ip]);
    prof.v.push_back(row[iv]);
  }
  if (prof.x.size() < 2) throw std::runtime_error(path + ": fewer than two rows");
  return prof;
}

void print_report(const ComparisonReport& r) {
  std::cout << std::setprecision(10) << "interval      [" << r.x_min << ", " << r.x_max << "]\n"
            << "L1(p)         " << r.l1_p << "\n"
            << "Linf(p)       " << r.linf_p << "\n"
            << "L1(v)         " << r.l1_v << "\n"
            << "Linf(v)       " << r.linf_v << "\n"
            << "shock         " << r.shock_position << "\n"
            << "shock (ref)   " << r.reference_shock_position << "\n"
            << "shock error   " << r.shock_error << "\n"
            << "max p         " << r.max_p << "\n"
            << "max p (ref)   " << r.max_p_reference << "\n";
}

struct RunOptions {
  std::string example = "1";
  int dim = 2;
  std::string solver = "dgsem";
  std::optional<int> elements, order, radial_cells, rays, reference_cells, max_halvings;
  std::optional<double> tend, cfl, lower, upper, radial_xmax, radial_cfl, compare_xmin,
      compare_xmax, alpha_max, alpha_min, threshold_scale, threshold_exponent, pressure_floor;
  std::optional<std::string> boundary, volume_flux, interface_flux, reconstruction;
  std::optional<bool> blending, limiter;
  std::vector<double> output_times;
  std::string out = "out";
};

template <class T>
void apply(const std::optional<T>& v, T& target) {
  if (v) target = *v;
}

BenchmarkSpec make_spec(const RunOptions& o) {
  const Example e = parse_example(o.example);
  auto spec = BenchmarkSpec::defaults(e, o.dim);
  spec.solver = parse_solver(o.solver);
  apply(o.elements, spec.elements);
  apply(o.order, spec.order);
  apply(o.radial_cells, spec.radial_cells);
  apply(o.rays, spec.rays);
  apply(o.reference_cells, spec.reference_cells);
  apply(o.tend, spec.t_end);
  apply(o.lower, spec.lower);
  apply(o.upper, spec.upper);
  apply(o.radial_xmax, spec.radial_x_max);
  apply(o.radial_cfl, spec.radial_cfl);
  apply(o.compare_xmin, spec.compare_x_min);
  apply(o.compare_xmax, spec.compare_x_max);
  apply(o.cfl, spec.dg.cfl);
  apply(o.blending, spec.dg.blending);
  apply(o.limiter, spec.dg.positivity_limit);
  apply(o.max_halvings, spec.dg.max_dt_halvings);
  apply(o.pressure_floor, spec.dg.pressure_floor);
  apply(o.alpha_max, spec.dg.blend.alpha_max);
  apply(o.alpha_min, spec.dg.blend.alpha_min);
  apply(o.threshold_scale, spec.dg.blend.threshold_scale);
  apply(o.threshold_exponent, spec.dg.blend.threshold_exponent);
  if (o.boundary) spec.dg.boundary = parse_boundary_mode(*o.boundary);
  if (o.volume_flux) spec.dg.volume_flux = parse_two_point_flux(*o.volume_flux);
  if (o.interface_flux) spec.dg.interface_flux = parse_two_point_flux(*o.interface_flux);
  if (o.reconstruction) spec.reconstruction = parse_reconstruction(*o.reconstruction);
  spec.dg.t_end = spec.t_end;
  spec.output_times = o.output_times;
  spec.output_dir = o.out;
  spec.validate();
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultra-relativistic Euler solvers and benchmarks"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  app.footer("--config FILE (anywhere on the line) reads key = value flags; command-line flags win.");

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run one benchmark and write CSV/JSON output");
  run->add_option("--example", ro.example, "1..5 or entropy-test")->capture_default_str();
  run->add_option("--dim", ro.dim, "Space dimension")->check(CLI::IsMember({2, 3}))->capture_default_str();
  run->add_option("--solver", ro.solver, "dgsem, radial or selfsim")->capture_default_str();
  run->add_option("--elements", ro.elements, "Elements per axis");
  run->add_option("--order", ro.order, "Polynomial degree N");
  run->add_option("--tend", ro.tend, "Final time");
  run->add_option("--out", ro.out, "Output directory (empty: none)")->capture_default_str();
  run->add_option("--cfl", ro.cfl, "DG CFL number");
  run->add_option("--lower", ro.lower, "Domain lower bound per axis");
  run->add_option("--upper", ro.upper, "Domain upper bound per axis");
  run->add_option("--boundary", ro.boundary, "periodic, dirichlet_initial or outflow");
  run->add_option("--volume-flux", ro.volume_flux, "ec or rusanov");
  run->add_option("--interface-flux", ro.interface_flux, "ec or rusanov");
  run->add_option("--blending", ro.blending, "Subcell FV blending (true/false)");
  run->add_option("--limiter", ro.limiter, "Positivity limiter (true/false)");
  run->add_option("--alpha-max", ro.alpha_max);
  run->add_option("--alpha-min", ro.alpha_min);
  run->add_option("--threshold-scale", ro.threshold_scale);
  run->add_option("--threshold-exponent", ro.threshold_exponent);
  run->add_option("--pressure-floor", ro.pressure_floor);
  run->add_option("--max-dt-halvings", ro.max_halvings);
  run->add_option("--radial-cells", ro.radial_cells, "Cells of the radial solver");
  run->add_option("--radial-xmax", ro.radial_xmax, "Outer radius of the radial grid");
  run->add_option("--radial-cfl", ro.radial_cfl);
  run->add_option("--reconstruction", ro.reconstruction, "first_order or muscl");
  run->add_option("--reference-cells", ro.reference_cells, "Cells of the radial reference");
  run->add_option("--rays", ro.rays, "Ray directions for profile extraction");
  run->add_option("--compare-xmin", ro.compare_xmin);
  run->add_option("--compare-xmax", ro.compare_xmax);
  run->add_option("--output-times", ro.output_times, "Snapshot times")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::string ref_example = "1";
  int ref_dim = 2;
  double ref_t = 1.0;
  std::string ref_grid = "0:0.01:2";
  std::string ref_out;
  int ref_cells = 5000;
  auto* reference = app.add_subcommand("reference", "Reference radial profile on a grid");
  reference->add_option("--example", ref_example)->capture_default_str();
  reference->add_option("--dim", ref_dim)->check(CLI::IsMember({2, 3}))->capture_default_str();
  reference->add_option("--t", ref_t)->capture_default_str();
  reference->add_option("--xgrid", ref_grid, "a:step:b")->capture_default_str();
  reference->add_option("--cells", ref_cells, "Radial cells for Examples 3-5")->capture_default_str();
  reference->add_option("--out", ref_out, "CSV file (stdout when empty)");

  double t2_h = 1e-6;
  double t2_tol = 1e-4;
  auto* table2 = app.add_subcommand("table2", "Example 1 shock states for d = 2, 3 against reference values");
  table2->add_option("--step", t2_h, "RK4 step in theta")->capture_default_str();
  table2->add_option("--tol", t2_tol, "Allowed absolute difference")->capture_default_str();

  int et_dim = 2;
  std::optional<int> et_elements;
  int et_order = 3;
  int et_steps = 60;
  double et_tol = 1e-12;
  std::string et_out;
  auto* entropy = app.add_subcommand("entropy-test", "Semidiscrete entropy conservation check");
  entropy->add_option("--dim", et_dim)->check(CLI::IsMember({2, 3}))->capture_default_str();
  entropy->add_option("--elements", et_elements, "Elements per axis (16 in 2D, 4 in 3D)");
  entropy->add_option("--order", et_order)->capture_default_str();
  entropy->add_option("--steps", et_steps)->capture_default_str();
  entropy->add_option("--tol", et_tol, "Bound on |dS/dt|/|S|")->capture_default_str();
  entropy->add_option("--out", et_out, "Entropy log CSV");

  std::string cmp_a;
  std::string cmp_b;
  std::optional<double> cmp_xmin, cmp_xmax;
  auto* compare = app.add_subcommand("compare", "Compare profile A against reference B");
  compare->add_option("--a", cmp_a, "CSV with x,p,v (optionally t)")->required();
  compare->add_option("--b", cmp_b, "Reference CSV")->required();
  compare->add_option("--xmin", cmp_xmin);
  compare->add_option("--xmax", cmp_xmax);

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run) {
      const auto spec = make_spec(ro);
      const auto out = run_benchmark(spec);
      std::cout << std::setprecision(10) << "example " << to_string(spec.example) << ", d = "
                << spec.dim << ", solver " << to_string(spec.solver) << "\n"
                << "t = " << out.t << " after " << out.steps << " steps\n";
      if (std::isfinite(out.inner_pressure)) {
        std::cout << "inner pressure " << out.inner_pressure << "\n";
      }
      if (std::isfinite(out.shock_radius)) std::cout << "shock radius   " << out.shock_radius << "\n";
      if (std::isfinite(out.focusing_time)) std::cout << "focusing time  " << out.focusing_time << "\n";
      if (out.report) print_report(*out.report);
      for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
    } else if (*reference) {
      const auto prof = reference_profile(parse_example(ref_example), ref_dim, ref_t,
                                          parse_grid(ref_grid), ref_cells);
      if (ref_out.empty()) {
        write_profile(std::cout, prof);
      } else {
        std::ofstream f(ref_out);
        if (!f) throw std::runtime_error("cannot write " + ref_out);
        write_profile(f, prof);
      }
    } else if (*table2) {
      const auto got = compute_table2(t2_h);
      const auto ref = table2_reference();
      double worst = 0.0;
      std::printf("%-3s %-8s %14s %14s %14s\n", "d", "entry", "computed", "reference", "diff");
      for (std::size_t i = 0; i < got.size(); ++i) {
        const double a[] = {got[i].s_tilde, got[i].p_minus, got[i].p_plus, got[i].v_plus};
        const double b[] = {ref[i].s_tilde, ref[i].p_minus, ref[i].p_plus, ref[i].v_plus};
        const char* names[] = {"s~", "p-", "p+", "v+"};
        for (int k = 0; k < 4; ++k) {
          const double diff = std::abs(a[k] - b[k]);
          worst = std::max(worst, diff);
          std::printf("%-3d %-8s %14.8f %14.5f %14.2e\n", got[i].dim, names[k], a[k], b[k], diff);
        }
      }
      const bool ok = worst <= t2_tol;
      std::printf("max diff %.3e (%s, tolerance %.1e)\n", worst, ok ? "ok" : "MISMATCH", t2_tol);
      return ok ? 0 : 1;
    } else if (*entropy) {
      const int elements = et_elements.value_or(et_dim == 2 ? 16 : 4);
      const auto r = entropy_experiment(et_dim, elements, et_order, et_steps, et_tol);
      if (!et_out.empty()) {
        std::ofstream f(et_out);
        if (!f) throw std::runtime_error("cannot write " + et_out);
        write_entropy_csv(f, r.log);
      }
      std::cout << std::setprecision(6) << "rhs evaluations     " << r.rhs_evaluations << "\n"
                << "max |dS/dt| / |S|   " << r.max_relative_rate << "\n"
                << (r.passed ? "passed" : "FAILED") << " (bound " << et_tol << ")\n";
      return r.passed ? 0 : 1;
    } else if (*compare) {
      const auto a = read_profile(cmp_a);
      const auto b = read_profile(cmp_b);
      const double lo = cmp_xmin.value_or(std::max(a.x.front(), b.x.front()));
      const double hi = cmp_xmax.value_or(std::min(a.x.back(), b.x.back()));
      print_report(compare_profiles(a, b, lo, hi));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
