#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <utility>
#include <vector>

#include "urel/bench.hpp"
#include "urel/errors.hpp"
#include "urel/fluxes.hpp"
#include "urel/radial.hpp"
#include "urel/selfsim.hpp"
#include "urel/state.hpp"

namespace py = pybind11;
using namespace urel;

namespace {

using List = std::vector<double>;

template <int Dim>
PrimState<Dim> prim(double p, const List& u) {
  Vec<Dim> v;
  for (int i = 0; i < Dim; ++i) v[i] = u[i];
  return PrimState<Dim>(p, v);
}

template <class A>
List to_list(const A& a) {
  return List(a.begin(), a.end());
}

// Calls f.template operator()<Dim>() for Dim = size.
template <class F>
auto by_dim(std::size_t size, F&& f) {
  switch (size) {
    case 1: return f.template operator()<1>();
    case 2: return f.template operator()<2>();
    case 3: return f.template operator()<3>();
    default: throw std::invalid_argument("velocity must have 1, 2 or 3 components");
  }
}

py::dict report_dict(const ComparisonReport& r) {
  py::dict d;
  d["x_min"] = r.x_min;
  d["x_max"] = r.x_max;
  d["l1_p"] = r.l1_p;
  d["linf_p"] = r.linf_p;
  d["l1_v"] = r.l1_v;
  d["linf_v"] = r.linf_v;
  d["shock_position"] = r.shock_position;
  d["reference_shock_position"] = r.reference_shock_position;
  d["shock_error"] = r.shock_error;
  d["max_p"] = r.max_p;
  d["max_p_reference"] = r.max_p_reference;
  return d;
}

py::dict profile_dict(const RadialProfileData& p) {
  py::dict d;
  d["x"] = p.x;
  d["p"] = p.p;
  d["v"] = p.v;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ultra-relativistic Euler solvers";

  auto base = py::register_exception<Error>(m, "UrelError", PyExc_RuntimeError);
  py::register_exception<DegenerateState>(m, "DegenerateState", base.ptr());
  py::register_exception<InvalidRadialState>(m, "InvalidRadialState", base.ptr());
  py::register_exception<UnrecoverableVacuum>(m, "UnrecoverableVacuum", base.ptr());
  py::register_exception<SonicDenominator>(m, "SonicDenominator", base.ptr());
  py::register_exception<NoShockFound>(m, "NoShockFound", base.ptr());
  py::register_exception<OriginUndefined>(m, "OriginUndefined", base.ptr());

  m.def("cons_from_prim", [](double p, const List& u) {
    return by_dim(u.size(), [&]<int D>() { return to_list(cons_vector(prim<D>(p, u))); });
  }, py::arg("p"), py::arg("u"), "Conserved vector w of (p, u).");

  m.def("prim_from_cons", [](const List& w) {
    if (w.size() < 2) throw std::invalid_argument("w needs at least two components");
    return by_dim(w.size() - 1, [&]<int D>() {
      ConsVec<D> c;
      for (int i = 0; i <= D; ++i) c[i] = w[i];
      const auto s = prim_from_cons<D>(c);
      return std::make_pair(s.p(), to_list(s.u()));
    });
  }, py::arg("w"), "(p, u) of a conserved vector.");

  m.def("entropy", [](double p, const List& u) {
    return by_dim(u.size(), [&]<int D>() { return entropy(prim<D>(p, u)); });
  }, py::arg("p"), py::arg("u"));
  m.def("entropy_flux", [](double p, const List& u) {
    return by_dim(u.size(), [&]<int D>() { return to_list(entropy_flux(prim<D>(p, u))); });
  }, py::arg("p"), py::arg("u"));
  m.def("entropy_variables", [](double p, const List& u) {
    return by_dim(u.size(), [&]<int D>() { return to_list(entropy_variables(prim<D>(p, u))); });
  }, py::arg("p"), py::arg("u"));
  m.def("flux_potential", [](double p, const List& u) {
    return by_dim(u.size(), [&]<int D>() { return to_list(flux_potential(prim<D>(p, u))); });
  }, py::arg("p"), py::arg("u"));
  m.def("entropy_hessian", [](double p, const List& u) {
    return by_dim(u.size(), [&]<int D>() {
      std::vector<List> rows;
      for (const auto& r : entropy_hessian(prim<D>(p, u))) rows.push_back(to_list(r));
      return rows;
    });
  }, py::arg("p"), py::arg("u"));
  m.def("flux_jacobian", [](double p, const List& u, int dir) {
    return by_dim(u.size(), [&]<int D>() {
      if (dir < 0 || dir >= D) throw std::invalid_argument("direction out of range");
      std::vector<List> rows;
      for (const auto& r : flux_jacobian(prim<D>(p, u), dir)) rows.push_back(to_list(r));
      return rows;
    });
  }, py::arg("p"), py::arg("u"), py::arg("dir"));

  m.def("physical_flux", [](double p, const List& u, int dir) {
    return by_dim(u.size(), [&]<int D>() {
      if (dir < 0 || dir >= D) throw std::invalid_argument("direction out of range");
      return to_list(physical_flux(prim<D>(p, u), dir));
    });
  }, py::arg("p"), py::arg("u"), py::arg("dir"));
  m.def("ec_flux", [](double pl, const List& ul, double pr, const List& ur, int dir) {
    if (ul.size() != ur.size()) throw std::invalid_argument("velocity sizes differ");
    return by_dim(ul.size(), [&]<int D>() {
      if (dir < 0 || dir >= D) throw std::invalid_argument("direction out of range");
      return to_list(ec_flux(prim<D>(pl, ul), prim<D>(pr, ur), dir));
    });
  }, py::arg("p_left"), py::arg("u_left"), py::arg("p_right"), py::arg("u_right"), py::arg("dir"));
  m.def("rusanov_flux", [](double pl, const List& ul, double pr, const List& ur, int dir) {
    if (ul.size() != ur.size()) throw std::invalid_argument("velocity sizes differ");
    return by_dim(ul.size(), [&]<int D>() {
      if (dir < 0 || dir >= D) throw std::invalid_argument("direction out of range");
      return to_list(rusanov_flux(prim<D>(pl, ul), prim<D>(pr, ur), dir));
    });
  }, py::arg("p_left"), py::arg("u_left"), py::arg("p_right"), py::arg("u_right"), py::arg("dir"));

  m.def("theta_map", [](double p, double u) {
    const auto s = theta_map(p, u);
    return std::make_pair(s.a, s.b);
  }, py::arg("p"), py::arg("u"), "(a, b) of the radial system.");
  m.def("theta_inv", [](double a, double b) { return theta_inv({a, b}); }, py::arg("a"),
        py::arg("b"));
  m.def("c_of_ab", [](double a, double b) { return c_of_ab({a, b}); }, py::arg("a"), py::arg("b"));

  m.def("shock_solution", [](int dim, double p0, double v0, double h) {
    const auto sol = shock_solution(dim, p0, v0, h);
    py::dict d;
    d["theta_tilde"] = sol.shock->theta_tilde;
    d["s_tilde"] = sol.shock->s_tilde;
    d["p_minus"] = sol.shock->p_minus;
    d["p_plus"] = sol.shock->p_plus;
    d["v_plus"] = sol.shock->v_plus;
    return d;
  }, py::arg("dim"), py::arg("p0") = 1.0, py::arg("v0") = -0.7071067811865476,
     py::arg("h") = 1e-6);

  m.def("table2", [](double h) {
    std::vector<py::dict> rows;
    for (const auto& r : compute_table2(h)) {
      py::dict d;
      d["dim"] = r.dim;
      d["s_tilde"] = r.s_tilde;
      d["p_minus"] = r.p_minus;
      d["p_plus"] = r.p_plus;
      d["v_plus"] = r.v_plus;
      rows.push_back(d);
    }
    return rows;
  }, py::arg("h") = 1e-6);

  m.def("reference_profile", [](const std::string& example, int dim, double t, const List& xs,
                                int cells) {
    return profile_dict(reference_profile(parse_example(example), dim, t, xs, cells));
  }, py::arg("example"), py::arg("dim"), py::arg("t"), py::arg("x"), py::arg("cells") = 5000);

  m.def("run_benchmark", [](const std::string& example, int dim, const std::string& solver,
                            py::kwargs kw) {
    auto spec = BenchmarkSpec::defaults(parse_example(example), dim);
    spec.solver = parse_solver(solver);
    spec.output_dir = "";
    for (const auto& [k, v] : kw) {
      const auto key = k.cast<std::string>();
      if (key == "elements") spec.elements = v.cast<int>();
      else if (key == "order") spec.order = v.cast<int>();
      else if (key == "t_end") spec.t_end = v.cast<double>();
      else if (key == "radial_cells") spec.radial_cells = v.cast<int>();
      else if (key == "reference_cells") spec.reference_cells = v.cast<int>();
      else if (key == "rays") spec.rays = v.cast<int>();
      else if (key == "cfl") spec.dg.cfl = v.cast<double>();
      else if (key == "blending") spec.dg.blending = v.cast<bool>();
      else if (key == "limiter") spec.dg.positivity_limit = v.cast<bool>();
      else if (key == "boundary") spec.dg.boundary = parse_boundary_mode(v.cast<std::string>());
      else if (key == "output_dir") spec.output_dir = v.cast<std::string>();
      else if (key == "output_times") spec.output_times = v.cast<List>();
      else throw std::invalid_argument("unknown benchmark option " + key);
    }
    spec.dg.t_end = spec.t_end;
    py::gil_scoped_release release;
    const auto out = run_benchmark(spec);
    py::gil_scoped_acquire acquire;
    py::dict d;
    d["t"] = out.t;
    d["steps"] = out.steps;
    d["inner_pressure"] = out.inner_pressure;
    d["shock_radius"] = out.shock_radius;
    d["focusing_time"] = out.focusing_time;
    d["files"] = out.files;
    d["profile"] = profile_dict(out.profile);
    d["report"] = out.report ? py::object(report_dict(*out.report)) : py::none();
    return d;
  }, py::arg("example"), py::arg("dim") = 2, py::arg("solver") = "dgsem",
     "Run a benchmark; keyword options override the defaults.");

  m.def("entropy_experiment", [](int dim, int elements, int order, int steps, double tol) {
    EntropyExperimentResult r;
    {
      py::gil_scoped_release release;
      r = entropy_experiment(dim, elements, order, steps, tol);
    }
    py::dict d;
    d["rhs_evaluations"] = r.rhs_evaluations;
    d["max_relative_rate"] = r.max_relative_rate;
    d["passed"] = r.passed;
    List t, s, rate;
    for (const auto& e : r.log) {
      t.push_back(e.t);
      s.push_back(e.total);
      rate.push_back(e.rate);
    }
    d["t"] = t;
    d["entropy"] = s;
    d["rate"] = rate;
    return d;
  }, py::arg("dim") = 2, py::arg("elements") = 16, py::arg("order") = 3, py::arg("steps") = 60,
     py::arg("tol") = 1e-12);
}
