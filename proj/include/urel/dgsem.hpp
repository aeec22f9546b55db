#pragma once

// Discontinuous Galerkin spectral element discretization on uniform Cartesian
// meshes: flux differencing volume terms with a symmetric two-point flux,
// interface fluxes at element faces, convex blending with a first-order
// finite-volume update on the LGL subcells, a pressure positivity limiter,
// and the four-stage third-order SSP Runge-Kutta method.

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "urel/fluxes.hpp"
#include "urel/lgl.hpp"
#include "urel/state.hpp"

namespace urel {

enum class TwoPointFlux { ec, rusanov };
enum class BoundaryMode { periodic, dirichlet_initial, outflow };

const char* to_string(TwoPointFlux f);
const char* to_string(BoundaryMode b);
TwoPointFlux parse_two_point_flux(const std::string& s);
BoundaryMode parse_boundary_mode(const std::string& s);

template <int Dim>
struct CartesianMesh {
  Vec<Dim> lower{};
  Vec<Dim> upper{};
  int elements_per_axis = 1;

  static CartesianMesh cube(double lo, double hi, int elements) {
    CartesianMesh m;
    m.lower.fill(lo);
    m.upper.fill(hi);
    m.elements_per_axis = elements;
    return m;
  }
  double dx(int axis) const { return (upper[axis] - lower[axis]) / elements_per_axis; }
  long num_elements() const {
    long n = 1;
    for (int k = 0; k < Dim; ++k) n *= elements_per_axis;
    return n;
  }
};

/// Parameters of the modal smoothness indicator that steers subcell blending.
struct BlendingParams {
  double alpha_max = 1.0;
  double alpha_min = 0.001;
  /// Threshold T = threshold_scale * 10^(-threshold_exponent * (N+1)^{1/4}).
  double threshold_scale = 0.5;
  double threshold_exponent = 1.8;
  /// alpha_e = max(alpha_e, 0.5 * alpha_neighbour) over face neighbours.
  bool smooth = true;
};

struct SolverConfig {
  double cfl = 0.5;
  double t_end = 1.0;
  TwoPointFlux volume_flux = TwoPointFlux::ec;
  TwoPointFlux interface_flux = TwoPointFlux::rusanov;
  bool blending = true;
  bool positivity_limit = true;
  BoundaryMode boundary = BoundaryMode::dirichlet_initial;
  BlendingParams blend;
  /// Positivity floor for nodal pressures.
  double pressure_floor = 1e-10;
  /// A failed step is retried with dt/2 at most this many times.
  int max_dt_halvings = 10;

  /// Throws std::invalid_argument unless cfl in (0, 1] and t_end > 0.
  void validate() const;
};

/// Nodal values of w. Layout: element -> node multi-index (axis 0 fastest) -> Dim+1 components.
template <int Dim>
struct DGField {
  static constexpr int nvar = Dim + 1;

  CartesianMesh<Dim> mesh;
  int order = 0;
  std::vector<double> values;

  DGField() = default;
  DGField(const CartesianMesh<Dim>& m, int n);

  int nodes_per_element() const;
  long num_elements() const { return mesh.num_elements(); }
  long num_nodes() const { return num_elements() * nodes_per_element(); }

  double* node(long global_node) { return values.data() + global_node * nvar; }
  const double* node(long global_node) const { return values.data() + global_node * nvar; }
  ConsVec<Dim> cons(long global_node) const;
  void set(long global_node, const ConsVec<Dim>& w);
};

/// Primitive states and cached flux inputs at every node of a field.
template <int Dim>
struct NodalStates {
  std::vector<PrimState<Dim>> prim;
  std::vector<EcPoint<Dim>> ec;
};

struct EntropyBudget {
  /// Total entropy sum_nodes weight * eta * J.
  double total = 0.0;
  /// Semidiscrete rate sum_nodes weight * omega . dw/dt * J.
  double rate = 0.0;
};

struct EntropyRecord {
  double t;
  double total;
  double rate;
};

template <int Dim>
struct Snapshot {
  double t;
  DGField<Dim> field;
  std::vector<double> alpha;
};

template <int Dim>
struct SimulationResult {
  DGField<Dim> final_field;
  double t = 0.0;
  long steps = 0;
  long rhs_evaluations = 0;
  std::vector<Snapshot<Dim>> snapshots;
  std::vector<EntropyRecord> entropy_log;
};

/// Blending coefficient of one element from nodal values of the indicator
/// variable p sqrt(1+|u|^2). Uses the energy fraction carried by the highest
/// Legendre modes and a logistic ramp; 0 means pure DG, 1 pure subcell FV.
double blending_coefficient(const std::vector<double>& indicator, const LglOperator& op,
                            int dim, const BlendingParams& params);

/// One step of the four-stage third-order SSP Runge-Kutta method:
///   u1 = u + dt/2 L(u),  u2 = u1 + dt/2 L(u1),
///   u3 = 2/3 u + 1/3 u2 + dt/6 L(u2),  u^{n+1} = u3 + dt/2 L(u3).
/// `post_stage` (optional) is applied to every stage value.
using RhsFunction =
    std::function<void(double t, const std::vector<double>& u, std::vector<double>& dudt)>;
using StageFunction = std::function<void(std::vector<double>& u)>;
void ssprk43_step(std::vector<double>& u, double t, double dt, const RhsFunction& rhs,
                  const StageFunction& post_stage = {});

template <int Dim>
class Dgsem {
 public:
  using InitialCondition = std::function<PrimState<Dim>(const Vec<Dim>&)>;
  /// Called after every RHS evaluation with (t, state, tendency).
  using RhsObserver =
      std::function<void(double, const DGField<Dim>&, const DGField<Dim>&)>;

  Dgsem(const CartesianMesh<Dim>& mesh, int order, const SolverConfig& config,
        InitialCondition initial);

  const CartesianMesh<Dim>& mesh() const { return mesh_; }
  const LglOperator& op() const { return op_; }
  const SolverConfig& config() const { return config_; }
  int nodes_per_element() const { return nodes_per_element_; }

  Vec<Dim> node_position(long element, int node) const;
  /// Quadrature weight of a node, product of the 1D LGL weights.
  double node_weight(int node) const { return node_weight_[node]; }
  /// Jacobian of the reference map, prod_k dx_k / 2.
  double jacobian() const { return jacobian_; }

  DGField<Dim> zero_field() const { return DGField<Dim>(mesh_, op_.order); }
  /// Nodal interpolation of the initial condition.
  DGField<Dim> initial_field() const;

  /// Throws DegenerateState on an inadmissible node.
  NodalStates<Dim> evaluate_states(const DGField<Dim>& field) const;

  /// Adds -(2/dx_k) sum_j 2 D_ij F~_k(s_i, s_j) along every line in every direction.
  void volume_fluxdiff(const DGField<Dim>& field, const NodalStates<Dim>& states,
                       TwoPointFlux two_point, DGField<Dim>& tend) const;
  /// Adds the first-order subcell finite-volume volume term (Rusanov fluxes at
  /// interior subcell faces, physical fluxes at the element boundary). Together
  /// with `surface` this is the complete subcell FV update.
  void fv_subcell_volume(const DGField<Dim>& field, const NodalStates<Dim>& states,
                         DGField<Dim>& tend) const;
  /// Adds the surface corrections (f* - f) / w_boundary at element faces.
  void surface(const DGField<Dim>& field, const NodalStates<Dim>& states,
               TwoPointFlux interface_flux, DGField<Dim>& tend) const;
  /// Volume term as the convex blend (1-alpha) DG + alpha FV per element.
  void blended_volume(const DGField<Dim>& field, const NodalStates<Dim>& states,
                      const std::vector<double>& alpha, DGField<Dim>& tend) const;
  std::vector<double> blending_coefficients(const NodalStates<Dim>& states) const;

  /// Full semidiscrete right-hand side. `alpha_out` receives the per-element
  /// blending coefficients when non-null.
  void rhs(const DGField<Dim>& field, DGField<Dim>& tend,
           std::vector<double>* alpha_out = nullptr) const;

  /// Scales nodal deviations from the element mean so that every nodal
  /// pressure is at least the floor. Element means are unchanged. Throws
  /// UnrecoverableVacuum if an element mean violates the floor.
  void positivity_limit(DGField<Dim>& field) const;

  /// dt = cfl * dx_min / (lambda_max (2N + 1)), lambda_max = 1.
  double cfl_dt() const;

  EntropyBudget total_entropy_and_rate(const DGField<Dim>& field,
                                       const DGField<Dim>& tend) const;
  /// Sum over the domain of weight * w * J per component.
  ConsVec<Dim> total_conserved(const DGField<Dim>& field) const;

  /// Advance to config().t_end. Snapshots are stored at each of `output_times`
  /// (steps are shortened to hit them); the entropy log gets one entry per step.
  SimulationResult<Dim> run(const DGField<Dim>& initial,
                            const std::vector<double>& output_times = {},
                            const RhsObserver& observer = {}) const;

  /// Interpolated pressure and the velocity component along `direction`
  /// (unit vector) at point x.
  std::pair<double, double> sample(const DGField<Dim>& field, const Vec<Dim>& x,
                                   const Vec<Dim>& direction) const;

  /// Element multi-index of a flat element index.
  std::array<int, Dim> element_index(long element) const;
  long element_id(const std::array<int, Dim>& index) const;

 private:
  void build_topology();
  /// Neighbour across face (axis, side); -1 at a non-periodic boundary.
  long neighbour(long element, int axis, int side) const;
  ConsVec<Dim> two_point(TwoPointFlux kind, const DGField<Dim>& field,
                         const NodalStates<Dim>& states, long a, long b, int dir) const;
  ConsVec<Dim> interface_value(TwoPointFlux kind, const PrimState<Dim>& left,
                               const PrimState<Dim>& right, int dir) const;

  CartesianMesh<Dim> mesh_;
  LglOperator op_;
  SolverConfig config_;
  InitialCondition initial_;
  int nodes_per_element_ = 0;
  std::vector<double> node_weight_;
  double jacobian_ = 1.0;
  std::array<int, Dim> stride_{};
  /// Per axis: node offsets of the line starts (axis digit 0).
  std::array<std::vector<int>, Dim> line_bases_;
  /// Ghost states for dirichlet_initial, per axis and side, indexed by
  /// boundary face ordinal * face nodes + face node.
  std::array<std::array<std::vector<PrimState<Dim>>, 2>, Dim> ghosts_;
  std::array<std::array<std::vector<long>, 2>, Dim> boundary_elements_;
};

template <int Dim>
void write_snapshot_csv(std::ostream& out, const Dgsem<Dim>& solver, const Snapshot<Dim>& snap);
void write_entropy_csv(std::ostream& out, const std::vector<EntropyRecord>& log);

}  // namespace urel
