#include "urel/dgsem.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace urel {

const char* to_string(TwoPointFlux f) {
  switch (f) {
    case TwoPointFlux::ec:
      return "ec";
    case TwoPointFlux::rusanov:
      return "rusanov";
  }
  return "?";
}

const char* to_string(BoundaryMode b) {
  switch (b) {
    case BoundaryMode::periodic:
      return "periodic";
    case BoundaryMode::dirichlet_initial:
      return "dirichlet_initial";
    case BoundaryMode::outflow:
      return "outflow";
  }
  return "?";
}

TwoPointFlux parse_two_point_flux(const std::string& s) {
  if (s == "ec") return TwoPointFlux::ec;
  if (s == "rusanov") return TwoPointFlux::rusanov;
  throw std::invalid_argument("unknown two-point flux '" + s + "'");
}

BoundaryMode parse_boundary_mode(const std::string& s) {
  if (s == "periodic") return BoundaryMode::periodic;
  if (s == "dirichlet_initial" || s == "dirichlet") return BoundaryMode::dirichlet_initial;
  if (s == "outflow") return BoundaryMode::outflow;
  throw std::invalid_argument("unknown boundary mode '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(pressure_floor > 0.0)) throw std::invalid_argument("pressure floor must be positive");
}

// ---------------------------------------------------------------------------
// DGField

namespace {
int int_pow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}
}  // namespace

template <int Dim>
DGField<Dim>::DGField(const CartesianMesh<Dim>& m, int n) : mesh(m), order(n) {
  values.assign(static_cast<std::size_t>(num_nodes()) * nvar, 0.0);
}

template <int Dim>
int DGField<Dim>::nodes_per_element() const {
  return int_pow(order + 1, Dim);
}

template <int Dim>
ConsVec<Dim> DGField<Dim>::cons(long global_node) const {
  ConsVec<Dim> w;
  const double* v = node(global_node);
  for (int c = 0; c < nvar; ++c) w[c] = v[c];
  return w;
}

template <int Dim>
void DGField<Dim>::set(long global_node, const ConsVec<Dim>& w) {
  double* v = node(global_node);
  for (int c = 0; c < nvar; ++c) v[c] = w[c];
}

// ---------------------------------------------------------------------------
// Blending indicator

double blending_coefficient(const std::vector<double>& indicator, const LglOperator& op,
                            int dim, const BlendingParams& params) {
  const int n = op.size();
  const int total = int_pow(n, dim);
  if (static_cast<int>(indicator.size()) != total) {
    throw std::invalid_argument("indicator size does not match element");
  }
  // Inverse Vandermonde of the orthonormal Legendre basis at the LGL nodes.
  std::vector<double> vander(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      vander[i * n + j] = legendre(j, op.nodes[i]) * std::sqrt(j + 0.5);
    }
  }
  // Gauss-Jordan on [V | I].
  std::vector<double> inv(n * n, 0.0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(vander[r * n + col]) > std::abs(vander[piv * n + col])) piv = r;
    }
    for (int c = 0; c < n; ++c) {
      std::swap(vander[col * n + c], vander[piv * n + c]);
      std::swap(inv[col * n + c], inv[piv * n + c]);
    }
    const double d = vander[col * n + col];
    for (int c = 0; c < n; ++c) {
      vander[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = vander[r * n + col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        vander[r * n + c] -= f * vander[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }

  // Tensor-product modal transform, one axis at a time.
  std::vector<double> modal = indicator;
  std::vector<double> scratch(total);
  int stride = 1;
  for (int axis = 0; axis < dim; ++axis) {
    for (int idx = 0; idx < total; ++idx) {
      const int digit = (idx / stride) % n;
      const int base = idx - digit * stride;
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += inv[digit * n + j] * modal[base + j * stride];
      scratch[idx] = s;
    }
    modal.swap(scratch);
    stride *= n;
  }

  double energy_all = 0.0;
  double energy_clip1 = 0.0;  // all mode indices <= N-1
  double energy_clip2 = 0.0;  // all mode indices <= N-2
  for (int idx = 0; idx < total; ++idx) {
    int max_digit = 0;
    int rem = idx;
    for (int axis = 0; axis < dim; ++axis) {
      max_digit = std::max(max_digit, rem % n);
      rem /= n;
    }
    const double e = modal[idx] * modal[idx];
    energy_all += e;
    if (max_digit <= op.order - 1) energy_clip1 += e;
    if (max_digit <= op.order - 2) energy_clip2 += e;
  }
  if (!(energy_all > 0.0)) return 0.0;
  double energy = (energy_all - energy_clip1) / energy_all;
  if (op.order >= 2 && energy_clip1 > 0.0) {
    energy = std::max(energy, (energy_clip1 - energy_clip2) / energy_clip1);
  }

  const double threshold = params.threshold_scale *
                           std::pow(10.0, -params.threshold_exponent * std::pow(n, 0.25));
  const double sharpness = std::log((1.0 - 0.0001) / 0.0001);
  double alpha = 1.0 / (1.0 + std::exp(-sharpness / threshold * (energy - threshold)));
  if (alpha < params.alpha_min) {
    alpha = 0.0;
  } else if (alpha > 1.0 - params.alpha_min) {
    alpha = 1.0;
  }
  return std::min(params.alpha_max, alpha);
}

// ---------------------------------------------------------------------------
// Time stepping

void ssprk43_step(std::vector<double>& u, double t, double dt, const RhsFunction& rhs,
                  const StageFunction& post_stage) {
  const std::size_t n = u.size();
  std::vector<double> k(n);
  std::vector<double> stage(n);
  auto post = [&](std::vector<double>& v) {
    if (post_stage) post_stage(v);
  };

  rhs(t, u, k);
  for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k[i];
  post(stage);

  rhs(t + 0.5 * dt, stage, k);
  for (std::size_t i = 0; i < n; ++i) stage[i] += 0.5 * dt * k[i];
  post(stage);

  rhs(t + dt, stage, k);
  for (std::size_t i = 0; i < n; ++i) {
    stage[i] = (2.0 / 3.0) * u[i] + (1.0 / 3.0) * stage[i] + (dt / 6.0) * k[i];
  }
  post(stage);

  rhs(t + 0.5 * dt, stage, k);
  for (std::size_t i = 0; i < n; ++i) u[i] = stage[i] + 0.5 * dt * k[i];
  post(u);
}

// ---------------------------------------------------------------------------
// Dgsem

template <int Dim>
Dgsem<Dim>::Dgsem(const CartesianMesh<Dim>& mesh, int order, const SolverConfig& config,
                  InitialCondition initial)
    : mesh_(mesh), op_(lgl_operator(order)), config_(config), initial_(std::move(initial)) {
  config_.validate();
  if (mesh_.elements_per_axis < 1) throw std::invalid_argument("need at least one element per axis");
  for (int k = 0; k < Dim; ++k) {
    if (!(mesh_.upper[k] > mesh_.lower[k])) throw std::invalid_argument("empty mesh interval");
  }
  if (!initial_ && config_.boundary == BoundaryMode::dirichlet_initial) {
    throw std::invalid_argument("dirichlet_initial boundaries need an initial condition");
  }
  build_topology();
}

template <int Dim>
void Dgsem<Dim>::build_topology() {
  const int n = op_.size();
  nodes_per_element_ = int_pow(n, Dim);
  int s = 1;
  for (int k = 0; k < Dim; ++k) {
    stride_[k] = s;
    s *= n;
  }
  node_weight_.assign(nodes_per_element_, 1.0);
  for (int node = 0; node < nodes_per_element_; ++node) {
    for (int k = 0; k < Dim; ++k) node_weight_[node] *= op_.weights[(node / stride_[k]) % n];
  }
  jacobian_ = 1.0;
  for (int k = 0; k < Dim; ++k) jacobian_ *= 0.5 * mesh_.dx(k);

  for (int k = 0; k < Dim; ++k) {
    line_bases_[k].clear();
    for (int node = 0; node < nodes_per_element_; ++node) {
      if ((node / stride_[k]) % n == 0) line_bases_[k].push_back(node);
    }
  }

  if (config_.boundary == BoundaryMode::periodic) return;
  const int last = mesh_.elements_per_axis - 1;
  for (int k = 0; k < Dim; ++k) {
    for (int side = 0; side < 2; ++side) {
      auto& list = boundary_elements_[k][side];
      auto& ghosts = ghosts_[k][side];
      list.clear();
      ghosts.clear();
      for (long e = 0; e < mesh_.num_elements(); ++e) {
        if (element_index(e)[k] != (side == 0 ? 0 : last)) continue;
        list.push_back(e);
        if (config_.boundary != BoundaryMode::dirichlet_initial) continue;
        for (int base : line_bases_[k]) {
          const int node = base + (side == 0 ? 0 : op_.order) * stride_[k];
          ghosts.push_back(initial_(node_position(e, node)));
        }
      }
    }
  }
}

template <int Dim>
std::array<int, Dim> Dgsem<Dim>::element_index(long element) const {
  std::array<int, Dim> idx;
  for (int k = 0; k < Dim; ++k) {
    idx[k] = static_cast<int>(element % mesh_.elements_per_axis);
    element /= mesh_.elements_per_axis;
  }
  return idx;
}

template <int Dim>
long Dgsem<Dim>::element_id(const std::array<int, Dim>& index) const {
  long e = 0;
  for (int k = Dim - 1; k >= 0; --k) e = e * mesh_.elements_per_axis + index[k];
  return e;
}

template <int Dim>
long Dgsem<Dim>::neighbour(long element, int axis, int side) const {
  auto idx = element_index(element);
  const int ne = mesh_.elements_per_axis;
  idx[axis] += side == 0 ? -1 : 1;
  if (idx[axis] < 0 || idx[axis] >= ne) {
    if (config_.boundary != BoundaryMode::periodic) return -1;
    idx[axis] = (idx[axis] + ne) % ne;
  }
  return element_id(idx);
}

template <int Dim>
Vec<Dim> Dgsem<Dim>::node_position(long element, int node) const {
  const auto idx = element_index(element);
  const int n = op_.size();
  Vec<Dim> x;
  for (int k = 0; k < Dim; ++k) {
    const double xi = op_.nodes[(node / stride_[k]) % n];
    x[k] = mesh_.lower[k] + (idx[k] + 0.5 * (xi + 1.0)) * mesh_.dx(k);
  }
  return x;
}

template <int Dim>
DGField<Dim> Dgsem<Dim>::initial_field() const {
  if (!initial_) throw std::logic_error("no initial condition");
  DGField<Dim> f = zero_field();
  for (long e = 0; e < f.num_elements(); ++e) {
    for (int node = 0; node < nodes_per_element_; ++node) {
      f.set(e * nodes_per_element_ + node, cons_vector(initial_(node_position(e, node))));
    }
  }
  return f;
}

template <int Dim>
NodalStates<Dim> Dgsem<Dim>::evaluate_states(const DGField<Dim>& field) const {
  NodalStates<Dim> s;
  const long n = field.num_nodes();
  s.prim.reserve(n);
  s.ec.reserve(n);
  for (long g = 0; g < n; ++g) {
    s.prim.push_back(prim_from_cons<Dim>(field.cons(g)));
    s.ec.emplace_back(s.prim.back());
  }
  return s;
}

template <int Dim>
ConsVec<Dim> Dgsem<Dim>::two_point(TwoPointFlux kind, const DGField<Dim>& field,
                                   const NodalStates<Dim>& states, long a, long b,
                                   int dir) const {
  if (kind == TwoPointFlux::ec) return ec_flux(states.ec[a], states.ec[b], dir);
  return rusanov_flux<Dim>(physical_flux(states.prim[a], dir), physical_flux(states.prim[b], dir),
                           field.cons(a), field.cons(b), 1.0);
}

template <int Dim>
ConsVec<Dim> Dgsem<Dim>::interface_value(TwoPointFlux kind, const PrimState<Dim>& left,
                                         const PrimState<Dim>& right, int dir) const {
  if (kind == TwoPointFlux::ec) return ec_flux(left, right, dir);
  return rusanov_flux(left, right, dir);
}

template <int Dim>
void Dgsem<Dim>::volume_fluxdiff(const DGField<Dim>& field, const NodalStates<Dim>& states,
                                 TwoPointFlux two_point_kind, DGField<Dim>& tend) const {
  constexpr int nv = Dim + 1;
  const int n = op_.size();
  const bool symmetric = two_point_kind == TwoPointFlux::ec;
  for (long e = 0; e < field.num_elements(); ++e) {
    const long base_e = e * nodes_per_element_;
    for (int k = 0; k < Dim; ++k) {
      const double factor = -4.0 / mesh_.dx(k);
      for (int base : line_bases_[k]) {
        for (int i = 0; i < n; ++i) {
          const long gi = base_e + base + i * stride_[k];
          double* ti = tend.node(gi);
          const double dii = op_.d(i, i);
          if (dii != 0.0) {
            const auto f = physical_flux(states.prim[gi], k);
            for (int c = 0; c < nv; ++c) ti[c] += factor * dii * f[c];
          }
          if (symmetric) {
            for (int j = i + 1; j < n; ++j) {
              const long gj = base_e + base + j * stride_[k];
              const auto f = two_point(two_point_kind, field, states, gi, gj, k);
              const double dij = factor * op_.d(i, j);
              const double dji = factor * op_.d(j, i);
              double* tj = tend.node(gj);
              for (int c = 0; c < nv; ++c) {
                ti[c] += dij * f[c];
                tj[c] += dji * f[c];
              }
            }
          } else {
            for (int j = 0; j < n; ++j) {
              if (j == i) continue;
              const long gj = base_e + base + j * stride_[k];
              const auto f = two_point(two_point_kind, field, states, gi, gj, k);
              const double dij = factor * op_.d(i, j);
              for (int c = 0; c < nv; ++c) ti[c] += dij * f[c];
            }
          }
        }
      }
    }
  }
}

template <int Dim>
void Dgsem<Dim>::fv_subcell_volume(const DGField<Dim>& field, const NodalStates<Dim>& states,
                                   DGField<Dim>& tend) const {
  constexpr int nv = Dim + 1;
  const int n = op_.size();
  std::vector<ConsVec<Dim>> fhat(n + 1);
  for (long e = 0; e < field.num_elements(); ++e) {
    const long base_e = e * nodes_per_element_;
    for (int k = 0; k < Dim; ++k) {
      const double factor = -2.0 / mesh_.dx(k);
      for (int base : line_bases_[k]) {
        auto g = [&](int i) { return base_e + base + i * stride_[k]; };
        fhat[0] = physical_flux(states.prim[g(0)], k);
        for (int m = 1; m < n; ++m) {
          fhat[m] = two_point(TwoPointFlux::rusanov, field, states, g(m - 1), g(m), k);
        }
        fhat[n] = physical_flux(states.prim[g(n - 1)], k);
        for (int i = 0; i < n; ++i) {
          double* ti = tend.node(g(i));
          const double scale = factor / op_.weights[i];
          for (int c = 0; c < nv; ++c) ti[c] += scale * (fhat[i + 1][c] - fhat[i][c]);
        }
      }
    }
  }
}

template <int Dim>
void Dgsem<Dim>::surface(const DGField<Dim>& field, const NodalStates<Dim>& states,
                         TwoPointFlux interface_flux, DGField<Dim>& tend) const {
  constexpr int nv = Dim + 1;
  const int last_node = op_.order;
  const double w_first = op_.weights[0];
  const double w_last = op_.weights[last_node];
  for (int k = 0; k < Dim; ++k) {
    const double factor = 2.0 / mesh_.dx(k);
    const auto& bases = line_bases_[k];
    const long nf = static_cast<long>(bases.size());

    // Interior and periodic faces, each visited once from its lower element.
    for (long e = 0; e < field.num_elements(); ++e) {
      const long nb = neighbour(e, k, 1);
      if (nb < 0) continue;
      for (long m = 0; m < nf; ++m) {
        const long gl = e * nodes_per_element_ + bases[m] + last_node * stride_[k];
        const long gr = nb * nodes_per_element_ + bases[m];
        const ConsVec<Dim> fstar =
            interface_flux == TwoPointFlux::ec
                ? ec_flux(states.ec[gl], states.ec[gr], k)
                : two_point(TwoPointFlux::rusanov, field, states, gl, gr, k);
        const auto fl = physical_flux(states.prim[gl], k);
        const auto fr = physical_flux(states.prim[gr], k);
        double* tl = tend.node(gl);
        double* tr = tend.node(gr);
        for (int c = 0; c < nv; ++c) {
          tl[c] -= factor / w_last * (fstar[c] - fl[c]);
          tr[c] += factor / w_first * (fstar[c] - fr[c]);
        }
      }
    }
    if (config_.boundary == BoundaryMode::periodic) continue;

    for (int side = 0; side < 2; ++side) {
      const auto& list = boundary_elements_[k][side];
      for (std::size_t ord = 0; ord < list.size(); ++ord) {
        const long e = list[ord];
        for (long m = 0; m < nf; ++m) {
          const long g = e * nodes_per_element_ + bases[m] + (side == 0 ? 0 : last_node) * stride_[k];
          const PrimState<Dim>& inner = states.prim[g];
          const PrimState<Dim>& ghost = config_.boundary == BoundaryMode::dirichlet_initial
                                            ? ghosts_[k][side][ord * nf + m]
                                            : inner;
          const auto f = physical_flux(inner, k);
          double* t = tend.node(g);
          if (side == 0) {
            const auto fstar = interface_value(interface_flux, ghost, inner, k);
            for (int c = 0; c < nv; ++c) t[c] += factor / w_first * (fstar[c] - f[c]);
          } else {
            const auto fstar = interface_value(interface_flux, inner, ghost, k);
            for (int c = 0; c < nv; ++c) t[c] -= factor / w_last * (fstar[c] - f[c]);
          }
        }
      }
    }
  }
}

template <int Dim>
std::vector<double> Dgsem<Dim>::blending_coefficients(const NodalStates<Dim>& states) const {
  const long ne = mesh_.num_elements();
  std::vector<double> alpha(ne, 0.0);
  std::vector<double> indicator(nodes_per_element_);
  for (long e = 0; e < ne; ++e) {
    for (int node = 0; node < nodes_per_element_; ++node) {
      const auto& s = states.prim[e * nodes_per_element_ + node];
      indicator[node] = s.p() * s.lorentz();
    }
    alpha[e] = blending_coefficient(indicator, op_, Dim, config_.blend);
  }
  if (!config_.blend.smooth) return alpha;
  std::vector<double> smoothed = alpha;
  for (long e = 0; e < ne; ++e) {
    for (int k = 0; k < Dim; ++k) {
      for (int side = 0; side < 2; ++side) {
        const long nb = neighbour(e, k, side);
        if (nb >= 0) smoothed[e] = std::max(smoothed[e], 0.5 * alpha[nb]);
      }
    }
  }
  return smoothed;
}

template <int Dim>
void Dgsem<Dim>::blended_volume(const DGField<Dim>& field, const NodalStates<Dim>& states,
                                const std::vector<double>& alpha, DGField<Dim>& tend) const {
  DGField<Dim> dg = zero_field();
  volume_fluxdiff(field, states, config_.volume_flux, dg);
  bool any_fv = false;
  for (double a : alpha) any_fv = any_fv || a > 0.0;
  DGField<Dim> fv;
  if (any_fv) {
    fv = zero_field();
    fv_subcell_volume(field, states, fv);
  }
  const int per_element = nodes_per_element_ * (Dim + 1);
  for (long e = 0; e < field.num_elements(); ++e) {
    const double a = alpha[e];
    const std::size_t off = static_cast<std::size_t>(e) * per_element;
    double* t = tend.values.data() + off;
    const double* d = dg.values.data() + off;
    if (a == 0.0) {
      for (int i = 0; i < per_element; ++i) t[i] += d[i];
    } else if (a == 1.0) {
      const double* f = fv.values.data() + off;
      for (int i = 0; i < per_element; ++i) t[i] += f[i];
    } else {
      const double* f = fv.values.data() + off;
      for (int i = 0; i < per_element; ++i) t[i] += (1.0 - a) * d[i] + a * f[i];
    }
  }
}

template <int Dim>
void Dgsem<Dim>::rhs(const DGField<Dim>& field, DGField<Dim>& tend,
                     std::vector<double>* alpha_out) const {
  const NodalStates<Dim> states = evaluate_states(field);
  std::fill(tend.values.begin(), tend.values.end(), 0.0);
  if (config_.blending) {
    const auto alpha = blending_coefficients(states);
    blended_volume(field, states, alpha, tend);
    if (alpha_out) *alpha_out = alpha;
  } else {
    volume_fluxdiff(field, states, config_.volume_flux, tend);
    if (alpha_out) alpha_out->assign(field.num_elements(), 0.0);
  }
  surface(field, states, config_.interface_flux, tend);
}

template <int Dim>
void Dgsem<Dim>::positivity_limit(DGField<Dim>& field) const {
  constexpr int nv = Dim + 1;
  const double eps = config_.pressure_floor;
  // g(w) >= 0  <=>  p(w) >= eps; g is concave in w.
  auto margin = [eps](const double* w) {
    double m_sq = 0.0;
    for (int i = 0; i < Dim; ++i) m_sq += w[i] * w[i];
    const double g = w[Dim] - eps - std::sqrt(4.0 * eps * eps + m_sq);
    return std::isfinite(g) ? g : -std::numeric_limits<double>::infinity();
  };
  double weight_sum = 0.0;
  for (int node = 0; node < nodes_per_element_; ++node) weight_sum += node_weight_[node];

  for (long e = 0; e < field.num_elements(); ++e) {
    const long base = e * nodes_per_element_;
    double g_min = std::numeric_limits<double>::infinity();
    for (int node = 0; node < nodes_per_element_; ++node) {
      g_min = std::min(g_min, margin(field.node(base + node)));
    }
    if (g_min >= 0.0) continue;

    std::array<double, nv> mean{};
    for (int node = 0; node < nodes_per_element_; ++node) {
      const double* w = field.node(base + node);
      for (int c = 0; c < nv; ++c) mean[c] += node_weight_[node] * w[c];
    }
    for (int c = 0; c < nv; ++c) mean[c] /= weight_sum;
    const double g_mean = margin(mean.data());
    if (!(g_mean > 0.0)) {
      throw UnrecoverableVacuum("element mean pressure below floor in element " +
                                    std::to_string(e),
                                e);
    }
    const double theta = std::isfinite(g_min) ? g_mean / (g_mean - g_min) : 0.0;
    for (int node = 0; node < nodes_per_element_; ++node) {
      double* w = field.node(base + node);
      for (int c = 0; c < nv; ++c) {
        w[c] = theta == 0.0 ? mean[c] : mean[c] + theta * (w[c] - mean[c]);
      }
    }
  }
}

template <int Dim>
double Dgsem<Dim>::cfl_dt() const {
  double dx = mesh_.dx(0);
  for (int k = 1; k < Dim; ++k) dx = std::min(dx, mesh_.dx(k));
  const double lambda_max = 1.0;
  return config_.cfl * dx / (lambda_max * (2.0 * op_.order + 1.0));
}

template <int Dim>
EntropyBudget Dgsem<Dim>::total_entropy_and_rate(const DGField<Dim>& field,
                                                 const DGField<Dim>& tend) const {
  EntropyBudget b;
  for (long e = 0; e < field.num_elements(); ++e) {
    for (int node = 0; node < nodes_per_element_; ++node) {
      const long g = e * nodes_per_element_ + node;
      const auto s = prim_from_cons<Dim>(field.cons(g));
      const auto omega = entropy_variables(s);
      const double* t = tend.node(g);
      double rate = 0.0;
      for (int c = 0; c <= Dim; ++c) rate += omega[c] * t[c];
      b.total += node_weight_[node] * entropy(s) * jacobian_;
      b.rate += node_weight_[node] * rate * jacobian_;
    }
  }
  return b;
}

template <int Dim>
ConsVec<Dim> Dgsem<Dim>::total_conserved(const DGField<Dim>& field) const {
  ConsVec<Dim> total{};
  for (long e = 0; e < field.num_elements(); ++e) {
    for (int node = 0; node < nodes_per_element_; ++node) {
      const double* w = field.node(e * nodes_per_element_ + node);
      for (int c = 0; c <= Dim; ++c) total[c] += node_weight_[node] * w[c] * jacobian_;
    }
  }
  return total;
}

template <int Dim>
SimulationResult<Dim> Dgsem<Dim>::run(const DGField<Dim>& initial,
                                      const std::vector<double>& output_times,
                                      const RhsObserver& observer) const {
  SimulationResult<Dim> result;
  DGField<Dim> u = initial;
  if (config_.positivity_limit) positivity_limit(u);

  std::vector<double> outputs = output_times;
  std::sort(outputs.begin(), outputs.end());
  std::size_t next_out = 0;
  auto snapshot = [&](double t) {
    std::vector<double> alpha(u.num_elements(), 0.0);
    if (config_.blending) alpha = blending_coefficients(evaluate_states(u));
    result.snapshots.push_back({t, u, std::move(alpha)});
  };
  while (next_out < outputs.size() && outputs[next_out] <= 0.0) {
    snapshot(0.0);
    ++next_out;
  }

  const double t_end = config_.t_end;
  const double dt_cfl = cfl_dt();
  DGField<Dim> stage_field = zero_field();
  DGField<Dim> stage_tend = zero_field();
  double t = 0.0;

  auto evaluate = [&](double ts, const std::vector<double>& values, std::vector<double>& dudt,
                      bool log_entropy) {
    stage_field.values = values;
    rhs(stage_field, stage_tend);
    ++result.rhs_evaluations;
    if (observer) observer(ts, stage_field, stage_tend);
    if (log_entropy) {
      const auto b = total_entropy_and_rate(stage_field, stage_tend);
      result.entropy_log.push_back({ts, b.total, b.rate});
    }
    dudt = stage_tend.values;
  };

  while (t < t_end * (1.0 - 1e-14)) {
    double dt = std::min(dt_cfl, t_end - t);
    if (next_out < outputs.size() && outputs[next_out] < t_end) {
      dt = std::min(dt, outputs[next_out] - t);
    }
    for (int attempt = 0;; ++attempt) {
      std::vector<double> values = u.values;
      const std::size_t log_size = result.entropy_log.size();
      int stage = 0;
      try {
        ssprk43_step(
            values, t, dt,
            [&](double ts, const std::vector<double>& v, std::vector<double>& dudt) {
              evaluate(ts, v, dudt, stage++ == 0);
            },
            [&](std::vector<double>& v) {
              if (!config_.positivity_limit) return;
              stage_field.values.swap(v);
              positivity_limit(stage_field);
              stage_field.values.swap(v);
            });
        u.values.swap(values);
        break;
      } catch (const Error&) {
        result.entropy_log.resize(log_size);
        if (attempt >= config_.max_dt_halvings) throw;
        dt *= 0.5;
      }
    }
    t += dt;
    ++result.steps;
    while (next_out < outputs.size() && outputs[next_out] <= t * (1.0 + 1e-12) + 1e-14) {
      snapshot(t);
      ++next_out;
    }
  }
  // Closing entropy record at the final state.
  {
    std::vector<double> dudt;
    evaluate(t, u.values, dudt, true);
  }
  while (next_out < outputs.size()) {
    snapshot(t);
    ++next_out;
  }
  result.t = t;
  result.final_field = std::move(u);
  return result;
}

template <int Dim>
std::pair<double, double> Dgsem<Dim>::sample(const DGField<Dim>& field, const Vec<Dim>& x,
                                             const Vec<Dim>& direction) const {
  const int n = op_.size();
  std::array<int, Dim> idx;
  std::array<std::vector<double>, Dim> basis;
  for (int k = 0; k < Dim; ++k) {
    const double rel = (x[k] - mesh_.lower[k]) / mesh_.dx(k);
    idx[k] = std::clamp(static_cast<int>(std::floor(rel)), 0, mesh_.elements_per_axis - 1);
    const double xi = 2.0 * (rel - idx[k]) - 1.0;
    basis[k] = lagrange_basis(op_.nodes, xi);
  }
  const long e = element_id(idx);
  double p = 0.0;
  double v = 0.0;
  for (int node = 0; node < nodes_per_element_; ++node) {
    double l = 1.0;
    for (int k = 0; k < Dim; ++k) l *= basis[k][(node / stride_[k]) % n];
    const auto s = prim_from_cons<Dim>(field.cons(e * nodes_per_element_ + node));
    const auto vel = lorentz_velocity(s);
    p += l * s.p();
    v += l * dot<Dim>(vel, direction);
  }
  return {p, v};
}

template <int Dim>
void write_snapshot_csv(std::ostream& out, const Dgsem<Dim>& solver, const Snapshot<Dim>& snap) {
  out << "t";
  for (int k = 1; k <= Dim; ++k) out << ",x" << k;
  out << ",p";
  for (int k = 1; k <= Dim; ++k) out << ",v" << k;
  out << ",alpha\n";
  out << std::setprecision(17);
  const int npe = solver.nodes_per_element();
  for (long e = 0; e < snap.field.num_elements(); ++e) {
    for (int node = 0; node < npe; ++node) {
      const auto x = solver.node_position(e, node);
      const auto s = prim_from_cons<Dim>(snap.field.cons(e * npe + node));
      const auto v = lorentz_velocity(s);
      out << snap.t;
      for (double c : x) out << ',' << c;
      out << ',' << s.p();
      for (double c : v) out << ',' << c;
      out << ',' << (snap.alpha.empty() ? 0.0 : snap.alpha[e]) << '\n';
    }
  }
}

void write_entropy_csv(std::ostream& out, const std::vector<EntropyRecord>& log) {
  out << "t,S,dSdt\n" << std::setprecision(17);
  for (const auto& r : log) out << r.t << ',' << r.total << ',' << r.rate << '\n';
}

#define UREL_INSTANTIATE_DGSEM(D)                                                     \
  template struct DGField<D>;                                                         \
  template class Dgsem<D>;                                                            \
  template void write_snapshot_csv<D>(std::ostream&, const Dgsem<D>&, const Snapshot<D>&);

UREL_INSTANTIATE_DGSEM(1)
UREL_INSTANTIATE_DGSEM(2)
UREL_INSTANTIATE_DGSEM(3)

#undef UREL_INSTANTIATE_DGSEM

}  // namespace urel
