#pragma once

// Discrete Noether identities for Lagrangians on maximal simplexes whose
// fields live in fibers above subsimplexes and are acted on fiber-wise by a
// one parameter group.
//
// For a maximal m-simplex T, F_T(S) is the derivative at t = 0 of the local
// Lagrangian when only the fiber above S is moved by the group action. With
// weights p(i, S) satisfying sum_{i in S'} p(i, S' - i) = 1,
//   W_T(i)    = F(i) + sum_{S not containing i} p(i, S) F(S + i)
//   V_T(i, j) = F(i) - F(j) + sum_{S not containing i, j} p(i, S) F(S + i) - p(j, S) F(S + j)
// and invariance of L_T gives (m + 1) W_T(i) = sum_{j != i} V_T(i, j).
//
// For general weights the difference expands to
//   (m + 1) W_T(i) - sum_j V_T(i, j) = sum_S F(S) + sum_{S not containing i} ((|S| + 1) p(i, S) - 1) F(S + i),
// so the identity holds for every invariant Lagrangian only with the uniform
// weights p(i, S) = 1 / (|S| + 1). Reports carry this predicted defect.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgauge/action.hpp"
#include "sgauge/error.hpp"
#include "sgauge/gauge.hpp"
#include "sgauge/lie.hpp"
#include "sgauge/mesh.hpp"
#include "sgauge/whitney.hpp"

namespace sgauge::noether {

/// Value of one fiber: a real or complex vector (one column), or a matrix
/// such as a group or algebra element.
using Fiber = Eigen::MatrixXcd;

/// Subsimplex of a maximal simplex as a bit set over its local vertices.
using Mask = unsigned;

/// Fields on one maximal simplex, one optional fiber per nonempty mask.
/// Subsimplexes without a fiber do not contribute.
class LocalFields {
 public:
  explicit LocalFields(Simplex t) : t_(t), fibers_(std::size_t{1} << t.size()) {}

  const Simplex& simplex() const { return t_; }
  Mask full() const { return (Mask{1} << t_.size()) - 1; }

  Simplex subsimplex(Mask mask) const {
    std::vector<VertexId> ids;
    for (int a = 0; a < t_.size(); ++a)
      if (mask & (Mask{1} << a)) ids.push_back(t_[a]);
    return Simplex(std::span<const VertexId>(ids));
  }

  Mask mask_of(const Simplex& s) const {
    Mask m = 0;
    for (VertexId v : s.vertices()) {
      const int p = t_.position(v);
      if (p < 0) throw InvalidArgument("not a subsimplex of " + to_string(t_));
      m |= Mask{1} << p;
    }
    return m;
  }

  const std::optional<Fiber>& operator[](Mask mask) const { return fibers_.at(mask); }
  std::optional<Fiber>& operator[](Mask mask) { return fibers_.at(mask); }
  const std::optional<Fiber>& at(const Simplex& s) const { return fibers_.at(mask_of(s)); }
  void set(const Simplex& s, Fiber value) { fibers_.at(mask_of(s)) = std::move(value); }

 private:
  Simplex t_;
  std::vector<std::optional<Fiber>> fibers_;
};

/// Fields attached to the simplexes of a complex, shared by every maximal
/// simplex containing them.
using GlobalFields = std::unordered_map<Simplex, Fiber, SimplexHash>;

inline LocalFields restrict_to(const GlobalFields& global, const Simplex& t) {
  LocalFields local(t);
  for (Mask m = 1; m <= local.full(); ++m) {
    const auto it = global.find(local.subsimplex(m));
    if (it != global.end()) local[m] = it->second;
  }
  return local;
}

using Lagrangian = std::function<double(const LocalFields&)>;

/// One parameter group acting on the fiber above a simplex: (S, t, value) -> value.
using GroupAction = std::function<Fiber(const Simplex&, double, const Fiber&)>;

/// Weights p(i, S) for a vertex i outside S.
using Weights = std::function<double(VertexId, const Simplex&)>;

/// p(i, S) = 1 / (|S| + 1).
inline Weights uniform_weights() {
  return [](VertexId, const Simplex& s) { return 1.0 / static_cast<double>(s.size() + 1); };
}

/// p(i, S) = 1 when i is below every vertex of S, else 0.
inline Weights lowest_vertex_weights() {
  return [](VertexId i, const Simplex& s) { return i < s[0] ? 1.0 : 0.0; };
}

/// Largest violation of sum_{i in S'} p(i, S' - i) = 1 over the simplexes of
/// dimension >= 1 of the complex.
inline double weights_defect(const Weights& p, const SimplicialComplex& mesh) {
  double worst = 0.0;
  for (int k = 1; k <= mesh.dimension(); ++k)
    for (const auto& s : mesh.simplices(k)) {
      double sum = 0.0;
      for (int a = 0; a < s.size(); ++a) sum += p(s[a], s.without(a));
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  return worst;
}

inline void validate_weights(const Weights& p, const SimplicialComplex& mesh, double tol = 1e-14) {
  const double d = weights_defect(p, mesh);
  if (!(d <= tol)) throw InvalidArgument("weights violate the partition condition by " + std::to_string(d));
}

struct FdOptions {
  double step = 1e-4;
  bool richardson = true;
};

/// Derivative at 0 of f by the 4th-order central stencil, optionally with
/// one Richardson level (step and step / 2).
inline double central_derivative(const std::function<double(double)>& f, const FdOptions& fd) {
  auto value = [&](double t) {
    const double v = f(t);
    if (!std::isfinite(v)) throw EvaluationError("lagrangian is not finite");
    return v;
  };
  auto stencil = [&](double h) {
    return (8.0 * (value(h) - value(-h)) - (value(2.0 * h) - value(-2.0 * h))) / (12.0 * h);
  };
  const double d1 = stencil(fd.step);
  if (!fd.richardson) return d1;
  const double d2 = stencil(0.5 * fd.step);
  return (16.0 * d2 - d1) / 15.0;
}

/// F_T(S): derivative of L_T when only the fiber above `mask` is moved.
inline double euler_lagrange(const Lagrangian& lagrangian, const LocalFields& fields, Mask mask,
                             const GroupAction& action, const FdOptions& fd = {}) {
  const auto& base = fields[mask];
  if (!base) return 0.0;
  const Simplex s = fields.subsimplex(mask);
  LocalFields moved = fields;
  return central_derivative(
      [&](double t) {
        moved[mask] = action(s, t, *base);
        return lagrangian(moved);
      },
      fd);
}

/// All fibers moved together.
inline LocalFields act(const LocalFields& fields, const GroupAction& action, double t) {
  LocalFields out = fields;
  for (Mask m = 1; m <= fields.full(); ++m)
    if (fields[m]) out[m] = action(fields.subsimplex(m), t, *fields[m]);
  return out;
}

/// Throws NotInvariantError unless L(Lambda[t] Phi) = L(Phi) at t in {+-0.1, +-0.01}.
inline void check_invariance(const Lagrangian& lagrangian, const LocalFields& fields, const GroupAction& action,
                             double tol = 1e-9) {
  const double l0 = lagrangian(fields);
  for (double t : {0.1, -0.1, 0.01, -0.01}) {
    const double lt = lagrangian(act(fields, action, t));
    if (!(std::abs(lt - l0) <= tol * std::max(1.0, std::abs(l0))))
      throw NotInvariantError("lagrangian on " + to_string(fields.simplex()) + " changes by " +
                              std::to_string(std::abs(lt - l0)) + " at t = " + std::to_string(t));
  }
}

struct LocalReport {
  Simplex simplex;
  std::vector<double> f;        // F_T by mask; f[0] unused
  std::vector<double> w;        // W_T(i) by local vertex
  Eigen::MatrixXd v;            // V_T(i, j) by local vertices
  std::vector<double> residual; // |(m+1) W_T(i) - sum_j V_T(i, j)|
  std::vector<double> predicted; // signed defect from the expansion above
  double max_residual = 0.0;
};

namespace detail {

/// W_T and V_T from the table of F_T values.
inline void assemble(const Simplex& t, const std::vector<double>& f, const Weights& p, LocalReport& r) {
  const int n = t.size();
  const Mask full = (Mask{1} << n) - 1;
  auto simplex_of = [&](Mask mask) {
    std::vector<VertexId> ids;
    for (int a = 0; a < n; ++a)
      if (mask & (Mask{1} << a)) ids.push_back(t[a]);
    return Simplex(std::span<const VertexId>(ids));
  };
  // sum over nonempty S avoiding `avoid` of p(i, S) F(S + i)
  auto lifted = [&](int i, Mask avoid) {
    double sum = 0.0;
    const Mask bit = Mask{1} << i;
    for (Mask s = 1; s <= full; ++s)
      if ((s & avoid) == 0) sum += p(t[i], simplex_of(s)) * f[s | bit];
    return sum;
  };
  r.w.assign(n, 0.0);
  r.v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) r.w[i] = f[Mask{1} << i] + lifted(i, Mask{1} << i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Mask avoid = (Mask{1} << i) | (Mask{1} << j);
      r.v(i, j) = f[Mask{1} << i] - f[Mask{1} << j] + lifted(i, avoid) - lifted(j, avoid);
    }
  double total = 0.0;
  for (Mask s = 1; s <= full; ++s) total += f[s];
  r.residual.assign(n, 0.0);
  r.predicted.assign(n, total);
  r.max_residual = 0.0;
  for (int i = 0; i < n; ++i) {
    const double flux = r.v.row(i).sum();
    r.residual[i] = std::abs(n * r.w[i] - flux);
    r.max_residual = std::max(r.max_residual, r.residual[i]);
    const Mask bit = Mask{1} << i;
    for (Mask s = 1; s <= full; ++s)
      if ((s & bit) == 0) {
        const Simplex sub = simplex_of(s);
        r.predicted[i] += ((sub.size() + 1) * p(t[i], sub) - 1.0) * f[s | bit];
      }
  }
}

}  // namespace detail

/// Local identity on one maximal simplex.
inline LocalReport noether_local(const Lagrangian& lagrangian, const GroupAction& action, const LocalFields& fields,
                                 const Weights& p, const FdOptions& fd = {}, bool verify_invariance = true) {
  if (verify_invariance) check_invariance(lagrangian, fields, action);
  LocalReport r;
  r.simplex = fields.simplex();
  r.f.assign(std::size_t{fields.full()} + 1, 0.0);
  for (Mask m = 1; m <= fields.full(); ++m) r.f[m] = euler_lagrange(lagrangian, fields, m, action, fd);
  detail::assemble(r.simplex, r.f, p, r);
  return r;
}

struct VertexBalance {
  VertexId vertex = 0;
  double w = 0.0;     // W(i)
  double flux = 0.0;  // sum_j V(i, j)
  double residual = 0.0;
  double predicted = 0.0;  // sum of the local predicted defects
};

struct GlobalReport {
  int dimension = 0;
  std::vector<VertexBalance> vertices;
  /// V(i, j) for each edge (i < j) in complex order; V(j, i) = -V(i, j).
  std::vector<double> edge_flux;
  /// V(j, i) assembled independently, for the antisymmetry check.
  std::vector<double> edge_flux_reversed;
  std::vector<LocalReport> local;
  double max_residual = 0.0;
};

/// Throws InvalidFieldError unless fibers shared between maximal simplexes agree.
inline void check_compatibility(const std::vector<LocalFields>& fields) {
  std::unordered_map<Simplex, const Fiber*, SimplexHash> seen;
  for (const auto& lf : fields)
    for (Mask m = 1; m <= lf.full(); ++m) {
      const Simplex s = lf.subsimplex(m);
      const auto it = seen.find(s);
      const Fiber* here = lf[m] ? &*lf[m] : nullptr;
      if (it == seen.end()) {
        seen.emplace(s, here);
        continue;
      }
      const Fiber* there = it->second;
      const bool same = (here == nullptr && there == nullptr) ||
                        (here != nullptr && there != nullptr && here->rows() == there->rows() &&
                         here->cols() == there->cols() && *here == *there);
      if (!same) throw InvalidFieldError("fields disagree on shared simplex " + to_string(s));
    }
}

/// Global identity: local reports summed over the maximal simplexes.
/// `lagrangians[t]` belongs to the t-th maximal simplex of `mesh`.
inline GlobalReport noether_global(const SimplicialComplex& mesh, const std::vector<Lagrangian>& lagrangians,
                                   const GroupAction& action, const std::vector<LocalFields>& fields,
                                   const Weights& p, const FdOptions& fd = {}, bool verify_invariance = true) {
  const auto& tets = mesh.maximal();
  if (lagrangians.size() != tets.size() || fields.size() != tets.size())
    throw InvalidArgument("need one lagrangian and one field set per maximal simplex");
  const int m = tets.front().dimension();
  for (std::size_t t = 0; t < tets.size(); ++t) {
    if (tets[t].dimension() != m) throw InvalidArgument("maximal simplexes of different dimensions");
    if (!(fields[t].simplex() == tets[t])) throw InvalidArgument("field set does not match its maximal simplex");
  }
  check_compatibility(fields);

  GlobalReport g;
  g.dimension = m;
  // global F(S) as the sum of local contributions
  std::unordered_map<Simplex, double, SimplexHash> f;
  g.edge_flux.assign(mesh.count(1), 0.0);
  g.edge_flux_reversed.assign(mesh.count(1), 0.0);
  for (std::size_t t = 0; t < tets.size(); ++t) {
    auto r = noether_local(lagrangians[t], action, fields[t], p, fd, verify_invariance);
    const Simplex& s = tets[t];
    for (Mask mask = 1; mask <= fields[t].full(); ++mask) f[fields[t].subsimplex(mask)] += r.f[mask];
    for (int a = 0; a < s.size(); ++a)
      for (int b = a + 1; b < s.size(); ++b) {
        const int e = mesh.index_of(Simplex{s[a], s[b]});
        g.edge_flux[e] += r.v(a, b);
        g.edge_flux_reversed[e] += r.v(b, a);
      }
    g.local.push_back(std::move(r));
  }

  std::vector<double> w(mesh.num_vertices(), 0.0), flux(mesh.num_vertices(), 0.0),
      predicted(mesh.num_vertices(), 0.0);
  for (const auto& r : g.local)
    for (int a = 0; a < r.simplex.size(); ++a) predicted[r.simplex[a]] += r.predicted[a];
  for (const auto& [s, value] : f) {
    if (s.size() == 1) {
      w[s[0]] += value;
      continue;
    }
    for (int a = 0; a < s.size(); ++a) w[s[a]] += p(s[a], s.without(a)) * value;
  }
  const auto& edges = mesh.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    flux[edges[e][0]] += g.edge_flux[e];
    flux[edges[e][1]] += g.edge_flux_reversed[e];
  }
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    VertexBalance b{static_cast<VertexId>(i), w[i], flux[i], std::abs((m + 1) * w[i] - flux[i]), predicted[i]};
    g.max_residual = std::max(g.max_residual, b.residual);
    g.vertices.push_back(b);
  }
  return g;
}

/// CSV of the per-vertex balance: vertex, W, flux, residual.
inline void write_csv(std::ostream& out, const GlobalReport& g) {
  out << "vertex,W,flux,residual\n";
  const auto old = out.precision(17);
  for (const auto& b : g.vertices) out << b.vertex << ',' << b.w << ',' << b.flux << ',' << b.residual << '\n';
  out.precision(old);
}

// Gauge theory instantiation: links on edges, optional scalar on vertices.

/// Edge fibers hold U_{ba} for the canonical edge (a, b); vertex fibers hold
/// Phi as a column when a scalar field is given.
inline GlobalFields gauge_fields(const LinkField& u, const ScalarField* phi = nullptr) {
  GlobalFields out;
  const auto& edges = u.mesh()->simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) out.emplace(edges[e], u[e].matrix());
  if (phi != nullptr)
    for (std::size_t v = 0; v < phi->size(); ++v)
      out.emplace(Simplex{static_cast<VertexId>(v)}, Fiber((*phi)[v]));
  return out;
}

/// Gauge rotation exp(t g) at vertex `center`: U_{ba} -> exp(t g) U_{ba} when
/// b is the center, U_{ba} exp(-t g) when a is, Phi -> exp(t g) Phi at the
/// center, every other fiber fixed.
inline GroupAction gauge_rotation(VertexId center, const AlgebraElement& g) {
  return [center, g](const Simplex& s, double t, const Fiber& value) -> Fiber {
    if (!s.contains(center)) return value;
    const Matrix rot = exp(t * g).matrix();
    if (s.size() == 1) return rot * value;
    if (s.size() == 2) {
      if (s[1] == center) return rot * value;
      return value * rot.adjoint();
    }
    return value;
  };
}

/// Local Lagrangian S'_T (plus the discrete scalar term when the fibers
/// carry a scalar field) of element `elem`, reading links from the fibers.
inline Lagrangian gauge_lagrangian(std::shared_ptr<const Discretization> disc, Group group, std::size_t elem,
                                   bool with_scalar = false, OriginChoice origins = OriginChoice::Lowest) {
  return [disc, group, elem, with_scalar, origins](const LocalFields& f) {
    const auto& mesh = disc->complex();
    const auto& e = disc->elements().at(elem);
    std::vector<GroupElement> links(mesh.count(1), GroupElement::identity(group));
    for (int idx : e.edges) {
      const auto& val = f.at(mesh.simplex(1, idx));
      if (!val) throw InvalidFieldError("missing link fiber");
      links[idx] = GroupElement::unchecked(group, *val);
    }
    const LinkField u(group, disc->mesh(), std::move(links));
    double l = action_sprime(*disc, u, elem, origins);
    if (with_scalar) {
      std::vector<Vector> phi(mesh.num_vertices(), Vector::Zero(matrix_size(group)));
      for (int v : e.vertices) {
        const auto& val = f.at(Simplex{static_cast<VertexId>(v)});
        if (!val) throw InvalidFieldError("missing scalar fiber");
        phi[v] = val->col(0);
      }
      l += scalar_action_discrete(*disc, u, ScalarField(group, std::move(phi)), elem);
    }
    return l;
  };
}

struct GaugeNoetherOptions {
  bool with_scalar = false;
  FdOptions fd;
  OriginChoice origins = OriginChoice::Lowest;
};

/// Global identity for the gauge action with a rotation at `center`.
inline GlobalReport gauge_noether(std::shared_ptr<const Discretization> disc, const LinkField& u,
                                  const ScalarField* phi, VertexId center, const AlgebraElement& g,
                                  const Weights& p, const GaugeNoetherOptions& opt = {}) {
  const auto& mesh = disc->complex();
  const auto global = gauge_fields(u, opt.with_scalar ? phi : nullptr);
  std::vector<Lagrangian> ls;
  std::vector<LocalFields> fields;
  for (std::size_t t = 0; t < mesh.maximal().size(); ++t) {
    ls.push_back(gauge_lagrangian(disc, u.group(), t, opt.with_scalar, opt.origins));
    fields.push_back(restrict_to(global, mesh.maximal()[t]));
  }
  return noether_global(mesh, ls, gauge_rotation(center, g), fields, p, opt.fd);
}

}  // namespace sgauge::noether
