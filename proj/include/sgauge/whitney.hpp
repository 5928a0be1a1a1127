#pragma once

// Lowest order Whitney forms on embedded simplexes, cochains, the coboundary,
// the de Rham map and exact mass matrices.
//
// Every simplex carries its canonical orientation (ascending vertex ids). The
// Whitney form of a k-simplex with vertexes s_0 < ... < s_k is
//
//   lambda_S = k! sum_j (-1)^j lambda_{s_j} dlambda_{s_0} ^ ... (omit j) ... ^ dlambda_{s_k}
//
// and the pointwise scalar product of alternating forms is the Euclidean one:
// <dlambda_P, dlambda_Q> = det(grad lambda_{p_a} . grad lambda_{q_b}).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <span>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "sgauge/error.hpp"
#include "sgauge/lie.hpp"
#include "sgauge/mesh.hpp"
#include "sgauge/quadrature.hpp"

namespace sgauge {

inline double inner(double a, double b) { return a * b; }
inline double inner(const AlgebraElement& a, const AlgebraElement& b) { return scalar_product(a, b); }
inline double inner(const Vector& a, const Vector& b) { return a.dot(b).real(); }

/// One value per canonical k-simplex of a complex.
template <class V>
class Cochain {
 public:
  using value_type = V;

  Cochain(MeshPtr mesh, int degree, V zero) : mesh_(std::move(mesh)), degree_(degree) {
    if (degree_ < 0 || degree_ > mesh_->dimension()) throw InvalidArgument("cochain degree out of range");
    values_.assign(mesh_->count(degree_), std::move(zero));
  }

  Cochain(MeshPtr mesh, int degree, std::vector<V> values)
      : mesh_(std::move(mesh)), degree_(degree), values_(std::move(values)) {
    if (degree_ < 0 || degree_ > mesh_->dimension()) throw InvalidArgument("cochain degree out of range");
    if (values_.size() != mesh_->count(degree_)) throw InvalidArgument("cochain has wrong number of values");
  }

  const MeshPtr& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  std::size_t size() const { return values_.size(); }

  V& operator[](std::size_t idx) { return values_[idx]; }
  const V& operator[](std::size_t idx) const { return values_[idx]; }
  std::span<const V> values() const { return values_; }

  /// Value on the simplex spanned by `ordered`, times the sign of the
  /// permutation relating `ordered` to the canonical order.
  V at(std::span<const VertexId> ordered) const {
    const Simplex s(ordered);
    if (s.dimension() != degree_) throw InvalidArgument("vertex tuple has wrong dimension");
    const V& v = values_[mesh_->index_of(s)];
    return permutation_sign(ordered) > 0 ? v : V(v * -1.0);
  }

  V at(std::initializer_list<VertexId> ordered) const {
    return at(std::span<const VertexId>(ordered.begin(), ordered.size()));
  }

 private:
  MeshPtr mesh_;
  int degree_;
  std::vector<V> values_;
};

/// (delta u)_T = sum_{T'} o(T, T') u_{T'}.
template <class V>
Cochain<V> coboundary(const Cochain<V>& u) {
  const auto& mesh = *u.mesh();
  const int k = u.degree();
  if (k >= mesh.dimension()) throw InvalidArgument("coboundary of a top-degree cochain");
  std::vector<V> out;
  out.reserve(mesh.count(k + 1));
  for (std::size_t t = 0; t < mesh.count(k + 1); ++t) {
    const auto& facets = mesh.facets(k + 1, t);
    // facets are ordered by omitted position p, so o(T, T'_p) = (-1)^p
    V acc = u[facets[0]];
    for (std::size_t p = 1; p < facets.size(); ++p) {
      if (p % 2 == 0)
        acc = acc + u[facets[p]];
      else
        acc = acc - u[facets[p]];
    }
    out.push_back(std::move(acc));
  }
  return Cochain<V>(u.mesh(), k + 1, std::move(out));
}

inline double factorial(int n) {
  double f = 1.0;
  for (int a = 2; a <= n; ++a) f *= a;
  return f;
}

/// Affine geometry of one embedded simplex.
class SimplexGeometry {
 public:
  explicit SimplexGeometry(std::vector<Point> points, std::vector<VertexId> ids = {})
      : points_(std::move(points)), ids_(std::move(ids)) {
    const int d = dimension();
    if (d < 1) throw InvalidArgument("simplex geometry needs at least two points");
    if (ids_.empty())
      for (int a = 0; a <= d; ++a) ids_.push_back(static_cast<VertexId>(a));
    Eigen::MatrixXd e(3, d);
    for (int a = 1; a <= d; ++a) e.col(a - 1) = points_[a] - points_[0];
    const Eigen::MatrixXd gram = e.transpose() * e;
    volume_ = std::sqrt(std::max(gram.determinant(), 0.0)) / factorial(d);
    double h = 0.0;
    for (int a = 0; a <= d; ++a)
      for (int b = a + 1; b <= d; ++b) h = std::max(h, (points_[a] - points_[b]).norm());
    diameter_ = h;
    if (!(volume_ > 1e-14 * std::pow(h, d))) throw DegenerateSimplexError("degenerate simplex");
    // Gradients within the affine hull: rows of (E^T E)^{-1} E^T.
    const Eigen::MatrixXd g = gram.ldlt().solve(e.transpose());
    grads_.assign(d + 1, Point::Zero());
    for (int a = 1; a <= d; ++a) {
      grads_[a] = g.row(a - 1).transpose();
      grads_[0] -= grads_[a];
    }
    grad_gram_.resize(d + 1, d + 1);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; b <= d; ++b) grad_gram_(a, b) = grads_[a].dot(grads_[b]);
  }

  SimplexGeometry(const SimplicialComplex& mesh, const Simplex& s)
      : SimplexGeometry(collect(mesh, s), {s.vertices().begin(), s.vertices().end()}) {}

  int dimension() const { return static_cast<int>(points_.size()) - 1; }
  double volume() const { return volume_; }
  double diameter() const { return diameter_; }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<VertexId>& ids() const { return ids_; }
  /// Gradients of the barycentric coordinates; they sum to zero.
  const std::vector<Point>& gradients() const { return grads_; }
  /// grad lambda_a . grad lambda_b
  const Eigen::MatrixXd& gradient_gram() const { return grad_gram_; }

  std::vector<double> barycentric(const Point& x) const {
    std::vector<double> l(points_.size());
    double rest = 1.0;
    for (std::size_t a = 1; a < points_.size(); ++a) {
      l[a] = grads_[a].dot(x - points_[0]);
      rest -= l[a];
    }
    l[0] = rest;
    return l;
  }

  Point point_at(std::span<const double> bary) const {
    Point x = Point::Zero();
    for (std::size_t a = 0; a < points_.size(); ++a) x += bary[a] * points_[a];
    return x;
  }

  /// Local position of a global vertex id, or -1.
  int local(VertexId id) const {
    for (std::size_t a = 0; a < ids_.size(); ++a)
      if (ids_[a] == id) return static_cast<int>(a);
    return -1;
  }

 private:
  static std::vector<Point> collect(const SimplicialComplex& mesh, const Simplex& s) {
    std::vector<Point> p;
    for (VertexId v : s.vertices()) p.push_back(mesh.coord(v));
    return p;
  }

  std::vector<Point> points_;
  std::vector<VertexId> ids_;
  std::vector<Point> grads_;
  Eigen::MatrixXd grad_gram_;
  double volume_ = 0.0;
  double diameter_ = 0.0;
};

/// Local k-subsimplexes of a d-simplex as ascending local index tuples, in
/// lexicographic order.
inline std::vector<std::vector<int>> local_subsimplices(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k + 1) {
      out.push_back(cur);
      return;
    }
    for (int a = start; a <= d; ++a) {
      cur.push_back(a);
      self(self, a + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// One summand coef * lambda_{bary} * dlambda_{dl[0]} ^ ... of a Whitney form.
struct WhitneyTerm {
  double coef;
  int bary;
  std::vector<int> dl;
};

inline std::vector<WhitneyTerm> whitney_terms(std::span<const int> local) {
  const int k = static_cast<int>(local.size()) - 1;
  std::vector<WhitneyTerm> terms;
  for (int j = 0; j <= k; ++j) {
    WhitneyTerm t{factorial(k) * ((j % 2 == 0) ? 1.0 : -1.0), local[j], {}};
    for (int a = 0; a <= k; ++a)
      if (a != j) t.dl.push_back(local[a]);
    terms.push_back(std::move(t));
  }
  return terms;
}

/// <dlambda_{p_0} ^ ..., dlambda_{q_0} ^ ...> for constant wedge products.
inline double wedge_inner(const Eigen::MatrixXd& grad_gram, std::span<const int> p, std::span<const int> q) {
  const auto k = static_cast<Eigen::Index>(p.size());
  if (k == 0) return 1.0;
  if (k == 1) return grad_gram(p[0], q[0]);
  if (k == 2) return grad_gram(p[0], q[0]) * grad_gram(p[1], q[1]) - grad_gram(p[0], q[1]) * grad_gram(p[1], q[0]);
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) m(a, b) = grad_gram(p[a], q[b]);
  return m.determinant();
}

/// Exact integral of lambda_0^{a_0} ... lambda_d^{a_d} over a d-simplex of
/// the given volume: d! |T| prod(a_i!) / (sum a_i + d)!.
inline double integrate_barycentric_monomial(int d, double volume, std::span<const int> exponents) {
  if (static_cast<int>(exponents.size()) != d + 1) throw InvalidArgument("need one exponent per vertex");
  double num = factorial(d) * volume;
  int total = 0;
  for (int a : exponents) {
    if (a < 0) throw InvalidArgument("negative exponent");
    num *= factorial(a);
    total += a;
  }
  return num / factorial(total + d);
}

inline double integrate_barycentric_monomial(const SimplexGeometry& t, std::span<const int> exponents) {
  return integrate_barycentric_monomial(t.dimension(), t.volume(), exponents);
}

/// Value of an alternating form at a point: a scalar (k = 0), a covector
/// (k = 1) or the antisymmetric component matrix w(e_mu, e_nu) (k = 2).
using FormValue = std::variant<double, Eigen::Vector3d, Eigen::Matrix3d>;

/// Whitney form of the subsimplex `s` of `t`, evaluated at `x`.
inline FormValue whitney_eval(const SimplexGeometry& t, const Simplex& s, const Point& x) {
  std::vector<int> local;
  for (VertexId v : s.vertices()) {
    const int a = t.local(v);
    if (a < 0) throw InvalidArgument("whitney_eval: not a subsimplex");
    local.push_back(a);
  }
  const int k = s.dimension();
  if (k > 2) throw InvalidArgument("whitney_eval: only degrees 0, 1, 2 are supported");
  const auto l = t.barycentric(x);
  const auto& g = t.gradients();
  if (k == 0) return l[local[0]];
  if (k == 1) {
    Eigen::Vector3d w = Eigen::Vector3d::Zero();
    for (const auto& term : whitney_terms(local)) w += term.coef * l[term.bary] * g[term.dl[0]];
    return w;
  }
  Eigen::Matrix3d w = Eigen::Matrix3d::Zero();
  for (const auto& term : whitney_terms(local)) {
    const auto& a = g[term.dl[0]];
    const auto& b = g[term.dl[1]];
    w += term.coef * l[term.bary] * (a * b.transpose() - b * a.transpose());
  }
  return w;
}

/// L2(T) Gram matrix of the Whitney k-forms of T, indexed by the local
/// k-subsimplexes in lexicographic order (canonical orientations).
struct MassMatrix {
  int degree = 0;
  std::vector<std::vector<int>> index;  // local subsimplexes
  Eigen::MatrixXd entries;
};

inline MassMatrix mass_matrix(const SimplexGeometry& t, int k) {
  const int d = t.dimension();
  if (k < 0 || k > d) throw InvalidArgument("mass_matrix: degree out of range");
  MassMatrix m;
  m.degree = k;
  m.index = local_subsimplices(d, k);
  const auto n = static_cast<Eigen::Index>(m.index.size());
  m.entries = Eigen::MatrixXd::Zero(n, n);
  // int lambda_a lambda_b = |T| d! (1 + delta_ab) / (d + 2)!
  const double off = t.volume() * factorial(d) / factorial(d + 2);
  std::vector<std::vector<WhitneyTerm>> terms;
  for (const auto& s : m.index) terms.push_back(whitney_terms(s));
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b) {
      double v = 0.0;
      for (const auto& ta : terms[a])
        for (const auto& tb : terms[b])
          v += ta.coef * tb.coef * (ta.bary == tb.bary ? 2.0 : 1.0) * off *
               wedge_inner(t.gradient_gram(), ta.dl, tb.dl);
      m.entries(a, b) = v;
      m.entries(b, a) = v;
    }
  return m;
}

/// Per maximal simplex data shared by the actions and norms: geometry,
/// global indices of the local edges and faces (lexicographic local order),
/// and the Whitney 1- and 2-form mass matrices.
struct Element {
  Simplex simplex;
  SimplexGeometry geometry;
  std::vector<int> vertices;
  std::vector<int> edges;
  std::vector<int> faces;
  MassMatrix mass1;
  MassMatrix mass2;
};

/// A complex together with its per-element Whitney data. Immutable.
class Discretization {
 public:
  explicit Discretization(MeshPtr mesh) : mesh_(std::move(mesh)) {
    const int d = mesh_->dimension();
    if (d < 2) throw InvalidArgument("discretization needs a complex of dimension 2 or 3");
    elements_.reserve(mesh_->maximal().size());
    for (const auto& t : mesh_->maximal()) {
      SimplexGeometry geom(*mesh_, t);
      Element e{t, geom, {}, {}, {}, mass_matrix(geom, 1), mass_matrix(geom, 2)};
      for (int a = 0; a < t.size(); ++a) e.vertices.push_back(static_cast<int>(t[a]));
      for (const auto& s : local_subsimplices(d, 1)) e.edges.push_back(mesh_->index_of(Simplex{t[s[0]], t[s[1]]}));
      for (const auto& s : local_subsimplices(d, 2))
        e.faces.push_back(mesh_->index_of(Simplex{t[s[0]], t[s[1]], t[s[2]]}));
      elements_.push_back(std::move(e));
    }
  }

  const MeshPtr& mesh() const { return mesh_; }
  const SimplicialComplex& complex() const { return *mesh_; }
  const std::vector<Element>& elements() const { return elements_; }

 private:
  MeshPtr mesh_;
  std::vector<Element> elements_;
};

/// De Rham map for k = 0, 1, 2. The form is a callable evaluating
///   k = 0: f(x), k = 1: f(x, t), k = 2: f(x, t1, t2)
/// where t, t1, t2 are tangent vectors; values may be real, algebra or C^n
/// valued. Edges use 7-point Gauss-Legendre, faces a 12-point degree-6 rule.
template <int K, class Form>
auto de_rham(const MeshPtr& mesh, Form&& form) {
  static_assert(K >= 0 && K <= 2, "de_rham supports k = 0, 1, 2");
  if constexpr (K == 0) {
    using V = std::decay_t<std::invoke_result_t<Form&, const Point&>>;
    std::vector<V> vals;
    for (std::size_t v = 0; v < mesh->num_vertices(); ++v) vals.push_back(form(mesh->coord(static_cast<VertexId>(v))));
    return Cochain<V>(mesh, 0, std::move(vals));
  } else if constexpr (K == 1) {
    using V = std::decay_t<std::invoke_result_t<Form&, const Point&, const Point&>>;
    const auto& rule = quadrature::edge_rule();
    std::vector<V> vals;
    vals.reserve(mesh->count(1));
    for (const auto& e : mesh->simplices(1)) {
      const Point x0 = mesh->coord(e[0]);
      const Point t = mesh->coord(e[1]) - x0;
      V acc = V(form(Point(x0 + rule.nodes[0] * t), t) * rule.weights[0]);
      for (std::size_t q = 1; q < rule.nodes.size(); ++q)
        acc = acc + V(form(Point(x0 + rule.nodes[q] * t), t) * rule.weights[q]);
      vals.push_back(std::move(acc));
    }
    return Cochain<V>(mesh, 1, std::move(vals));
  } else {
    using V = std::decay_t<std::invoke_result_t<Form&, const Point&, const Point&, const Point&>>;
    const auto& rule = quadrature::triangle_rule();
    std::vector<V> vals;
    vals.reserve(mesh->count(2));
    for (const auto& f : mesh->simplices(2)) {
      const Point x0 = mesh->coord(f[0]);
      const Point x1 = mesh->coord(f[1]);
      const Point x2 = mesh->coord(f[2]);
      const Point t1 = x1 - x0;
      const Point t2 = x2 - x0;
      auto at = [&](const quadrature::TrianglePoint& q) {
        const Point x = q.l0 * x0 + q.l1 * x1 + q.l2 * x2;
        // reference triangle area 1/2
        return V(form(x, t1, t2) * (0.5 * q.weight));
      };
      V acc = at(rule[0]);
      for (std::size_t q = 1; q < rule.size(); ++q) acc = acc + at(rule[q]);
      vals.push_back(std::move(acc));
    }
    return Cochain<V>(mesh, 2, std::move(vals));
  }
}

/// Whitney interpolant I^k u, represented by its cochain R^k u.
template <int K, class Form>
auto interpolate(const MeshPtr& mesh, Form&& form) {
  return de_rham<K>(mesh, std::forward<Form>(form));
}

/// sqrt(sum_T u_T^T M(T) u_T) for a 1- or 2-cochain, with the value type's
/// scalar product inside.
template <class V>
double l2_norm(const Discretization& disc, const Cochain<V>& u) {
  const int k = u.degree();
  if (k != 1 && k != 2) throw InvalidArgument("l2_norm supports 1- and 2-cochains");
  double total = 0.0;
  for (const auto& e : disc.elements()) {
    const auto& idx = (k == 1) ? e.edges : e.faces;
    const auto& m = (k == 1) ? e.mass1.entries : e.mass2.entries;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) total += m(a, b) * inner(u[idx[a]], u[idx[b]]);
  }
  return std::sqrt(std::max(total, 0.0));
}

}  // namespace sgauge
