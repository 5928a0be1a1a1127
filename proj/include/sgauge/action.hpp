#pragma once

// Local and global Yang-Mills type actions on maximal simplexes:
//
//   continuum     S_T   = int_T |F(A)|^2, F(A) = dA + [A, A]/2, integrated exactly
//   interpolated  S1_T  = sum M_{f0 f1} (int_{f0} F) . (int_{f1} F)
//   holonomy      S2_T  = sum M_{f0 f1} Re tr((1 - F_{f0})^H (1 - F_{f1}))
//   gauge inv.    S'_T  = sum M_{f0 f1} Re tr(U_{f1 f0} (1 - F_{f0})^H U_{f0 f1} (1 - F_{f1}))
//   log variant         = sum M_{f0 f1} Ad(U_{f1 f0}) log F_{f0} . log F_{f1}
//
// Sums run over ordered pairs of pointed faces of T, diagonal included. M is
// the Whitney 2-form mass matrix for the orientations of the pointed faces,
// U_{f1 f0} transports from the origin of f0 to the origin of f1.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgauge/error.hpp"
#include "sgauge/gauge.hpp"
#include "sgauge/lie.hpp"
#include "sgauge/mesh.hpp"
#include "sgauge/whitney.hpp"

namespace sgauge {

/// How face origins are chosen inside each maximal simplex.
enum class OriginChoice {
  Lowest,    ///< lowest vertex id, ascending cycle
  Advanced,  ///< same orientation, origin advanced one step along the cycle
};

/// Pointed faces of element `e` in the order of its mass matrix index.
inline std::vector<PointedFace> element_faces(const Element& e, OriginChoice choice = OriginChoice::Lowest) {
  auto faces = pointed_faces(e.simplex);
  if (choice == OriginChoice::Advanced)
    for (auto& f : faces) f = f.rotated();
  return faces;
}

namespace detail {

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

/// Polynomials of degree <= 2 in barycentric coordinates: slot 0 is the
/// constant, the others lambda_u lambda_v with u <= v.
class QuadraticMonomials {
 public:
  explicit QuadraticMonomials(int d) : d_(d) {
    exps_.push_back(std::vector<int>(d + 1, 0));
    index_.assign((d + 1) * (d + 1), -1);
    for (int u = 0; u <= d; ++u)
      for (int v = u; v <= d; ++v) {
        std::vector<int> e(d + 1, 0);
        ++e[u];
        ++e[v];
        index_[u * (d + 1) + v] = index_[v * (d + 1) + u] = static_cast<int>(exps_.size());
        exps_.push_back(std::move(e));
      }
    const int n = size();
    // int over the simplex of the product, divided by its volume
    ratio_.resize(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        std::vector<int> e(d + 1);
        for (int c = 0; c <= d; ++c) e[c] = exps_[a][c] + exps_[b][c];
        ratio_(a, b) = integrate_barycentric_monomial(d, 1.0, e);
      }
  }

  int size() const { return static_cast<int>(exps_.size()); }
  int quadratic(int u, int v) const { return index_[u * (d_ + 1) + v]; }
  const Eigen::MatrixXd& product_integrals() const { return ratio_; }

  static const QuadraticMonomials& get(int d) {
    static const std::array<QuadraticMonomials, 4> tables = {QuadraticMonomials(0), QuadraticMonomials(1),
                                                             QuadraticMonomials(2), QuadraticMonomials(3)};
    return tables.at(d);
  }

 private:
  int d_;
  std::vector<std::vector<int>> exps_;
  std::vector<int> index_;
  Eigen::MatrixXd ratio_;
};

inline int pair_index(int d, int p, int q) {
  // lexicographic index of p < q among d + 1 vertexes
  int idx = 0;
  for (int a = 0; a < p; ++a) idx += d - a;
  return idx + (q - p - 1);
}

/// Re tr(a^H b) for arbitrary complex matrices or vectors.
template <class A, class B>
double re_inner(const A& a, const B& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

inline Complex trace_product(const Matrix& a, const Matrix& b) {
  // tr(a b) without forming the product
  return (a.transpose().cwiseProduct(b)).sum();
}

/// Coefficients of a polynomial form in barycentric monomials times
/// constant wedges of barycentric gradients; used for exact L2 norms.
template <class Coef>
class PolynomialForm {
 public:
  PolynomialForm(int d, int degree, Coef zero) : d_(d), degree_(degree), mono_(QuadraticMonomials::get(d)) {
    nwedge_ = (degree == 1) ? d + 1 : d * (d + 1) / 2;
    coef_.assign(static_cast<std::size_t>(mono_.size()) * nwedge_, zero);
    used_.assign(coef_.size(), false);
  }

  /// Adds c * lambda_u lambda_v (or the constant when u < 0) * dlambda_p
  /// (degree 1) or dlambda_p ^ dlambda_q (degree 2).
  void add(int u, int v, int p, int q, const Coef& c, double sign = 1.0) {
    int w;
    if (degree_ == 1) {
      w = p;
    } else {
      if (p == q) return;
      if (p > q) {
        std::swap(p, q);
        sign = -sign;
      }
      w = pair_index(d_, p, q);
    }
    const int m = (u < 0) ? 0 : mono_.quadratic(u, v);
    const std::size_t s = static_cast<std::size_t>(m) * nwedge_ + w;
    coef_[s] += sign * c;
    used_[s] = true;
  }

  /// int_T |form|^2 with the Euclidean pointwise product.
  double squared_norm(const SimplexGeometry& geom) const {
    const auto& gg = geom.gradient_gram();
    Eigen::MatrixXd wedge(nwedge_, nwedge_);
    std::vector<std::array<int, 2>> pairs;
    if (degree_ == 1) {
      wedge = gg;
    } else {
      for (int p = 0; p <= d_; ++p)
        for (int q = p + 1; q <= d_; ++q) pairs.push_back({p, q});
      for (int a = 0; a < nwedge_; ++a)
        for (int b = 0; b < nwedge_; ++b)
          wedge(a, b) = gg(pairs[a][0], pairs[b][0]) * gg(pairs[a][1], pairs[b][1]) -
                        gg(pairs[a][0], pairs[b][1]) * gg(pairs[a][1], pairs[b][0]);
    }
    const auto& ints = mono_.product_integrals();
    std::vector<std::size_t> live;
    for (std::size_t s = 0; s < coef_.size(); ++s)
      if (used_[s]) live.push_back(s);
    CompensatedSum total;
    for (std::size_t s : live)
      for (std::size_t t : live) {
        const double k = wedge(s % nwedge_, t % nwedge_) * ints(s / nwedge_, t / nwedge_);
        if (k != 0.0) total.add(k * re_inner(coef_[s], coef_[t]));
      }
    return geom.volume() * total.value();
  }

 private:
  int d_;
  int degree_;
  int nwedge_;
  const QuadraticMonomials& mono_;
  std::vector<Coef> coef_;
  std::vector<bool> used_;
};

inline std::vector<AlgebraElement> element_potentials(const Element& e, const GaugeField& a) {
  std::vector<AlgebraElement> out;
  out.reserve(e.edges.size());
  for (int idx : e.edges) out.push_back(a[idx]);
  return out;
}

/// Mass matrix entry for two pointed faces (orientation signs applied).
inline double oriented_mass(const Element& e, std::span<const PointedFace> faces, std::size_t a, std::size_t b) {
  return e.mass2.entries(a, b) * faces[a].orientation() * faces[b].orientation();
}

inline void check_faces(const Element& e, std::span<const PointedFace> faces) {
  if (faces.size() != e.faces.size()) throw InvalidArgument("wrong number of pointed faces for the element");
  const auto canonical = pointed_faces(e.simplex);
  for (std::size_t a = 0; a < faces.size(); ++a)
    if (!(faces[a].face == canonical[a].face)) throw InvalidArgument("pointed faces out of element order");
}

/// sum M_{f0 f1} tr(U_{f1 f0} (1 - F_{f0})^H U_{f0 f1} (1 - F_{f1})), complex.
inline Complex lagrangian_sum(const Element& e, const LinkField& u, std::span<const GroupElement> holonomies,
                              std::span<const PointedFace> faces, bool transport_between_origins) {
  const Group g = u.group();
  const int n = matrix_size(g);
  const Matrix one = Matrix::Identity(n, n);
  std::vector<Matrix> defect;
  defect.reserve(faces.size());
  for (const auto& f : holonomies) defect.push_back(one - f.matrix());
  Complex total = 0.0;
  for (std::size_t a = 0; a < faces.size(); ++a) {
    const Matrix da_h = defect[a].adjoint();
    for (std::size_t b = 0; b < faces.size(); ++b) {
      const double m = oriented_mass(e, faces, a, b);
      const VertexId oa = faces[a].origin(), ob = faces[b].origin();
      if (!transport_between_origins || oa == ob) {
        total += m * trace_product(da_h, defect[b]);
      } else {
        const Matrix x = u.transport(ob, oa).matrix() * da_h * u.transport(oa, ob).matrix();
        total += m * trace_product(x, defect[b]);
      }
    }
  }
  return total;
}

}  // namespace detail

/// int_T |dA + [A, A]/2|^2 for the Whitney field A, integrated exactly.
inline double action_continuum(const Discretization& disc, const GaugeField& a, std::size_t elem) {
  const Element& e = disc.elements().at(elem);
  const int d = e.geometry.dimension();
  const int n = matrix_size(a.group());
  const auto edges = local_subsimplices(d, 1);
  const auto pot = detail::element_potentials(e, a);
  detail::PolynomialForm<Matrix> form(d, 2, Matrix::Zero(n, n));
  // dA = sum_e A_e dlambda_e, dlambda_{ab} = 2 dlambda_a ^ dlambda_b
  for (std::size_t k = 0; k < edges.size(); ++k) form.add(-1, -1, edges[k][0], edges[k][1], pot[k].matrix(), 2.0);
  if (a.group() != Group::U1) {
    // [A, A]/2 = sum_{e < e'} [A_e, A_e'] lambda_e ^ lambda_e'
    for (std::size_t k = 0; k < edges.size(); ++k)
      for (std::size_t l = k + 1; l < edges.size(); ++l) {
        const Matrix br = bracket(pot[k], pot[l]).matrix();
        const int pa = edges[k][0], pb = edges[k][1], pc = edges[l][0], pd = edges[l][1];
        // (la dlb - lb dla) ^ (lc dld - ld dlc)
        form.add(pa, pc, pb, pd, br, 1.0);
        form.add(pa, pd, pb, pc, br, -1.0);
        form.add(pb, pc, pa, pd, br, -1.0);
        form.add(pb, pd, pa, pc, br, 1.0);
      }
  }
  return form.squared_norm(e.geometry);
}

/// sum M_{f0 f1} (int_{f0} F) . (int_{f1} F), i.e. int_T |I^2 F(A)|^2.
inline double action_s1(const Discretization& disc, const GaugeField& a, std::size_t elem) {
  const Element& e = disc.elements().at(elem);
  const auto faces = pointed_faces(e.simplex);
  std::vector<AlgebraElement> curv;
  for (const auto& f : faces) curv.push_back(integrated_curvature(a, f));
  double total = 0.0;
  for (std::size_t p = 0; p < faces.size(); ++p)
    for (std::size_t q = 0; q < faces.size(); ++q) total += e.mass2.entries(p, q) * scalar_product(curv[p], curv[q]);
  return total;
}

/// Holonomies of the given pointed faces.
inline std::vector<GroupElement> face_holonomies(const LinkField& u, std::span<const PointedFace> faces) {
  std::vector<GroupElement> out;
  out.reserve(faces.size());
  for (const auto& f : faces) out.push_back(face_holonomy(u, f));
  return out;
}

inline double action_s2(const Discretization& disc, const LinkField& u, std::size_t elem,
                        std::span<const PointedFace> faces) {
  const Element& e = disc.elements().at(elem);
  detail::check_faces(e, faces);
  return detail::lagrangian_sum(e, u, face_holonomies(u, faces), faces, false).real();
}

inline double action_s2(const Discretization& disc, const LinkField& u, std::size_t elem,
                        OriginChoice choice = OriginChoice::Lowest) {
  const auto faces = element_faces(disc.elements().at(elem), choice);
  return action_s2(disc, u, elem, faces);
}

/// L_T(U, F) with holonomies F given independently of U (one per pointed
/// face, in element order).
inline double lagrangian_uf(const Discretization& disc, const LinkField& u, std::span<const GroupElement> holonomies,
                            std::size_t elem, std::span<const PointedFace> faces) {
  const Element& e = disc.elements().at(elem);
  detail::check_faces(e, faces);
  if (holonomies.size() != faces.size()) throw InvalidArgument("one holonomy per pointed face required");
  return detail::lagrangian_sum(e, u, holonomies, faces, true).real();
}

inline double action_sprime(const Discretization& disc, const LinkField& u, std::size_t elem,
                            std::span<const PointedFace> faces) {
  const auto hol = face_holonomies(u, faces);
  return lagrangian_uf(disc, u, hol, elem, faces);
}

inline double action_sprime(const Discretization& disc, const LinkField& u, std::size_t elem,
                            OriginChoice choice = OriginChoice::Lowest) {
  const auto faces = element_faces(disc.elements().at(elem), choice);
  return action_sprime(disc, u, elem, faces);
}

/// sum M_{f0 f1} Ad(U_{f1 f0}) log F_{f0} . log F_{f1}. Throws
/// BranchAmbiguityError if a holonomy is outside the principal-log domain.
inline double action_log_variant(const Discretization& disc, const LinkField& u, std::size_t elem,
                                 std::span<const PointedFace> faces) {
  const Element& e = disc.elements().at(elem);
  detail::check_faces(e, faces);
  std::vector<AlgebraElement> logs;
  for (const auto& f : faces) logs.push_back(log(face_holonomy(u, f)));
  double total = 0.0;
  for (std::size_t a = 0; a < faces.size(); ++a)
    for (std::size_t b = 0; b < faces.size(); ++b) {
      const AlgebraElement moved = adjoint(u.transport(faces[b].origin(), faces[a].origin()), logs[a]);
      total += detail::oriented_mass(e, faces, a, b) * scalar_product(moved, logs[b]);
    }
  return total;
}

inline double action_log_variant(const Discretization& disc, const LinkField& u, std::size_t elem,
                                 OriginChoice choice = OriginChoice::Lowest) {
  const auto faces = element_faces(disc.elements().at(elem), choice);
  return action_log_variant(disc, u, elem, faces);
}

/// int_T |grad Phi + A Phi|^2 for the piecewise affine Phi and Whitney A.
inline double scalar_action_continuum(const Discretization& disc, const GaugeField& a, const ScalarField& phi,
                                      std::size_t elem) {
  require_same_group(a.group(), phi.group(), "scalar_action_continuum");
  const Element& e = disc.elements().at(elem);
  const int d = e.geometry.dimension();
  const int n = matrix_size(a.group());
  const auto edges = local_subsimplices(d, 1);
  const auto pot = detail::element_potentials(e, a);
  detail::PolynomialForm<Vector> form(d, 1, Vector::Zero(n));
  for (int i = 0; i <= d; ++i) form.add(-1, -1, i, -1, phi[e.vertices[i]]);
  // A Phi = sum_{e, i} A_e Phi_i lambda_i (lambda_a dlambda_b - lambda_b dlambda_a)
  for (std::size_t k = 0; k < edges.size(); ++k)
    for (int i = 0; i <= d; ++i) {
      const Vector v = pot[k].matrix() * phi[e.vertices[i]];
      form.add(i, edges[k][0], edges[k][1], -1, v, 1.0);
      form.add(i, edges[k][1], edges[k][0], -1, v, -1.0);
    }
  return form.squared_norm(e.geometry);
}

namespace detail {

inline Complex scalar_discrete_sum(const Discretization& disc, const LinkField& u, const ScalarField& phi,
                                   std::size_t elem) {
  const Element& e = disc.elements().at(elem);
  const auto& edges = disc.complex().simplices(1);
  std::vector<Vector> diff;
  std::vector<VertexId> target;
  for (int idx : e.edges) {
    const VertexId a = edges[idx][0], b = edges[idx][1];
    diff.push_back(phi[b] - u[idx].matrix() * phi[a]);
    target.push_back(b);
  }
  Complex total = 0.0;
  for (std::size_t p = 0; p < diff.size(); ++p) {
    for (std::size_t q = 0; q < diff.size(); ++q) {
      const Vector moved = (target[p] == target[q]) ? diff[p] : Vector(u.transport(target[q], target[p]).matrix() * diff[p]);
      total += e.mass1.entries(p, q) * moved.dot(diff[q]);
    }
  }
  return total;
}

}  // namespace detail

/// sum M_{e0 e1} <U_{t1 t0} (Phi_{t0} - U_{e0} Phi_{s0}), Phi_{t1} - U_{e1} Phi_{s1}>
/// with s, t the origin and target of each canonical edge.
inline double scalar_action_discrete(const Discretization& disc, const LinkField& u, const ScalarField& phi,
                                     std::size_t elem) {
  require_same_group(u.group(), phi.group(), "scalar_action_discrete");
  return detail::scalar_discrete_sum(disc, u, phi, elem).real();
}

enum class ActionKind { Continuum, S1, S2, Sprime, LogVariant, ScalarContinuum, ScalarDiscrete };

inline std::string_view action_name(ActionKind k) {
  switch (k) {
    case ActionKind::Continuum: return "S";
    case ActionKind::S1: return "S1";
    case ActionKind::S2: return "S2";
    case ActionKind::Sprime: return "Sprime";
    case ActionKind::LogVariant: return "logvariant";
    case ActionKind::ScalarContinuum: return "scalar_c";
    case ActionKind::ScalarDiscrete: return "scalar_d";
  }
  return "?";
}

struct ActionValue {
  double total = 0.0;
  std::vector<double> per_simplex;  // one per maximal simplex, complex order
  double imaginary_residue = 0.0;
};

struct ActionOptions {
  OriginChoice origins = OriginChoice::Lowest;
  const ScalarField* scalar = nullptr;  // required by the scalar kinds
};

inline bool uses_links(ActionKind kind) {
  return kind == ActionKind::S2 || kind == ActionKind::Sprime || kind == ActionKind::LogVariant ||
         kind == ActionKind::ScalarDiscrete;
}

namespace detail {

inline ActionValue global_sum(ActionKind kind, const Discretization& disc, const GaugeField* a,
                              const LinkField& links, const ActionOptions& opt) {
  const bool needs_scalar = kind == ActionKind::ScalarContinuum || kind == ActionKind::ScalarDiscrete;
  if (needs_scalar && opt.scalar == nullptr) throw InvalidArgument("scalar action requires a scalar field");
  ActionValue out;
  const std::size_t ne = disc.elements().size();
  out.per_simplex.resize(ne);
  detail::CompensatedSum total, imag;
  for (std::size_t t = 0; t < ne; ++t) {
    double v = 0.0;
    switch (kind) {
      case ActionKind::Continuum: v = action_continuum(disc, *a, t); break;
      case ActionKind::S1: v = action_s1(disc, *a, t); break;
      case ActionKind::S2:
      case ActionKind::Sprime: {
        const auto& e = disc.elements()[t];
        const auto faces = element_faces(e, opt.origins);
        const Complex c = detail::lagrangian_sum(e, links, face_holonomies(links, faces), faces,
                                                 kind == ActionKind::Sprime);
        v = c.real();
        imag.add(c.imag());
        break;
      }
      case ActionKind::LogVariant: v = action_log_variant(disc, links, t, opt.origins); break;
      case ActionKind::ScalarContinuum: v = scalar_action_continuum(disc, *a, *opt.scalar, t); break;
      case ActionKind::ScalarDiscrete: {
        require_same_group(links.group(), opt.scalar->group(), "scalar_action_discrete");
        const Complex c = detail::scalar_discrete_sum(disc, links, *opt.scalar, t);
        v = c.real();
        imag.add(c.imag());
        break;
      }
    }
    out.per_simplex[t] = v;
    total.add(v);
  }
  out.total = total.value();
  out.imaginary_residue = std::abs(imag.value());
  return out;
}

}  // namespace detail

/// Sum of local contributions over all maximal simplexes, accumulated in
/// element order with compensated summation.
inline ActionValue global_action(ActionKind kind, const Discretization& disc, const GaugeField& a,
                                 const ActionOptions& opt = {}) {
  if (a.mesh() != disc.mesh()) throw InvalidArgument("gauge field lives on a different complex");
  if (uses_links(kind)) return detail::global_sum(kind, disc, &a, transports(a), opt);
  const LinkField unused(a.group(), a.mesh(), std::vector<GroupElement>(a.size(), GroupElement::identity(a.group())));
  return detail::global_sum(kind, disc, &a, unused, opt);
}

/// Same for the kinds defined by links alone (S2, S', log variant, discrete
/// scalar); no logarithm of the links is taken except by the log variant.
inline ActionValue global_action(ActionKind kind, const Discretization& disc, const LinkField& u,
                                 const ActionOptions& opt = {}) {
  if (u.mesh() != disc.mesh()) throw InvalidArgument("link field lives on a different complex");
  if (!uses_links(kind)) throw InvalidArgument("action " + std::string(action_name(kind)) + " needs a gauge potential");
  return detail::global_sum(kind, disc, nullptr, u, opt);
}

}  // namespace sgauge
