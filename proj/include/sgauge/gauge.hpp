#pragma once

// Lie algebra valued gauge fields as 1-cochains, their link transports, face
// holonomies, discrete gauge transformations and scalar matter fields.
//
// Edge (a, b) with a < b stores A_{ba} = int_{a -> b} A, and the link
// U_{ba} = exp(-A_{ba}) transports from a to b. Reversed access uses
// A_{ab} = -A_{ba} and U_{ab} = U_{ba}^{-1}.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sgauge/error.hpp"
#include "sgauge/lie.hpp"
#include "sgauge/mesh.hpp"
#include "sgauge/whitney.hpp"

namespace sgauge {

class GaugeField {
 public:
  /// Throws BranchAmbiguityError if some edge value has spectral norm
  /// >= pi - kBranchMargin.
  GaugeField(Group group, Cochain<AlgebraElement> values) : group_(group), values_(std::move(values)) {
    if (values_.degree() != 1) throw InvalidArgument("gauge field must be a 1-cochain");
    for (std::size_t e = 0; e < values_.size(); ++e) {
      require_same_group(group_, values_[e].group(), "gauge field");
      if (!(spectral_norm(values_[e]) < std::numbers::pi - kBranchMargin)) {
        throw BranchAmbiguityError("gauge field value on edge " + std::to_string(e) + " is not log-safe");
      }
    }
  }

  static GaugeField zero(Group group, MeshPtr mesh) {
    return GaugeField(group, Cochain<AlgebraElement>(std::move(mesh), 1, AlgebraElement(group)));
  }

  /// Independent edge values, uniform in the coefficient ball of radius `scale`.
  static GaugeField random(Group group, MeshPtr mesh, double scale, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<AlgebraElement> v;
    v.reserve(mesh->count(1));
    for (std::size_t e = 0; e < mesh->count(1); ++e) v.push_back(random_algebra(scale, rng, group));
    return GaugeField(group, Cochain<AlgebraElement>(std::move(mesh), 1, std::move(v)));
  }

  Group group() const { return group_; }
  const MeshPtr& mesh() const { return values_.mesh(); }
  const Cochain<AlgebraElement>& cochain() const { return values_; }
  const AlgebraElement& operator[](std::size_t edge) const { return values_[edge]; }
  std::size_t size() const { return values_.size(); }

  /// A_{ji}: integral along the edge oriented from i to j.
  AlgebraElement between(VertexId j, VertexId i) const {
    if (i == j) return AlgebraElement(group_);
    return values_.at({i, j});
  }

 private:
  Group group_;
  Cochain<AlgebraElement> values_;
};

/// One group element per canonical edge (a < b), holding U_{ba}.
class LinkField {
 public:
  LinkField(Group group, MeshPtr mesh, std::vector<GroupElement> links)
      : group_(group), mesh_(std::move(mesh)), links_(std::move(links)) {
    if (links_.size() != mesh_->count(1)) throw InvalidArgument("link field has wrong number of edges");
  }

  Group group() const { return group_; }
  const MeshPtr& mesh() const { return mesh_; }
  std::size_t size() const { return links_.size(); }
  const GroupElement& operator[](std::size_t edge) const { return links_[edge]; }

  /// U_{ji}: transport from vertex i to vertex j along their common edge.
  GroupElement transport(VertexId j, VertexId i) const {
    if (i == j) return GroupElement::identity(group_);
    const GroupElement& u = links_[mesh_->index_of(Simplex{i, j})];
    return i < j ? u : u.inverse();
  }

 private:
  Group group_;
  MeshPtr mesh_;
  std::vector<GroupElement> links_;
};

/// One group element G_i per vertex.
class DiscreteGaugeTransform {
 public:
  DiscreteGaugeTransform(Group group, std::vector<GroupElement> g) : group_(group), g_(std::move(g)) {
    for (const auto& x : g_) require_same_group(group_, x.group(), "gauge transform");
  }

  static DiscreteGaugeTransform identity(Group group, std::size_t num_vertices) {
    return DiscreteGaugeTransform(group, std::vector<GroupElement>(num_vertices, GroupElement::identity(group)));
  }

  /// Each G_i = exp(g_i) with g_i uniform in the ball of radius `scale`.
  static DiscreteGaugeTransform random(Group group, std::size_t num_vertices, double scale, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<GroupElement> g;
    g.reserve(num_vertices);
    for (std::size_t i = 0; i < num_vertices; ++i) g.push_back(random_group(scale, rng, group));
    return DiscreteGaugeTransform(group, std::move(g));
  }

  Group group() const { return group_; }
  std::size_t size() const { return g_.size(); }
  const GroupElement& operator[](std::size_t v) const { return g_[v]; }

  /// (H * G)_i = H_i G_i: applying G then H.
  friend DiscreteGaugeTransform operator*(const DiscreteGaugeTransform& h, const DiscreteGaugeTransform& g) {
    if (h.size() != g.size()) throw InvalidArgument("gauge transforms on different vertex sets");
    std::vector<GroupElement> out;
    out.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.push_back(h[i] * g[i]);
    return DiscreteGaugeTransform(g.group(), std::move(out));
  }

 private:
  Group group_;
  std::vector<GroupElement> g_;
};

/// One vector of C^n per vertex (fundamental representation).
class ScalarField {
 public:
  ScalarField(Group group, std::vector<Vector> values) : group_(group), values_(std::move(values)) {
    const int n = matrix_size(group_);
    for (const auto& v : values_) {
      if (v.size() != n) throw InvalidArgument("scalar field entry has wrong dimension");
      if (!v.allFinite()) throw InvalidArgument("scalar field entry is not finite");
    }
  }

  static ScalarField random(Group group, std::size_t num_vertices, double scale, std::uint64_t seed) {
    Rng rng(seed);
    const int n = matrix_size(group);
    std::vector<Vector> values;
    for (std::size_t i = 0; i < num_vertices; ++i) {
      Vector v(n);
      for (int a = 0; a < n; ++a) v(a) = Complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
      values.push_back(v);
    }
    return ScalarField(group, std::move(values));
  }

  Group group() const { return group_; }
  std::size_t size() const { return values_.size(); }
  const Vector& operator[](std::size_t v) const { return values_[v]; }

 private:
  Group group_;
  std::vector<Vector> values_;
};

/// U_{ji} = exp(-A_{ji}) per edge.
inline LinkField transports(const GaugeField& a) {
  std::vector<GroupElement> links;
  links.reserve(a.size());
  for (std::size_t e = 0; e < a.size(); ++e) links.push_back(exp(-a[e]));
  return LinkField(a.group(), a.mesh(), std::move(links));
}

/// Inverse of `transports`: A_{ji} = -log U_{ji}.
inline GaugeField potentials(const LinkField& u) {
  std::vector<AlgebraElement> values;
  values.reserve(u.size());
  for (std::size_t e = 0; e < u.size(); ++e) values.push_back(-log(u[e]));
  return GaugeField(u.group(), Cochain<AlgebraElement>(u.mesh(), 1, std::move(values)));
}

/// F = U_{ik} U_{kj} U_{ji} for the cycle (i, j, k) of the pointed face.
inline GroupElement face_holonomy(const LinkField& u, const PointedFace& pf) {
  const auto [i, j, k] = pf.cycle;
  GroupProduct prod(u.group());
  prod *= u.transport(i, k);
  prod *= u.transport(k, j);
  prod *= u.transport(j, i);
  return prod.value();
}

/// U'_{ji} = G_j U_{ji} G_i^{-1}.
inline LinkField apply_gauge(const LinkField& u, const DiscreteGaugeTransform& g) {
  require_same_group(u.group(), g.group(), "apply_gauge");
  if (g.size() != u.mesh()->num_vertices()) throw InvalidArgument("gauge transform has wrong number of vertices");
  std::vector<GroupElement> links;
  links.reserve(u.size());
  const auto& edges = u.mesh()->simplices(1);
  for (std::size_t e = 0; e < u.size(); ++e) {
    const VertexId i = edges[e][0], j = edges[e][1];
    links.push_back(g[j] * u[e] * g[i].inverse());
  }
  return LinkField(u.group(), u.mesh(), std::move(links));
}

/// Gauge transform of A through its transports; throws BranchAmbiguityError
/// if a transformed link leaves the principal-log domain.
inline GaugeField apply_gauge(const GaugeField& a, const DiscreteGaugeTransform& g) {
  return potentials(apply_gauge(transports(a), g));
}

/// Phi'_i = G_i Phi_i.
inline ScalarField apply_gauge_scalar(const ScalarField& phi, const DiscreteGaugeTransform& g) {
  require_same_group(phi.group(), g.group(), "apply_gauge_scalar");
  if (g.size() != phi.size()) throw InvalidArgument("gauge transform and scalar field sizes differ");
  std::vector<Vector> out;
  out.reserve(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) out.push_back(g[i].matrix() * phi[i]);
  return ScalarField(phi.group(), std::move(out));
}

/// Closed form of int_f F(A) for the Whitney field A on the face traversed
/// i -> j -> k:
///   A_{ik} + A_{kj} + A_{ji} + ([A_{ji}, A_{kj}] + [A_{kj}, A_{ik}] + [A_{ik}, A_{ji}]) / 6.
inline AlgebraElement integrated_curvature(const AlgebraElement& a_ji, const AlgebraElement& a_kj,
                                           const AlgebraElement& a_ik) {
  AlgebraElement out = a_ik + a_kj + a_ji;
  if (a_ji.group() != Group::U1) {
    out += (1.0 / 6.0) * (bracket(a_ji, a_kj) + bracket(a_kj, a_ik) + bracket(a_ik, a_ji));
  }
  return out;
}

inline AlgebraElement integrated_curvature(const GaugeField& a, VertexId i, VertexId j, VertexId k) {
  return integrated_curvature(a.between(j, i), a.between(k, j), a.between(i, k));
}

inline AlgebraElement integrated_curvature(const GaugeField& a, const PointedFace& pf) {
  return integrated_curvature(a, pf.cycle[0], pf.cycle[1], pf.cycle[2]);
}

}  // namespace sgauge
