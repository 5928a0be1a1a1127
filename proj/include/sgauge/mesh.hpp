#pragma once

// Embedded simplicial complexes with canonical (ascending vertex id)
// orientation, explicit incidence and the Kuhn family of structured meshes.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgauge/error.hpp"

namespace sgauge {

using VertexId = std::uint32_t;
using Point = Eigen::Vector3d;

/// Sign (+1/-1) of the permutation sorting `ids` into ascending order.
/// Ids must be pairwise distinct.
inline int permutation_sign(std::span<const VertexId> ids) {
  int sign = 1;
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b)
      if (ids[a] > ids[b]) sign = -sign;
  return sign;
}

/// Simplex stored in canonical (strictly ascending) vertex order, which is
/// also its positive orientation.
class Simplex {
 public:
  static constexpr int kMaxVertices = 4;

  Simplex() = default;

  Simplex(std::initializer_list<VertexId> ids) : Simplex(std::span<const VertexId>(ids.begin(), ids.size())) {}

  explicit Simplex(std::span<const VertexId> ids) {
    if (ids.empty() || ids.size() > kMaxVertices) throw InvalidArgument("simplex must have 1 to 4 vertices");
    size_ = static_cast<int>(ids.size());
    std::copy(ids.begin(), ids.end(), v_.begin());
    std::sort(v_.begin(), v_.begin() + size_);
    for (int a = 1; a < size_; ++a)
      if (v_[a] == v_[a - 1]) throw InvalidArgument("simplex vertex ids must be distinct");
  }

  int dimension() const { return size_ - 1; }
  int size() const { return size_; }
  VertexId operator[](int i) const { return v_[i]; }
  std::span<const VertexId> vertices() const { return {v_.data(), static_cast<std::size_t>(size_)}; }

  bool contains(VertexId id) const { return std::find(v_.begin(), v_.begin() + size_, id) != v_.begin() + size_; }

  /// Position of `id` in ascending order, or -1.
  int position(VertexId id) const {
    for (int a = 0; a < size_; ++a)
      if (v_[a] == id) return a;
    return -1;
  }

  bool is_face_of(const Simplex& t) const {
    for (int a = 0; a < size_; ++a)
      if (!t.contains(v_[a])) return false;
    return true;
  }

  /// Facet opposite the vertex at ascending position `p`.
  Simplex without(int p) const {
    Simplex s;
    s.size_ = size_ - 1;
    for (int a = 0, b = 0; a < size_; ++a)
      if (a != p) s.v_[b++] = v_[a];
    return s;
  }

  Simplex with(VertexId id) const {
    std::array<VertexId, kMaxVertices> ids{};
    std::copy(v_.begin(), v_.begin() + size_, ids.begin());
    ids[size_] = id;
    return Simplex(std::span<const VertexId>(ids.data(), size_ + 1));
  }

  friend bool operator==(const Simplex& a, const Simplex& b) {
    return a.size_ == b.size_ && std::equal(a.v_.begin(), a.v_.begin() + a.size_, b.v_.begin());
  }
  friend auto operator<=>(const Simplex& a, const Simplex& b) {
    if (a.size_ != b.size_) return a.size_ <=> b.size_;
    return std::lexicographical_compare_three_way(a.v_.begin(), a.v_.begin() + a.size_, b.v_.begin(),
                                                  b.v_.begin() + b.size_);
  }

 private:
  std::array<VertexId, kMaxVertices> v_{};
  int size_ = 0;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const {
    std::size_t h = static_cast<std::size_t>(s.size());
    for (VertexId v : s.vertices()) h = h * 0x100000001b3ULL ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    return h;
  }
};

inline std::string to_string(const Simplex& s) {
  std::string out = "(";
  for (int a = 0; a < s.size(); ++a) out += (a ? "," : "") + std::to_string(s[a]);
  return out + ")";
}

/// o(T, T'): 0 unless T' is a facet of T; otherwise (-1)^p with p the
/// ascending position in T of the vertex T' omits.
inline int relative_orientation(const Simplex& t, const Simplex& tp) {
  if (tp.dimension() + 1 != t.dimension() || !tp.is_face_of(t)) return 0;
  for (int p = 0; p < t.size(); ++p)
    if (!tp.contains(t[p])) return (p % 2 == 0) ? 1 : -1;
  return 0;
}

/// A face with a traversal cycle (i, j, k) starting at its origin i.
struct PointedFace {
  Simplex face;
  std::array<VertexId, 3> cycle{};

  VertexId origin() const { return cycle[0]; }

  /// +1 if the cycle agrees with the canonical orientation of `face`.
  int orientation() const { return permutation_sign(cycle); }

  /// Same orientation, origin advanced one step along the cycle.
  PointedFace rotated() const { return {face, {cycle[1], cycle[2], cycle[0]}}; }

  /// Same origin, reversed orientation.
  PointedFace reversed() const { return {face, {cycle[0], cycle[2], cycle[1]}}; }
};

/// One pointed face per 2-subsimplex of `t`, in lexicographic order; the
/// origin is the lowest vertex id and the cycle is the ascending order.
inline std::vector<PointedFace> pointed_faces(const Simplex& t) {
  std::vector<PointedFace> out;
  const int n = t.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) out.push_back({Simplex{t[a], t[b], t[c]}, {t[a], t[b], t[c]}});
  return out;
}

class SimplicialComplex {
 public:
  /// Builds the closure of `maximal` (all of dimension `dim`). Throws
  /// DegenerateSimplexError for a maximal simplex without positive volume.
  SimplicialComplex(int dim, std::vector<Point> coords, std::vector<Simplex> maximal)
      : dim_(dim), coords_(std::move(coords)) {
    if (dim < 1 || dim > 3) throw InvalidArgument("complex dimension must be 1, 2 or 3");
    tables_.resize(dim + 1);
    index_.resize(dim + 1);
    for (const auto& t : maximal) {
      if (t.dimension() != dim) throw InvalidArgument("maximal simplex of wrong dimension");
      for (VertexId v : t.vertices())
        if (v >= coords_.size()) throw InvalidArgument("simplex references unknown vertex");
      if (index_[dim].count(t)) throw InvalidArgument("duplicate maximal simplex");
      add(t);
      if (!(volume(t) > 1e-14 * std::pow(diameter(t), dim))) {
        throw DegenerateSimplexError("maximal simplex has no positive volume");
      }
    }
    // Closure, walking down from the maximal simplexes.
    for (int k = dim; k >= 1; --k) {
      for (std::size_t idx = 0; idx < tables_[k].size(); ++idx) {
        const Simplex s = tables_[k][idx];
        for (int p = 0; p < s.size(); ++p) {
          const Simplex f = s.without(p);
          if (!index_[k - 1].count(f)) add(f);
        }
      }
    }
    // Vertex table in id order, so vertex index == vertex id.
    if (tables_[0].size() != coords_.size()) throw InvalidArgument("complex has isolated vertices");
    std::sort(tables_[0].begin(), tables_[0].end());
    for (std::size_t i = 0; i < tables_[0].size(); ++i) index_[0][tables_[0][i]] = static_cast<int>(i);
    // Lower-dimensional tables sorted canonically; maximal keep input order.
    for (int k = 1; k < dim; ++k) {
      std::sort(tables_[k].begin(), tables_[k].end());
      for (std::size_t i = 0; i < tables_[k].size(); ++i) index_[k][tables_[k][i]] = static_cast<int>(i);
    }
    facets_.resize(dim + 1);
    cofaces_.resize(dim + 1);
    for (int k = 0; k <= dim; ++k) cofaces_[k].resize(tables_[k].size());
    for (int k = 1; k <= dim; ++k) {
      facets_[k].resize(tables_[k].size());
      for (std::size_t idx = 0; idx < tables_[k].size(); ++idx) {
        const Simplex& s = tables_[k][idx];
        for (int p = 0; p < s.size(); ++p) {
          const int f = index_[k - 1].at(s.without(p));
          facets_[k][idx].push_back(f);
          cofaces_[k - 1][f].push_back(static_cast<int>(idx));
        }
      }
    }
  }

  int dimension() const { return dim_; }
  std::size_t num_vertices() const { return coords_.size(); }
  std::size_t count(int k) const { return tables_.at(k).size(); }
  const std::vector<Simplex>& simplices(int k) const { return tables_.at(k); }
  const std::vector<Simplex>& maximal() const { return tables_.back(); }
  const Simplex& simplex(int k, std::size_t idx) const { return tables_.at(k).at(idx); }
  const Point& coord(VertexId v) const { return coords_.at(v); }
  const std::vector<Point>& coords() const { return coords_; }

  /// Index of `s` in its dimension's table, or -1 if absent.
  int find(const Simplex& s) const {
    if (s.dimension() > dim_) return -1;
    const auto it = index_[s.dimension()].find(s);
    return it == index_[s.dimension()].end() ? -1 : it->second;
  }

  int index_of(const Simplex& s) const {
    const int i = find(s);
    if (i < 0) throw InvalidArgument("simplex is not in the complex");
    return i;
  }

  /// Facet indices of simplex (k, idx), ordered by the omitted position.
  const std::vector<int>& facets(int k, std::size_t idx) const { return facets_.at(k).at(idx); }
  const std::vector<int>& cofaces(int k, std::size_t idx) const { return cofaces_.at(k).at(idx); }

  /// Embedded volume (length, area, volume) of any simplex of the complex.
  double volume(const Simplex& s) const {
    const int k = s.dimension();
    if (k == 0) return 1.0;
    Eigen::MatrixXd e(3, k);
    for (int a = 1; a <= k; ++a) e.col(a - 1) = coords_[s[a]] - coords_[s[0]];
    const double gram = (e.transpose() * e).determinant();
    double fact = 1.0;
    for (int a = 2; a <= k; ++a) fact *= a;
    return std::sqrt(std::max(gram, 0.0)) / fact;
  }

  /// Maximum pairwise vertex distance.
  double diameter(const Simplex& s) const {
    double d = 0.0;
    for (int a = 0; a < s.size(); ++a)
      for (int b = a + 1; b < s.size(); ++b) d = std::max(d, (coords_[s[a]] - coords_[s[b]]).norm());
    return d;
  }

  /// h: the largest diameter of a maximal simplex.
  double mesh_size() const {
    double h = 0.0;
    for (const auto& t : maximal()) h = std::max(h, diameter(t));
    return h;
  }

  long euler_characteristic() const {
    long chi = 0;
    for (int k = 0; k <= dim_; ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(count(k));
    return chi;
  }

 private:
  void add(const Simplex& s) {
    const int k = s.dimension();
    index_[k].emplace(s, static_cast<int>(tables_[k].size()));
    tables_[k].push_back(s);
  }

  int dim_;
  std::vector<Point> coords_;
  std::vector<std::vector<Simplex>> tables_;
  std::vector<std::unordered_map<Simplex, int, SimplexHash>> index_;
  std::vector<std::vector<std::vector<int>>> facets_;
  std::vector<std::vector<std::vector<int>>> cofaces_;
};

using MeshPtr = std::shared_ptr<const SimplicialComplex>;

/// Unit cube, n^3 subcubes, each split into the 6 Kuhn tetrahedra around its
/// main diagonal.
inline MeshPtr build_unit_cube_mesh(int n) {
  if (n < 1) throw InvalidArgument("mesh resolution must be positive");
  const int np = n + 1;
  auto vid = [np](int x, int y, int z) { return static_cast<VertexId>(x + np * (y + np * z)); };
  std::vector<Point> coords;
  coords.reserve(static_cast<std::size_t>(np) * np * np);
  for (int z = 0; z < np; ++z)
    for (int y = 0; y < np; ++y)
      for (int x = 0; x < np; ++x) coords.emplace_back(double(x) / n, double(y) / n, double(z) / n);
  std::vector<Simplex> tets;
  tets.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        std::array<int, 3> perm{0, 1, 2};
        do {
          std::array<int, 3> c{x, y, z};
          std::array<VertexId, 4> ids{};
          ids[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[perm[s]];
            ids[s + 1] = vid(c[0], c[1], c[2]);
          }
          tets.emplace_back(std::span<const VertexId>(ids));
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
  return std::make_shared<const SimplicialComplex>(3, std::move(coords), std::move(tets));
}

/// Unit square, n^2 cells, each split into 2 triangles along (x,y)-(x+1,y+1).
inline MeshPtr build_unit_square_mesh(int n) {
  if (n < 1) throw InvalidArgument("mesh resolution must be positive");
  const int np = n + 1;
  auto vid = [np](int x, int y) { return static_cast<VertexId>(x + np * y); };
  std::vector<Point> coords;
  for (int y = 0; y < np; ++y)
    for (int x = 0; x < np; ++x) coords.emplace_back(double(x) / n, double(y) / n, 0.0);
  std::vector<Simplex> tris;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      tris.push_back(Simplex{vid(x, y), vid(x + 1, y), vid(x + 1, y + 1)});
      tris.push_back(Simplex{vid(x, y), vid(x, y + 1), vid(x + 1, y + 1)});
    }
  return std::make_shared<const SimplicialComplex>(2, std::move(coords), std::move(tris));
}

}  // namespace sgauge
