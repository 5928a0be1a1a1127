#pragma once

// Plain-text dump/load for meshes and gauge fields.
//
// Mesh:  header "3 m nv n0 ... nm", nv coordinate lines, then one line of
//        ascending vertex ids per simplex, dimension by dimension.
// Field: header "group ne", then "edge_id c1 ... cd" per edge, coefficients
//        in the orthonormal algebra basis.

#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgauge/error.hpp"
#include "sgauge/gauge.hpp"
#include "sgauge/lie.hpp"
#include "sgauge/mesh.hpp"

namespace sgauge::io {

namespace detail {

struct Precision {
  std::ostream& os;
  std::streamsize old;
  explicit Precision(std::ostream& o) : os(o), old(o.precision(17)) {}
  ~Precision() { os.precision(old); }
};

inline std::istringstream next_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
  throw ParseError(std::string("unexpected end of input while reading ") + what);
}

template <class T>
T read_value(std::istringstream& line, const char* what) {
  T v;
  if (!(line >> v)) throw ParseError(std::string("malformed ") + what);
  return v;
}

inline void expect_end(std::istringstream& line, const char* what) {
  std::string rest;
  if (line >> rest) throw ParseError(std::string("trailing data in ") + what);
}

}  // namespace detail

inline void write_mesh(std::ostream& os, const SimplicialComplex& mesh) {
  detail::Precision p(os);
  const int m = mesh.dimension();
  os << 3 << ' ' << m << ' ' << mesh.num_vertices();
  for (int k = 0; k <= m; ++k) os << ' ' << mesh.count(k);
  os << '\n';
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const Point& x = mesh.coord(static_cast<VertexId>(v));
    os << x(0) << ' ' << x(1) << ' ' << x(2) << '\n';
  }
  for (int k = 0; k <= m; ++k)
    for (const auto& s : mesh.simplices(k)) {
      for (int a = 0; a < s.size(); ++a) os << (a ? " " : "") << s[a];
      os << '\n';
    }
}

/// Rebuilds the complex from its top simplices and checks that the listed
/// lower-dimensional simplices are exactly its closure.
inline MeshPtr read_mesh(std::istream& in) {
  auto header = detail::next_line(in, "mesh header");
  const int ambient = detail::read_value<int>(header, "mesh header");
  const int m = detail::read_value<int>(header, "mesh header");
  const long nv = detail::read_value<long>(header, "mesh header");
  if (ambient != 3) throw ParseError("only 3D coordinates are supported");
  if (m < 1 || m > 3) throw ParseError("complex dimension must be 1, 2 or 3");
  std::vector<long> counts;
  for (int k = 0; k <= m; ++k) counts.push_back(detail::read_value<long>(header, "mesh header"));
  detail::expect_end(header, "mesh header");
  if (nv < 1 || counts[0] != nv) throw ParseError("vertex count mismatch in mesh header");
  for (long c : counts)
    if (c < 1) throw ParseError("simplex counts must be positive");

  std::vector<Point> coords;
  for (long v = 0; v < nv; ++v) {
    auto line = detail::next_line(in, "coordinates");
    Point x;
    for (int d = 0; d < 3; ++d) x(d) = detail::read_value<double>(line, "coordinate line");
    detail::expect_end(line, "coordinate line");
    coords.push_back(x);
  }
  std::vector<std::vector<Simplex>> tables(m + 1);
  for (int k = 0; k <= m; ++k)
    for (long i = 0; i < counts[k]; ++i) {
      auto line = detail::next_line(in, "simplices");
      std::vector<VertexId> ids;
      for (int a = 0; a <= k; ++a) {
        const long id = detail::read_value<long>(line, "simplex line");
        if (id < 0 || id >= nv) throw ParseError("vertex id out of range");
        ids.push_back(static_cast<VertexId>(id));
      }
      detail::expect_end(line, "simplex line");
      for (std::size_t a = 1; a < ids.size(); ++a)
        if (ids[a] <= ids[a - 1]) throw ParseError("simplex vertex ids must be strictly ascending");
      tables[k].emplace_back(std::span<const VertexId>(ids));
    }
  MeshPtr mesh;
  try {
    mesh = std::make_shared<const SimplicialComplex>(m, std::move(coords), tables[m]);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid mesh: ") + e.what());
  }
  for (int k = 0; k < m; ++k) {
    if (mesh->count(k) != tables[k].size()) throw ParseError("listed simplices differ from the closure of the top ones");
    std::vector<bool> seen(tables[k].size(), false);
    for (const auto& s : tables[k]) {
      const int i = mesh->find(s);
      if (i < 0) throw ParseError("listed simplex " + to_string(s) + " is not in the closure");
      if (seen[i]) throw ParseError("simplex " + to_string(s) + " listed twice");
      seen[i] = true;
    }
  }
  return mesh;
}

inline void write_field(std::ostream& os, const GaugeField& a) {
  detail::Precision p(os);
  os << group_name(a.group()) << ' ' << a.size() << '\n';
  for (std::size_t e = 0; e < a.size(); ++e) {
    os << e;
    for (double c : coefficients(a[e])) os << ' ' << c;
    os << '\n';
  }
}

/// Reads a field written by write_field on the given mesh. Every edge must
/// appear exactly once; the order of the lines is free.
inline GaugeField read_field(std::istream& in, const MeshPtr& mesh) {
  auto header = detail::next_line(in, "field header");
  const auto name = detail::read_value<std::string>(header, "field header");
  const long ne = detail::read_value<long>(header, "field header");
  detail::expect_end(header, "field header");
  Group g;
  try {
    g = parse_group(name);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  if (ne < 0 || static_cast<std::size_t>(ne) != mesh->count(1)) throw ParseError("edge count does not match the mesh");
  const std::size_t dim = algebra_basis(g).size();
  std::vector<AlgebraElement> values(ne, AlgebraElement(g));
  std::vector<bool> seen(ne, false);
  for (long i = 0; i < ne; ++i) {
    auto line = detail::next_line(in, "field values");
    const long e = detail::read_value<long>(line, "field line");
    if (e < 0 || e >= ne) throw ParseError("edge id out of range");
    if (seen[e]) throw ParseError("edge listed twice");
    seen[e] = true;
    std::vector<double> c;
    for (std::size_t d = 0; d < dim; ++d) c.push_back(detail::read_value<double>(line, "field line"));
    detail::expect_end(line, "field line");
    values[e] = from_coefficients(g, c);
  }
  try {
    return GaugeField(g, Cochain<AlgebraElement>(mesh, 1, std::move(values)));
  } catch (const BranchAmbiguityError& e) {
    throw ParseError(std::string("field is not log-safe: ") + e.what());
  }
}

}  // namespace sgauge::io
