#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace sgauge::quadrature {

struct Rule1D {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1]; exact to degree 2n - 1.
inline Rule1D gauss_legendre(int n) {
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    r.nodes[i] = 0.5 * (1.0 - x);
    r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

/// Edge rule used by the de Rham map.
inline const Rule1D& edge_rule() {
  static const Rule1D r = gauss_legendre(7);
  return r;
}

struct TrianglePoint {
  double l0, l1, l2;  // barycentric coordinates
  double weight;      // weights sum to 1
};

/// 12-point symmetric rule on triangles (Dunavant), exact to degree 6.
inline const std::vector<TrianglePoint>& triangle_rule() {
  static const std::vector<TrianglePoint> pts = [] {
    std::vector<TrianglePoint> p;
    auto orbit3 = [&](double a, double b, double w) {
      p.push_back({a, b, b, w});
      p.push_back({b, a, b, w});
      p.push_back({b, b, a, w});
    };
    auto orbit6 = [&](double a, double b, double c, double w) {
      p.push_back({a, b, c, w});
      p.push_back({a, c, b, w});
      p.push_back({b, a, c, w});
      p.push_back({b, c, a, w});
      p.push_back({c, a, b, w});
      p.push_back({c, b, a, w});
    };
    // Tabulated to 15 digits; the dependent coordinate and the weight
    // normalization are recomputed so the rule is consistent to rounding.
    const double a1 = 0.501426509658179, a2 = 0.873821971016996;
    const double a3 = 0.053145049844817, b3 = 0.310352451033784;
    orbit3(a1, 0.5 * (1.0 - a1), 0.116786275726379);
    orbit3(a2, 0.5 * (1.0 - a2), 0.050844906370207);
    orbit6(a3, b3, 1.0 - a3 - b3, 0.082851075618374);
    double total = 0.0;
    for (const auto& q : p) total += q.weight;
    for (auto& q : p) q.weight /= total;
    return p;
  }();
  return pts;
}

}  // namespace sgauge::quadrature
