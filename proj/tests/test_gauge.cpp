#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sgauge/gauge.hpp"

using namespace sgauge;

namespace {

constexpr Group kGroups[] = {Group::U1, Group::SU2, Group::SU3};

double dist(const GroupElement& a, const GroupElement& b) { return (a.matrix() - b.matrix()).norm(); }

// int_f F(A) = int_f dA + [A(t1), A(t2)] by oracle quadrature on the triangle
// (i, j, k) with Whitney field values a_ji, a_kj, a_ik along its edges.
Matrix face_curvature_by_quadrature(const std::array<Point, 3>& x, const Matrix& a_ji, const Matrix& a_kj,
                                    const Matrix& a_ik) {
  const oracle::Affine tri({x[0], x[1], x[2]});
  // local edges (0,1), (0,2), (1,2) hold A_{10} = a_ji, A_{20} = -a_ik, A_{21} = a_kj
  const std::vector<Matrix> edges{a_ji, -a_ik, a_kj};
  const Point t1 = x[1] - x[0], t2 = x[2] - x[0];
  const auto da = oracle::field_derivative(tri, edges);
  Matrix out = Matrix::Zero(a_ji.rows(), a_ji.cols());
  for (const auto& q : oracle::simplex_rule(2, 5)) {
    const auto comp = oracle::field_components(tri, q.bary, edges);
    Matrix at1 = Matrix::Zero(out.rows(), out.cols()), at2 = at1, dat = at1;
    for (int mu = 0; mu < 3; ++mu) {
      at1 += t1(mu) * comp[mu];
      at2 += t2(mu) * comp[mu];
      for (int nu = 0; nu < 3; ++nu) dat += t1(mu) * t2(nu) * da[mu][nu];
    }
    out += 0.5 * q.weight * (dat + at1 * at2 - at2 * at1);
  }
  return out;
}

}  // namespace

TEST(GaugeField, BranchSafetyEnforced) {
  const auto m = build_unit_square_mesh(1);
  const Complex I(0, 1);
  Matrix big(1, 1);
  big(0, 0) = I * 3.2;
  std::vector<AlgebraElement> v(m->count(1), AlgebraElement(Group::U1));
  v[0] = AlgebraElement::from_matrix(Group::U1, big);
  EXPECT_THROW(GaugeField(Group::U1, Cochain<AlgebraElement>(m, 1, v)), BranchAmbiguityError);
}

TEST(GaugeField, BetweenIsAntisymmetric) {
  const auto m = build_unit_square_mesh(2);
  const auto a = GaugeField::random(Group::SU2, m, 0.5, 4);
  for (const auto& e : m->simplices(1)) {
    EXPECT_EQ(a.between(e[1], e[0]).matrix(), a[m->index_of(e)].matrix());
    EXPECT_EQ(a.between(e[0], e[1]).matrix(), (-a[m->index_of(e)]).matrix());
  }
}

TEST(Links, TransportsAndPotentialsAreInverse) {
  const auto m = build_unit_cube_mesh(1);
  for (Group g : kGroups) {
    const auto a = GaugeField::random(g, m, 1.0, 17);
    const auto u = transports(a);
    const auto back = potentials(u);
    for (std::size_t e = 0; e < a.size(); ++e) EXPECT_LT((back[e].matrix() - a[e].matrix()).norm(), 1e-12);
    for (const auto& e : m->simplices(1)) {
      const auto ji = u.transport(e[1], e[0]);
      const auto ij = u.transport(e[0], e[1]);
      const int n = matrix_size(g);
      EXPECT_LT(((ji * ij).matrix() - Matrix::Identity(n, n)).norm(), 1e-14);
      EXPECT_LT(dist(ji, exp(-a.between(e[1], e[0]))), 1e-15);
    }
  }
}

TEST(Holonomy, ReversalAndRotation) {
  const auto m = build_unit_cube_mesh(1);
  for (Group g : kGroups) {
    const auto u = transports(GaugeField::random(g, m, 1.0, 21));
    for (const auto& f : m->simplices(2)) {
      const auto pf = pointed_faces(f)[0];
      const auto [i, j, k] = pf.cycle;
      const auto hol = face_holonomy(u, pf);
      EXPECT_LT(dist(face_holonomy(u, pf.reversed()), hol.inverse()), 1e-11);
      const auto rot = face_holonomy(u, pf.rotated());
      EXPECT_LT(dist(rot, u.transport(j, i) * hol * u.transport(i, j)), 1e-11);
      // the reversed rotation is the inverse of the rotation
      EXPECT_LT(dist(face_holonomy(u, pf.rotated().reversed()), rot.inverse()), 1e-11);
      EXPECT_LT(dist(hol, u.transport(i, k) * u.transport(k, j) * u.transport(j, i)), 1e-14);
    }
  }
}

TEST(GaugeTransform, HolonomyIsConjugated) {
  const auto m = build_unit_cube_mesh(1);
  for (Group g : kGroups) {
    const auto u = transports(GaugeField::random(g, m, 1.0, 31));
    const auto gt = DiscreteGaugeTransform::random(g, m->num_vertices(), 1.5, 32);
    const auto v = apply_gauge(u, gt);
    for (const auto& f : m->simplices(2)) {
      const auto pf = pointed_faces(f)[0];
      const VertexId o = pf.origin();
      EXPECT_LT(dist(face_holonomy(v, pf), gt[o] * face_holonomy(u, pf) * gt[o].inverse()), 1e-12);
    }
  }
}

TEST(GaugeTransform, ActionIsAGroupAction) {
  const auto m = build_unit_square_mesh(2);
  for (Group g : kGroups) {
    const auto u = transports(GaugeField::random(g, m, 1.0, 41));
    const auto gt = DiscreteGaugeTransform::random(g, m->num_vertices(), 1.0, 42);
    const auto ht = DiscreteGaugeTransform::random(g, m->num_vertices(), 1.0, 43);
    const auto twice = apply_gauge(apply_gauge(u, gt), ht);
    const auto once = apply_gauge(u, ht * gt);
    for (std::size_t e = 0; e < u.size(); ++e) EXPECT_LT(dist(twice[e], once[e]), 1e-13);
    const auto same = apply_gauge(u, DiscreteGaugeTransform::identity(g, m->num_vertices()));
    for (std::size_t e = 0; e < u.size(); ++e) EXPECT_LT(dist(same[e], u[e]), 1e-15);
  }
}

TEST(GaugeTransform, ScalarIsCovariant) {
  const auto m = build_unit_square_mesh(1);
  const auto phi = ScalarField::random(Group::SU3, m->num_vertices(), 1.0, 5);
  const auto gt = DiscreteGaugeTransform::random(Group::SU3, m->num_vertices(), 1.0, 6);
  const auto p2 = apply_gauge_scalar(phi, gt);
  for (std::size_t v = 0; v < phi.size(); ++v) {
    EXPECT_NEAR(p2[v].norm(), phi[v].norm(), 1e-13);
    EXPECT_LT((p2[v] - gt[v].matrix() * phi[v]).norm(), 1e-15);
  }
}

TEST(IntegratedCurvature, MatchesFaceQuadrature) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<Point, 3> x;
    for (auto& p : x) p = Point(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const auto a_ji = random_algebra(1.0, rng, Group::SU2);
    const auto a_kj = random_algebra(1.0, rng, Group::SU2);
    const auto a_ik = random_algebra(1.0, rng, Group::SU2);
    const Matrix quad = face_curvature_by_quadrature(x, a_ji.matrix(), a_kj.matrix(), a_ik.matrix());
    EXPECT_LT((integrated_curvature(a_ji, a_kj, a_ik).matrix() - quad).norm(), 1e-10);
  }
}

TEST(IntegratedCurvature, InvariantUnderRotationOfCycle) {
  // The integral does not depend on the origin, only on the orientation.
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    const auto a = random_algebra(1.0, rng, Group::SU3);
    const auto b = random_algebra(1.0, rng, Group::SU3);
    const auto c = random_algebra(1.0, rng, Group::SU3);
    const auto f0 = integrated_curvature(a, b, c);
    EXPECT_LT((f0.matrix() - integrated_curvature(b, c, a).matrix()).norm(), 1e-15);
    EXPECT_LT((f0.matrix() + integrated_curvature(-c, -b, -a).matrix()).norm(), 1e-15);
  }
}

TEST(IntegratedCurvature, AgreesWithHolonomyToThirdOrder) {
  // Edge values of size eps whose sum is O(eps^2), as for a smooth field on
  // a face of diameter eps: 1 - F and int_f F then differ at third order.
  double prev = 0.0;
  for (double eps : {0.1, 0.05, 0.025}) {
    Rng rng(7);
    const auto a = eps * random_algebra(1.0, rng, Group::SU2);
    const auto b = eps * random_algebra(1.0, rng, Group::SU2);
    const auto c = eps * eps * random_algebra(1.0, rng, Group::SU2) - a - b;
    // face (i, j, k): U_ik U_kj U_ji = exp(-A_ik) exp(-A_kj) exp(-A_ji)
    const Matrix hol = (exp(-c) * exp(-b) * exp(-a)).matrix();
    const double err = ((Matrix::Identity(2, 2) - hol) - integrated_curvature(a, b, c).matrix()).norm();
    if (prev > 0.0) EXPECT_GT(prev / err, 7.0);
    prev = err;
  }
}
