#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sgauge/action.hpp"

using namespace sgauge;

namespace {

constexpr Group kGroups[] = {Group::U1, Group::SU2, Group::SU3};

oracle::Affine element_affine(const Element& e) { return oracle::Affine(e.geometry.points()); }

std::vector<Matrix> element_edge_values(const Element& e, const GaugeField& a) {
  std::vector<Matrix> out;
  for (int idx : e.edges) out.push_back(a[idx].matrix());
  return out;
}

// int_T |dA + [A, A]/2|^2 by oracle quadrature (integrand has degree 4).
double continuum_by_quadrature(const Element& e, const GaugeField& a) {
  const auto t = element_affine(e);
  const auto vals = element_edge_values(e, a);
  const auto da = oracle::field_derivative(t, vals);
  double acc = 0.0;
  for (const auto& q : oracle::simplex_rule(3, 4)) {
    const auto comp = oracle::field_components(t, q.bary, vals);
    double v = 0.0;
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = mu + 1; nu < 3; ++nu) {
        const Matrix f = da[mu][nu] + comp[mu] * comp[nu] - comp[nu] * comp[mu];
        v += oracle::re_tr_hh(f, f);
      }
    acc += q.weight * t.volume * v;
  }
  return acc;
}

// int_T |grad Phi + A Phi|^2 by oracle quadrature.
double scalar_by_quadrature(const Element& e, const GaugeField& a, const ScalarField& phi) {
  const auto t = element_affine(e);
  const auto vals = element_edge_values(e, a);
  double acc = 0.0;
  for (const auto& q : oracle::simplex_rule(3, 4)) {
    const auto comp = oracle::field_components(t, q.bary, vals);
    Vector p = Vector::Zero(phi[0].size());
    for (int i = 0; i < 4; ++i) p += q.bary[i] * phi[e.vertices[i]];
    double v = 0.0;
    for (int mu = 0; mu < 3; ++mu) {
      Vector d = comp[mu] * p;
      for (int i = 0; i < 4; ++i) d += t.grad[i](mu) * phi[e.vertices[i]];
      v += d.squaredNorm();
    }
    acc += q.weight * t.volume * v;
  }
  return acc;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Action, ZeroFieldGivesZero) {
  const auto m = build_unit_cube_mesh(1);
  const Discretization disc(m);
  for (Group g : kGroups) {
    const auto a = GaugeField::zero(g, m);
    for (auto k : {ActionKind::Continuum, ActionKind::S1, ActionKind::S2, ActionKind::Sprime, ActionKind::LogVariant})
      EXPECT_EQ(global_action(k, disc, a).total, 0.0) << action_name(k);
  }
}

TEST(Action, ContinuumMatchesQuadrature) {
  const auto m = build_unit_cube_mesh(1);
  const Discretization disc(m);
  for (Group g : kGroups) {
    const auto a = GaugeField::random(g, m, 1.0, 7);
    for (std::size_t t = 0; t < disc.elements().size(); ++t) {
      const double ref = continuum_by_quadrature(disc.elements()[t], a);
      EXPECT_LT(rel(action_continuum(disc, a, t), ref), 1e-12) << group_name(g);
    }
  }
}

TEST(Action, ContinuumOnSkewedTetrahedron) {
  std::vector<Point> p{{0.05, -0.1, 0.0}, {1.1, 0.1, 0.05}, {0.2, 0.9, -0.1}, {-0.1, 0.15, 1.2}};
  const auto m = std::make_shared<const SimplicialComplex>(3, p, std::vector<Simplex>{Simplex{0, 1, 2, 3}});
  const Discretization disc(m);
  const auto a = GaugeField::random(Group::SU3, m, 1.0, 8);
  EXPECT_LT(rel(action_continuum(disc, a, 0), continuum_by_quadrature(disc.elements()[0], a)), 1e-12);
}

TEST(Action, S1IsInterpolatedCurvatureNorm) {
  const auto m = build_unit_cube_mesh(1);
  const Discretization disc(m);
  const auto a = GaugeField::random(Group::SU2, m, 1.0, 9);
  for (std::size_t t = 0; t < disc.elements().size(); ++t) {
    const auto& e = disc.elements()[t];
    const auto ref = element_affine(e);
    const auto faces = pointed_faces(e.simplex);
    std::vector<Matrix> curv;
    for (const auto& f : faces) curv.push_back(integrated_curvature(a, f).matrix());
    double acc = 0.0;
    for (const auto& q : oracle::simplex_rule(3, 3)) {
      std::array<std::array<Matrix, 3>, 3> w;
      for (auto& row : w)
        for (auto& x : row) x = Matrix::Zero(2, 2);
      const auto fs = oracle::faces(3);
      for (std::size_t f = 0; f < fs.size(); ++f) {
        const auto wf = oracle::whitney2(ref, q.bary, fs[f][0], fs[f][1], fs[f][2]);
        for (int mu = 0; mu < 3; ++mu)
          for (int nu = 0; nu < 3; ++nu) w[mu][nu] += wf(mu, nu) * curv[f];
      }
      double v = 0.0;
      for (int mu = 0; mu < 3; ++mu)
        for (int nu = mu + 1; nu < 3; ++nu) v += oracle::re_tr_hh(w[mu][nu], w[mu][nu]);
      acc += q.weight * ref.volume * v;
    }
    EXPECT_LT(rel(action_s1(disc, a, t), acc), 1e-12);
  }
}

TEST(Action, AbelianInterpolatedEqualsContinuum) {
  for (int n : {1, 2}) {
    const auto m = build_unit_cube_mesh(n);
    const Discretization disc(m);
    const auto a = GaugeField::random(Group::U1, m, 1.0, 10 + n);
    const double s = global_action(ActionKind::Continuum, disc, a).total;
    const double s1 = global_action(ActionKind::S1, disc, a).total;
    EXPECT_LT(rel(s1, s), 1e-12);
  }
}

TEST(Action, AbelianHolonomyActionsCoincide) {
  const auto m = build_unit_cube_mesh(2);
  const Discretization disc(m);
  const auto a = GaugeField::random(Group::U1, m, 0.5, 12);
  const double s2 = global_action(ActionKind::S2, disc, a).total;
  EXPECT_LT(rel(global_action(ActionKind::Sprime, disc, a).total, s2), 1e-13);
  ActionOptions adv;
  adv.origins = OriginChoice::Advanced;
  EXPECT_LT(rel(global_action(ActionKind::Sprime, disc, a, adv).total, s2), 1e-13);
}

TEST(Action, GaugeInvariantKinds) {
  const auto m = build_unit_cube_mesh(2);
  const Discretization disc(m);
  for (Group g : kGroups) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto a = GaugeField::random(g, m, 0.4, 100 + seed);
      const auto gt = DiscreteGaugeTransform::random(g, m->num_vertices(), 0.8, 200 + seed);
      const auto b = apply_gauge(a, gt);
      const auto phi = ScalarField::random(g, m->num_vertices(), 1.0, 300 + seed);
      const auto phi2 = apply_gauge_scalar(phi, gt);
      for (auto k : {ActionKind::Sprime, ActionKind::LogVariant}) {
        const double s0 = global_action(k, disc, a).total;
        EXPECT_LT(rel(global_action(k, disc, b).total, s0), 1e-10) << action_name(k) << " " << group_name(g);
      }
      ActionOptions o1, o2;
      o1.scalar = &phi;
      o2.scalar = &phi2;
      const double d0 = global_action(ActionKind::ScalarDiscrete, disc, a, o1).total;
      EXPECT_LT(rel(global_action(ActionKind::ScalarDiscrete, disc, b, o2).total, d0), 1e-10);
    }
  }
}

TEST(Action, HolonomyActionWithoutTransportIsNotInvariant) {
  const auto m = build_unit_cube_mesh(1);
  const Discretization disc(m);
  const auto a = GaugeField::random(Group::SU2, m, 0.4, 5);
  const auto gt = DiscreteGaugeTransform::random(Group::SU2, m->num_vertices(), 0.8, 6);
  const double s0 = global_action(ActionKind::S2, disc, a).total;
  EXPECT_GT(rel(global_action(ActionKind::S2, disc, apply_gauge(a, gt)).total, s0), 1e-6);
}

TEST(Action, GlobalIsSumOfLocal) {
  const auto m = build_unit_cube_mesh(2);
  const Discretization disc(m);
  const auto a = GaugeField::random(Group::SU2, m, 0.5, 13);
  const auto v = global_action(ActionKind::Sprime, disc, a);
  double sum = 0.0;
  const auto u = transports(a);
  for (std::size_t t = 0; t < v.per_simplex.size(); ++t) {
    EXPECT_NEAR(v.per_simplex[t], action_sprime(disc, u, t), 1e-15);
    sum += v.per_simplex[t];
  }
  EXPECT_NEAR(v.total, sum, 1e-13);
  EXPECT_LT(v.imaginary_residue, 1e-12);
}

TEST(Action, OriginChoiceMatters) {
  const auto m = build_unit_cube_mesh(1);
  const Discretization disc(m);
  const auto a = GaugeField::random(Group::SU2, m, 0.5, 14);
  ActionOptions adv;
  adv.origins = OriginChoice::Advanced;
  const double lo = global_action(ActionKind::Sprime, disc, a).total;
  const double hi = global_action(ActionKind::Sprime, disc, a, adv).total;
  EXPECT_GT(std::abs(lo - hi), 1e-8);
  EXPECT_LT(std::abs(lo - hi), 0.1 * lo);
}

TEST(Action, LagrangianWithIndependentHolonomies) {
  const auto m = build_unit_cube_mesh(1);
  const Discretization disc(m);
  const auto u = transports(GaugeField::random(Group::SU2, m, 0.5, 15));
  const auto faces = element_faces(disc.elements()[0]);
  const auto hol = face_holonomies(u, faces);
  EXPECT_NEAR(lagrangian_uf(disc, u, hol, 0, faces), action_sprime(disc, u, 0), 1e-15);
  std::vector<GroupElement> ident(faces.size(), GroupElement::identity(Group::SU2));
  EXPECT_EQ(lagrangian_uf(disc, u, ident, 0, faces), 0.0);
}

TEST(Action, ScalarContinuumMatchesQuadrature) {
  const auto m = build_unit_cube_mesh(1);
  const Discretization disc(m);
  for (Group g : kGroups) {
    const auto a = GaugeField::random(g, m, 1.0, 16);
    const auto phi = ScalarField::random(g, m->num_vertices(), 1.0, 17);
    for (std::size_t t = 0; t < disc.elements().size(); ++t)
      EXPECT_LT(rel(scalar_action_continuum(disc, a, phi, t), scalar_by_quadrature(disc.elements()[t], a, phi)), 1e-12);
  }
}

TEST(Action, ScalarDiscreteFreeField) {
  // Zero connection: sum M_{e0 e1} (dPhi)_{e0} . (dPhi)_{e1} equals the
  // continuum energy of the piecewise affine interpolant.
  const auto m = build_unit_cube_mesh(2);
  const Discretization disc(m);
  const auto a = GaugeField::zero(Group::SU2, m);
  const auto phi = ScalarField::random(Group::SU2, m->num_vertices(), 1.0, 18);
  ActionOptions o;
  o.scalar = &phi;
  EXPECT_LT(rel(global_action(ActionKind::ScalarDiscrete, disc, a, o).total,
                global_action(ActionKind::ScalarContinuum, disc, a, o).total),
            1e-12);
}

TEST(Action, RequiresScalarField) {
  const auto m = build_unit_cube_mesh(1);
  const Discretization disc(m);
  EXPECT_THROW(global_action(ActionKind::ScalarDiscrete, disc, GaugeField::zero(Group::U1, m)), InvalidArgument);
}
