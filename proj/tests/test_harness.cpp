#include <gtest/gtest.h>

#include <cmath>

#include "sgauge/harness.hpp"

using namespace sgauge;
using namespace sgauge::harness;

TEST(FitOrder, ExactPowerLaw) {
  std::vector<double> h, e;
  for (int n : {2, 3, 4, 6, 8}) {
    h.push_back(std::sqrt(3.0) / n);
    e.push_back(0.7 * std::pow(h.back(), 2.5));
  }
  const auto f = fit_order(h, e);
  EXPECT_NEAR(f.slope, 2.5, 1e-12);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_FALSE(f.all_zero);
}

TEST(FitOrder, NoisySeriesResidual) {
  const std::vector<double> h{1.0, 0.5, 0.25, 0.125};
  std::vector<double> e;
  const double wiggle[] = {1.0, 1.2, 1.0, 1.2};
  for (std::size_t k = 0; k < h.size(); ++k) e.push_back(wiggle[k] * h[k] * h[k]);
  const auto f = fit_order(h, e);
  EXPECT_NEAR(f.slope, 2.0, 0.15);
  EXPECT_GT(f.residual, 0.01);
  EXPECT_LT(f.residual, std::log10(1.2));
}

TEST(FitOrder, DegenerateInputs) {
  EXPECT_THROW(fit_order({1.0, 0.5}, {1.0, 0.25}), InvalidArgument);
  EXPECT_THROW(fit_order({1.0, 0.5, 0.25}, {1.0, 0.0, 0.1}), InvalidArgument);  // one zero leaves two points
  EXPECT_THROW(fit_order({1.0, 0.5, 0.25}, {1.0, std::nan(""), 0.1}), InvalidArgument);
  EXPECT_THROW(fit_order({1.0, 0.5}, {1.0}), InvalidArgument);
  const auto z = fit_order({1.0, 0.5, 0.25}, {0.0, 0.0, 0.0});
  EXPECT_TRUE(z.all_zero);
  EXPECT_TRUE(std::isinf(z.slope));
}

TEST(Levels, MustIncrease) {
  EXPECT_THROW(check_levels({}), InvalidArgument);
  EXPECT_THROW(check_levels({2, 2}), InvalidArgument);
  EXPECT_THROW(check_levels({0, 1}), InvalidArgument);
  EXPECT_NO_THROW(check_levels({1, 2, 5}));
}

TEST(Fields, UnknownIdRejected) {
  EXPECT_THROW(builtin_field("nope", Group::SU2), InvalidArgument);
  for (const auto& id : field_ids()) EXPECT_NO_THROW(builtin_field(id, Group::SU3));
}

TEST(Interpolation, DiagnosticsStayBounded) {
  // For a smooth field |A_e| / h_e and |(delta A)_f| / h_f^2 stay bounded
  // under refinement.
  for (Group g : {Group::U1, Group::SU2, Group::SU3}) {
    const auto spec = builtin_field("trig", g);
    double prev_edge = 0.0, prev_face = 0.0;
    for (int n : {1, 2, 4}) {
      const auto f = interpolate_field(spec, build_unit_cube_mesh(n));
      EXPECT_GT(f.edge_ratio, 0.0);
      EXPECT_LT(f.edge_ratio, 5.0);
      EXPECT_LT(f.face_ratio, 10.0);
      if (prev_edge > 0.0) {
        EXPECT_LT(f.edge_ratio, 1.5 * prev_edge);
        EXPECT_LT(f.face_ratio, 1.5 * prev_face);
      }
      prev_edge = f.edge_ratio;
      prev_face = f.face_ratio;
    }
  }
}

TEST(Interpolation, RoughFieldRejected) {
  auto spec = builtin_field("constant", Group::U1, 40.0);
  EXPECT_THROW(interpolate_field(spec, build_unit_cube_mesh(1)), FieldTooRoughError);
}

TEST(Interpolation, EdgeValuesMatchLineIntegral) {
  // a constant field integrates to A(t) exactly
  const auto spec = builtin_field("constant", Group::SU2);
  const auto mesh = build_unit_cube_mesh(2);
  const auto f = interpolate_field(spec, mesh);
  for (std::size_t e = 0; e < mesh->count(1); ++e) {
    const auto s = mesh->simplex(1, e);
    const Point t = mesh->coord(s[1]) - mesh->coord(s[0]);
    EXPECT_LT((f.field[e].matrix() - spec.apply(Point::Zero(), t)).norm(), 1e-14);
  }
}

TEST(DirectionalDerivative, MatchesQuadraticForm) {
  // For abelian fields S' is the quadratic form S(A) = |delta A|^2 / 2 in the
  // Whitney mass matrix, so DS(A)B = <delta A, delta B>, computed here by
  // polarization of exact action values.
  const auto mesh = build_unit_cube_mesh(2);
  const Discretization disc(mesh);
  const auto a = GaugeField::random(Group::U1, mesh, 0.3, 5);
  const auto b = random_direction(Group::U1, mesh, 6);
  auto shifted = [&](double t) {
    std::vector<AlgebraElement> v;
    for (std::size_t e = 0; e < a.size(); ++e) v.push_back(a[e] + t * b[e]);
    return global_action(ActionKind::Continuum, disc, GaugeField(Group::U1, Cochain<AlgebraElement>(mesh, 1, v))).total;
  };
  // S quadratic: S(A + B) - S(A - B) = 2 DS(A)B
  const double exact = 0.5 * (shifted(1.0) - shifted(-1.0));
  const auto d = directional_derivative(ActionKind::Continuum, disc, a, b);
  EXPECT_NEAR(d.value, exact, 1e-9 * std::max(1.0, std::abs(exact)));
  EXPECT_LT(d.truncation, 1e-8);
}

TEST(DirectionalDerivative, IsLinearInDirection) {
  const auto mesh = build_unit_cube_mesh(1);
  const Discretization disc(mesh);
  const auto a = GaugeField::random(Group::SU2, mesh, 0.5, 7);
  const auto b = random_direction(Group::SU2, mesh, 8);
  const auto c = random_direction(Group::SU2, mesh, 9);
  std::vector<AlgebraElement> sum;
  for (std::size_t e = 0; e < b.size(); ++e) sum.push_back(2.0 * b[e] + (-0.5) * c[e]);
  const Cochain<AlgebraElement> bc(mesh, 1, sum);
  for (auto kind : {ActionKind::Continuum, ActionKind::Sprime}) {
    const double lhs = directional_derivative(kind, disc, a, bc).value;
    const double rhs =
        2.0 * directional_derivative(kind, disc, a, b).value - 0.5 * directional_derivative(kind, disc, a, c).value;
    EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Studies, FlatFieldGivesZeros) {
  const auto spec = builtin_field("flat", Group::SU2);
  const std::vector<int> ns{1, 2, 3};
  for (const auto& r : {consistency_action_study(spec, ns), holonomy_error_study(spec, ns),
                        transport_conjugation_study(spec, ns), origin_dependence_study(spec, ns)})
    for (const auto& row : r.rows) EXPECT_EQ(row.error, 0.0) << r.study;
}

TEST(Studies, AbelianSplitsVanish) {
  // U(1): S1 = S and S2 = S' identically, only the S' vs S1 step remains.
  const auto r = consistency_action_study(builtin_field("trig", Group::U1), {1, 2, 3});
  for (const auto& row : r.rows) {
    const double s = row.extra[0];
    EXPECT_LE(row.extra[2], 1e-12 * s);
    EXPECT_LE(row.extra[4], 1e-12 * s);
    EXPECT_NEAR(row.error, row.extra[3], 1e-12 * s);
  }
  // and the transport conjugation is exact
  for (const auto& row : transport_conjugation_study(builtin_field("trig", Group::U1), {1, 2}).rows)
    EXPECT_LT(row.error, 1e-14);
}

TEST(Studies, ConstantFieldActionErrorComesFromCurvatureOnly) {
  // A constant field lies in the Whitney space, so S = S1 exactly.
  const auto r = consistency_action_study(builtin_field("constant", Group::SU2), {1, 2});
  for (const auto& row : r.rows) EXPECT_LE(row.extra[2], 1e-12 * std::max(1.0, row.extra[0]));
}

TEST(Studies, GaugeCheckIsSmall) {
  GaugeCheckOptions opt;
  opt.trials = 3;
  const auto r = gauge_invariance_study(Group::SU3, {1, 2}, 11, opt);
  for (const auto& row : r.rows) EXPECT_LE(row.error, 1e-10);
}

TEST(Output, CsvAndTableShareCells) {
  const auto r = holonomy_error_study(builtin_field("trig", Group::SU2), {1, 2, 3});
  const auto csv = to_csv(r);
  const auto table = to_table(r);
  EXPECT_EQ(csv.rfind("n,h,error,faces\n", 0), 0u);
  for (const auto& line : report_cells(r))
    for (const auto& cell : line) {
      EXPECT_NE(csv.find(cell), std::string::npos);
      EXPECT_NE(table.find(cell), std::string::npos);
    }
  EXPECT_EQ(csv, to_csv(holonomy_error_study(builtin_field("trig", Group::SU2), {1, 2, 3})));
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(FitOrder, LinearAndNoisyCubic) {
  std::vector<double> h, e1, e3;
  Rng rng(12);
  for (int n : {2, 3, 4, 6, 8, 12}) {
    h.push_back(std::sqrt(3.0) / n);
    e1.push_back(0.3 * h.back());
    e3.push_back(2.0 * std::pow(h.back(), 3) * (1.0 + rng.uniform(-0.05, 0.05)));
  }
  EXPECT_NEAR(fit_order(h, e1).slope, 1.0, 1e-12);
  EXPECT_NEAR(fit_order(h, e3).slope, 3.0, 0.1);
}

TEST(Studies, AmplitudeSweepIsMonotone) {
  double prev = 0.0;
  for (double amp : {0.25, 0.5, 1.0}) {
    const auto r = consistency_action_study(builtin_field("trig", Group::SU2, amp), {2, 3});
    for (const auto& row : r.rows) EXPECT_GT(row.error, 0.0);
    EXPECT_GT(r.rows.back().error, prev);
    prev = r.rows.back().error;
  }
}

TEST(Studies, LinearAbelianFieldHasExactFirstStep) {
  const auto r = consistency_action_study(builtin_field("linear", Group::U1), {1, 2, 3});
  for (const auto& row : r.rows) EXPECT_LE(row.extra[2], 1e-12 * std::max(1.0, row.extra[0]));
  for (const auto& row : origin_dependence_study(builtin_field("linear", Group::U1), {1, 2}).rows)
    EXPECT_LE(row.error, 1e-12);
}

TEST(Studies, DeterministicGivenSeed) {
  const auto spec = builtin_field("trig", Group::SU2);
  DerivativeStudyOptions opt;
  opt.directions = 3;
  const auto a = consistency_derivative_study(spec, {1, 2}, 5, opt);
  const auto b = consistency_derivative_study(spec, {1, 2}, 5, opt);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_NE(to_csv(a), to_csv(consistency_derivative_study(spec, {1, 2}, 6, opt)));
}
