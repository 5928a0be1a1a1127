#pragma once

// Convergence experiments on the Kuhn cube meshes: smooth test fields,
// their interpolants, error series for the action and curvature estimates,
// directional-derivative consistency and order fitting.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sgauge/action.hpp"
#include "sgauge/error.hpp"
#include "sgauge/gauge.hpp"
#include "sgauge/lie.hpp"
#include "sgauge/mesh.hpp"
#include "sgauge/noether.hpp"
#include "sgauge/random.hpp"
#include "sgauge/whitney.hpp"

namespace sgauge::harness {

/// c(x) = amplitude * cos(k . x + phase) + constant + slope . x, multiplying
/// basis element `basis` in the dx^mu component.
struct FieldTerm {
  int basis = 0;
  int mu = 0;
  double amplitude = 0.0;
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  double phase = 0.0;
  double constant = 0.0;
  Eigen::Vector3d slope = Eigen::Vector3d::Zero();

  double operator()(const Point& x) const {
    return amplitude * std::cos(k.dot(x) + phase) + constant + slope.dot(x);
  }
};

/// A(x) = scale * sum_terms c(x) e_basis dx^mu.
struct SmoothFieldSpec {
  std::string id;
  Group group = Group::SU2;
  std::vector<FieldTerm> terms;
  double scale = 1.0;

  /// A(x)(t) as an algebra matrix.
  Matrix apply(const Point& x, const Point& t) const {
    const auto& basis = algebra_basis(group);
    const int n = matrix_size(group);
    Matrix out = Matrix::Zero(n, n);
    for (const auto& term : terms) out += (scale * term(x) * t(term.mu)) * basis.at(term.basis).matrix();
    return out;
  }

  bool is_zero() const { return terms.empty() || scale == 0.0; }
};

inline const std::vector<std::string>& field_ids() {
  static const std::vector<std::string> ids{"trig", "constant", "flat", "linear"};
  return ids;
}

namespace detail {

inline FieldTerm wave(int basis, int mu, double amp, Eigen::Vector3d k, double phase) {
  FieldTerm t;
  t.basis = basis;
  t.mu = mu;
  t.amplitude = amp;
  t.k = k;
  t.phase = phase;
  return t;
}

inline FieldTerm affine(int basis, int mu, double constant, Eigen::Vector3d slope) {
  FieldTerm t;
  t.basis = basis;
  t.mu = mu;
  t.constant = constant;
  t.slope = slope;
  return t;
}

}  // namespace detail

/// Built-in fields:
///   trig      superposition of plane waves over several basis directions
///   constant  constant coefficients (lies in the Whitney space)
///   flat      A = 0
///   linear    one basis direction with affine coefficients (abelian)
inline SmoothFieldSpec builtin_field(const std::string& id, Group group, double scale = 1.0) {
  using detail::affine;
  using detail::wave;
  SmoothFieldSpec s;
  s.id = id;
  s.group = group;
  s.scale = scale;
  if (id == "trig") {
    if (group == Group::U1) {
      s.terms = {wave(0, 0, 0.9, {1.3, 0.7, -0.5}, 0.3), wave(0, 1, 0.8, {-0.6, 1.1, 0.9}, 1.1),
                 wave(0, 2, 0.7, {0.8, -0.4, 1.2}, -0.7)};
    } else if (group == Group::SU2) {
      s.terms = {wave(0, 0, 0.9, {1.3, 0.7, -0.5}, 0.3), wave(1, 1, 0.8, {-0.6, 1.1, 0.9}, 1.1),
                 wave(2, 2, 0.7, {0.8, -0.4, 1.2}, -0.7), wave(1, 0, 0.5, {0.5, 0.9, 0.3}, 2.0),
                 wave(2, 1, 0.6, {1.0, 0.2, -0.8}, 0.5),  wave(0, 2, 0.4, {-0.9, 0.6, 0.7}, -1.4)};
    } else {
      s.terms = {wave(0, 0, 0.7, {1.3, 0.7, -0.5}, 0.3), wave(3, 1, 0.6, {-0.6, 1.1, 0.9}, 1.1),
                 wave(7, 2, 0.5, {0.8, -0.4, 1.2}, -0.7), wave(2, 0, 0.4, {0.5, 0.9, 0.3}, 2.0),
                 wave(5, 1, 0.5, {1.0, 0.2, -0.8}, 0.5),  wave(1, 2, 0.4, {-0.9, 0.6, 0.7}, -1.4)};
    }
  } else if (id == "constant") {
    s.terms = {affine(0, 0, 0.6, Eigen::Vector3d::Zero()), affine(0, 1, -0.4, Eigen::Vector3d::Zero())};
    if (group != Group::U1) s.terms.push_back(affine(1, 2, 0.5, Eigen::Vector3d::Zero()));
  } else if (id == "flat") {
    s.terms.clear();
  } else if (id == "linear") {
    s.terms = {affine(0, 0, 0.2, {0.0, 0.7, -0.3}), affine(0, 1, -0.1, {0.5, 0.0, 0.4}),
               affine(0, 2, 0.3, {-0.6, 0.2, 0.0})};
  } else {
    throw InvalidArgument("unknown field '" + id + "'");
  }
  return s;
}

struct InterpolatedField {
  GaugeField field;
  double edge_ratio = 0.0;  // max_e |A_e| / h_e
  double face_ratio = 0.0;  // max_f |(delta A)_f| / h_f^2
};

/// A_e = int_e A on every edge, with the size diagnostics.
/// Throws FieldTooRoughError if some edge value is not log-safe.
inline InterpolatedField interpolate_field(const SmoothFieldSpec& spec, const MeshPtr& mesh) {
  const Group g = spec.group;
  const auto raw = de_rham<1>(mesh, [&](const Point& x, const Point& t) { return spec.apply(x, t); });
  std::vector<AlgebraElement> values;
  values.reserve(raw.size());
  for (std::size_t e = 0; e < raw.size(); ++e) values.push_back(AlgebraElement::unchecked(g, raw[e]));
  Cochain<AlgebraElement> cochain(mesh, 1, std::move(values));
  std::optional<GaugeField> field;
  try {
    field.emplace(g, cochain);
  } catch (const BranchAmbiguityError& err) {
    throw FieldTooRoughError(std::string("interpolated field is not log-safe: ") + err.what());
  }
  InterpolatedField out{*field, 0.0, 0.0};
  for (std::size_t e = 0; e < cochain.size(); ++e)
    out.edge_ratio = std::max(out.edge_ratio, norm(cochain[e]) / mesh->diameter(mesh->simplex(1, e)));
  const auto d = coboundary(cochain);
  for (std::size_t f = 0; f < d.size(); ++f) {
    const double hf = mesh->diameter(mesh->simplex(2, f));
    out.face_ratio = std::max(out.face_ratio, norm(d[f]) / (hf * hf));
  }
  return out;
}

struct FitResult {
  double slope = 0.0;
  double residual = 0.0;
  bool all_zero = false;  // every error vanished; slope reported as +inf
};

/// Least-squares slope of log10(error) against log10(h); the residual is
/// the largest absolute deviation from the line in log10 units. Zero
/// errors are skipped; at least three positive ones are required unless
/// all vanish.
inline FitResult fit_order(const std::vector<double>& h, const std::vector<double>& error) {
  if (h.size() != error.size()) throw InvalidArgument("fit_order: mismatched series");
  std::vector<double> x, y;
  bool all_zero = !error.empty();
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!std::isfinite(error[k]) || !(h[k] > 0.0)) throw InvalidArgument("fit_order: non-finite or invalid point");
    if (error[k] != 0.0) all_zero = false;
    if (error[k] > 0.0) {
      x.push_back(std::log10(h[k]));
      y.push_back(std::log10(error[k]));
    }
  }
  if (all_zero && error.size() >= 3) return {std::numeric_limits<double>::infinity(), 0.0, true};
  if (x.size() < 3) throw InvalidArgument("fit_order: fewer than 3 usable points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_order: all mesh sizes equal");
  FitResult r;
  r.slope = sxy / sxx;
  for (std::size_t k = 0; k < x.size(); ++k)
    r.residual = std::max(r.residual, std::abs(y[k] - (my + r.slope * (x[k] - mx))));
  return r;
}

struct ReportRow {
  int n = 0;
  double h = 0.0;
  double error = 0.0;
  std::vector<double> extra;
};

struct ConvergenceReport {
  std::string study;
  Group group = Group::SU2;
  std::string field;
  std::uint64_t seed = 0;
  std::vector<std::string> extra_columns;
  std::vector<ReportRow> rows;
  std::optional<FitResult> fit;  // absent when the study has no order to fit
  std::map<std::string, double> metrics;

  std::vector<double> hs() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.h);
    return v;
  }
  std::vector<double> errors() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.error);
    return v;
  }
  /// Fits when there are at least three levels, otherwise leaves `fit` empty.
  void fit_series() {
    if (rows.size() >= 3) fit = fit_order(hs(), errors());
  }
};

inline void check_levels(const std::vector<int>& ns) {
  if (ns.empty()) throw InvalidArgument("empty list of mesh levels");
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (ns[k] < 1) throw InvalidArgument("mesh levels must be positive");
    if (k > 0 && ns[k] <= ns[k - 1]) throw InvalidArgument("mesh levels must be strictly increasing");
  }
}

/// One refinement level: mesh, Whitney data and the interpolated field.
struct Level {
  int n;
  MeshPtr mesh;
  std::shared_ptr<const Discretization> disc;
  InterpolatedField field;
};

inline Level make_level(const SmoothFieldSpec& spec, int n) {
  auto mesh = build_unit_cube_mesh(n);
  auto disc = std::make_shared<const Discretization>(mesh);
  auto field = interpolate_field(spec, mesh);
  return {n, mesh, disc, std::move(field)};
}

inline ConvergenceReport new_report(const std::string& study, const SmoothFieldSpec& spec, std::uint64_t seed,
                                    std::vector<std::string> extra) {
  ConvergenceReport r;
  r.study = study;
  r.group = spec.group;
  r.field = spec.id;
  r.seed = seed;
  r.extra_columns = std::move(extra);
  return r;
}

/// |S - S'| with the three intermediate steps S -> S1 -> S2 -> S'.
inline ConvergenceReport consistency_action_study(const SmoothFieldSpec& spec, const std::vector<int>& ns) {
  check_levels(ns);
  auto r = new_report("converge-action", spec, 0,
                      {"S", "Sprime", "S_minus_S1", "S1_minus_S2", "S2_minus_Sprime", "edge_ratio", "face_ratio"});
  for (int n : ns) {
    const Level lv = make_level(spec, n);
    const auto& a = lv.field.field;
    const double s = global_action(ActionKind::Continuum, *lv.disc, a).total;
    const double s1 = global_action(ActionKind::S1, *lv.disc, a).total;
    const double s2 = global_action(ActionKind::S2, *lv.disc, a).total;
    const double sp = global_action(ActionKind::Sprime, *lv.disc, a).total;
    r.rows.push_back({n, lv.mesh->mesh_size(), std::abs(s - sp),
                      {s, sp, std::abs(s - s1), std::abs(s1 - s2), std::abs(s2 - sp), lv.field.edge_ratio,
                       lv.field.face_ratio}});
  }
  r.fit_series();
  return r;
}

struct Derivative {
  double value = 0.0;
  double truncation = 0.0;  // |Richardson value - finer stencil value|
};

/// d/de S(A + e A') at e = 0: 4th-order central differences at eps and
/// eps / 2 combined by one Richardson step.
inline Derivative directional_derivative(ActionKind kind, const Discretization& disc, const GaugeField& a,
                                         const Cochain<AlgebraElement>& direction, double eps = 1e-3) {
  if (direction.degree() != 1 || direction.size() != a.size())
    throw InvalidArgument("direction must be a 1-cochain on the same complex");
  auto value = [&](double t) {
    std::vector<AlgebraElement> v;
    v.reserve(a.size());
    for (std::size_t e = 0; e < a.size(); ++e) v.push_back(a[e] + t * direction[e]);
    const GaugeField moved(a.group(), Cochain<AlgebraElement>(a.mesh(), 1, std::move(v)));
    return global_action(kind, disc, moved).total;
  };
  auto stencil = [&](double h) { return (8.0 * (value(h) - value(-h)) - (value(2.0 * h) - value(-2.0 * h))) / (12.0 * h); };
  const double d1 = stencil(eps);
  const double d2 = stencil(0.5 * eps);
  const double rich = (16.0 * d2 - d1) / 15.0;
  return {rich, std::abs(rich - d2)};
}

/// Random algebra valued 1-cochain, each value uniform in the unit coefficient ball.
inline Cochain<AlgebraElement> random_direction(Group g, const MeshPtr& mesh, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<AlgebraElement> v;
  v.reserve(mesh->count(1));
  for (std::size_t e = 0; e < mesh->count(1); ++e) v.push_back(random_algebra(1.0, rng, g));
  return Cochain<AlgebraElement>(mesh, 1, std::move(v));
}

/// ||delta A'|| + ||A'|| in L2 of the Whitney forms.
inline double direction_norm(const Discretization& disc, const Cochain<AlgebraElement>& d) {
  return l2_norm(disc, coboundary(d)) + l2_norm(disc, d);
}

struct DerivativeStudyOptions {
  int directions = 32;
  bool coordinate_directions = true;  // also every (edge, basis) direction on the coarsest level
  double eps = 1e-3;
};

/// max over sampled A' of |DS(A)A' - DS'(A)A'| / (||delta A'|| + ||A'||),
/// a sampled lower bound of the supremum over all directions.
inline ConvergenceReport consistency_derivative_study(const SmoothFieldSpec& spec, const std::vector<int>& ns,
                                                      std::uint64_t seed, const DerivativeStudyOptions& opt = {}) {
  check_levels(ns);
  if (opt.directions < 1) throw InvalidArgument("at least one direction per level is required");
  auto r = new_report("converge-derivative", spec, seed, {"directions", "max_fd_truncation", "max_derivative"});
  for (std::size_t level = 0; level < ns.size(); ++level) {
    const int n = ns[level];
    const Level lv = make_level(spec, n);
    const auto& a = lv.field.field;
    std::vector<Cochain<AlgebraElement>> dirs;
    for (int k = 0; k < opt.directions; ++k)
      dirs.push_back(random_direction(spec.group, lv.mesh, mix_seed(seed, static_cast<std::uint64_t>(n) * 100000 + k)));
    if (opt.coordinate_directions && level == 0) {
      const auto& basis = algebra_basis(spec.group);
      for (std::size_t e = 0; e < lv.mesh->count(1); ++e)
        for (const auto& b : basis) {
          Cochain<AlgebraElement> d(lv.mesh, 1, AlgebraElement(spec.group));
          d[e] = b;
          dirs.push_back(std::move(d));
        }
    }
    double worst = 0.0, trunc = 0.0, scale = 0.0;
    for (const auto& d : dirs) {
      const double nrm = direction_norm(*lv.disc, d);
      if (!(nrm > 0.0)) throw InvalidArgument("zero direction");
      const auto ds = directional_derivative(ActionKind::Continuum, *lv.disc, a, d, opt.eps);
      const auto dsp = directional_derivative(ActionKind::Sprime, *lv.disc, a, d, opt.eps);
      worst = std::max(worst, std::abs(ds.value - dsp.value) / nrm);
      trunc = std::max(trunc, (ds.truncation + dsp.truncation) / nrm);
      scale = std::max(scale, std::abs(ds.value) / nrm);
    }
    r.rows.push_back({n, lv.mesh->mesh_size(), worst, {static_cast<double>(dirs.size()), trunc, scale}});
  }
  r.fit_series();
  return r;
}

/// max over faces of ||(1 - F_f) - int_f F||_Frobenius.
inline ConvergenceReport holonomy_error_study(const SmoothFieldSpec& spec, const std::vector<int>& ns) {
  check_levels(ns);
  auto r = new_report("converge-holonomy", spec, 0, {"faces"});
  const int dim = matrix_size(spec.group);
  for (int n : ns) {
    const Level lv = make_level(spec, n);
    const auto& a = lv.field.field;
    const auto u = transports(a);
    double worst = 0.0;
    for (const auto& f : lv.mesh->simplices(2)) {
      const auto pf = pointed_faces(f)[0];
      const Matrix defect = Matrix::Identity(dim, dim) - face_holonomy(u, pf).matrix();
      worst = std::max(worst, (defect - integrated_curvature(a, pf).matrix()).norm());
    }
    r.rows.push_back({n, lv.mesh->mesh_size(), worst, {static_cast<double>(lv.mesh->count(2))}});
  }
  if (!spec.is_zero()) r.fit_series();
  return r;
}

/// max over (tetrahedron, pointed face with origin i, remaining vertex l)
/// of ||U_{li} F U_{il} - F||.
inline ConvergenceReport transport_conjugation_study(const SmoothFieldSpec& spec, const std::vector<int>& ns) {
  check_levels(ns);
  auto r = new_report("converge-transport", spec, 0, {"pairs"});
  for (int n : ns) {
    const Level lv = make_level(spec, n);
    const auto u = transports(lv.field.field);
    double worst = 0.0;
    std::size_t pairs = 0;
    for (const auto& t : lv.mesh->maximal())
      for (const auto& pf : pointed_faces(t)) {
        const VertexId i = pf.origin();
        const Matrix f = face_holonomy(u, pf).matrix();
        for (VertexId l : t.vertices()) {
          if (pf.face.contains(l)) continue;
          const Matrix moved = u.transport(l, i).matrix() * f * u.transport(i, l).matrix();
          worst = std::max(worst, (moved - f).norm());
          ++pairs;
        }
      }
    r.rows.push_back({n, lv.mesh->mesh_size(), worst, {static_cast<double>(pairs)}});
  }
  if (!spec.is_zero() && spec.group != Group::U1) r.fit_series();
  return r;
}

/// |S'(lowest origins) - S'(origins advanced one step)|.
inline ConvergenceReport origin_dependence_study(const SmoothFieldSpec& spec, const std::vector<int>& ns) {
  check_levels(ns);
  auto r = new_report("origin-dependence", spec, 0, {"Sprime_lowest", "Sprime_advanced"});
  for (int n : ns) {
    const Level lv = make_level(spec, n);
    ActionOptions adv;
    adv.origins = OriginChoice::Advanced;
    const double lo = global_action(ActionKind::Sprime, *lv.disc, lv.field.field).total;
    const double hi = global_action(ActionKind::Sprime, *lv.disc, lv.field.field, adv).total;
    r.rows.push_back({n, lv.mesh->mesh_size(), std::abs(lo - hi), {lo, hi}});
  }
  bool positive = true;
  for (const auto& row : r.rows) positive = positive && row.error > 0.0;
  if (positive && r.rows.size() >= 3) r.fit_series();
  return r;
}

/// Every action kind evaluated on the interpolant; error column |S - S'|.
inline ConvergenceReport evaluate_actions(const SmoothFieldSpec& spec, const std::vector<int>& ns) {
  check_levels(ns);
  auto r = new_report("eval-action", spec, 0, {"S", "S1", "S2", "Sprime", "logvariant"});
  for (int n : ns) {
    const Level lv = make_level(spec, n);
    const auto& a = lv.field.field;
    std::vector<double> v;
    for (auto k : {ActionKind::Continuum, ActionKind::S1, ActionKind::S2, ActionKind::Sprime, ActionKind::LogVariant})
      v.push_back(global_action(k, *lv.disc, a).total);
    r.rows.push_back({n, lv.mesh->mesh_size(), std::abs(v[0] - v[3]), v});
  }
  return r;
}

struct GaugeCheckOptions {
  int trials = 20;
  double field_scale = 0.5;
  double gauge_scale = 1.0;
};

/// Largest relative change of S' under random gauge transformations of
/// random fields, one row per mesh level. Fields and transformations are
/// drawn from (seed, level, trial).
inline ConvergenceReport gauge_invariance_study(Group group, const std::vector<int>& ns, std::uint64_t seed,
                                                const GaugeCheckOptions& opt = {}) {
  check_levels(ns);
  ConvergenceReport r;
  r.study = "gauge-check";
  r.group = group;
  r.field = "random";
  r.seed = seed;
  r.extra_columns = {"trials", "mean_relative_change"};
  for (int n : ns) {
    const auto mesh = build_unit_cube_mesh(n);
    const Discretization disc(mesh);
    double worst = 0.0, mean = 0.0;
    for (int k = 0; k < opt.trials; ++k) {
      const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(n) * 1000 + k);
      const auto a = GaugeField::random(group, mesh, opt.field_scale, mix_seed(s, 1));
      const auto g = DiscreteGaugeTransform::random(group, mesh->num_vertices(), opt.gauge_scale, mix_seed(s, 2));
      const auto u = transports(a);
      const double before = global_action(ActionKind::Sprime, disc, u).total;
      const double after = global_action(ActionKind::Sprime, disc, apply_gauge(u, g)).total;
      const double rel = std::abs(after - before) / std::abs(before);
      worst = std::max(worst, rel);
      mean += rel / opt.trials;
    }
    r.rows.push_back({n, mesh->mesh_size(), worst, {static_cast<double>(opt.trials), mean}});
  }
  return r;
}

struct NoetherCheckOptions {
  double field_scale = 0.8;
  noether::FdOptions fd;
  /// Plain-stencil steps for the reduction measurement and the generator
  /// norm used there (large enough that truncation dominates rounding).
  double reduction_step = 2.5e-4;
  double reduction_generator_norm = 25.0;
};

/// Global identity for the gauge action with a rotation at every vertex in
/// turn. Per level: error = largest residual; extra columns give the
/// residuals of the plain 4th-order stencil at step and step / 2.
inline ConvergenceReport noether_study(Group group, const std::vector<int>& ns, std::uint64_t seed,
                                       const NoetherCheckOptions& opt = {}) {
  check_levels(ns);
  ConvergenceReport r;
  r.study = "noether-check";
  r.group = group;
  r.field = "random";
  r.seed = seed;
  r.extra_columns = {"max_antisymmetry", "plain_step_residual", "plain_half_step_residual", "reduction"};
  for (int n : ns) {
    const auto mesh = build_unit_cube_mesh(n);
    const auto disc = std::make_shared<const Discretization>(mesh);
    const auto u = transports(GaugeField::random(group, mesh, opt.field_scale, mix_seed(seed, n)));
    double worst = 0.0, anti = 0.0;
    for (VertexId c = 0; c < mesh->num_vertices(); ++c) {
      const auto g = random_algebra(1.0, mix_seed(seed, 1000 + c), group);
      noether::GaugeNoetherOptions o;
      o.fd = opt.fd;
      const auto rep = noether::gauge_noether(disc, u, nullptr, c, g, noether::uniform_weights(), o);
      worst = std::max(worst, rep.max_residual);
      for (std::size_t e = 0; e < rep.edge_flux.size(); ++e)
        anti = std::max(anti, std::abs(rep.edge_flux[e] + rep.edge_flux_reversed[e]));
    }
    auto g = random_algebra(1.0, mix_seed(seed, 999), group);
    g *= opt.reduction_generator_norm / spectral_norm(g);
    noether::GaugeNoetherOptions coarse, fine;
    coarse.fd = {opt.reduction_step, false};
    fine.fd = {0.5 * opt.reduction_step, false};
    const double r1 = noether::gauge_noether(disc, u, nullptr, 0, g, noether::uniform_weights(), coarse).max_residual;
    const double r2 = noether::gauge_noether(disc, u, nullptr, 0, g, noether::uniform_weights(), fine).max_residual;
    r.rows.push_back({n, mesh->mesh_size(), worst, {anti, r1, r2, r1 / r2}});
  }
  return r;
}

// Text output shared by the CSV file and the console table.

inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

inline std::vector<std::vector<std::string>> report_cells(const ConvergenceReport& r) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"n", "h", "error"};
  header.insert(header.end(), r.extra_columns.begin(), r.extra_columns.end());
  cells.push_back(header);
  for (const auto& row : r.rows) {
    std::vector<std::string> line{std::to_string(row.n), format_number(row.h), format_number(row.error)};
    for (double x : row.extra) line.push_back(format_number(x));
    cells.push_back(std::move(line));
  }
  return cells;
}

inline std::string to_csv(const ConvergenceReport& r) {
  std::string out;
  for (const auto& line : report_cells(r)) {
    for (std::size_t c = 0; c < line.size(); ++c) out += (c ? "," : "") + line[c];
    out += '\n';
  }
  return out;
}

/// Right-aligned columns holding exactly the CSV cells.
inline std::string to_table(const ConvergenceReport& r) {
  const auto cells = report_cells(r);
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::string out;
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out += "  ";
      out += std::string(width[c] - line[c].size(), ' ') + line[c];
    }
    out += '\n';
  }
  return out;
}

}  // namespace sgauge::harness
