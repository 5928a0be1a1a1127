#pragma once

// Compact matrix Lie groups U(1), SU(2), SU(3) and their Lie algebras.
//
// Algebra elements are skew-Hermitian n x n matrices (traceless for SU(n)),
// group elements are unitary (determinant one for SU(n)). The exponential and
// the principal logarithm are computed spectrally, which is exact up to
// rounding for these normal matrices.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgauge/error.hpp"
#include "sgauge/random.hpp"

namespace sgauge {

using Complex = std::complex<double>;

/// Complex matrix with at most 3 x 3 inline storage.
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
/// Complex column vector with at most 3 inline entries.
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

enum class Group { U1, SU2, SU3 };

/// Distance below pi that every eigenphase must keep for the principal
/// logarithm to be accepted.
inline constexpr double kBranchMargin = 1e-6;

/// Tolerance for the skew-Hermitian / unitary / trace / determinant checks.
inline constexpr double kStructureTol = 1e-12;

/// Group products longer than this are re-projected onto the group.
inline constexpr int kReunitarizeEvery = 16;

constexpr int matrix_size(Group g) {
  switch (g) {
    case Group::U1: return 1;
    case Group::SU2: return 2;
    case Group::SU3: return 3;
  }
  return 0;
}

constexpr int algebra_dimension(Group g) {
  switch (g) {
    case Group::U1: return 1;
    case Group::SU2: return 3;
    case Group::SU3: return 8;
  }
  return 0;
}

constexpr bool is_special(Group g) { return g != Group::U1; }

inline std::string_view group_name(Group g) {
  switch (g) {
    case Group::U1: return "u1";
    case Group::SU2: return "su2";
    case Group::SU3: return "su3";
  }
  return "?";
}

inline Group parse_group(std::string_view s) {
  if (s == "u1") return Group::U1;
  if (s == "su2") return Group::SU2;
  if (s == "su3") return Group::SU3;
  throw InvalidArgument("unknown group '" + std::string(s) + "' (expected u1, su2 or su3)");
}

inline void require_same_group(Group a, Group b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": group mismatch (" + std::string(group_name(a)) +
                          " vs " + std::string(group_name(b)) + ")");
  }
}

class AlgebraElement {
 public:
  /// Zero element.
  explicit AlgebraElement(Group g = Group::U1)
      : group_(g), m_(Matrix::Zero(matrix_size(g), matrix_size(g))) {}

  /// Validates skew-Hermiticity (and tracelessness for SU(n)).
  static AlgebraElement from_matrix(Group g, const Matrix& m, double tol = kStructureTol) {
    const int n = matrix_size(g);
    if (m.rows() != n || m.cols() != n) throw InvalidArgument("algebra element has wrong size");
    if ((m + m.adjoint()).norm() > tol) throw InvalidArgument("matrix is not skew-Hermitian");
    if (is_special(g) && std::abs(m.trace()) > tol) throw InvalidArgument("matrix is not traceless");
    return AlgebraElement(g, m);
  }

  /// No invariant check; for results of structure-preserving arithmetic.
  static AlgebraElement unchecked(Group g, Matrix m) { return AlgebraElement(g, std::move(m)); }

  Group group() const { return group_; }
  const Matrix& matrix() const { return m_; }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    m_ += o.m_;
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    m_ -= o.m_;
    return *this;
  }
  AlgebraElement& operator*=(double s) {
    m_ *= s;
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(AlgebraElement a, double s) { return a *= s; }
  friend AlgebraElement operator-(AlgebraElement a) {
    a.m_ = -a.m_;
    return a;
  }

 private:
  AlgebraElement(Group g, Matrix m) : group_(g), m_(std::move(m)) {}

  Group group_;
  Matrix m_;
};

class GroupElement {
 public:
  static GroupElement identity(Group g) {
    return GroupElement(g, Matrix::Identity(matrix_size(g), matrix_size(g)));
  }

  /// Validates unitarity (and unit determinant for SU(n)).
  static GroupElement from_matrix(Group g, const Matrix& m, double tol = kStructureTol) {
    const int n = matrix_size(g);
    if (m.rows() != n || m.cols() != n) throw InvalidArgument("group element has wrong size");
    if ((m.adjoint() * m - Matrix::Identity(n, n)).norm() > tol) {
      throw InvalidArgument("matrix is not unitary");
    }
    if (is_special(g) && std::abs(m.determinant() - Complex(1.0)) > tol) {
      throw InvalidArgument("matrix does not have unit determinant");
    }
    return GroupElement(g, m);
  }

  static GroupElement unchecked(Group g, Matrix m) { return GroupElement(g, std::move(m)); }

  Group group() const { return group_; }
  const Matrix& matrix() const { return m_; }

  /// Inverse, which is the Hermitian conjugate.
  GroupElement inverse() const { return GroupElement(group_, m_.adjoint()); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    require_same_group(a.group_, b.group_, "group product");
    return GroupElement(a.group_, a.m_ * b.m_);
  }

 private:
  GroupElement(Group g, Matrix m) : group_(g), m_(std::move(m)) {}

  Group group_;
  Matrix m_;
};

/// Re tr(g^H g').
inline double scalar_product(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_group(a.group(), b.group(), "scalar_product");
  // Re tr(a^H b) = Re sum_ij conj(a_ij) b_ij
  return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum().real();
}

inline double norm(const AlgebraElement& a) { return std::sqrt(scalar_product(a, a)); }

inline AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_group(a.group(), b.group(), "bracket");
  if (a.group() == Group::U1) return AlgebraElement(Group::U1);
  return AlgebraElement::unchecked(a.group(), a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

/// Largest singular value; for a skew-Hermitian matrix the largest |eigenvalue|.
inline double spectral_norm(const AlgebraElement& a) {
  if (a.group() == Group::U1) return std::abs(a.matrix()(0, 0));
  const Matrix h = Complex(0.0, -1.0) * a.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

inline GroupElement exp(const AlgebraElement& a) {
  const Group g = a.group();
  const int n = matrix_size(g);
  if (n == 1) {
    Matrix m(1, 1);
    m(0, 0) = std::exp(Complex(0.0, a.matrix()(0, 0).imag()));
    return GroupElement::unchecked(g, m);
  }
  // a skew-Hermitian => h = -i a Hermitian, a = i h, exp(a) = V e^{i D} V^H.
  const Matrix h = Complex(0.0, -1.0) * a.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const auto& v = eig.eigenvectors();
  Vector phases(n);
  for (int k = 0; k < n; ++k) phases(k) = std::exp(Complex(0.0, eig.eigenvalues()(k)));
  return GroupElement::unchecked(g, v * phases.asDiagonal() * v.adjoint());
}

/// Principal logarithm. Throws BranchAmbiguityError if an eigenphase lies
/// within `margin` of +-pi, or if (for SU(n)) the principal logarithm is not
/// traceless.
inline AlgebraElement log(const GroupElement& u, double margin = kBranchMargin) {
  constexpr double pi = std::numbers::pi;
  const Group g = u.group();
  const int n = matrix_size(g);
  auto check_phase = [&](double phi) {
    if (!(std::abs(phi) < pi - margin)) {
      throw BranchAmbiguityError("eigenphase " + std::to_string(phi) +
                                 " is too close to the branch cut of the logarithm");
    }
  };
  if (n == 1) {
    const double phi = std::arg(u.matrix()(0, 0));
    check_phase(phi);
    Matrix m(1, 1);
    m(0, 0) = Complex(0.0, phi);
    return AlgebraElement::unchecked(g, m);
  }
  // Unitary matrices are normal, so the Schur form is diagonal.
  Eigen::ComplexSchur<Matrix> schur(u.matrix());
  const auto& t = schur.matrixT();
  const auto& q = schur.matrixU();
  Vector logs(n);
  for (int k = 0; k < n; ++k) {
    const double phi = std::arg(t(k, k));
    check_phase(phi);
    logs(k) = Complex(0.0, phi);
  }
  Matrix l = q * logs.asDiagonal() * q.adjoint();
  l = 0.5 * (l - l.adjoint()).eval();
  const Complex tr = l.trace();
  if (std::abs(tr) > 1e-8) {
    throw BranchAmbiguityError("principal logarithm leaves the special unitary algebra");
  }
  l -= (tr / static_cast<double>(n)) * Matrix::Identity(n, n);
  return AlgebraElement::unchecked(g, l);
}

/// Ad(U) g = U g U^{-1}.
inline AlgebraElement adjoint(const GroupElement& u, const AlgebraElement& a) {
  require_same_group(u.group(), a.group(), "adjoint");
  return AlgebraElement::unchecked(a.group(), u.matrix() * a.matrix() * u.matrix().adjoint());
}

/// Nearest group element (polar factor), with the determinant phase removed
/// for SU(n).
inline GroupElement reunitarize(const GroupElement& u) {
  const Group g = u.group();
  const int n = matrix_size(g);
  if (n == 1) {
    Matrix m(1, 1);
    m(0, 0) = u.matrix()(0, 0) / std::abs(u.matrix()(0, 0));
    return GroupElement::unchecked(g, m);
  }
  Eigen::JacobiSVD<Matrix> svd(u.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix w = svd.matrixU() * svd.matrixV().adjoint();
  const double theta = std::arg(w.determinant());
  w *= std::exp(Complex(0.0, -theta / n));
  return GroupElement::unchecked(g, w);
}

/// Left-to-right product of group elements that re-projects onto the group
/// after every kReunitarizeEvery factors.
class GroupProduct {
 public:
  explicit GroupProduct(Group g) : value_(GroupElement::identity(g)) {}

  GroupProduct& operator*=(const GroupElement& u) {
    value_ = value_ * u;
    if (++factors_ % kReunitarizeEvery == 0) value_ = reunitarize(value_);
    return *this;
  }

  int factors() const { return factors_; }
  const GroupElement& value() const { return value_; }

 private:
  GroupElement value_;
  int factors_ = 0;
};

/// Orthonormal basis of the algebra for the scalar product Re tr(g^H g'):
/// i for U(1), i sigma_k / sqrt 2 for SU(2), i lambda_a / sqrt 2 (Gell-Mann)
/// for SU(3).
inline const std::vector<AlgebraElement>& algebra_basis(Group g) {
  static const auto build = [](Group grp) {
    const Complex I(0.0, 1.0);
    const double r2 = 1.0 / std::sqrt(2.0);
    std::vector<AlgebraElement> basis;
    if (grp == Group::U1) {
      Matrix m(1, 1);
      m(0, 0) = I;
      basis.push_back(AlgebraElement::unchecked(grp, m));
      return basis;
    }
    if (grp == Group::SU2) {
      std::array<Matrix, 3> sigma;
      for (auto& s : sigma) s = Matrix::Zero(2, 2);
      sigma[0](0, 1) = 1.0;
      sigma[0](1, 0) = 1.0;
      sigma[1](0, 1) = -I;
      sigma[1](1, 0) = I;
      sigma[2](0, 0) = 1.0;
      sigma[2](1, 1) = -1.0;
      for (const auto& s : sigma) basis.push_back(AlgebraElement::unchecked(grp, I * r2 * s));
      return basis;
    }
    std::array<Matrix, 8> lam;
    for (auto& l : lam) l = Matrix::Zero(3, 3);
    lam[0](0, 1) = lam[0](1, 0) = 1.0;
    lam[1](0, 1) = -I;
    lam[1](1, 0) = I;
    lam[2](0, 0) = 1.0;
    lam[2](1, 1) = -1.0;
    lam[3](0, 2) = lam[3](2, 0) = 1.0;
    lam[4](0, 2) = -I;
    lam[4](2, 0) = I;
    lam[5](1, 2) = lam[5](2, 1) = 1.0;
    lam[6](1, 2) = -I;
    lam[6](2, 1) = I;
    const double r3 = 1.0 / std::sqrt(3.0);
    lam[7](0, 0) = r3;
    lam[7](1, 1) = r3;
    lam[7](2, 2) = -2.0 * r3;
    for (const auto& l : lam) basis.push_back(AlgebraElement::unchecked(grp, I * r2 * l));
    return basis;
  };
  static const std::array<std::vector<AlgebraElement>, 3> all = {build(Group::U1), build(Group::SU2),
                                                                  build(Group::SU3)};
  return all[static_cast<int>(g)];
}

inline AlgebraElement from_coefficients(Group g, std::span<const double> c) {
  const auto& basis = algebra_basis(g);
  if (c.size() != basis.size()) throw InvalidArgument("wrong number of algebra coefficients");
  AlgebraElement out(g);
  for (std::size_t d = 0; d < c.size(); ++d) out += c[d] * basis[d];
  return out;
}

inline std::vector<double> coefficients(const AlgebraElement& a) {
  const auto& basis = algebra_basis(a.group());
  std::vector<double> c(basis.size());
  for (std::size_t d = 0; d < c.size(); ++d) c[d] = scalar_product(basis[d], a);
  return c;
}

/// Uniform sample from the ball of radius `scale` in the orthonormal
/// coefficients, drawn from `rng`. Frobenius (hence spectral) norm <= scale.
inline AlgebraElement random_algebra(double scale, Rng& rng, Group g) {
  if (!(scale > 0.0)) throw InvalidArgument("random_algebra: scale must be positive");
  const int d = algebra_dimension(g);
  std::vector<double> c(d);
  double r2;
  do {
    r2 = 0.0;
    for (auto& x : c) {
      x = rng.uniform(-1.0, 1.0);
      r2 += x * x;
    }
  } while (r2 > 1.0);
  for (auto& x : c) x *= scale;
  return from_coefficients(g, c);
}

inline AlgebraElement random_algebra(double scale, std::uint64_t seed, Group g) {
  Rng rng(seed);
  return random_algebra(scale, rng, g);
}

inline GroupElement random_group(double scale, Rng& rng, Group g) {
  return exp(random_algebra(scale, rng, g));
}

}  // namespace sgauge
