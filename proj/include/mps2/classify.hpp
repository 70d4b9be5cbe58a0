#pragma once

// Canonicalization of a 2x2 matrix pair into model A, B or C (or Degenerate),
// canonical-family builders, the Cirac pair, and explicit equivalence
// transformations between pairs.
//
// Canonical families (epsilon = +-1):
//   A: A0 = diag(1+g, 1-g),      A1 = [[eps+g cos t, g sin t], [g sin t, eps-g cos t]]
//   B: B0 = diag(1+g, 1-g),      B1 = [[eps+g, 0], [c, eps-g]]
//   C: C0 = [[1, 0], [g, 1]],    C1 = [[eps+u, u], [-u, eps-u]]

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mps2/symmetry.hpp"

namespace mps2 {

enum class ModelTag { A, B, C, Degenerate };

inline const char* to_string(ModelTag t) {
  switch (t) {
    case ModelTag::A: return "A";
    case ModelTag::B: return "B";
    case ModelTag::C: return "C";
    case ModelTag::Degenerate: return "Degenerate";
  }
  return "?";
}

struct CanonicalForm {
  ModelTag tag = ModelTag::Degenerate;
  // A -> (g, theta); B -> (g, c); C -> (g, u). Unused fields stay 0.
  double g = 0.0;
  double theta = 0.0;
  double c = 0.0;
  double u = 0.0;
  int epsilon = 1;
  Matrix2 gauge_u = Matrix2::Identity();
  Complex gauge_mu{1.0, 0.0};
  bool swapped_roles = false;  // matrices were relabeled A0 <-> A1 (spin-flip image)
  std::string notes;
  std::optional<std::pair<Matrix2, Matrix2>> canonical;  // matrices achieved by the gauge
};

inline void require_real_param(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": parameter must be finite");
}

inline MatrixPair build_model_a(double g, double theta, int epsilon = 1) {
  require_real_param(g, "build_model_a");
  require_real_param(theta, "build_model_a");
  Matrix2 a0, a1;
  a0 << 1.0 + g, 0.0, 0.0, 1.0 - g;
  double e = epsilon;
  a1 << e + g * std::cos(theta), g * std::sin(theta), g * std::sin(theta),
      e - g * std::cos(theta);
  return MatrixPair(a0, a1);
}

inline MatrixPair build_model_b(double g, double c, int epsilon = 1) {
  require_real_param(g, "build_model_b");
  require_real_param(c, "build_model_b");
  Matrix2 b0, b1;
  b0 << 1.0 + g, 0.0, 0.0, 1.0 - g;
  double e = epsilon;
  b1 << e + g, 0.0, c, e - g;
  return MatrixPair(b0, b1);
}

inline MatrixPair build_model_c(double g, double u, int epsilon = 1) {
  require_real_param(g, "build_model_c");
  require_real_param(u, "build_model_c");
  Matrix2 c0, c1;
  c0 << 1.0, 0.0, g, 1.0;
  double e = epsilon;
  c1 << e + u, u, -u, e - u;
  return MatrixPair(c0, c1);
}

inline MatrixPair build_model(ModelTag tag, double p1, double p2, int epsilon = 1) {
  switch (tag) {
    case ModelTag::A: return build_model_a(p1, p2, epsilon);
    case ModelTag::B: return build_model_b(p1, p2, epsilon);
    case ModelTag::C: return build_model_c(p1, p2, epsilon);
    default: throw std::invalid_argument("build_model: no canonical matrices for Degenerate");
  }
}

// A'_0 = [[0,0],[1,1]], A'_1 = [[1,q],[0,0]]
inline MatrixPair build_cirac(double q) {
  require_real_param(q, "build_cirac");
  Matrix2 a0, a1;
  a0 << 0.0, 0.0, 1.0, 1.0;
  a1 << 1.0, q, 0.0, 0.0;
  return MatrixPair(a0, a1);
}

namespace detail {

inline CanonicalForm degenerate(const std::string& note) {
  CanonicalForm f;
  f.tag = ModelTag::Degenerate;
  f.notes = note;
  return f;
}

struct AnchorAttempt {
  bool ok = false;
  CanonicalForm form;
  std::string why;  // reason on failure
};

inline bool nearly_real(Complex v, double tol, double scale) {
  return std::abs(v.imag()) <= tol * std::max(scale, 1.0);
}

// Distinct-eigenvalue branch: anchor is diagonalized to diag(1+g, 1-g) and
// the transformed partner decides A versus B versus the diagonal boundary.
inline AnchorAttempt try_diagonalizable(const MatrixPair& p, int anchor, double tol) {
  AnchorAttempt res;
  const Matrix2& m = p[anchor];
  const Matrix2& other = p[1 - anchor];

  EigenDecomposition d = eig(m);
  Complex l0 = d.eigenvalues(0), l1 = d.eigenvalues(1);
  double emax = std::max(std::abs(l0), std::abs(l1));
  if (std::abs(l0 - l1) <= tol * std::max(emax, 1e-300)) {
    res.why = "anchor eigenvalues coincide";
    return res;
  }
  if (std::abs(l0 + l1) <= tol * emax) {
    res.why = "traceless anchor: eigenvalues cannot be scaled to (1+g, 1-g)";
    return res;
  }
  Complex mu = 2.0 / (l0 + l1);
  Complex gc = (l0 - l1) / (l0 + l1);
  if (!nearly_real(gc, tol, std::abs(gc))) {
    res.why = "complex g parameter";
    return res;
  }
  double g = gc.real();
  Matrix2 v;
  v.col(0) = d.right_vectors.col(0);
  v.col(1) = d.right_vectors.col(1);
  if (g < 0.0) {  // enforce g >= 0 by swapping the eigenvalue order
    g = -g;
    v.col(0).swap(v.col(1));
  }
  Matrix2 vi = v.inverse();
  Matrix2 at = mu * vi * other * v;

  Complex a = at(0, 0), b = at(0, 1), cc = at(1, 0), dd = at(1, 1);
  Complex tr_half = 0.5 * (a + dd);
  int eps = tr_half.real() >= 0.0 ? 1 : -1;
  if (std::abs(tr_half - static_cast<double>(eps)) > 1e3 * tol) {
    res.why = "partner trace not +-2 after scaling";
    return res;
  }
  double atscale = std::max(at.cwiseAbs().maxCoeff(), 1e-300);
  bool has_b = std::abs(b) > tol * atscale;
  bool has_c = std::abs(cc) > tol * atscale;

  CanonicalForm f;
  f.epsilon = eps;
  f.swapped_roles = anchor == 1;
  f.gauge_mu = mu;

  if (has_b && has_c) {
    // Model A: rebalance off-diagonals with diag(sqrt(c), sqrt(b)).
    Complex sb = std::sqrt(b), sc = std::sqrt(cc);
    Matrix2 reb = Matrix2::Zero();
    reb(0, 0) = sc;
    reb(1, 1) = sb;
    Matrix2 sym = reb * at * reb.inverse();
    Complex bs = sym(0, 1);  // = sqrt(bc)
    Complex us = 0.5 * (a - dd);
    if (!nearly_real(bs, tol, 1.0 + std::abs(bs)) || !nearly_real(us, tol, 1.0 + std::abs(us))) {
      res.why = "complex theta parameter";
      return res;
    }
    f.tag = ModelTag::A;
    f.g = g;
    f.theta = std::atan2(bs.real(), us.real());
    f.gauge_u = reb * vi;
    res.ok = true;
    res.form = f;
    return res;
  }

  if (has_b != has_c) {
    // Model B canonical form is lower triangular. An upper-triangular
    // partner becomes lower in the opposite eigenvalue order, at the price
    // of g -> -g (the family is closed under transposition with g -> -g).
    double gs = g;
    Matrix2 v2 = v;
    Matrix2 at2 = at;
    if (has_b) {
      gs = -g;
      v2.col(0) = v.col(1);
      v2.col(1) = v.col(0);
      at2 = mu * v2.inverse() * other * v2;
    }
    Complex off = at2(1, 0);
    Complex us = 0.5 * (at2(0, 0) - at2(1, 1));
    if (std::abs(us - gs) > 1e3 * tol * (1.0 + std::abs(gs))) {
      // Anti-aligned diagonal: passes the trace/determinant gate but admits
      // no spin-flip witness, so it sits outside the three families.
      res.why = "triangular partner with anti-aligned diagonal (no spin-flip symmetry)";
      return res;
    }
    // Residual diagonal gauge rescales the off-diagonal freely; fix c = 1.
    Matrix2 fix = Matrix2::Identity();
    fix(1, 1) = 1.0 / off;
    f.tag = ModelTag::B;
    f.g = gs;
    f.c = 1.0;
    f.notes = "off-diagonal gauge-normalized to c = 1";
    f.gauge_u = fix * v2.inverse();
    res.ok = true;
    res.form = f;
    return res;
  }

  // Both off-diagonals vanish: the pair is simultaneously diagonal.
  Complex us = 0.5 * (a - dd);
  if (std::abs(us - g) <= 1e3 * tol * (1.0 + g)) {
    f.tag = ModelTag::B;
    f.g = g;
    f.c = 0.0;
    f.notes = "both matrices diagonal";
    f.gauge_u = vi;
    res.ok = true;
    res.form = f;
    return res;
  }
  if (std::abs(us + g) <= 1e3 * tol * (1.0 + g)) {
    // diag(eps-g, eps+g): the theta = pi point of model A (two product states).
    f.tag = ModelTag::A;
    f.g = g;
    f.theta = M_PI;
    f.notes = "both matrices diagonal: sum of two product states";
    f.gauge_u = vi;
    res.ok = true;
    res.form = f;
    return res;
  }
  res.why = "diagonal partner incompatible with determinant constraint";
  return res;
}

// Jordan branch: anchor has a double eigenvalue and a nontrivial nilpotent
// part; canonicalize to C0 = [[1,0],[g,1]] and symmetrize the partner.
inline AnchorAttempt try_jordan(const MatrixPair& p, int anchor, double tol) {
  AnchorAttempt res;
  const Matrix2& m = p[anchor];
  const Matrix2& other = p[1 - anchor];
  double scale = std::max(m.cwiseAbs().maxCoeff(), other.cwiseAbs().maxCoeff());

  Complex lambda = 0.5 * m.trace();
  if (std::abs(lambda) <= tol * scale) {
    res.why = "nilpotent anchor";
    return res;
  }
  Complex mu = 1.0 / lambda;
  Matrix2 nil = mu * m - Matrix2::Identity();
  double nn = nil.norm();
  if (nn <= tol) {
    res.why = "anchor proportional to identity";
    return res;
  }
  if ((nil * nil).norm() > 1e-6 * nn * nn) {
    res.why = "anchor has genuinely distinct eigenvalues";
    return res;
  }
  // Jordan chain basis: columns (w, N w) give [[1,0],[1,1]].
  int jcol = nil.col(0).norm() >= nil.col(1).norm() ? 0 : 1;
  Vector2 w = Matrix2::Identity().col(jcol);
  Vector2 z = nil.col(jcol);
  if (z.norm() <= tol * nn) {
    res.why = "anchor not a Jordan block";
    return res;
  }
  Matrix2 basis;
  basis.col(0) = w;
  basis.col(1) = z;
  Matrix2 bi = basis.inverse();
  Matrix2 at = mu * bi * other * basis;

  Complex a = at(0, 0), b = at(0, 1), cc = at(1, 0), dd = at(1, 1);
  Complex tr_half = 0.5 * (a + dd);
  int eps = tr_half.real() >= 0.0 ? 1 : -1;
  if (std::abs(tr_half - static_cast<double>(eps)) > 1e3 * tol) {
    res.why = "partner trace not +-2 after scaling";
    return res;
  }
  Complex us = 0.5 * (a - dd);

  CanonicalForm f;
  f.epsilon = eps;
  f.swapped_roles = anchor == 1;
  f.gauge_mu = mu;

  if (std::abs(us) <= tol * (1.0 + scale)) {
    bool off_free = std::abs(b) <= tol * scale && std::abs(cc) <= tol * scale;
    if (!off_free) {
      res.why = "partner is a Jordan block sharing the eigenvector (outside model C)";
      return res;
    }
    // Partner = eps * I; the residual gauge rescales g freely, normalize to 1.
    Matrix2 j = bi * (mu * m) * basis;
    Complex gj = j(1, 0);
    Matrix2 fix = Matrix2::Identity();
    fix(1, 1) = 1.0 / gj;
    f.tag = ModelTag::C;
    f.g = 1.0;
    f.u = 0.0;
    f.notes = "u = 0 (partner proportional to identity); g normalized to 1";
    f.gauge_u = fix * bi;
    res.ok = true;
    res.form = f;
    return res;
  }
  if (std::abs(b) <= tol * scale || std::abs(cc) <= tol * scale) {
    res.why = "partner off-diagonal structure incompatible with bc = -u^2";
    return res;
  }
  // In the unit-subdiagonal Jordan frame the (0,1) entry of the partner is
  // the gauge invariant g*u; the chain freedom basis -> basis * [[1,0],[t?,1]]
  // slides (g, u) along the g*u = const hyperbola.
  Complex gu = b;
  if (!nearly_real(gu, 1e3 * tol, std::abs(gu))) {
    res.why = "complex g*u invariant";
    return res;
  }
  Complex uf = us;
  Complex t = std::abs(us) > 0 ? b / us : Complex(0.0);
  bool natural_ok = nearly_real(uf, 1e3 * tol, 1.0 + std::abs(uf)) &&
                    nearly_real(t, 1e3 * tol, std::abs(t)) && t.real() > 0.0;
  if (!natural_ok) {
    // slide along the hyperbola to the symmetric point u = +-g = sqrt(|gu|),
    // where the diagonal rescale t = g is positive by construction
    double p = gu.real();
    double gt = std::sqrt(std::abs(p));
    Complex ut = p >= 0.0 ? Complex(gt) : Complex(-gt);
    Complex beta = (ut - us) / b;
    Matrix2 shear = Matrix2::Identity();
    shear(1, 0) = beta;  // basis column op: new u'' = u'' + b*beta
    Matrix2 shear_inv = Matrix2::Identity();
    shear_inv(1, 0) = -beta;
    basis = basis * shear;
    bi = shear_inv * bi;
    at = mu * bi * other * basis;
    b = at(0, 1);
    us = 0.5 * (at(0, 0) - at(1, 1));
    uf = us;
    t = b / us;
    if (!nearly_real(uf, 1e3 * tol, 1.0 + std::abs(uf)) ||
        !nearly_real(t, 1e3 * tol, std::abs(t)) || !(t.real() > 0.0)) {
      res.why = "complex (g, u) parameters";
      return res;
    }
  }
  // diag(1, t) with t = b/u makes the partner [[eps+u, u],[-u, eps-u]].
  Matrix2 fix = Matrix2::Zero();
  fix(0, 0) = 1.0;
  fix(1, 1) = t;
  Matrix2 j = fix * (bi * (mu * m) * basis) * fix.inverse();
  Complex gj = j(1, 0);
  if (!nearly_real(gj, 1e3 * tol, std::abs(gj))) {
    res.why = "complex g parameter";
    return res;
  }
  f.tag = ModelTag::C;
  f.g = gj.real();
  f.u = uf.real();
  f.gauge_u = fix * bi;
  res.ok = true;
  res.form = f;
  return res;
}

}  // namespace detail

// Classifies a pair modulo gauge freedom. Returns Degenerate (with a note)
// for pairs outside the three real-parameter canonical families.
inline CanonicalForm canonicalize(const MatrixPair& p, double tol = kEigenGapTol) {
  InvariantCheck inv = invariant_check(p);
  if (!inv.trace_sign || !inv.det_ok)
    return detail::degenerate("invariants violated - no symmetric MPS class");

  double scale = std::max(p.a0.cwiseAbs().maxCoeff(), p.a1.cwiseAbs().maxCoeff());
  bool a0_scalar = (p.a0 - 0.5 * p.a0.trace() * Matrix2::Identity()).norm() <= tol * scale;
  bool a1_scalar = (p.a1 - 0.5 * p.a1.trace() * Matrix2::Identity()).norm() <= tol * scale;
  if (a0_scalar && a1_scalar)
    return detail::degenerate("proportional matrices - product state");

  std::string reasons;
  for (int anchor : {0, 1}) {
    for (int branch : {0, 1}) {  // diagonalizable first, Jordan second
      detail::AnchorAttempt att = branch == 0 ? detail::try_diagonalizable(p, anchor, tol)
                                              : detail::try_jordan(p, anchor, tol);
      if (!att.ok) {
        reasons += "anchor " + std::to_string(anchor) + ": " + att.why + "; ";
        continue;
      }
      CanonicalForm f = att.form;
      // Validate: the gauge must reproduce the canonical matrices.
      MatrixPair src = f.swapped_roles ? MatrixPair(p.a1, p.a0) : p;
      Matrix2 ui = f.gauge_u.inverse();
      Matrix2 c0 = f.gauge_mu * f.gauge_u * src.a0 * ui;
      Matrix2 c1 = f.gauge_mu * f.gauge_u * src.a1 * ui;
      MatrixPair built = build_model(f.tag, f.g, f.tag == ModelTag::A   ? f.theta
                                               : f.tag == ModelTag::B ? f.c
                                                                      : f.u,
                                     f.epsilon);
      double resid = std::max((c0 - built.a0).norm(), (c1 - built.a1).norm());
      if (resid <= 1e-6 * std::max(1.0, scale)) {
        f.canonical = std::make_pair(c0, c1);
        return f;
      }
      reasons += std::string(to_string(f.tag)) + "-candidate residual too large; ";
    }
  }
  return detail::degenerate("no canonical form: " + reasons);
}

// Finds invertible S and nonzero mu with S A_i S^{-1} = mu A'_i. Candidate
// mu values come from trace ratios, then determinant ratios (both signs).
inline std::optional<std::pair<Matrix2, Complex>> equivalence_witness(const MatrixPair& p,
                                                                      const MatrixPair& q,
                                                                      double tol = 1e-8) {
  double scale = std::max({p.a0.norm(), p.a1.norm(), 1.0});
  std::vector<Complex> candidates;
  auto push = [&](Complex m) {
    if (std::abs(m) < 1e-14) return;
    for (Complex c : candidates)
      if (std::abs(c - m) <= 1e-12 * std::abs(m)) return;
    candidates.push_back(m);
  };
  for (int i = 0; i < 2; ++i)
    if (std::abs(q[i].trace()) > 1e-12) push(p[i].trace() / q[i].trace());
  if (candidates.empty()) {
    for (int i = 0; i < 2; ++i)
      if (std::abs(q[i].determinant()) > 1e-14) {
        Complex m2 = p[i].determinant() / q[i].determinant();
        Complex m = std::sqrt(m2);
        push(m);
        push(-m);
      }
  }

  for (Complex mu : candidates) {
    Matrix sys(8, 4);
    sys.block(0, 0, 4, 4) = detail::op_right(p.a0) - mu * detail::op_left(q.a0);
    sys.block(4, 0, 4, 4) = detail::op_right(p.a1) - mu * detail::op_left(q.a1);
    auto s = detail::best_invertible_solution(sys, 1e-8);
    if (!s) continue;
    Matrix2 si = s->inverse();
    double r0 = (*s * p.a0 * si - mu * q.a0).norm();
    double r1 = (*s * p.a1 * si - mu * q.a1).norm();
    if (std::max(r0, r1) <= tol * scale) return std::make_pair(*s, mu);
  }
  return std::nullopt;
}

}  // namespace mps2
