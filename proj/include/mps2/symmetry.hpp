#pragma once

// Spin-flip and parity (left-right) symmetry witnesses for a matrix pair.
//
// Witness convention, fixed across the library:
//   spin-flip:  W A_i W^{-1} = epsilon * A_{1-i}
//   parity:     W A_i W^{-1} = sigma   * A_i^T
// A witness in the inverse convention (X^{-1} A_i X = ...) is the inverse of
// a witness in this one.

#include <optional>
#include <vector>

#include "mps2/mps.hpp"

namespace mps2 {

struct InvariantCheck {
  std::optional<int> trace_sign;  // epsilon with tr A0 = eps tr A1, if any
  bool det_ok = false;            // det A0 == det A1
};

inline InvariantCheck invariant_check(const MatrixPair& p, double tol = kWitnessTol) {
  InvariantCheck out;
  // Floors tied to the matrix scale keep the comparisons meaningful when a
  // trace or determinant is itself (numerically) zero.
  double mscale = std::max(p.a0.norm(), p.a1.norm());
  Complex t0 = p.a0.trace(), t1 = p.a1.trace();
  double tscale = std::max({std::abs(t0), std::abs(t1), mscale});
  if (std::abs(t0) <= tol * tscale && std::abs(t1) <= tol * tscale)
    out.trace_sign = 1;  // both traceless: either sign works
  else if (std::abs(t0 - t1) <= tol * tscale)
    out.trace_sign = 1;
  else if (std::abs(t0 + t1) <= tol * tscale)
    out.trace_sign = -1;
  Complex d0 = p.a0.determinant(), d1 = p.a1.determinant();
  double dscale = std::max({std::abs(d0), std::abs(d1), mscale * mscale});
  out.det_ok = std::abs(d0 - d1) <= tol * dscale;
  return out;
}

struct SpinFlipWitness {
  Matrix2 x;
  int epsilon = 1;
};

struct ParityWitness {
  Matrix2 omega;
  int sigma = 1;
};

namespace detail {

// Row-major vec identity: vec(A X B) = (A kron B^T) vec(X).
inline Matrix op_left(const Matrix2& a) { return kron(a, Matrix2::Identity()); }
inline Matrix op_right(const Matrix2& b) { return kron(Matrix2::Identity(), b.transpose()); }

inline Matrix2 unvec(const Vector& v) {
  Matrix2 m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

// Normalize to unit Frobenius norm with the leading nonzero entry
// positive-real (row-major order).
inline Matrix2 normalize_witness(Matrix2 w) {
  w /= w.norm();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(w(i, j)) > 1e-9) {
        Complex ph = w(i, j) / std::abs(w(i, j));
        return (w / ph).eval();
      }
  return w;
}

// Solves the homogeneous system rows * vec(W) = 0 and picks the solution
// with the largest invertibility margin (|det| after unit normalization).
// Individual null vectors can be singular while a combination is invertible,
// so a fixed set of two-vector combinations is probed as well.
inline std::optional<Matrix2> best_invertible_solution(const Matrix& sys, double tol) {
  std::vector<Vector> null = left_null_space(sys.transpose(), kRankTol);
  std::vector<Vector> candidates = null;
  const Complex iu(0.0, 1.0);
  for (std::size_t i = 0; i < null.size(); ++i)
    for (std::size_t j = i + 1; j < null.size(); ++j) {
      candidates.push_back(null[i] + null[j]);
      candidates.push_back(null[i] - null[j]);
      candidates.push_back(null[i] + iu * null[j]);
      candidates.push_back(null[i] - iu * null[j]);
    }
  std::optional<Matrix2> best;
  double best_margin = tol;
  for (const Vector& v : candidates) {
    Matrix2 w = unvec(v);
    w /= w.norm();
    double margin = std::abs(w.determinant());
    if (margin > best_margin) {
      best_margin = margin;
      best = normalize_witness(w);
    }
  }
  return best;
}

}  // namespace detail

inline double verify_witness(const MatrixPair& p, const SpinFlipWitness& w) {
  double scale = std::max({p.a0.norm(), p.a1.norm(), 1.0});
  double wscale = w.x.cwiseAbs().maxCoeff();
  if (std::abs(w.x.determinant()) <= 1e-12 * wscale * wscale)
    throw std::invalid_argument("verify_witness: singular witness");
  Matrix2 xi = w.x.inverse();
  double e = static_cast<double>(w.epsilon);
  double r0 = (w.x * p.a0 * xi - e * p.a1).norm();
  double r1 = (w.x * p.a1 * xi - e * p.a0).norm();
  return std::max(r0, r1) / scale;
}

inline double verify_witness(const MatrixPair& p, const ParityWitness& w) {
  double scale = std::max({p.a0.norm(), p.a1.norm(), 1.0});
  double wscale = w.omega.cwiseAbs().maxCoeff();
  if (std::abs(w.omega.determinant()) <= 1e-12 * wscale * wscale)
    throw std::invalid_argument("verify_witness: singular witness");
  Matrix2 oi = w.omega.inverse();
  double s = static_cast<double>(w.sigma);
  double r0 = (w.omega * p.a0 * oi - s * p.a0.transpose()).norm();
  double r1 = (w.omega * p.a1 * oi - s * p.a1.transpose()).norm();
  return std::max(r0, r1) / scale;
}

// Solves {X A_0 - eps A_1 X = 0, X A_1 - eps A_0 X = 0} for each sign by a
// null-space computation; absence is a value, not an error.
inline std::optional<SpinFlipWitness> find_spin_flip_witness(const MatrixPair& p,
                                                             double tol = kWitnessTol) {
  for (int eps : {1, -1}) {
    Matrix sys(8, 4);
    double e = static_cast<double>(eps);
    sys.block(0, 0, 4, 4) = detail::op_right(p.a0) - e * detail::op_left(p.a1);
    sys.block(4, 0, 4, 4) = detail::op_right(p.a1) - e * detail::op_left(p.a0);
    if (auto w = detail::best_invertible_solution(sys, 1e-6)) {
      SpinFlipWitness out{*w, eps};
      if (verify_witness(p, out) <= tol) return out;
    }
  }
  return std::nullopt;
}

inline std::optional<ParityWitness> find_parity_witness(const MatrixPair& p,
                                                        double tol = kWitnessTol) {
  for (int sg : {1, -1}) {
    Matrix sys(8, 4);
    double s = static_cast<double>(sg);
    sys.block(0, 0, 4, 4) = detail::op_right(p.a0) - s * detail::op_left(p.a0.transpose());
    sys.block(4, 0, 4, 4) = detail::op_right(p.a1) - s * detail::op_left(p.a1.transpose());
    if (auto w = detail::best_invertible_solution(sys, 1e-6)) {
      ParityWitness out{*w, sg};
      if (verify_witness(p, out) <= tol) return out;
    }
  }
  return std::nullopt;
}

}  // namespace mps2
