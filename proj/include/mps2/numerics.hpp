#pragma once

// Dense complex linear-algebra kernel: Kronecker products, general and
// Hermitian eigendecompositions, SVD-based left null spaces and scaled
// matrix powers. Backed by Eigen; everything here is a pure function.

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mps2/common.hpp"

namespace mps2 {

inline constexpr int kMaxEigDim = 4096;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Single tie-breaking rule used by every module that sorts spectra:
// modulus descending, then real part descending, then imaginary part.
inline bool spectral_greater(const Complex& x, const Complex& y) {
  double ax = std::abs(x), ay = std::abs(y);
  if (ax != ay) return ax > ay;
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

struct EigenDecomposition {
  Vector eigenvalues;    // sorted by spectral_greater
  Matrix right_vectors;  // columns v_i, unit norm
  Matrix left_vectors;   // columns l_i with l_i^H r_j = delta_ij (non-defective)
  bool is_defective = false;
};

inline EigenDecomposition eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("eig: matrix must be square");
  if (m.rows() > kMaxEigDim) throw dimension_error("eig: dimension exceeds 4096");
  const Eigen::Index n = m.rows();

  Eigen::ComplexEigenSolver<Matrix> solver(m, true);
  if (solver.info() != Eigen::Success)
    throw numerical_error("eig: QR iteration failed to converge");

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return spectral_greater(solver.eigenvalues()(i), solver.eigenvalues()(j));
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.right_vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(order[static_cast<size_t>(i)]);
    out.right_vectors.col(i) = solver.eigenvectors().col(order[static_cast<size_t>(i)]);
  }

  Eigen::JacobiSVD<Matrix> svd(out.right_vectors, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n - 1);
  out.is_defective = !(smin > 0.0) || smax / smin > kDefectiveCond;

  if (!out.is_defective) {
    // Rows of V^{-1} are l_i^H, so bi-orthonormality holds by construction.
    out.left_vectors = out.right_vectors.inverse().adjoint();
  } else {
    // Best effort via pseudo-inverse; downstream spectral formulas must not
    // rely on these (callers check is_defective).
    out.left_vectors = svd.solve(Matrix::Identity(n, n)).adjoint();
  }
  return out;
}

inline RealVector eig_hermitian_values(const Matrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("eig_hermitian: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numerical_error("eig_hermitian: no convergence");
  return es.eigenvalues();
}

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns
};

inline HermitianEigen eig_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("eig_hermitian: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw numerical_error("eig_hermitian: no convergence");
  return {es.eigenvalues(), es.eigenvectors()};
}

// Orthonormal basis of {c : c^T m = 0}. Rank is decided by singular values
// below tol * sigma_max; a zero matrix yields the full row space.
inline std::vector<Vector> left_null_space(const Matrix& m, double tol = kRankTol) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("left_null_space: tol must be in (0,1)");
  const Eigen::Index rows = m.rows();
  std::vector<Vector> basis;
  if (rows == 0) return basis;

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const Eigen::Index nsv = svd.singularValues().size();
  const double smax = nsv > 0 ? svd.singularValues()(0) : 0.0;
  if (smax <= 0.0) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      Vector e = Vector::Zero(rows);
      e(i) = 1.0;
      basis.push_back(e);
    }
    return basis;
  }
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < nsv; ++i)
    if (svd.singularValues()(i) >= tol * smax) ++rank;
  for (Eigen::Index i = rank; i < rows; ++i)
    basis.push_back(svd.matrixU().col(i).conjugate());
  return basis;
}

// m^n = exp(log_scale) * matrix with ||matrix||_inf in [1/2, 2], via
// repeated squaring with per-step renormalization.
struct ScaledPower {
  Matrix matrix;
  double log_scale = 0.0;
};

namespace detail {
inline double inf_norm(const Matrix& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}
}  // namespace detail

inline ScaledPower power_scaled(const Matrix& m, long n) {
  if (m.rows() != m.cols()) throw dimension_error("power_scaled: matrix must be square");
  if (n < 0) throw std::invalid_argument("power_scaled: negative exponent");
  const Eigen::Index d = m.rows();
  ScaledPower out{Matrix::Identity(d, d), 0.0};
  if (n == 0) return out;

  Matrix base = m;
  double base_log = 0.0;
  {
    double b = detail::inf_norm(base);
    if (b == 0.0) return {Matrix::Zero(d, d), 0.0};
    base /= b;
    base_log = std::log(b);
  }
  bool have_result = false;
  while (n > 0) {
    if (n & 1) {
      if (!have_result) {
        out.matrix = base;
        out.log_scale = base_log;
        have_result = true;
      } else {
        out.matrix = out.matrix * base;
        out.log_scale += base_log;
        double r = detail::inf_norm(out.matrix);
        if (r == 0.0) return {Matrix::Zero(d, d), 0.0};
        out.matrix /= r;
        out.log_scale += std::log(r);
      }
    }
    n >>= 1;
    if (n > 0) {
      base = base * base;
      base_log *= 2.0;
      double b = detail::inf_norm(base);
      // n > 0 means at least one factor of base is still pending, so a
      // vanished base (nilpotent input) zeroes the whole power.
      if (b == 0.0) return {Matrix::Zero(d, d), 0.0};
      base /= b;
      base_log += std::log(b);
    }
  }
  double r = detail::inf_norm(out.matrix);
  if (r == 0.0) return {Matrix::Zero(d, d), 0.0};
  out.matrix /= r;
  out.log_scale += std::log(r);
  return out;
}

}  // namespace mps2
