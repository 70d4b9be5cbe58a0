#pragma once

// Test-only brute-force oracles, kept independent of the transfer-matrix
// implementation paths they are used to check.

#include <random>

#include "mps2/mps.hpp"

namespace oracle {

using namespace mps2;

inline MatrixPair random_pair(unsigned seed, bool complex_entries = true) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Matrix2 a, b;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a(i, j) = complex_entries ? Complex(nd(rng), nd(rng)) : Complex(nd(rng), 0.0);
      b(i, j) = complex_entries ? Complex(nd(rng), nd(rng)) : Complex(nd(rng), 0.0);
    }
  return MatrixPair(a, b);
}

inline Matrix2 random_invertible(unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  for (;;) {
    Matrix2 u;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) u(i, j) = Complex(nd(rng), nd(rng));
    if (std::abs(u.determinant()) > 0.3) return u;
  }
}

// Dense state vector assembled amplitude-by-amplitude (site 1 = MSB).
inline Vector dense_state(const MatrixPair& p, int n) {
  const std::size_t dim = std::size_t(1) << n;
  Vector psi(static_cast<Eigen::Index>(dim));
  for (std::size_t cfg = 0; cfg < dim; ++cfg)
    psi(static_cast<Eigen::Index>(cfg)) = amplitude(p, cfg, n);
  return psi;
}

// <psi|O(site)|psi> / <psi|psi> by direct summation over configurations.
inline Complex brute_expectation(const MatrixPair& p, const SiteOperator& o, int n, int site) {
  Vector psi = dense_state(p, n);
  const std::size_t dim = std::size_t(1) << n;
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t cfg = 0; cfg < dim; ++cfg) {
    den += std::norm(psi(static_cast<Eigen::Index>(cfg)));
    std::size_t bit = (cfg >> (n - site)) & 1;
    for (std::size_t b2 = 0; b2 < 2; ++b2) {
      Complex oval = o(static_cast<Eigen::Index>(b2), static_cast<Eigen::Index>(bit));
      if (oval == Complex(0, 0)) continue;
      std::size_t cfg2 = (cfg & ~(std::size_t(1) << (n - site))) | (b2 << (n - site));
      num += std::conj(psi(static_cast<Eigen::Index>(cfg2))) * oval *
             psi(static_cast<Eigen::Index>(cfg));
    }
  }
  return num / den;
}

// <psi|O(s1)O(s2)|psi> / <psi|psi> by direct summation.
inline Complex brute_two_point(const MatrixPair& p, const SiteOperator& o, int n, int s1, int s2) {
  Vector psi = dense_state(p, n);
  const std::size_t dim = std::size_t(1) << n;
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t cfg = 0; cfg < dim; ++cfg) {
    den += std::norm(psi(static_cast<Eigen::Index>(cfg)));
    std::size_t b1 = (cfg >> (n - s1)) & 1, b2 = (cfg >> (n - s2)) & 1;
    for (std::size_t c1 = 0; c1 < 2; ++c1)
      for (std::size_t c2 = 0; c2 < 2; ++c2) {
        Complex ov = o(static_cast<Eigen::Index>(c1), static_cast<Eigen::Index>(b1)) *
                     o(static_cast<Eigen::Index>(c2), static_cast<Eigen::Index>(b2));
        if (ov == Complex(0, 0)) continue;
        std::size_t cfg2 = cfg;
        cfg2 = (cfg2 & ~(std::size_t(1) << (n - s1))) | (c1 << (n - s1));
        cfg2 = (cfg2 & ~(std::size_t(1) << (n - s2))) | (c2 << (n - s2));
        num += std::conj(psi(static_cast<Eigen::Index>(cfg2))) * ov *
               psi(static_cast<Eigen::Index>(cfg));
      }
  }
  return num / den;
}

// Reduced density matrix of the first k sites from the dense vector.
inline Matrix brute_rdm(const MatrixPair& p, int k, int n) {
  Vector psi = dense_state(p, n);
  psi /= psi.norm();
  const Eigen::Index bdim = Eigen::Index(1) << k;
  const Eigen::Index env = Eigen::Index(1) << (n - k);
  Matrix rho = Matrix::Zero(bdim, bdim);
  for (Eigen::Index i = 0; i < bdim; ++i)
    for (Eigen::Index j = 0; j < bdim; ++j)
      for (Eigen::Index t = 0; t < env; ++t)
        rho(i, j) += psi(i * env + t) * std::conj(psi(j * env + t));
  return rho;
}

}  // namespace oracle
