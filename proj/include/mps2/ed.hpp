#pragma once

// Brute-force verification engine: dense state vectors from matrix pairs,
// full diagonalization of chain Hamiltonians at small n, state-level
// symmetry residuals and ground-space degeneracy counts.
//
// Bit-string convention: site 1 is the most significant bit of the
// amplitude index.

#include <vector>

#include "mps2/parent_ham.hpp"

namespace mps2 {

inline constexpr int kMaxDenseSites = 14;   // amplitude vectors
inline constexpr int kMaxEdSites = 12;      // full diagonalization

struct DenseState {
  int n = 0;
  Vector amplitudes;  // 2^n, unnormalized
};

inline DenseState mps_to_dense(const MatrixPair& p, int n) {
  if (n < 1 || n > kMaxDenseSites) throw std::invalid_argument("mps_to_dense: need 1 <= n <= 14");
  const std::size_t dim = std::size_t(1) << n;
  DenseState st;
  st.n = n;
  st.amplitudes.resize(static_cast<Eigen::Index>(dim));
  // reuse the common prefix product between consecutive configurations
  std::vector<Matrix2> prefix(static_cast<std::size_t>(n) + 1);
  prefix[0] = Matrix2::Identity();
  for (std::size_t cfg = 0; cfg < dim; ++cfg) {
    int common = 0;
    if (cfg > 0) {
      std::size_t diff = cfg ^ (cfg - 1);
      int highest = 0;
      while (diff >> (highest + 1)) ++highest;
      common = n - 1 - highest;
    }
    for (int depth = common; depth < n; ++depth) {
      int bit = static_cast<int>((cfg >> (n - 1 - depth)) & 1);
      prefix[static_cast<std::size_t>(depth) + 1] = prefix[static_cast<std::size_t>(depth)] * p[bit];
    }
    st.amplitudes(static_cast<Eigen::Index>(cfg)) = prefix[static_cast<std::size_t>(n)].trace();
  }
  if (st.amplitudes.norm() <= kNullStateFloor)
    throw null_state_error("mps_to_dense: null state (all amplitudes vanish)");
  return st;
}

// <psi| O(site) |psi> / <psi|psi> evaluated on the dense vector.
inline Complex dense_expectation(const DenseState& st, const SiteOperator& o, int site) {
  if (site < 1 || site > st.n) throw std::invalid_argument("dense_expectation: site out of range");
  const std::size_t dim = std::size_t(1) << st.n;
  Vector out = Vector::Zero(st.amplitudes.size());
  for (std::size_t cfg = 0; cfg < dim; ++cfg) {
    std::size_t bit = (cfg >> (st.n - site)) & 1;
    for (std::size_t b2 = 0; b2 < 2; ++b2) {
      Complex oval = o(static_cast<Eigen::Index>(b2), static_cast<Eigen::Index>(bit));
      if (oval == Complex(0.0, 0.0)) continue;
      std::size_t cfg2 = (cfg & ~(std::size_t(1) << (st.n - site))) | (b2 << (st.n - site));
      out(static_cast<Eigen::Index>(cfg2)) += oval * st.amplitudes(static_cast<Eigen::Index>(cfg));
    }
  }
  Complex num = st.amplitudes.dot(out);
  double den = st.amplitudes.squaredNorm();
  return num / den;
}

struct SpectrumReport {
  double lambda_min = 0.0;
  double h_norm = 0.0;                 // spectral norm estimate
  RealVector lowest;                   // lowest eigenvalues (ascending)
  int ground_dim = 0;                  // eigenvalues within tol of lambda_min
  std::vector<double> rayleigh;        // per supplied state
  std::vector<double> overlaps;        // ground-space overlap per state
  bool rayleigh_only = false;          // n too large for full diagonalization
};

// Rayleigh quotients always; full diagonalization (lambda_min, ground space,
// overlaps) up to n = 12.
inline SpectrumReport ground_check(const ChainHamiltonian& chain,
                                   const std::vector<DenseState>& states,
                                   int lowest_count = 8, double tol = kDegeneracyTol) {
  SpectrumReport rep;
  const int n = chain.n;
  for (const DenseState& st : states) {
    if (st.n != n) throw dimension_error("ground_check: state size mismatch");
    double norm2 = st.amplitudes.squaredNorm();
    if (norm2 <= kNullStateFloor) throw null_state_error("ground_check: null state supplied");
    Complex r = st.amplitudes.dot(apply_chain(chain, st.amplitudes)) / norm2;
    rep.rayleigh.push_back(r.real());
  }
  if (n > kMaxEdSites) {
    rep.rayleigh_only = true;
    return rep;
  }
  HermitianEigen ed = eig_hermitian(chain_dense(chain));
  const Eigen::Index dim = ed.values.size();
  rep.lambda_min = ed.values(0);
  rep.h_norm = std::max(std::abs(ed.values(0)), std::abs(ed.values(dim - 1)));
  rep.lowest = ed.values.head(std::min<Eigen::Index>(lowest_count, dim));
  rep.ground_dim = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (ed.values(i) <= rep.lambda_min + tol * std::max(rep.h_norm, 1e-300)) ++rep.ground_dim;
  for (const DenseState& st : states) {
    Vector psi = st.amplitudes.normalized();
    double o2 = 0.0;
    for (Eigen::Index i = 0; i < rep.ground_dim; ++i)
      o2 += std::norm(ed.vectors.col(i).dot(psi));
    rep.overlaps.push_back(std::sqrt(o2));
  }
  return rep;
}

// Dimension of the zero-energy eigenspace at tolerance tol * ||H||.
inline int degeneracy_count(const ChainHamiltonian& chain, double tol = kDegeneracyTol) {
  if (chain.n > kMaxEdSites) throw dimension_error("degeneracy_count: n > 12");
  RealVector vals = eig_hermitian_values(chain_dense(chain));
  double hnorm = std::max(std::abs(vals(0)), std::abs(vals(vals.size() - 1)));
  int count = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (std::abs(vals(i)) <= tol * std::max(hnorm, 1e-300)) ++count;
  return count;
}

struct StateSymmetryResiduals {
  double spin_flip = 0.0;
  double reversal = 0.0;
};

namespace detail {

inline double phase_min_residual(const Vector& a, const Vector& b) {
  // min over |phi| = 1 of ||a - phi b|| / ||b||, with the difference formed
  // explicitly (the norm-identity version cancels catastrophically near 0)
  Complex ip = b.dot(a);
  Complex phi = std::abs(ip) > 0 ? ip / std::abs(ip) : Complex(1.0);
  return (a - phi * b).norm() / b.norm();
}

}  // namespace detail

// Residuals of psi(complement(x)) and psi(reverse(x)) against psi, each
// minimized over a global phase.
inline StateSymmetryResiduals state_symmetry_check(const DenseState& st) {
  const int n = st.n;
  const std::size_t dim = std::size_t(1) << n;
  if (st.amplitudes.norm() <= kNullStateFloor)
    throw null_state_error("state_symmetry_check: null state");
  Vector comp(st.amplitudes.size()), rev(st.amplitudes.size());
  for (std::size_t x = 0; x < dim; ++x) {
    std::size_t xc = (~x) & (dim - 1);
    std::size_t xr = 0;
    for (int j = 0; j < n; ++j) xr |= ((x >> j) & 1) << (n - 1 - j);
    comp(static_cast<Eigen::Index>(x)) = st.amplitudes(static_cast<Eigen::Index>(xc));
    rev(static_cast<Eigen::Index>(x)) = st.amplitudes(static_cast<Eigen::Index>(xr));
  }
  StateSymmetryResiduals out;
  out.spin_flip = detail::phase_min_residual(comp, st.amplitudes);
  out.reversal = detail::phase_min_residual(rev, st.amplitudes);
  return out;
}

}  // namespace mps2
