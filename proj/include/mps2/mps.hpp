#pragma once

// Translationally invariant spin-1/2 MPS defined by a pair of 2x2 auxiliary
// matrices: amplitudes, transfer objects, observables, correlators,
// correlation lengths and reduced density matrices.
//
// Conventions used throughout the library:
//   * site 1 is the most significant bit of a configuration index;
//   * amplitudes are unnormalized traces tr(A_{i_1}...A_{i_N});
//   * spectra are sorted by spectral_greater (modulus desc, real, imag).

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mps2/numerics.hpp"

namespace mps2 {

struct MatrixPair {
  Matrix2 a0;
  Matrix2 a1;

  MatrixPair(const Matrix2& m0, const Matrix2& m1) : a0(m0), a1(m1) {
    require_finite(a0, "MatrixPair.a0");
    require_finite(a1, "MatrixPair.a1");
    if (a0.norm() == 0.0 && a1.norm() == 0.0)
      throw std::invalid_argument("MatrixPair: both matrices are zero");
  }

  const Matrix2& operator[](int i) const { return i == 0 ? a0 : a1; }
};

using SiteOperator = Matrix2;

namespace pauli {
inline SiteOperator id() { return Matrix2::Identity(); }
inline SiteOperator x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}
inline SiteOperator y() {
  Matrix2 m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}
inline SiteOperator z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}
inline SiteOperator from_letter(char c) {
  switch (c) {
    case 'I': return id();
    case 'X': return x();
    case 'Y': return y();
    case 'Z': return z();
  }
  throw std::invalid_argument(std::string("unknown Pauli letter: ") + c);
}
}  // namespace pauli

// E = sum_i conj(A_i) (x) A_i with its spectrum attached.
struct TransferMatrix {
  Matrix4 e;
  EigenDecomposition spectrum;
  int degeneracy_of_max = 1;
};

inline Matrix4 transfer_matrix_dense(const MatrixPair& p) {
  Matrix4 e = Matrix4::Zero();
  e += kron(p.a0.conjugate(), p.a0);
  e += kron(p.a1.conjugate(), p.a1);
  return e;
}

inline TransferMatrix transfer_matrix(const MatrixPair& p) {
  TransferMatrix t;
  t.e = transfer_matrix_dense(p);
  t.spectrum = eig(t.e);
  const double amax = std::abs(t.spectrum.eigenvalues(0));
  t.degeneracy_of_max = 0;
  for (int i = 0; i < 4; ++i)
    if (amax - std::abs(t.spectrum.eigenvalues(i)) <= kDegeneracyTol * amax)
      ++t.degeneracy_of_max;
  if (t.degeneracy_of_max == 0) t.degeneracy_of_max = 1;  // amax == 0
  return t;
}

// E_O = sum_{ij} <i|O|j> conj(A_i) (x) A_j
inline Matrix4 operator_transfer(const MatrixPair& p, const SiteOperator& o) {
  Matrix4 e = Matrix4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      e += o(i, j) * kron(p[i].conjugate(), p[j]);
  return e;
}

// tr(A_{i_1}...A_{i_n}); config bit for site j is (config >> (n-j)) & 1.
inline Complex amplitude(const MatrixPair& p, std::uint64_t config, int n) {
  if (n < 1) throw std::invalid_argument("amplitude: empty configuration");
  Matrix2 prod = p[(config >> (n - 1)) & 1];
  for (int j = 2; j <= n; ++j) prod = prod * p[(config >> (n - j)) & 1];
  return prod.trace();
}

inline Complex amplitude(const MatrixPair& p, std::string_view config) {
  if (config.empty()) throw std::invalid_argument("amplitude: empty configuration");
  std::uint64_t bits = 0;
  for (char c : config) {
    if (c != '0' && c != '1') throw std::invalid_argument("amplitude: config must be over {0,1}");
    bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return amplitude(p, bits, static_cast<int>(config.size()));
}

// Z = tr(E^n) in scaled form: Z = exp(log_scale) * mantissa.
struct ScaledScalar {
  double log_scale = 0.0;
  Complex mantissa{0.0, 0.0};

  double log_abs() const { return log_scale + std::log(std::abs(mantissa)); }
  Complex value() const { return std::exp(log_scale) * mantissa; }
};

inline ScaledScalar norm_Z(const MatrixPair& p, int n) {
  if (n < 1) throw std::invalid_argument("norm_Z: n must be >= 1");
  ScaledPower pw = power_scaled(transfer_matrix_dense(p), n);
  ScaledScalar z{pw.log_scale, pw.matrix.trace()};
  if (std::abs(z.mantissa) <= kNullStateFloor)
    throw null_state_error("norm_Z: null state (tr E^n vanishes)");
  return z;
}

namespace detail {

// tr(E^{k-1} E_O E^{n-k}) / tr(E^n) evaluated with scaled powers.
inline Complex one_point_finite(const Matrix4& e, const Matrix4& eo, int n, int k) {
  ScaledPower left = power_scaled(e, k - 1);
  ScaledPower right = power_scaled(e, n - k);
  ScaledPower whole = power_scaled(e, n);
  Complex denom = whole.matrix.trace();
  if (std::abs(denom) <= kNullStateFloor)
    throw null_state_error("expectation: null state");
  Complex numer = (left.matrix * eo * right.matrix).trace();
  return std::exp(left.log_scale + right.log_scale - whole.log_scale) * numer / denom;
}

inline Complex two_point_finite_impl(const Matrix4& e, const Matrix4& eo, int r, int n) {
  ScaledPower mid = power_scaled(e, r - 2);
  ScaledPower right = power_scaled(e, n - r);
  ScaledPower whole = power_scaled(e, n);
  Complex denom = whole.matrix.trace();
  if (std::abs(denom) <= kNullStateFloor)
    throw null_state_error("two_point: null state");
  Complex numer = (eo * mid.matrix * eo * right.matrix).trace();
  return std::exp(mid.log_scale + right.log_scale - whole.log_scale) * numer / denom;
}

// Indices of the eigenvalues whose modulus ties with the largest one, and a
// flag telling whether they all agree in value (not only in modulus).
struct MaxSet {
  std::vector<int> idx;
  bool equal_values = true;
};

inline MaxSet max_modulus_set(const EigenDecomposition& d) {
  MaxSet s;
  const double amax = std::abs(d.eigenvalues(0));
  for (int i = 0; i < d.eigenvalues.size(); ++i) {
    if (amax - std::abs(d.eigenvalues(i)) <= kDegeneracyTol * std::max(amax, 1e-300)) {
      s.idx.push_back(i);
      if (std::abs(d.eigenvalues(i) - d.eigenvalues(0)) > kDegeneracyTol * std::max(amax, 1e-300))
        s.equal_values = false;
    }
  }
  return s;
}

inline constexpr int kThermoFallbackSites = 512;

}  // namespace detail

inline Complex expectation_finite(const MatrixPair& p, const SiteOperator& o, int n, int k) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("expectation_finite: need 1 <= k <= n");
  return detail::one_point_finite(transfer_matrix_dense(p), operator_transfer(p, o), n, k);
}

// Thermodynamic one-point function. For a g-fold degenerate largest
// eigenvalue the degenerate subspace is summed and normalized by g, which is
// the n -> infinity limit of the finite-n trace formula. Defective spectra
// (and modulus ties with distinct values) fall back to a long finite chain.
inline Complex expectation_thermodynamic(const MatrixPair& p, const SiteOperator& o) {
  TransferMatrix t = transfer_matrix(p);
  Matrix4 eo = operator_transfer(p, o);
  if (!t.spectrum.is_defective) {
    detail::MaxSet s = detail::max_modulus_set(t.spectrum);
    if (s.equal_values) {
      Complex lmax = t.spectrum.eigenvalues(0);
      if (std::abs(lmax) <= kNullStateFloor) throw null_state_error("expectation: null transfer matrix");
      Complex acc = 0.0;
      for (int i : s.idx) {
        Vector l = t.spectrum.left_vectors.col(i);
        Vector r = t.spectrum.right_vectors.col(i);
        acc += l.dot(eo * r);  // Eigen dot conjugates the left argument
      }
      return acc / (static_cast<double>(s.idx.size()) * lmax);
    }
  }
  int n = detail::kThermoFallbackSites;
  return detail::one_point_finite(t.e, eo, n, n / 2);
}

inline Complex two_point_finite(const MatrixPair& p, const SiteOperator& o, int r, int n) {
  if (r < 2) throw std::invalid_argument("two_point_finite: separation must be >= 2");
  if (r > n) throw std::invalid_argument("two_point_finite: separation exceeds chain size");
  return detail::two_point_finite_impl(transfer_matrix_dense(p), operator_transfer(p, o), r, n);
}

// <O(1)O(r)> in the thermodynamic limit via the spectral sum
//   (1/(g lmax^r)) sum_{m in max} sum_i lambda_i^{r-2} <l_m|E_O|r_i><l_i|E_O|r_m>.
inline Complex two_point_thermodynamic(const MatrixPair& p, const SiteOperator& o, int r) {
  if (r < 2) throw std::invalid_argument("two_point_thermodynamic: separation must be >= 2");
  TransferMatrix t = transfer_matrix(p);
  Matrix4 eo = operator_transfer(p, o);
  if (t.spectrum.is_defective || !detail::max_modulus_set(t.spectrum).equal_values) {
    int n = std::max(detail::kThermoFallbackSites, 2 * r);
    return detail::two_point_finite_impl(t.e, eo, r, n);
  }
  detail::MaxSet s = detail::max_modulus_set(t.spectrum);
  Complex lmax = t.spectrum.eigenvalues(0);
  if (std::abs(lmax) <= kNullStateFloor) throw null_state_error("two_point: null transfer matrix");
  Complex acc = 0.0;
  for (int m : s.idx) {
    Vector lm = t.spectrum.left_vectors.col(m);
    Vector rm = t.spectrum.right_vectors.col(m);
    for (int i = 0; i < 4; ++i) {
      Complex li = t.spectrum.eigenvalues(i);
      Complex a = lm.dot(eo * t.spectrum.right_vectors.col(i));
      Complex b = t.spectrum.left_vectors.col(i).dot(eo * rm);
      acc += cpow_int(li, r - 2) * a * b;
    }
  }
  return acc / (static_cast<double>(s.idx.size()) * cpow_int(lmax, r));
}

// Leading connected term for r >> 1: (lambda_1^{r-2}/lmax^r) <lmax|E_O|l1><l1|E_O|lmax>
// where lambda_1 is the largest sub-leading eigenvalue with a nonzero matrix
// element. Returns 0 when no eigenvalue couples.
inline Complex two_point_asymptotic(const MatrixPair& p, const SiteOperator& o, int r) {
  if (r < 2) throw std::invalid_argument("two_point_asymptotic: separation must be >= 2");
  TransferMatrix t = transfer_matrix(p);
  if (t.spectrum.is_defective)
    throw numerical_error("two_point_asymptotic: defective transfer matrix; use finite mode");
  if (t.degeneracy_of_max > 1)
    throw numerical_error("two_point_asymptotic: degenerate largest eigenvalue; use finite mode");
  Matrix4 eo = operator_transfer(p, o);
  const double escale = eo.norm();
  Vector lmaxv = t.spectrum.left_vectors.col(0);
  Vector rmaxv = t.spectrum.right_vectors.col(0);
  for (int i = 1; i < 4; ++i) {
    Complex a = lmaxv.dot(eo * t.spectrum.right_vectors.col(i));
    Complex b = t.spectrum.left_vectors.col(i).dot(eo * rmaxv);
    if (std::abs(a) > 1e-10 * escale && std::abs(b) > 1e-10 * escale) {
      Complex li = t.spectrum.eigenvalues(i);
      return cpow_int(li, r - 2) * a * b / cpow_int(t.spectrum.eigenvalues(0), r);
    }
  }
  return Complex{0.0, 0.0};
}

// xi = 1 / ln(|lmax| / |l1|). With an operator, l1 is the largest sub-leading
// eigenvalue whose matrix element <l1|E_O|lmax> is nonzero. Degenerate
// largest modulus reports +infinity; a vanishing l1 reports 0.
inline double correlation_length(const MatrixPair& p,
                                 const std::optional<SiteOperator>& o = std::nullopt) {
  TransferMatrix t = transfer_matrix(p);
  const double amax = std::abs(t.spectrum.eigenvalues(0));
  if (amax <= kNullStateFloor) throw null_state_error("correlation_length: null transfer matrix");
  if (t.degeneracy_of_max > 1) return kInf;

  double a1 = 0.0;
  if (!o) {
    a1 = std::abs(t.spectrum.eigenvalues(1));
  } else {
    if (t.spectrum.is_defective)
      throw numerical_error("correlation_length: defective transfer matrix; operator filter unavailable");
    Matrix4 eo = operator_transfer(p, *o);
    const double escale = eo.norm();
    Vector rmax = t.spectrum.right_vectors.col(0);
    for (int i = 1; i < 4; ++i) {
      Complex b = t.spectrum.left_vectors.col(i).dot(eo * rmax);
      if (std::abs(b) > 1e-10 * escale) {
        a1 = std::abs(t.spectrum.eigenvalues(i));
        break;
      }
    }
  }
  if (a1 <= kNullStateFloor) return 0.0;
  if (amax - a1 <= kDegeneracyTol * amax) return kInf;
  return 1.0 / std::log(amax / a1);
}

// Reduced density matrix of the first k of n sites:
//   rho_{I,J} = tr((P_I (x) conj(P_J)) conj(E)^{n-k}) / tr(E^n),
// which matches the partial trace of the dense |psi><psi| in this library's
// bra/ket orientation. Hermitian, unit trace, PSD.
inline Matrix reduced_density_matrix(const MatrixPair& p, int k, int n) {
  if (k < 1 || k > n) throw std::invalid_argument("reduced_density_matrix: need 1 <= k <= n");
  if (k > 12) throw dimension_error("reduced_density_matrix: k too large for dense form");
  const Eigen::Index dim = Eigen::Index(1) << k;

  std::vector<Matrix2> prod(static_cast<size_t>(dim));
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Matrix2 m = p[(idx >> (k - 1)) & 1];
    for (int j = 2; j <= k; ++j) m = m * p[(idx >> (k - j)) & 1];
    prod[static_cast<size_t>(idx)] = m;
  }

  Matrix4 e = transfer_matrix_dense(p);
  ScaledPower env = power_scaled(e, n - k);
  ScaledPower whole = power_scaled(e, n);
  Complex z = whole.matrix.trace();
  if (std::abs(z) <= kNullStateFloor) throw null_state_error("reduced_density_matrix: null state");
  Matrix4 w = env.matrix.conjugate();
  const double scale = std::exp(env.log_scale - whole.log_scale);

  Matrix rho(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Matrix2& pi = prod[static_cast<size_t>(i)];
      const Matrix2 pj = prod[static_cast<size_t>(j)].conjugate();
      Complex acc = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d)
              acc += pi(a, c) * pj(b, d) * w(2 * c + d, 2 * a + b);
      rho(i, j) = scale * acc / z;
    }
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Complex tr = rho.trace();
  if (std::abs(tr) <= kNullStateFloor) throw null_state_error("reduced_density_matrix: zero trace");
  rho /= tr;
  return rho;
}

// A_i -> mu U A_i U^{-1}; leaves the state invariant up to mu^N.
inline MatrixPair gauge_transform(const MatrixPair& p, const Matrix2& u, Complex mu) {
  require_finite(u, "gauge_transform: u");
  if (std::abs(mu) == 0.0) throw std::invalid_argument("gauge_transform: mu must be nonzero");
  double scale = u.cwiseAbs().maxCoeff();
  if (std::abs(u.determinant()) <= 1e-12 * scale * scale)
    throw std::invalid_argument("gauge_transform: singular gauge matrix");
  Matrix2 ui = u.inverse();
  return MatrixPair(mu * u * p.a0 * ui, mu * u * p.a1 * ui);
}

// If both matrices are diagonal, the unnormalized state is
// |Phi_1>^{(x)N} + |Phi_2>^{(x)N} with Phi_m = A0[m,m]|0> + A1[m,m]|1>.
inline std::optional<std::pair<Vector2, Vector2>> diagonal_product_decomposition(
    const MatrixPair& p) {
  double scale = std::max(p.a0.cwiseAbs().maxCoeff(), p.a1.cwiseAbs().maxCoeff());
  for (const Matrix2& m : {p.a0, p.a1})
    if (std::abs(m(0, 1)) > 1e-12 * scale || std::abs(m(1, 0)) > 1e-12 * scale)
      return std::nullopt;
  Vector2 phi1, phi2;
  phi1 << p.a0(0, 0), p.a1(0, 0);
  phi2 << p.a0(1, 1), p.a1(1, 1);
  return std::make_pair(phi1, phi2);
}

}  // namespace mps2
