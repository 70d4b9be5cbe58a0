#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace mps2 {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Vector2 = Eigen::Vector2cd;
using RealVector = Eigen::VectorXd;

// Default tolerances. Rank and witness tolerances are relative to the
// problem scale; callers may override where an operation takes a tol.
inline constexpr double kRankTol = 1e-10;
inline constexpr double kWitnessTol = 1e-9;
inline constexpr double kDegeneracyTol = 1e-9;
inline constexpr double kEigenGapTol = 1e-8;
inline constexpr double kDefectiveCond = 1e8;
inline constexpr double kNullStateFloor = 1e-30;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A state whose norm underflows to zero (e.g. nilpotent matrix pair).
struct null_state_error : numerical_error {
  using numerical_error::numerical_error;
};

inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

inline void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw std::invalid_argument(what + ": non-finite entries");
}

// Integer power of a complex scalar; avoids std::pow's 0^0 pitfalls.
inline Complex cpow_int(Complex z, long p) {
  Complex r{1.0, 0.0};
  for (long i = 0; i < p; ++i) r *= z;
  return r;
}

}  // namespace mps2
