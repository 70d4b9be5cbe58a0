#include <gtest/gtest.h>

#include "mps2/classify.hpp"
#include "mps2/mps.hpp"
#include "oracle_helpers.hpp"

using namespace mps2;

TEST(TransferMatrix, IdentityPairIsTwiceIdentity) {
  MatrixPair p = build_model_a(0.0, 0.0, 1);  // A0 = A1 = I
  TransferMatrix t = transfer_matrix(p);
  EXPECT_NEAR((t.e - 2.0 * Matrix4::Identity()).norm(), 0.0, 1e-14);
  for (int i = 0; i < 4; ++i)
    EXPECT_NEAR(std::abs(t.spectrum.eigenvalues(i) - 2.0), 0.0, 1e-12);
  EXPECT_EQ(t.degeneracy_of_max, 4);
}

TEST(TransferMatrix, ModelBAtGOneIsRankOne) {
  for (double c : {0.0, 2.5}) {
    TransferMatrix t = transfer_matrix(build_model_b(1.0, c, 1));
    EXPECT_NEAR(std::abs(t.spectrum.eigenvalues(0) - 8.0), 0.0, 1e-9);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(std::abs(t.spectrum.eigenvalues(i)), 0.0, 1e-9);
  }
}

TEST(TransferMatrix, ModelCClosedFormPoint) {
  TransferMatrix t = transfer_matrix(build_model_c(1.0, 1.0, 1));
  double s17 = std::sqrt(17.0);
  std::vector<double> expect{2.5 + 0.5 * s17, 2.0, 1.0, 2.5 - 0.5 * s17};
  for (int i = 0; i < 4; ++i)
    EXPECT_NEAR(std::abs(t.spectrum.eigenvalues(i)), expect[static_cast<size_t>(i)], 1e-9);
}

TEST(TransferMatrix, ReconstructsFromPair) {
  MatrixPair p = oracle::random_pair(31);
  TransferMatrix t = transfer_matrix(p);
  Matrix4 rebuilt = kron(p.a0.conjugate(), p.a0) + kron(p.a1.conjugate(), p.a1);
  EXPECT_LE((t.e - rebuilt).norm(), 1e-14 * rebuilt.norm());
}

TEST(Amplitude, SingleSiteIsTrace) {
  MatrixPair p = oracle::random_pair(1);
  EXPECT_NEAR(std::abs(amplitude(p, "0") - p.a0.trace()), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(amplitude(p, "1") - p.a1.trace()), 0.0, 1e-14);
}

TEST(Amplitude, ModelAProductPoint) {
  MatrixPair p = build_model_a(1.0, M_PI, 1);  // diag(2,0), diag(0,2)
  EXPECT_NEAR(std::abs(amplitude(p, "00") - 4.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(amplitude(p, "01")), 0.0, 1e-12);
}

TEST(Amplitude, EmptyConfigThrows) {
  MatrixPair p = oracle::random_pair(2);
  EXPECT_THROW(amplitude(p, ""), std::invalid_argument);
}

TEST(NormZ, ScalarTransferMatrix) {
  MatrixPair p = build_model_a(0.0, 0.0, 1);  // E = 2 I4
  ScaledScalar z = norm_Z(p, 3);
  EXPECT_NEAR(std::abs(z.value() - 32.0), 0.0, 1e-10);
}

TEST(NormZ, ModelBRankOnePoint) {
  ScaledScalar z = norm_Z(build_model_b(1.0, 0.0, 1), 4);
  EXPECT_NEAR(std::abs(z.value() - 4096.0), 0.0, 1e-7);
}

TEST(NormZ, ModelCBruteForceSum) {
  // Z(n=2) = sum over 4 configs of |amplitude|^2 = 26 at u = g = 1
  MatrixPair p = build_model_c(1.0, 1.0, 1);
  double brute = 0.0;
  for (std::uint64_t cfg = 0; cfg < 4; ++cfg) brute += std::norm(amplitude(p, cfg, 2));
  EXPECT_NEAR(brute, 26.0, 1e-12);
  EXPECT_NEAR(std::abs(norm_Z(p, 2).value() - 26.0), 0.0, 1e-10);
}

TEST(NormZ, ConsistentWithAmplitudeSum) {
  MatrixPair p = oracle::random_pair(17);
  for (int n : {2, 5, 10}) {
    double brute = 0.0;
    for (std::uint64_t cfg = 0; cfg < (std::uint64_t(1) << n); ++cfg)
      brute += std::norm(amplitude(p, cfg, n));
    ScaledScalar z = norm_Z(p, n);
    EXPECT_LE(std::abs(z.value() - brute), 1e-9 * brute) << "n=" << n;
  }
}

TEST(NormZ, NullStateFlagged) {
  Matrix2 a0, a1;
  a0 << 0, 1, 0, 0;
  a1 = Matrix2::Zero();
  a1(0, 1) = 0.5;  // both strictly upper triangular: tr E^n = 0 for n >= 1
  EXPECT_THROW(norm_Z(MatrixPair(a0, a1), 3), null_state_error);
}

TEST(OperatorTransfer, IdentityGivesE) {
  MatrixPair p = oracle::random_pair(23);
  EXPECT_LE((operator_transfer(p, pauli::id()) - transfer_matrix_dense(p)).norm(), 1e-14);
}

TEST(OperatorTransfer, SigmaZVanishesForModelBCZero) {
  MatrixPair p = build_model_b(0.4, 0.0, 1);  // B1 = B0
  EXPECT_NEAR(operator_transfer(p, pauli::z()).norm(), 0.0, 1e-14);
}

TEST(OperatorTransfer, SigmaXIdentityPair) {
  MatrixPair p = build_model_a(0.0, 0.0, 1);
  EXPECT_NEAR((operator_transfer(p, pauli::x()) - 2.0 * Matrix4::Identity()).norm(), 0.0, 1e-14);
}

TEST(Expectation, IdentityIsOneInThermodynamicLimit) {
  MatrixPair p = build_model_a(0.5, 1.1, 1);
  EXPECT_NEAR(std::abs(expectation_thermodynamic(p, pauli::id()) - 1.0), 0.0, 1e-10);
}

TEST(Expectation, DegenerateProductPointAveragesToZero) {
  // two product branches carry opposite magnetization
  MatrixPair p = build_model_a(1.0, M_PI, 1);
  EXPECT_NEAR(std::abs(expectation_thermodynamic(p, pauli::z())), 0.0, 1e-10);
}

TEST(Expectation, FiniteMatchesBruteForce) {
  for (unsigned seed : {3u, 4u}) {
    MatrixPair p = oracle::random_pair(seed);
    for (const SiteOperator& o : {pauli::x(), pauli::z()}) {
      Complex brute = oracle::brute_expectation(p, o, 6, 2);
      Complex fast = expectation_finite(p, o, 6, 2);
      EXPECT_LE(std::abs(brute - fast), 1e-9 * (1.0 + std::abs(brute)));
    }
  }
}

TEST(TwoPoint, IdentityIsOne) {
  MatrixPair p = build_model_a(0.5, 0.7, 1);
  EXPECT_NEAR(std::abs(two_point_thermodynamic(p, pauli::id(), 4) - 1.0), 0.0, 1e-9);
}

TEST(TwoPoint, FiniteMatchesBruteForce) {
  for (unsigned seed : {11u, 12u}) {
    MatrixPair p = oracle::random_pair(seed);
    Complex brute = oracle::brute_two_point(p, pauli::z(), 8, 1, 3);
    Complex fast = two_point_finite(p, pauli::z(), 3, 8);
    EXPECT_LE(std::abs(brute - fast), 1e-9 * (1.0 + std::abs(brute)));
  }
}

TEST(TwoPoint, SeparationValidation) {
  MatrixPair p = oracle::random_pair(13);
  EXPECT_THROW(two_point_finite(p, pauli::z(), 1, 8), std::invalid_argument);
  EXPECT_THROW(two_point_finite(p, pauli::z(), 9, 8), std::invalid_argument);
}

TEST(TwoPoint, AsymptoticRatioTracksSubleadingEigenvalue) {
  // connected sigma-z correlator of model A at a generic point decays with
  // the operator-filtered sub-leading eigenvalue
  MatrixPair p = build_model_a(0.5, M_PI / 2, 1);
  double xi_op = correlation_length(p, pauli::z());
  double rate = std::exp(-1.0 / xi_op);
  Complex mean = expectation_thermodynamic(p, pauli::z());
  auto connected = [&](int r) {
    return two_point_thermodynamic(p, pauli::z(), r) - mean * mean;
  };
  for (int r = 5; r <= 12; ++r) {
    double ratio = std::abs(connected(r + 1)) / std::abs(connected(r));
    EXPECT_NEAR(ratio, rate, 0.01 * rate) << "r=" << r;
  }
  // and the asymptotic single-term form agrees with the full spectral sum
  EXPECT_LE(std::abs(two_point_asymptotic(p, pauli::z(), 9) - connected(9)),
            1e-6 * std::abs(connected(9)));
}

TEST(CorrelationLength, ModelBClosedForm) {
  EXPECT_NEAR(correlation_length(build_model_b(0.5, 0.8, 1)), 1.0 / std::log(3.0), 1e-9);
}

TEST(CorrelationLength, InfiniteAtProductPoint) {
  EXPECT_TRUE(std::isinf(correlation_length(build_model_a(0.7, M_PI, 1))));
}

TEST(CorrelationLength, ZeroWhenGapIsTotal) {
  EXPECT_EQ(correlation_length(build_model_b(1.0, 0.0, 1)), 0.0);
}

TEST(ReducedDensityMatrix, FullBlockIsPure) {
  MatrixPair p = oracle::random_pair(41);
  Matrix rho = reduced_density_matrix(p, 4, 4);
  EXPECT_LE((rho * rho - rho).norm(), 1e-10);  // pure state projector
  EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-12);
}

TEST(ReducedDensityMatrix, MatchesPartialTraceOracle) {
  for (unsigned seed : {5u, 6u}) {
    MatrixPair p = oracle::random_pair(seed);
    Matrix rho = reduced_density_matrix(p, 2, 8);
    Matrix brute = oracle::brute_rdm(p, 2, 8);
    EXPECT_LE((rho - brute).norm(), 1e-9);
  }
}

TEST(ReducedDensityMatrix, HermitianUnitTracePsd) {
  MatrixPair p = oracle::random_pair(7);
  Matrix rho = reduced_density_matrix(p, 3, 9);
  EXPECT_LE((rho - rho.adjoint()).norm(), 1e-12);
  EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-12);
  RealVector ev = eig_hermitian_values(rho);
  EXPECT_GE(ev(0), -1e-10);
}

TEST(ReducedDensityMatrix, TranslationConsistency) {
  // tracing the last site of rho_3 gives rho_2
  MatrixPair p = oracle::random_pair(8);
  Matrix rho2 = reduced_density_matrix(p, 2, 8);
  Matrix rho3 = reduced_density_matrix(p, 3, 8);
  Matrix traced = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int t = 0; t < 2; ++t) traced(i, j) += rho3(2 * i + t, 2 * j + t);
  EXPECT_LE((traced - rho2).norm(), 1e-9);
}

TEST(ReducedDensityMatrix, ModelBNullVectorsInKernel) {
  double g = 0.3;
  Matrix rho = reduced_density_matrix(build_model_b(g, 1.7, 1), 2, 8);
  Vector e1(4), e2(4);
  e1 << -0.5 * (1 + g), 1.0, 0.0, 0.5 * (g - 1);
  e2 << 0.5 * (g - 1), 0.0, 1.0, -0.5 * (1 + g);
  EXPECT_LE((rho * e1).norm() / e1.norm(), 1e-9);
  EXPECT_LE((rho * e2).norm() / e2.norm(), 1e-9);
}

TEST(GaugeTransform, IdentityIsNoop) {
  MatrixPair p = oracle::random_pair(9);
  MatrixPair q = gauge_transform(p, Matrix2::Identity(), 1.0);
  EXPECT_LE((p.a0 - q.a0).norm() + (p.a1 - q.a1).norm(), 1e-15);
}

TEST(GaugeTransform, ScalarScalesAmplitudes) {
  MatrixPair p = oracle::random_pair(10);
  MatrixPair q = gauge_transform(p, Matrix2::Identity(), 2.0);
  for (std::uint64_t cfg = 0; cfg < 8; ++cfg)
    EXPECT_LE(std::abs(amplitude(q, cfg, 3) - 8.0 * amplitude(p, cfg, 3)), 1e-10);
}

TEST(GaugeTransform, SingularGaugeThrows) {
  MatrixPair p = oracle::random_pair(11);
  Matrix2 u;
  u << 1, 1, 1, 1;
  EXPECT_THROW(gauge_transform(p, u, 1.0), std::invalid_argument);
}

TEST(GaugeTransform, SimilarityMapsModelAToCirac) {
  // S A_i(g=1) S^{-1} = 2 A'_i with q = (1 + cos theta)/2
  double theta = M_PI / 2;
  MatrixPair a = build_model_a(1.0, theta, 1);
  MatrixPair cir = build_cirac(0.5 * (1.0 + std::cos(theta)));
  Matrix2 s;
  s << 0.0, std::cos(theta / 2), std::sin(theta / 2), -std::cos(theta / 2);
  MatrixPair mapped = gauge_transform(a, s, 1.0);
  EXPECT_LE((mapped.a0 - 2.0 * cir.a0).norm(), 1e-12);
  EXPECT_LE((mapped.a1 - 2.0 * cir.a1).norm(), 1e-12);
}

TEST(DiagonalDecomposition, ModelAProductBranches) {
  double g = 0.4;
  auto branches = diagonal_product_decomposition(build_model_a(g, M_PI, 1));
  ASSERT_TRUE(branches.has_value());
  EXPECT_NEAR(std::abs(branches->first(0) - Complex(1 + g)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(branches->first(1) - Complex(1 - g)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(branches->second(0) - Complex(1 - g)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(branches->second(1) - Complex(1 + g)), 0.0, 1e-12);
}

TEST(DiagonalDecomposition, OffDiagonalPairGivesNothing) {
  EXPECT_FALSE(diagonal_product_decomposition(build_model_a(0.5, M_PI / 2, 1)).has_value());
}

TEST(DiagonalDecomposition, ModelBCZeroReconstructsState) {
  double g = 0.4;
  auto branches = diagonal_product_decomposition(build_model_b(g, 0.0, 1));
  ASSERT_TRUE(branches.has_value());
  const int n = 4;
  MatrixPair p = build_model_b(g, 0.0, 1);
  for (std::uint64_t cfg = 0; cfg < (1u << n); ++cfg) {
    Complex first = 1.0, second = 1.0;
    for (int j = 1; j <= n; ++j) {
      int bit = static_cast<int>((cfg >> (n - j)) & 1);
      first *= (*branches).first(bit);
      second *= (*branches).second(bit);
    }
    EXPECT_LE(std::abs(first + second - amplitude(p, cfg, n)), 1e-10);
  }
}

TEST(GaugeInvariance, ObservablesUnchanged) {
  MatrixPair p = build_model_a(0.5, 1.2, 1);
  for (unsigned seed : {101u, 102u, 103u}) {
    Matrix2 u = oracle::random_invertible(seed);
    Complex mu = std::polar(1.0, 0.3 * seed);  // unit modulus
    MatrixPair q = gauge_transform(p, u, mu);
    EXPECT_LE(std::abs(expectation_thermodynamic(p, pauli::z()) -
                       expectation_thermodynamic(q, pauli::z())),
              1e-8);
    EXPECT_LE(std::abs(two_point_thermodynamic(p, pauli::z(), 4) -
                       two_point_thermodynamic(q, pauli::z(), 4)),
              1e-8);
    EXPECT_NEAR(correlation_length(p), correlation_length(q), 1e-8);
  }
}

TEST(TwoPoint, FiniteApproachesThermodynamic) {
  // finite-size transient bounded by (lambda_1/lambda_max)^{n-r}
  for (unsigned seed : {21u, 22u, 23u}) {
    MatrixPair p = oracle::random_pair(seed);
    TransferMatrix t = transfer_matrix(p);
    if (t.spectrum.is_defective) continue;
    double ratio = std::abs(t.spectrum.eigenvalues(1)) / std::abs(t.spectrum.eigenvalues(0));
    if (ratio > 0.7) continue;
    for (int r = 2; r <= 4; ++r) {
      Complex fin = two_point_finite(p, pauli::z(), r, 12);
      Complex thermo = two_point_thermodynamic(p, pauli::z(), r);
      EXPECT_LE(std::abs(fin - thermo), 0.02 * std::max(std::abs(thermo), 1e-6))
          << "seed=" << seed << " r=" << r;
    }
  }
}
