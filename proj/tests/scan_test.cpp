#include <gtest/gtest.h>

#include "mps2/scan.hpp"
#include "oracle_helpers.hpp"

using namespace mps2;

namespace {

double multiset_distance(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b) {
  auto sa = a, sb = b;
  std::sort(sa.begin(), sa.end(), spectral_greater);
  std::sort(sb.begin(), sb.end(), spectral_greater);
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    d = std::max(d, std::abs(std::abs(sa[static_cast<size_t>(i)]) -
                             std::abs(sb[static_cast<size_t>(i)])));
  return d;
}

}  // namespace

TEST(AnalyticSpectrum, ModelBAtZero) {
  for (const Complex& l : analytic_spectrum_b(0.0)) EXPECT_NEAR(std::abs(l - 2.0), 0.0, 1e-15);
}

TEST(AnalyticSpectrum, ModelCOnCrossoverLines) {
  for (const Complex& l : analytic_spectrum_c(0.0, 1.3)) EXPECT_NEAR(std::abs(l - 2.0), 0.0, 1e-15);
  for (const Complex& l : analytic_spectrum_c(0.9, 0.0)) EXPECT_NEAR(std::abs(l - 2.0), 0.0, 1e-15);
}

TEST(AnalyticSpectrum, ModelCReferencePoint) {
  std::array<Complex, 4> l = analytic_spectrum_c(1.0, 1.0);
  double s17 = std::sqrt(17.0);
  EXPECT_NEAR(std::abs(l[0] - Complex(2.5 + 0.5 * s17)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(l[1] - Complex(2.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(l[2] - Complex(1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(l[3] - Complex(2.5 - 0.5 * s17)), 0.0, 1e-12);
}

TEST(AnalyticSpectrum, UnsupportedModelThrows) {
  EXPECT_THROW(analytic_spectrum(ModelTag::A, {{"g", 0.5}}), std::invalid_argument);
  EXPECT_THROW(analytic_spectrum(ModelTag::B, {{"g", 0.5}, {"epsilon", -1.0}}),
               std::invalid_argument);
}

namespace {

// |tr(E^m) - sum lambda^m| for m = 1..4: zero for all four powers iff the
// analytic values are exactly the eigenvalue multiset (Newton's identities).
// Unlike raw QR eigenvalues this certificate has no accuracy loss at
// defective points, where computed eigenvalues split by O(eps^{1/4}).
double power_trace_deviation(const Matrix4& e, const std::array<Complex, 4>& analytic) {
  double worst = 0.0;
  Matrix4 p = Matrix4::Identity();
  for (int m = 1; m <= 4; ++m) {
    p = (p * e).eval();
    Complex spectral = 0.0;
    for (const Complex& l : analytic) spectral += cpow_int(l, m);
    double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(p.trace() - spectral) / scale);
  }
  return worst;
}

double min_modulus_gap(const std::array<Complex, 4>& eigs) {
  double gap = kInf;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      gap = std::min(gap, std::abs(eigs[static_cast<size_t>(i)] - eigs[static_cast<size_t>(j)]));
  return gap;
}

}  // namespace

TEST(AnalyticSpectrum, MatchesNumericEigenvaluesOnGrids) {
  // model B over g with arbitrary c; model C over a (u, g) patch
  for (double c : {0.0, 1.0, 3.7}) {
    for (int i = 0; i <= 40; ++i) {
      double g = -2.0 + 0.1 * i;
      Matrix4 e = transfer_matrix_dense(build_model_b(g, c, 1));
      std::array<Complex, 4> closed = analytic_spectrum_b(g);
      EXPECT_LE(power_trace_deviation(e, closed), 1e-9) << "g=" << g << " c=" << c;
      if (min_modulus_gap(closed) > 1e-6) {
        TransferMatrix t = transfer_matrix(build_model_b(g, c, 1));
        std::array<Complex, 4> numeric;
        for (int j = 0; j < 4; ++j) numeric[static_cast<size_t>(j)] = t.spectrum.eigenvalues(j);
        EXPECT_LE(multiset_distance(numeric, closed), 1e-9) << "g=" << g << " c=" << c;
      }
    }
  }
  for (int iu = 0; iu <= 10; ++iu)
    for (int ig = 0; ig <= 10; ++ig) {
      double u = -2.0 + 0.4 * iu, g = -2.0 + 0.4 * ig;
      Matrix4 e = transfer_matrix_dense(build_model_c(g, u, 1));
      std::array<Complex, 4> closed = analytic_spectrum_c(u, g);
      EXPECT_LE(power_trace_deviation(e, closed), 1e-9) << "u=" << u << " g=" << g;
      if (min_modulus_gap(closed) > 1e-6) {
        TransferMatrix t = transfer_matrix(build_model_c(g, u, 1));
        std::array<Complex, 4> numeric;
        for (int j = 0; j < 4; ++j) numeric[static_cast<size_t>(j)] = t.spectrum.eigenvalues(j);
        EXPECT_LE(multiset_distance(numeric, closed), 1e-9) << "u=" << u << " g=" << g;
      }
    }
}

TEST(AnalyticSpectrum, EigenvalueSumEqualsTrace) {
  for (int ig = 0; ig <= 20; ++ig) {
    double g = -2.0 + 0.2 * ig;
    Complex sum_b = 0.0;
    for (const Complex& l : analytic_spectrum_b(g)) sum_b += l;
    EXPECT_NEAR(std::abs(sum_b - transfer_matrix_dense(build_model_b(g, 1.3, 1)).trace()), 0.0,
                1e-10);
    for (int iu = 0; iu <= 4; ++iu) {
      double u = -2.0 + 1.0 * iu;
      Complex sum_c = 0.0;
      for (const Complex& l : analytic_spectrum_c(u, g)) sum_c += l;
      // model C trace is 8 independent of u and g
      EXPECT_NEAR(std::abs(sum_c - 8.0), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(Complex(transfer_matrix_dense(build_model_c(g, u, 1)).trace()) - 8.0),
                  0.0, 1e-12);
    }
  }
}

TEST(Sweep, ModelBEigenvalueCurves) {
  ScanGrid grid;
  grid.axes.push_back({"g", -2.0, 2.0, 81});
  std::vector<SpectralRecord> records = sweep(ModelTag::B, grid);
  ASSERT_EQ(records.size(), 81u);
  for (const SpectralRecord& r : records) {
    EXPECT_LE(multiset_distance(r.eigenvalues, analytic_spectrum_b(r.params[0])), 1e-9);
  }
}

TEST(Sweep, ModelADegenerateAtThetaPi) {
  ScanGrid grid;
  grid.axes.push_back({"theta", -M_PI, M_PI, 41});
  grid.fixed["g"] = 0.5;
  std::vector<SpectralRecord> records = sweep(ModelTag::A, grid);
  // the largest and next-to-largest eigenvalues meet exactly at the ends
  EXPECT_EQ(records.front().degeneracy, 2);
  EXPECT_EQ(records.back().degeneracy, 2);
  EXPECT_TRUE(std::isinf(records.front().xi));
  for (std::size_t i = 1; i + 1 < records.size(); ++i) {
    EXPECT_EQ(records[i].degeneracy, 1) << "theta=" << records[i].params[0];
    EXPECT_TRUE(std::isfinite(records[i].xi));
  }
}

TEST(Sweep, TwoDimensionalGridIsRowMajor) {
  ScanGrid grid;
  grid.axes.push_back({"u", -1.0, 1.0, 3});
  grid.axes.push_back({"g", 0.0, 1.0, 2});
  std::vector<SpectralRecord> records = sweep(ModelTag::C, grid);
  ASSERT_EQ(records.size(), 6u);
  EXPECT_DOUBLE_EQ(records[0].params[0], -1.0);
  EXPECT_DOUBLE_EQ(records[0].params[1], 0.0);
  EXPECT_DOUBLE_EQ(records[1].params[0], -1.0);
  EXPECT_DOUBLE_EQ(records[1].params[1], 1.0);
  EXPECT_DOUBLE_EQ(records[5].params[0], 1.0);
}

TEST(Sweep, GridValidation) {
  ScanGrid bad;
  bad.axes.push_back({"g", 1.0, -1.0, 10});
  EXPECT_THROW(sweep(ModelTag::B, bad), std::invalid_argument);
  ScanGrid one_step;
  one_step.axes.push_back({"g", 0.0, 1.0, 1});
  EXPECT_THROW(sweep(ModelTag::B, one_step), std::invalid_argument);
}

TEST(DetectCrossings, ModelBCrossingAndKinks) {
  ScanAxis axis{"g", -1.0, 1.0, 401};
  CrossingReport rep = detect_crossings(ModelTag::B, axis, {{"c", 1.0}});
  int max_crossings = 0;
  double crossing_at = 1.0;
  int kinks_near_one = 0, kinks_elsewhere = 0;
  for (const Crossing& c : rep.crossings) {
    if (c.type == CrossingType::max_crossing) {
      ++max_crossings;
      crossing_at = c.location;
    } else {
      if (std::abs(std::abs(c.location) - 1.0) <= 0.01)
        ++kinks_near_one;
      else
        ++kinks_elsewhere;
    }
  }
  EXPECT_EQ(max_crossings, 1);
  EXPECT_LE(std::abs(crossing_at), 1e-5);
  EXPECT_GE(kinks_near_one, 2);  // both g = +1 and g = -1
  EXPECT_EQ(kinks_elsewhere, 0);
}

TEST(DetectCrossings, ModelAInteriorHasNoMaxCrossing) {
  ScanAxis axis{"theta", -M_PI + 0.01, M_PI - 0.01, 201};
  CrossingReport rep = detect_crossings(ModelTag::A, axis, {{"g", 0.5}});
  for (const Crossing& c : rep.crossings) EXPECT_NE(c.type, CrossingType::max_crossing);
}

TEST(DetectCrossings, ModelCRowScansFindAxes) {
  // fixed u != 0: crossing at g = 0 within a grid step
  for (double u : {-1.5, 0.8}) {
    ScanAxis axis{"g", -2.0, 2.0, 101};
    CrossingReport rep = detect_crossings(ModelTag::C, axis, {{"u", u}});
    bool found = false;
    for (const Crossing& c : rep.crossings)
      if (c.type == CrossingType::max_crossing && std::abs(c.location) <= 0.04) found = true;
    EXPECT_TRUE(found) << "u=" << u;
  }
}

TEST(DetectCrossings, DegenerateRowReportsNothing) {
  // u = 0 row of model C: all four eigenvalues equal 2 everywhere
  ScanAxis axis{"g", -2.0, 2.0, 101};
  CrossingReport rep = detect_crossings(ModelTag::C, axis, {{"u", 0.0}});
  for (const Crossing& c : rep.crossings) EXPECT_NE(c.type, CrossingType::max_crossing);
}

TEST(DetectCrossings, ResolutionStability) {
  ScanAxis coarse{"g", -1.0, 1.0, 201};
  ScanAxis fine{"g", -1.0, 1.0, 401};
  auto loc = [&](const ScanAxis& axis) {
    CrossingReport rep = detect_crossings(ModelTag::B, axis, {{"c", 0.5}});
    for (const Crossing& c : rep.crossings)
      if (c.type == CrossingType::max_crossing) return c.location;
    return 1e9;
  };
  double lc = loc(coarse), lf = loc(fine);
  EXPECT_LE(std::abs(lc - lf), 1e-6 + 1e-6);  // moves at most the bracket width
}
