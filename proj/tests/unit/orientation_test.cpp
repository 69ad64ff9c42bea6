#include <cmath>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "ricb/error.hpp"
#include "ricb/orientation.hpp"
#include "test_util.hpp"

namespace ricb {
namespace {

using testing::TempDir;

TEST(WrapDeg, Examples) {
  EXPECT_EQ(wrap_deg(0).value(), 0.0);
  EXPECT_EQ(wrap_deg(-90).value(), 270.0);
  EXPECT_EQ(wrap_deg(725.5).value(), 5.5);
  EXPECT_EQ(wrap_deg(360).value(), 0.0);
  EXPECT_EQ(wrap_deg(-1e-20).value(), 0.0);
}

TEST(WrapDeg, AlwaysInRange) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    double v = wrap_deg(u(rng)).value();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 360.0);
  }
  EXPECT_THROW(wrap_deg(std::nan("")), Error);
}

TEST(AngularError, Examples) {
  EXPECT_EQ(angular_error(wrap_deg(10), wrap_deg(10)), 0.0);
  EXPECT_EQ(angular_error(wrap_deg(350), wrap_deg(10)), 20.0);
  EXPECT_EQ(angular_error(wrap_deg(0), wrap_deg(180)), 180.0);
}

TEST(AngularError, SymmetricAndBounded) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 360.0);
  for (int i = 0; i < 1000; ++i) {
    AngleDeg a = wrap_deg(u(rng)), b = wrap_deg(u(rng));
    double e = angular_error(a, b);
    EXPECT_EQ(e, angular_error(b, a));
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 180.0);
  }
}

TEST(CosSinDeg, ExactAtQuarterTurns) {
  EXPECT_EQ(cos_sin_deg(90).cos, 0.0);
  EXPECT_EQ(cos_sin_deg(90).sin, 1.0);
  EXPECT_EQ(cos_sin_deg(180).cos, -1.0);
  EXPECT_EQ(cos_sin_deg(180).sin, 0.0);
  EXPECT_EQ(cos_sin_deg(-90).sin, -1.0);
  EXPECT_NEAR(cos_sin_deg(30).sin, 0.5, 1e-15);
}

TEST(Estimate, NullIsZero) {
  EstimatorConfig cfg{EstimatorKind::none};
  EXPECT_EQ(estimate(testing::noise_image(5, 5, 1), "x", cfg, nullptr).value(), 0.0);
}

TEST(Estimate, NoiselessOracleReturnsTruth) {
  GroundTruthTable gt;
  gt.insert("a", wrap_deg(90));
  EstimatorConfig cfg{EstimatorKind::oracle, 0.0, 0.0, 3};
  EXPECT_EQ(estimate(RasterImage(1, 1), "a", cfg, &gt).value(), 90.0);
}

TEST(Estimate, OracleMissingEntry) {
  GroundTruthTable gt;
  EstimatorConfig cfg{EstimatorKind::oracle, 0.0, 0.0, 3};
  try {
    estimate(RasterImage(1, 1), "nope", cfg, &gt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingGroundTruth);
  }
  EXPECT_THROW(estimate(RasterImage(1, 1), "nope", cfg, nullptr), Error);
}

TEST(Estimate, OracleDependsOnlyOnSeedAndId) {
  GroundTruthTable gt;
  gt.insert("a", wrap_deg(40));
  gt.insert("b", wrap_deg(40));
  EstimatorConfig cfg{EstimatorKind::oracle, 5.0, 0.02, 11};
  AngleDeg first = estimate(RasterImage(1, 1), "a", cfg, &gt);
  EXPECT_EQ(estimate(testing::noise_image(3, 3, 9), "a", cfg, &gt), first);
  EXPECT_NE(estimate(RasterImage(1, 1), "b", cfg, &gt), first);
  cfg.seed = 12;
  EXPECT_NE(estimate(RasterImage(1, 1), "a", cfg, &gt), first);
}

TEST(Estimate, OracleNoiseStatistics) {
  const int n = 4000;
  GroundTruthTable gt;
  for (int i = 0; i < n; ++i) gt.insert("r" + std::to_string(i), wrap_deg(100));
  EstimatorConfig cfg{EstimatorKind::oracle, 5.0, 0.0, 5};
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = estimate(RasterImage(1, 1), "r" + std::to_string(i), cfg, &gt).value() - 100.0;
    sum += d;
    sq += d * d;
  }
  double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.3);
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 5.0, 0.25);
}

TEST(Estimate, OracleGrossErrorRate) {
  const int n = 4000;
  GroundTruthTable gt;
  for (int i = 0; i < n; ++i) gt.insert("r" + std::to_string(i), wrap_deg(100));
  EstimatorConfig cfg{EstimatorKind::oracle, 0.0, 0.1, 5};
  int gross = 0;
  for (int i = 0; i < n; ++i)
    gross += estimate(RasterImage(1, 1), "r" + std::to_string(i), cfg, &gt).value() != 100.0;
  EXPECT_NEAR(gross / double(n), 0.1, 0.015);
}

TEST(Estimate, MomentsRecoversArrowAt30) {
  AngleDeg est = estimate(synth_arrow(wrap_deg(30), 128, {}), "x", {EstimatorKind::moments}, nullptr);
  EXPECT_LE(angular_error(est, wrap_deg(30)), 3.0) << est.value();
}

TEST(Estimate, MomentsAcrossFullCircle) {
  ArrowStyle s{0.55, 0.05, 0.6};
  for (int deg = 0; deg < 360; deg += 10) {
    AngleDeg est = estimate_moments(synth_arrow(wrap_deg(deg), 96, s));
    EXPECT_LE(angular_error(est, wrap_deg(deg)), 3.0) << deg << " -> " << est.value();
  }
}

TEST(Estimate, MomentsEquivariantUnderQuarterTurns) {
  RasterImage img = synth_arrow(wrap_deg(17), 64, {});
  AngleDeg base = estimate_moments(img);
  for (int q = 1; q < 4; ++q) {
    AngleDeg turned = estimate_moments(rotate(img, wrap_deg(90.0 * q), Canvas::expand));
    EXPECT_NEAR(angular_error(turned, wrap_deg(base.value() + 90.0 * q)), 0.0, 1e-6);
  }
}

TEST(Estimate, MomentsBlankImageIsZero) {
  EXPECT_EQ(estimate_moments(RasterImage(10, 10)).value(), 0.0);
  RasterImage gray(6, 6);
  for (float& v : gray.pixels()) v = 0.4f;
  EXPECT_EQ(estimate_moments(gray).value(), 0.0);
}

TEST(EstimatorConfig, Validation) {
  EXPECT_NO_THROW(EstimatorConfig{}.validate());
  EstimatorConfig bad{EstimatorKind::oracle, -1.0};
  try {
    bad.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
  }
  EXPECT_THROW((EstimatorConfig{EstimatorKind::oracle, 1.0, 1.5}.validate()), Error);
}

TEST(EstimatorKind, ParseAndPrint) {
  EXPECT_EQ(parse_estimator_kind("null"), EstimatorKind::none);
  EXPECT_EQ(parse_estimator_kind("moments"), EstimatorKind::moments);
  EXPECT_EQ(to_string(EstimatorKind::oracle), "oracle");
  EXPECT_THROW(parse_estimator_kind("cnn"), Error);
}

TEST(DeriveSeed, DistinctPerIdAndSeed) {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(derive_seed(1, "id" + std::to_string(i)));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
  EXPECT_EQ(derive_seed(1, "a"), derive_seed(1, "a"));
}

TEST(GroundTruthTable, CsvRoundTrip) {
  TempDir dir;
  GroundTruthTable gt;
  gt.insert("b/x,1.png", wrap_deg(12.345678901234));
  gt.insert("a/\"q\".png", wrap_deg(0));
  gt.insert("c/y.png", wrap_deg(359.999));
  gt.save_csv(dir / "gt.csv");
  EXPECT_EQ(GroundTruthTable::load_csv(dir / "gt.csv"), gt);
  EXPECT_THROW(gt.insert("c/y.png", wrap_deg(1)), Error);
}

TEST(GroundTruthTable, LoadErrors) {
  TempDir dir;
  EXPECT_THROW(GroundTruthTable::load_csv(dir / "none.csv"), Error);
  std::ofstream(dir / "bad.csv") << "id,angle_deg\na,notanumber\n";
  EXPECT_THROW(GroundTruthTable::load_csv(dir / "bad.csv"), Error);
  std::ofstream(dir / "hdr.csv") << "name,angle\na,1\n";
  EXPECT_THROW(GroundTruthTable::load_csv(dir / "hdr.csv"), Error);
}

}  // namespace
}  // namespace ricb
