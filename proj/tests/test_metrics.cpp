#include <gtest/gtest.h>

#include <cmath>

#include "auctionval/distribution.hpp"
#include "auctionval/error.hpp"
#include "auctionval/metrics.hpp"
#include "auctionval/simulate.hpp"
#include "helpers.hpp"

using namespace auctionval;

namespace {

MonotoneCurve random_pl(Rng& rng, double lo, double hi, std::size_t n) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(uniform(rng, lo, hi));
    y.push_back(uniform01(rng));
  }
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return MonotoneCurve(x, y, CurveKind::PiecewiseLinear);
}

MonotoneCurve random_step(Rng& rng, double lo, double hi, std::size_t n) {
  auto c = random_pl(rng, lo, hi, n);
  return MonotoneCurve(c.knots(), c.values(), CurveKind::Step);
}

// Dense-grid sup, including mass at ±inf.
double dense_ks(const MonotoneCurve& a, const MonotoneCurve& b, double lo, double hi) {
  double d = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    d = std::max(d, std::abs(a(x) - b(x)));
  }
  return d;
}

}  // namespace

TEST(Ks, PiecewiseLinearMatchesDenseGrid) {
  Rng rng(1);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = random_pl(rng, 0, 10, 6);
    const auto b = random_pl(rng, 0, 10, 9);
    EXPECT_NEAR(ks_distance(a, b), dense_ks(a, b, -1, 11), 1e-5);
  }
}

TEST(Ks, StepCurvesUseLeftLimits) {
  const MonotoneCurve a({1.0}, {1.0}, CurveKind::Step);
  const MonotoneCurve b({2.0}, {1.0}, CurveKind::Step);
  EXPECT_DOUBLE_EQ(ks_distance(a, b), 1.0);
  EXPECT_DOUBLE_EQ(tv_distance(a, b), 1.0);
}

TEST(Ks, SymmetricAndZeroOnSelf) {
  Rng rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const auto a = random_step(rng, 0, 5, 5);
    const auto b = random_pl(rng, 0, 5, 4);
    EXPECT_DOUBLE_EQ(ks_distance(a, b), ks_distance(b, a));
    EXPECT_DOUBLE_EQ(tv_distance(a, b), tv_distance(b, a));
    EXPECT_EQ(ks_distance(a, a), 0.0);
    EXPECT_EQ(tv_distance(b, b), 0.0);
    EXPECT_LE(ks_distance(a, b), tv_distance(a, b) + 1e-12);
    EXPECT_LE(tv_distance(a, b), 1.0);
  }
}

TEST(Ks, AgainstTruthMatchesDenseGrid) {
  Rng rng(3);
  const auto truth = ValuationDistribution::parse("uniform:1,20");
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = random_pl(rng, 0, 22, 8);
    double d = 0.0;
    for (int i = 0; i <= 1'000'000; ++i) {
      const double x = -1.0 + 24.0 * i / 1e6;
      d = std::max(d, std::abs(a(x) - truth.cdf(x)));
    }
    EXPECT_NEAR(ks_distance(a, truth), d, 1e-6);
  }
}

TEST(Tv, AgainstTruthMatchesRiemannSum) {
  Rng rng(4);
  for (const char* spec : {"uniform:1,20", "gamma:10,2"}) {
    const auto truth = ValuationDistribution::parse(spec);
    for (int rep = 0; rep < 3; ++rep) {
      const auto a = random_pl(rng, 0.5, 15, 7);
      // 1/2 ∫ |a' - f| plus the point masses at ±inf.
      double total = a(-1.0) + (1.0 - a.final_value());
      const int n = 1'000'000;
      const double lo = 0.0, hi = 40.0, h = (hi - lo) / n;
      for (int i = 0; i < n; ++i) {
        const double x0 = lo + h * i, x1 = x0 + h;
        total += std::abs((a(x1) - a(x0)) - (truth.cdf(x1) - truth.cdf(x0)));
      }
      EXPECT_NEAR(tv_distance(a, truth), 0.5 * total, 1e-4) << spec;
    }
  }
}

TEST(Tv, StepAgainstContinuousTruthIsOne) {
  const auto truth = ValuationDistribution::parse("uniform:0,1");
  const MonotoneCurve s({0.2, 0.7}, {0.5, 1.0}, CurveKind::Step);
  EXPECT_NEAR(tv_distance(s, truth), 1.0, 1e-9);
}

TEST(Tv, BinnedIsZeroForExactQuantiles) {
  const auto truth = ValuationDistribution::parse("gamma:10,2");
  std::vector<double> x, y;
  for (std::size_t j = 1; j < kTvBins; ++j) {
    y.push_back(static_cast<double>(j) / kTvBins);
    x.push_back(truth.quantile(y.back()));
  }
  x.insert(x.begin(), 0.0);
  y.insert(y.begin(), 0.0);
  x.push_back(truth.quantile(1 - 1e-12));
  y.push_back(1.0);
  const MonotoneCurve c(x, y, CurveKind::PiecewiseLinear);
  EXPECT_NEAR(tv_distance_binned(c, truth), 0.0, 1e-9);
  EXPECT_GT(tv_distance(c, truth), 0.0);
  EXPECT_THROW(tv_distance_binned(c, truth, 0), ValidationError);
}

TEST(Replicate, ReproducibleAndSane) {
  GFunction g(100'000, 1);
  std::vector<StudySetting> settings{{"uniform", ValuationDistribution::parse("uniform:1,20"), 10}};
  const auto a = replicate_table(settings, 3, 11, g, FitOptions{});
  const auto b = replicate_table(settings, 3, 11, g, FitOptions{});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].failed + a[0].raw.size(), 3u);
  ASSERT_EQ(a[0].raw.size(), b[0].raw.size());
  for (std::size_t r = 0; r < a[0].raw.size(); ++r) {
    EXPECT_EQ(a[0].raw[r].ks_mle, b[0].raw[r].ks_mle);
    EXPECT_EQ(a[0].raw[r].tv_init, b[0].raw[r].tv_init);
    EXPECT_GE(a[0].raw[r].ks_mle, 0.0);
    EXPECT_LE(a[0].raw[r].ks_mle, a[0].raw[r].tv_mle + 1e-12);
  }
}

TEST(TrainTest, FullDataGivesZeroForMle) {
  GFunction g(100'000, 1);
  SimConfig c;
  c.K = 60;
  c.seed = 5;
  const auto ds = run_study(c, ValuationDistribution::parse("uniform:1,20"));
  const auto rep = train_test_eval(ds, 1.0, 1, 0, g, FitOptions{});
  ASSERT_EQ(rep.tv_mle.size(), 1u);
  EXPECT_EQ(rep.avg_tv_mle, 0.0);
  const auto half = train_test_eval(ds, 0.5, 3, 0, g, FitOptions{});
  EXPECT_EQ(half.tv_init.size() + half.skipped, 3u);
  EXPECT_THROW(train_test_eval(ds, 0.0, 1, 0, g, FitOptions{}), ValidationError);
}
