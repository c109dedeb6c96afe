#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "auctionval/error.hpp"
#include "auctionval/initial.hpp"
#include "auctionval/lambda.hpp"
#include "auctionval/pipeline.hpp"
#include "auctionval/simulate.hpp"
#include "helpers.hpp"

using namespace auctionval;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// P(second highest of N values <= x | N >= 2) with N ~ Poisson(a) and
// η = P(value <= x): at most one of the Poisson(a(1-η)) values lies above x.
double final_price_cdf_oracle(double eta_d, double a_d) {
  const Big a = a_d, eta = eta_d;
  const Big above = a * (1 - eta), below = a * eta;
  const Big none_above = exp(-above) * (1 - exp(-below) - below * exp(-below));
  const Big one_above = above * exp(-above) * (1 - exp(-below));
  const Big at_least_two = 1 - exp(-a) - a * exp(-a);
  return static_cast<double>((none_above + one_above) / at_least_two);
}

ObservedDataset hand_dataset(std::vector<std::pair<double, std::vector<double>>> spec) {
  ObservedDataset ds;
  ds.tau = 10;
  for (auto& [r, prices] : spec) {
    AuctionRecord a{r, 10.0, {}, true};
    for (double p : prices) a.jumps.push_back({p, 0.1});
    ds.auctions.push_back(a);
  }
  return ds;
}

}  // namespace

TEST(GLambda, Endpoints) {
  for (double a : {0.5, 1.0, 2.0, 10.0}) {
    EXPECT_NEAR(g_lambda_cdf(0.0, a, 1.0), 0.0, 1e-12);
    EXPECT_NEAR(g_lambda_cdf(1.0, a, 1.0), 1.0, 1e-12);
  }
}

TEST(GLambda, MatchesHighPrecisionOracle) {
  for (double a : {0.01, 0.5, 1.0, 3.0, 10.0, 100.0, 800.0}) {
    for (double eta = 0.0; eta <= 1.0; eta += 0.05) {
      EXPECT_NEAR(g_lambda_cdf(eta, a, 1.0), final_price_cdf_oracle(eta, a), 1e-9) << "a=" << a << " eta=" << eta;
    }
  }
  // lambda_r and tau only enter through their product
  EXPECT_DOUBLE_EQ(g_lambda_cdf(0.3, 2.0, 50.0), g_lambda_cdf(0.3, 100.0, 1.0));
}

TEST(GLambda, MonotoneAndInvertible) {
  for (double a : {0.5, 5.0, 100.0}) {
    double prev = 0.0;
    for (double eta = 0.0; eta <= 1.0; eta += 0.01) {
      const double v = g_lambda_cdf(eta, a, 1.0);
      EXPECT_GE(v, prev - 1e-15);
      prev = v;
    }
    for (double p : {0.01, 0.3, 0.77, 0.99}) EXPECT_NEAR(g_lambda_cdf(g_lambda_inverse(p, a, 1.0), a, 1.0), p, 1e-8);
  }
  EXPECT_THROW(g_lambda_cdf(0.5, 0.0, 1.0), ValidationError);
}

TEST(LowReserve, SmallestWindowCentre) {
  Rng rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    ObservedDataset ds;
    ds.tau = 1;
    const std::size_t K = 5 + rep % 20;
    for (std::size_t k = 0; k < K; ++k) ds.auctions.push_back({uniform(rng, 0, 10), 1.0, {}, false});
    const double q = uniform(rng, 0.05, 0.9), eps = uniform(rng, 0.1, 2.0);
    auto count = [&](double c) {
      std::size_t n = 0;
      for (const auto& a : ds.auctions) n += a.reserve - eps <= c && c <= a.reserve + eps;
      return n;
    };
    // The fullest window either starts at a reserve or is centred at 0.
    std::size_t fullest = count(0.0);
    for (const auto& a : ds.auctions) fullest = std::max(fullest, count(a.reserve + eps));
    if (double(fullest) < q * K) {
      EXPECT_THROW(select_low_reserve(ds, q, eps), ValidationError);
      continue;
    }
    const auto sel = select_low_reserve(ds, q, eps);
    ASSERT_GE(double(sel.V.size()), q * K);
    ASSERT_EQ(sel.V.size(), count(sel.r_min));
    // Nothing on a fine grid below r_min qualifies.
    for (double c = 0; c < sel.r_min - 1e-9; c += 0.01) ASSERT_LT(double(count(c)), q * K) << c;
  }
}

TEST(LowReserve, Errors) {
  const auto ds = testutil::worked_example();
  EXPECT_THROW(select_low_reserve(ds, 0.0, 1.0), ValidationError);
  EXPECT_THROW(select_low_reserve(ds, 0.5, 0.0), ValidationError);
  EXPECT_THROW(select_below_threshold(ds, 1.0), ValidationError);
  const auto sel = select_below_threshold(ds, 8.0);
  EXPECT_EQ(sel.V, (std::vector<std::size_t>{1, 3}));
}

TEST(FirstPrice, TransformOfEmpiricalCdf) {
  const auto ds = hand_dataset({{0.1, {2.0, 5.0}}, {0.2, {1.0}}, {0.3, {3.0, 4.0}}, {0.4, {}}});
  LowReserveSelection sel;
  sel.V = {0, 1, 2, 3};
  const auto f = estimate_f_fp(ds, sel);
  EXPECT_EQ(f.knots(), (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_NEAR(f.values()[0], 1 - std::sqrt(1 - 1.0 / 3), 1e-15);
  EXPECT_NEAR(f.values()[1], 1 - std::sqrt(1 - 2.0 / 3), 1e-15);
  EXPECT_EQ(f.values()[2], 1.0);
}

TEST(SellingPrice, InverseOfFinalPriceCdf) {
  const auto ds = hand_dataset({{0.1, {2.0, 5.0}}, {0.2, {1.0}}, {0.3, {3.0, 4.0}}});
  LowReserveSelection sel;
  sel.V = {0, 1, 2};
  const auto f = estimate_f_sp(ds, sel, 0.2);  // a = 2
  ASSERT_EQ(f.knots(), (std::vector<double>{1.0, 4.0, 5.0}));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(final_price_cdf_oracle(f.values()[i], 2.0), (i + 1) / 3.0, 1e-8);
}

TEST(SellingPrice, ConsistentForLargeK) {
  SimConfig c;
  c.K = 1000;
  c.seed = 5;
  const auto dist = ValuationDistribution::parse("uniform:1,20");
  const auto ds = run_study(c, dist);
  GFunction g;
  FitOptions o;
  const auto sel = select_low_reserve(ds, o);
  const double lam = estimate_lambda(ds, g, sel.V);
  const auto f = estimate_f_sp(ds, sel, lam);
  // Final prices sit in the upper tail, so that is where F_SP is checked.
  ASSERT_GT(f.knots().size(), 100u);
  double worst = 0.0;
  for (double x : f.knots()) worst = std::max(worst, std::abs(f(x) - dist.cdf(x)));
  EXPECT_LT(worst, 0.02);
  EXPECT_GT(f.knots().front(), 15.0);
}

TEST(Splice, AnchorsWhenFirstPricesBelowFinals) {
  const MonotoneCurve fp({1, 2, 3}, {0.2, 0.4, 1.0}, CurveKind::Step);
  const MonotoneCurve sp({5, 6, 7}, {0.5, 0.8, 1.0}, CurveKind::Step);
  const auto a = splice_anchors(fp, sp);
  EXPECT_EQ(a.p1, 3.0);
  EXPECT_EQ(a.p2, 5.0);
  EXPECT_EQ(a.end, 5.0);
  // F_FP(3) = 1 > F_SP(5) = 0.5, so the splice moves to the knot where F_FP
  // first exceeds 0.5.
  EXPECT_EQ(a.c, 3.0);
  EXPECT_EQ(a.c_value, 0.4);
  const auto init = combine_initial(fp, sp, a);
  EXPECT_EQ(init.step.knots(), (std::vector<double>{1, 2, 3, 5, 6, 7}));
  EXPECT_EQ(init.step.values(), (std::vector<double>{0.2, 0.4, 0.4, 0.5, 0.8, 1.0}));
  EXPECT_EQ(init.continuous(0.0), 0.0);
  EXPECT_DOUBLE_EQ(init.continuous(4.0), 0.45);
}

TEST(Splice, AnchorsWhenRangesOverlap) {
  const MonotoneCurve fp({1, 4, 8}, {0.1, 0.3, 1.0}, CurveKind::Step);
  const MonotoneCurve sp({3, 6, 9}, {0.4, 0.7, 1.0}, CurveKind::Step);
  const auto a = splice_anchors(fp, sp);
  EXPECT_EQ(a.end, 8.0);
  EXPECT_EQ(a.c, 3.0);
  EXPECT_EQ(a.c_value, 0.1);
  const auto init = combine_initial(fp, sp, a);
  EXPECT_EQ(init.step.knots(), (std::vector<double>{1, 3, 8, 9}));
  EXPECT_EQ(init.step.values(), (std::vector<double>{0.1, 0.1, 0.7, 1.0}));
}

TEST(Splice, CompositeIsMonotoneOnSimulatedData) {
  GFunction g(200000);
  for (std::uint64_t s = 0; s < 20; ++s) {
    SimConfig c;
    c.K = 100;
    c.seed = s;
    const auto ds = run_study(c, ValuationDistribution::parse(s % 2 ? "gamma:10,2" : "uniform:1,20"));
    const FitResult fr = fit(ds, g, FitOptions{});
    const auto& v = fr.initial.continuous.values();
    for (std::size_t i = 1; i < v.size(); ++i) ASSERT_GE(v[i], v[i - 1]);
    EXPECT_LE(fr.initial.anchors.c, std::min(fr.initial.anchors.p1, fr.initial.anchors.p2));
  }
}

TEST(InitialTheta, ReproducesCdfAtGrid) {
  const MonotoneCurve f({0, 2, 4}, {0.0, 0.5, 1.0}, CurveKind::PiecewiseLinear);
  const std::vector<double> z{1, 2, 3, 5};
  const auto th = initial_theta(f, z);
  const auto back = theta_to_cdf(th, z);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(back.values()[i], f(z[i]), 1e-15);
  EXPECT_EQ(th[3], 0.0);
}
