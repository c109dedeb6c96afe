#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "auctionval/model.hpp"

namespace auctionval {

struct LowReserveSelection {
  double r_min = 0.0;
  double q = 0.0;
  double epsilon = 0.0;
  std::vector<std::size_t> V;
};

// r_min is the smallest non-negative centre whose closed window
// [r_min - epsilon, r_min + epsilon] holds at least q*K reserves.
LowReserveSelection select_low_reserve(const ObservedDataset& dataset, double q, double epsilon);

// All auctions with reserve < threshold.
LowReserveSelection select_below_threshold(const ObservedDataset& dataset, double threshold);

// CDF of the final selling price in terms of η = F_r(x), given at least two
// arrivals above the reserve; a = lambda_r * tau.
double g_lambda_cdf(double eta, double lambda_r, double tau);
// Bisection inverse on [0, 1] to 1e-10.
double g_lambda_inverse(double p, double lambda_r, double tau);

// Final selling prices of V-auctions sold above the reserve, mapped through
// the inverse of g_lambda_cdf.
MonotoneCurve estimate_f_sp(const ObservedDataset& dataset, const LowReserveSelection& selection, double lambda_hat);

// 1 - sqrt(1 - G_FP) for the empirical CDF G_FP of first standing prices above
// the reserve over V-auctions.
MonotoneCurve estimate_f_fp(const ObservedDataset& dataset, const LowReserveSelection& selection);

struct SpliceAnchors {
  double p1 = 0.0;       // largest first standing price (last knot of F_FP)
  double p2 = 0.0;       // smallest final selling price (first knot of F_SP)
  double end = 0.0;      // where the bridge meets F_SP: max(p1, p2)
  double c = 0.0;        // splice point, c <= min(p1, p2)
  double c_value = 0.0;  // value of the composite at c, <= F_SP(end)
};

SpliceAnchors splice_anchors(const MonotoneCurve& f_fp, const MonotoneCurve& f_sp);

struct InitialEstimate {
  MonotoneCurve step;        // F_FP below c, bridge vertex at end, F_SP above end
  MonotoneCurve continuous;  // linear interpolation of step, through (0, 0)
  SpliceAnchors anchors;
};

InitialEstimate combine_initial(const MonotoneCurve& f_fp, const MonotoneCurve& f_sp, const SpliceAnchors& anchors);

// θ⁽⁰⁾_i = (1 - F(z_i)) / (1 - F(z_{i-1})), 0/0 := 0.
ThetaVector initial_theta(const MonotoneCurve& f_init, std::span<const double> z);

}  // namespace auctionval
