#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "auctionval/distribution.hpp"
#include "auctionval/lambda.hpp"
#include "auctionval/model.hpp"
#include "auctionval/pipeline.hpp"
#include "auctionval/simulate.hpp"

namespace auctionval {

// Curves are extended as constants beyond their knots. A piecewise-linear
// curve's value below its first knot counts as mass at -inf; 1 minus the last
// value counts as mass at +inf.

// sup |F1 - F2|, exact: evaluated at the union of knots, including left limits.
double ks_distance(const MonotoneCurve& a, const MonotoneCurve& b);
// Union of knots and breakpoints plus a 1000-point grid.
double ks_distance(const MonotoneCurve& a, const ValuationDistribution& truth);

// Half the total variation of the signed measure F1 - F2, exact on the union
// knot partition.
double tv_distance(const MonotoneCurve& a, const MonotoneCurve& b);
// Against a continuous truth: each knot cell is refined until two successive
// levels change the total by less than 1e-6.
double tv_distance(const MonotoneCurve& a, const ValuationDistribution& truth);

inline constexpr std::size_t kTvBins = 20;

// 1/2 sum |dF_hat - dF| over `bins` cells of equal probability under the
// truth. Unlike tv_distance it ignores how the estimate spreads mass inside a
// cell, so it shrinks as K grows even for a rough piecewise-linear estimate.
double tv_distance_binned(const MonotoneCurve& a, const ValuationDistribution& truth, std::size_t bins = kTvBins);

struct StudySetting {
  std::string label;
  ValuationDistribution dist;
  std::size_t K = 100;
  double lambda = 1.0;
  double tau = 100.0;
  ReservePolicy reserve = 0.0;
};

struct ReplicateResult {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double lambda_hat = 0.0;
  double ks_mle = 0.0, ks_init = 0.0, tv_mle = 0.0, tv_init = 0.0;
  double tv_mle_binned = 0.0, tv_init_binned = 0.0;
};

struct StudyReport {
  std::string label;
  std::size_t replicates = 0;
  std::size_t failed = 0;
  // means
  double ks_mle = 0.0, ks_init = 0.0, tv_mle = 0.0, tv_init = 0.0;
  double tv_mle_binned = 0.0, tv_init_binned = 0.0;
  std::vector<ReplicateResult> raw;
  std::vector<std::string> errors;
};

// Replicate r of setting s uses seed derive_seed(base_seed, {s, r}).
std::vector<StudyReport> replicate_table(std::span<const StudySetting> settings, std::size_t replicates,
                                         std::uint64_t base_seed, GFunction& g, const FitOptions& options);

struct TrainTestReport {
  double train_fraction = 0.5;
  std::size_t replications = 0;
  std::size_t skipped = 0;
  double avg_tv_init = 0.0;  // TV(F_init on train, F_cMLE on test)
  double avg_tv_mle = 0.0;   // TV(F_cMLE on train, F_cMLE on test)
  std::vector<double> tv_init, tv_mle;
};

// train_fraction = 1 uses the full data for both halves.
TrainTestReport train_test_eval(const ObservedDataset& dataset, double train_fraction, std::size_t replications,
                                std::uint64_t seed, GFunction& g, const FitOptions& options);

}  // namespace auctionval
