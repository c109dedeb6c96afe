#pragma once

#include <cstddef>
#include <optional>

#include "auctionval/initial.hpp"
#include "auctionval/lambda.hpp"
#include "auctionval/mle.hpp"
#include "auctionval/model.hpp"

namespace auctionval {

struct FitOptions {
  double q = 0.25;
  // Defaults to max(0.01, 1% of the median final selling price).
  std::optional<double> epsilon;
  // When set, the low-reserve set is every auction with reserve below this
  // value instead of the (q, epsilon) window.
  std::optional<double> reserve_threshold;
  double tol = 1e-8;
  std::size_t max_sweeps = 10000;
  // Also run the ascent without the frozen prefix.
  bool unconstrained_too = false;
  double feasibility_floor = 1e-10;
  bool check_updates = false;
};

struct FitResult {
  double lambda_hat = 0.0;
  LowReserveSelection selection;
  MonotoneCurve f_fp;
  MonotoneCurve f_sp;
  InitialEstimate initial;
  PooledData pooled;
  ThetaVector theta0;
  AscentRun run;
  MonotoneCurve f_cmle;
  std::optional<AscentRun> run_unconstrained;
  std::optional<MonotoneCurve> f_mle;
};

double default_epsilon(const ObservedDataset& dataset);

LowReserveSelection select_low_reserve(const ObservedDataset& dataset, const FitOptions& options);

// λ̂, then F_SP / F_FP / F_init, then the constrained coordinate ascent.
FitResult fit(const ObservedDataset& dataset, GFunction& g, const FitOptions& options);

}  // namespace auctionval
