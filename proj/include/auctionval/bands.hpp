#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "auctionval/lambda.hpp"
#include "auctionval/model.hpp"
#include "auctionval/pipeline.hpp"

namespace auctionval {

enum class EstimatorKind { Init, ConstrainedMle };

std::string to_string(EstimatorKind kind);
// "init" or "cmle" (also "mle", "constrained-mle").
EstimatorKind parse_estimator_kind(const std::string& text);

// The curve of the requested kind from a finished fit.
const MonotoneCurve& estimate_of(const FitResult& fit, EstimatorKind kind);

struct MedianBiasEstimate {
  double delta = 0.0;
  EstimatorKind kind = EstimatorKind::ConstrainedMle;
  std::size_t mc_reps = 0;
  std::size_t failed = 0;
  std::vector<double> grid;
  std::vector<double> medians;
};

// Reserves for the Uniform(0, 1) bias simulation: auctions in the low-reserve
// set get 0, every other auction gets f_hat(reserve).
std::vector<double> transformed_reserves(const ObservedDataset& dataset, const LowReserveSelection& selection,
                                         const MonotoneCurve& f_hat);

// Simulates mc_reps datasets (Uniform(0, 1) values, rate lambda_hat, duration
// tau, one auction per reserve), fits each one with the low-reserve set taken
// as reserves below 1e-3, and returns the largest |lower median of H(y) - y|
// over y = 0.01, ..., 0.99. Throws ValidationError for mc_reps < 1 and
// NumericalError when no replicate could be fitted.
MedianBiasEstimate estimate_median_bias(EstimatorKind kind, double lambda_hat, double tau,
                                        std::span<const double> reserves, std::size_t mc_reps, std::uint64_t seed,
                                        GFunction& g, const FitOptions& options);

// Smallest B with (1/2 + delta)^B + (1/2 - delta)^B <= alpha.
std::size_t hulc_batches(double alpha, double delta);

struct ConfidenceBand {
  std::vector<double> knots;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> estimate;  // full-data fit at the knots
  double alpha = 0.0;
  std::size_t batches = 0;
};

// Random partition into `batches` groups of near-equal size; the band at each
// knot of any batch estimate is the min and max over the batch estimates.
// Throws ValidationError when K < batches.
ConfidenceBand hulc_band_batches(const ObservedDataset& dataset, EstimatorKind kind, std::size_t batches,
                                 GFunction& g, const FitOptions& options, std::uint64_t seed, double alpha = 0.0);

ConfidenceBand hulc_band(const ObservedDataset& dataset, EstimatorKind kind, double alpha, double delta, GFunction& g,
                         const FitOptions& options, std::uint64_t seed);

// Mean of upper - lower at the given points, the envelopes interpolated
// linearly between knots and held constant outside them.
double mean_band_width(const ConfidenceBand& band, std::span<const double> points);

}  // namespace auctionval
