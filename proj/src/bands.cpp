#include "auctionval/bands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "auctionval/distribution.hpp"
#include "auctionval/error.hpp"
#include "auctionval/parallel.hpp"
#include "auctionval/rng.hpp"
#include "auctionval/simulate.hpp"

namespace auctionval {

std::string to_string(EstimatorKind kind) { return kind == EstimatorKind::Init ? "init" : "cmle"; }

EstimatorKind parse_estimator_kind(const std::string& text) {
  if (text == "init") return EstimatorKind::Init;
  if (text == "cmle" || text == "mle" || text == "constrained-mle") return EstimatorKind::ConstrainedMle;
  throw ValidationError("unknown estimator kind '" + text + "' (expected init or cmle)");
}

const MonotoneCurve& estimate_of(const FitResult& fit, EstimatorKind kind) {
  return kind == EstimatorKind::Init ? fit.initial.continuous : fit.f_cmle;
}

std::vector<double> transformed_reserves(const ObservedDataset& ds, const LowReserveSelection& sel,
                                         const MonotoneCurve& f_hat) {
  std::vector<double> out(ds.size());
  std::vector<bool> low(ds.size(), false);
  for (std::size_t k : sel.V) low.at(k) = true;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    out[k] = low[k] ? 0.0 : std::clamp(f_hat(ds.auctions[k].reserve), 0.0, 1.0);
  }
  return out;
}

MedianBiasEstimate estimate_median_bias(EstimatorKind kind, double lambda_hat, double tau,
                                        std::span<const double> reserves, std::size_t mc_reps, std::uint64_t seed,
                                        GFunction& g, const FitOptions& options) {
  if (mc_reps == 0) throw ValidationError("mc_reps must be >= 1");
  if (reserves.empty()) throw ValidationError("reserve profile is empty");
  MedianBiasEstimate out;
  out.kind = kind;
  out.mc_reps = mc_reps;
  for (int i = 1; i <= 99; ++i) out.grid.push_back(i / 100.0);

  FitOptions fo = options;
  fo.reserve_threshold = 1e-3;
  fo.unconstrained_too = false;
  const ValuationDistribution unif(ValuationDistribution::Uniform{0.0, 1.0});

  std::vector<std::optional<std::vector<double>>> values(mc_reps);
  parallel_for(mc_reps, [&](std::size_t r) {
    SimConfig config;
    config.lambda = lambda_hat;
    config.tau = tau;
    config.K = reserves.size();
    config.seed = derive_seed(seed, {r});
    config.reserve = std::vector<double>(reserves.begin(), reserves.end());
    config.tie_jitter = 1e-4;
    try {
      const ObservedDataset ds = run_study(config, unif);
      const FitResult fr = fit(ds, g, fo);
      const MonotoneCurve& h = estimate_of(fr, kind);
      std::vector<double> v(out.grid.size());
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = h(out.grid[j]);
      values[r] = std::move(v);
    } catch (const std::exception&) {
    }
  });

  std::vector<const std::vector<double>*> ok;
  for (const auto& v : values) {
    if (v) ok.push_back(&*v);
  }
  out.failed = mc_reps - ok.size();
  if (ok.empty()) throw NumericalError("median bias: no simulated replicate could be fitted");
  std::vector<double> column(ok.size());
  for (std::size_t j = 0; j < out.grid.size(); ++j) {
    for (std::size_t r = 0; r < ok.size(); ++r) column[r] = (*ok[r])[j];
    const std::size_t mid = (column.size() - 1) / 2;  // lower median
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid), column.end());
    out.medians.push_back(column[mid]);
    out.delta = std::max(out.delta, std::abs(column[mid] - out.grid[j]));
  }
  return out;
}

std::size_t hulc_batches(double alpha, double delta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(delta >= 0.0 && delta < 0.5)) throw ValidationError("median bias delta must lie in [0, 0.5)");
  constexpr std::size_t kMax = 100000;
  for (std::size_t B = 1; B <= kMax; ++B) {
    const double b = static_cast<double>(B);
    if (std::pow(0.5 + delta, b) + std::pow(0.5 - delta, b) <= alpha) return B;
  }
  throw ValidationError("median bias too close to 1/2: more than 100000 batches needed");
}

ConfidenceBand hulc_band_batches(const ObservedDataset& ds, EstimatorKind kind, std::size_t batches, GFunction& g,
                                 const FitOptions& options, std::uint64_t seed, double alpha) {
  validate_dataset(ds);
  if (batches == 0) throw ValidationError("need at least one batch");
  if (ds.size() < batches) {
    throw ValidationError("K = " + std::to_string(ds.size()) + " is smaller than the " + std::to_string(batches) +
                          " batches");
  }
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng = substream(seed, {0});
  for (std::size_t i = idx.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i + 1));
    std::swap(idx[i], idx[std::min(j, i)]);
  }
  std::vector<std::vector<std::size_t>> groups(batches);
  for (std::size_t j = 0; j < idx.size(); ++j) groups[j % batches].push_back(idx[j]);
  for (auto& grp : groups) std::sort(grp.begin(), grp.end());

  FitOptions fo = options;
  fo.unconstrained_too = false;
  std::vector<MonotoneCurve> curves(batches);
  parallel_for(batches, [&](std::size_t b) {
    curves[b] = estimate_of(fit(subset(ds, groups[b]), g, fo), kind);
  });
  const FitResult full = batches == 1 ? FitResult{} : fit(ds, g, fo);
  const MonotoneCurve& est = batches == 1 ? curves[0] : estimate_of(full, kind);

  ConfidenceBand band;
  band.alpha = alpha;
  band.batches = batches;
  for (const auto& c : curves) band.knots.insert(band.knots.end(), c.knots().begin(), c.knots().end());
  std::sort(band.knots.begin(), band.knots.end());
  band.knots.erase(std::unique(band.knots.begin(), band.knots.end()), band.knots.end());
  for (double x : band.knots) {
    double lo = 1.0, hi = 0.0;
    for (const auto& c : curves) {
      lo = std::min(lo, c(x));
      hi = std::max(hi, c(x));
    }
    band.lower.push_back(lo);
    band.upper.push_back(hi);
    band.estimate.push_back(est(x));
  }
  return band;
}

ConfidenceBand hulc_band(const ObservedDataset& ds, EstimatorKind kind, double alpha, double delta, GFunction& g,
                         const FitOptions& options, std::uint64_t seed) {
  return hulc_band_batches(ds, kind, hulc_batches(alpha, delta), g, options, seed, alpha);
}

double mean_band_width(const ConfidenceBand& band, std::span<const double> points) {
  if (points.empty() || band.knots.empty()) return 0.0;
  const MonotoneCurve lo(band.knots, band.lower, CurveKind::PiecewiseLinear);
  const MonotoneCurve hi(band.knots, band.upper, CurveKind::PiecewiseLinear);
  double sum = 0.0;
  for (double x : points) sum += hi(x) - lo(x);
  return sum / static_cast<double>(points.size());
}

}  // namespace auctionval
