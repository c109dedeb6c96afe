#include "auctionval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "auctionval/error.hpp"
#include "auctionval/parallel.hpp"
#include "auctionval/rng.hpp"

namespace auctionval {

namespace {

double below(const MonotoneCurve& c) {
  return c.kind() == CurveKind::PiecewiseLinear && !c.empty() ? c.values().front() : 0.0;
}

double above(const MonotoneCurve& c) { return c.final_value(); }

std::vector<double> union_points(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> finite_breakpoints(const ValuationDistribution& d) {
  std::vector<double> out;
  for (double x : d.breakpoints()) {
    if (std::isfinite(x)) out.push_back(x);
  }
  auto [lo, hi] = d.support();
  if (std::isfinite(lo)) out.push_back(lo);
  if (std::isfinite(hi)) out.push_back(hi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

double ks_distance(const MonotoneCurve& a, const MonotoneCurve& b) {
  double d = std::max(std::abs(below(a) - below(b)), std::abs(above(a) - above(b)));
  for (double x : union_points(a.knots(), b.knots())) {
    d = std::max({d, std::abs(a(x) - b(x)), std::abs(a.left_limit(x) - b.left_limit(x))});
  }
  return d;
}

double ks_distance(const MonotoneCurve& a, const ValuationDistribution& truth) {
  std::vector<double> pts = union_points(a.knots(), finite_breakpoints(truth));
  double d = std::max(below(a), std::abs(above(a) - 1.0));
  if (pts.empty()) return d;
  double lo = pts.front();
  double hi = pts.back();
  if (!std::isfinite(truth.support().second)) hi = std::max(hi, truth.quantile(1.0 - 1e-9));
  std::vector<double> grid(1000);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  }
  std::sort(grid.begin(), grid.end());
  pts = union_points(pts, grid);
  for (double x : pts) {
    const double f = truth.cdf(x);
    d = std::max({d, std::abs(a(x) - f), std::abs(a.left_limit(x) - f)});
  }
  return d;
}

double tv_distance(const MonotoneCurve& a, const MonotoneCurve& b) {
  double prev = below(a) - below(b);
  double total = std::abs(prev);
  for (double x : union_points(a.knots(), b.knots())) {
    const double left = a.left_limit(x) - b.left_limit(x);
    const double here = a(x) - b(x);
    // Both curves are linear or constant on the open cell, so the difference
    // is monotone there.
    total += std::abs(left - prev) + std::abs(here - left);
    prev = here;
  }
  total += std::abs(above(a) - above(b));
  return std::min(1.0, 0.5 * total);
}

double tv_distance(const MonotoneCurve& a, const ValuationDistribution& truth) {
  const std::vector<double> pts = union_points(a.knots(), finite_breakpoints(truth));
  const double at_minus_inf = below(a);
  const double at_plus_inf = above(a) - 1.0;
  if (pts.empty()) return 0.5 * (std::abs(at_minus_inf) + 1.0 + std::abs(at_plus_inf));

  auto D = [&](double x) { return a(x) - truth.cdf(x); };
  auto D_left = [&](double x) { return a.left_limit(x) - truth.cdf(x); };

  // Outside [pts.front(), pts.back()] the curve is constant and the truth is
  // monotone, so those pieces are exact.
  double fixed = std::abs(at_minus_inf) + std::abs(D_left(pts.front()) - at_minus_inf) +
                 std::abs(at_plus_inf - D(pts.back())) + std::abs(at_plus_inf);
  for (double x : pts) fixed += std::abs(D(x) - D_left(x));

  auto inner = [&](int level) {
    const std::size_t parts = std::size_t{1} << level;
    double sum = 0.0;
    for (std::size_t c = 0; c + 1 < pts.size(); ++c) {
      const double x0 = pts[c];
      const double x1 = pts[c + 1];
      double prev = D(x0);
      for (std::size_t s = 1; s <= parts; ++s) {
        const double x = s == parts ? x1 : x0 + (x1 - x0) * static_cast<double>(s) / static_cast<double>(parts);
        const double next = s == parts ? D_left(x1) : D(x);
        sum += std::abs(next - prev);
        prev = next;
      }
    }
    return sum;
  };

  // Two quiet levels in a row, so an extremum that a coarse level happens to
  // straddle symmetrically cannot stop the refinement early.
  double last = inner(3);
  int quiet = 0;
  for (int level = 4; level <= 14 && quiet < 2; ++level) {
    const double now = inner(level);
    quiet = std::abs(now - last) < 1e-6 ? quiet + 1 : 0;
    last = now;
  }
  return std::min(1.0, 0.5 * (fixed + last));
}

double tv_distance_binned(const MonotoneCurve& a, const ValuationDistribution& truth, std::size_t bins) {
  if (bins == 0) throw ValidationError("need at least one bin");
  double total = below(a);  // mass the estimate puts at -inf
  double prev_a = below(a), prev_f = 0.0;
  for (std::size_t j = 1; j < bins; ++j) {
    const double p = static_cast<double>(j) / static_cast<double>(bins);
    const double x = truth.quantile(p);
    const double fa = a(x);
    total += std::abs((fa - prev_a) - (p - prev_f));
    prev_a = fa;
    prev_f = p;
  }
  total += std::abs((above(a) - prev_a) - (1.0 - prev_f)) + std::abs(1.0 - above(a));
  return std::min(1.0, 0.5 * total);
}

std::vector<StudyReport> replicate_table(std::span<const StudySetting> settings, std::size_t replicates,
                                         std::uint64_t base_seed, GFunction& g, const FitOptions& options) {
  std::vector<StudyReport> reports;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    const StudySetting& st = settings[s];
    std::vector<std::optional<ReplicateResult>> slots(replicates);
    std::vector<std::string> errors(replicates);
    parallel_for(replicates, [&](std::size_t r) {
      SimConfig config;
      config.lambda = st.lambda;
      config.tau = st.tau;
      config.K = st.K;
      config.reserve = st.reserve;
      config.seed = derive_seed(base_seed, {s, r});
      try {
        const ObservedDataset ds = run_study(config, st.dist);
        const FitResult fr = fit(ds, g, options);
        slots[r] = ReplicateResult{r,
                                   config.seed,
                                   fr.lambda_hat,
                                   ks_distance(fr.f_cmle, st.dist),
                                   ks_distance(fr.initial.continuous, st.dist),
                                   tv_distance(fr.f_cmle, st.dist),
                                   tv_distance(fr.initial.continuous, st.dist),
                                   tv_distance_binned(fr.f_cmle, st.dist),
                                   tv_distance_binned(fr.initial.continuous, st.dist)};
      } catch (const std::exception& e) {
        errors[r] = "replicate " + std::to_string(r) + ": " + e.what();
      }
    });
    StudyReport rep;
    rep.label = st.label;
    rep.replicates = replicates;
    for (std::size_t r = 0; r < replicates; ++r) {
      if (!slots[r]) {
        ++rep.failed;
        rep.errors.push_back(errors[r]);
        continue;
      }
      rep.raw.push_back(*slots[r]);
      rep.ks_mle += slots[r]->ks_mle;
      rep.ks_init += slots[r]->ks_init;
      rep.tv_mle += slots[r]->tv_mle;
      rep.tv_init += slots[r]->tv_init;
      rep.tv_mle_binned += slots[r]->tv_mle_binned;
      rep.tv_init_binned += slots[r]->tv_init_binned;
    }
    if (!rep.raw.empty()) {
      const double n = static_cast<double>(rep.raw.size());
      rep.ks_mle /= n;
      rep.ks_init /= n;
      rep.tv_mle /= n;
      rep.tv_init /= n;
      rep.tv_mle_binned /= n;
      rep.tv_init_binned /= n;
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

TrainTestReport train_test_eval(const ObservedDataset& ds, double train_fraction, std::size_t replications,
                                std::uint64_t seed, GFunction& g, const FitOptions& options) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ValidationError("train fraction must lie in (0, 1]");
  validate_dataset(ds);
  const std::size_t K = ds.size();
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(K)));
  if (train_fraction < 1.0 && (n_train == 0 || n_train >= K)) throw ValidationError("split leaves an empty half");

  std::vector<double> tv_init(replications, std::nan("")), tv_mle(replications, std::nan(""));
  parallel_for(replications, [&](std::size_t r) {
    try {
      ObservedDataset train = ds, test = ds;
      if (train_fraction < 1.0) {
        std::vector<std::size_t> idx(K);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        Rng rng = substream(seed, {r});
        for (std::size_t i = K - 1; i > 0; --i) {
          const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i + 1));
          std::swap(idx[i], idx[std::min(j, i)]);
        }
        std::vector<std::size_t> a(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
        std::vector<std::size_t> b(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        train = subset(ds, a);
        test = subset(ds, b);
      }
      const FitResult ftrain = fit(train, g, options);
      const FitResult ftest = fit(test, g, options);
      tv_init[r] = tv_distance(ftrain.initial.continuous, ftest.f_cmle);
      tv_mle[r] = tv_distance(ftrain.f_cmle, ftest.f_cmle);
    } catch (const std::exception&) {
    }
  });

  TrainTestReport rep;
  rep.train_fraction = train_fraction;
  rep.replications = replications;
  for (std::size_t r = 0; r < replications; ++r) {
    if (std::isnan(tv_init[r])) {
      ++rep.skipped;
      continue;
    }
    rep.tv_init.push_back(tv_init[r]);
    rep.tv_mle.push_back(tv_mle[r]);
  }
  if (!rep.tv_init.empty()) {
    const double n = static_cast<double>(rep.tv_init.size());
    rep.avg_tv_init = std::accumulate(rep.tv_init.begin(), rep.tv_init.end(), 0.0) / n;
    rep.avg_tv_mle = std::accumulate(rep.tv_mle.begin(), rep.tv_mle.end(), 0.0) / n;
  }
  return rep;
}

}  // namespace auctionval
