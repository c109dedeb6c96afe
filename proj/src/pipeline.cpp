#include "auctionval/pipeline.hpp"

#include <algorithm>
#include <vector>

#include "auctionval/error.hpp"

namespace auctionval {

double default_epsilon(const ObservedDataset& ds) {
  std::vector<double> finals;
  for (const auto& a : ds.auctions) {
    if (a.sold) finals.push_back(a.final_price());
  }
  if (finals.empty()) return 0.01;
  const auto mid = finals.begin() + static_cast<std::ptrdiff_t>((finals.size() - 1) / 2);
  std::nth_element(finals.begin(), mid, finals.end());
  return std::max(0.01, 0.01 * *mid);
}

LowReserveSelection select_low_reserve(const ObservedDataset& ds, const FitOptions& o) {
  if (o.reserve_threshold) return select_below_threshold(ds, *o.reserve_threshold);
  return select_low_reserve(ds, o.q, o.epsilon.value_or(default_epsilon(ds)));
}

FitResult fit(const ObservedDataset& ds, GFunction& g, const FitOptions& o) {
  validate_dataset(ds);
  FitResult r;
  r.selection = select_low_reserve(ds, o);
  r.lambda_hat = estimate_lambda(ds, g, r.selection.V);
  if (!(r.lambda_hat > 0.0)) throw NumericalError("estimated arrival rate is zero; no low-reserve auction has a jump");
  r.f_sp = estimate_f_sp(ds, r.selection, r.lambda_hat);
  r.f_fp = estimate_f_fp(ds, r.selection);
  r.initial = combine_initial(r.f_fp, r.f_sp, splice_anchors(r.f_fp, r.f_sp));
  r.pooled = pool(ds);
  r.theta0 = project_feasible(initial_theta(r.initial.continuous, r.pooled.z), r.pooled, o.feasibility_floor);

  LikelihoodContext ctx{r.pooled, r.lambda_hat};
  AscentOptions ao{o.tol, o.max_sweeps, true, o.check_updates};
  r.run = coordinate_ascent(ctx, r.theta0, ao);
  r.f_cmle = reconstruct_cdf(r.run.theta, r.pooled.z);
  if (o.unconstrained_too) {
    ao.constrained = false;
    r.run_unconstrained = coordinate_ascent(ctx, r.theta0, ao);
    r.f_mle = reconstruct_cdf(r.run_unconstrained->theta, r.pooled.z);
  }
  return r;
}

}  // namespace auctionval
