#include "auctionval/initial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "auctionval/error.hpp"

namespace auctionval {

LowReserveSelection select_low_reserve(const ObservedDataset& ds, double q, double epsilon) {
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("q must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  const double need = q * static_cast<double>(ds.size());
  // The count of reserves in the window only grows when the centre reaches
  // r - epsilon for some reserve r, so those points (and 0) are the candidates.
  std::vector<double> candidates{0.0};
  for (const auto& a : ds.auctions) candidates.push_back(std::max(0.0, a.reserve - epsilon));
  std::sort(candidates.begin(), candidates.end());
  for (double centre : candidates) {
    LowReserveSelection sel{centre, q, epsilon, {}};
    for (std::size_t k = 0; k < ds.size(); ++k) {
      // Written as reserve - epsilon <= centre so the candidate r - epsilon
      // always covers r despite rounding.
      const double r = ds.auctions[k].reserve;
      if (r - epsilon <= centre && centre <= r + epsilon) sel.V.push_back(k);
    }
    if (static_cast<double>(sel.V.size()) >= need) return sel;
  }
  throw ValidationError("no reserve window of half-width epsilon holds a q-fraction of the auctions");
}

LowReserveSelection select_below_threshold(const ObservedDataset& ds, double threshold) {
  LowReserveSelection sel;
  sel.epsilon = threshold;
  sel.r_min = threshold;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    if (ds.auctions[k].reserve < threshold) {
      sel.V.push_back(k);
      sel.r_min = std::min(sel.r_min, ds.auctions[k].reserve);
    }
  }
  if (sel.V.empty()) throw ValidationError("no auction has a reserve below the threshold");
  sel.q = static_cast<double>(sel.V.size()) / static_cast<double>(ds.size());
  return sel;
}

double g_lambda_cdf(double eta, double lambda_r, double tau) {
  const double a = lambda_r * tau;
  if (!(a > 0.0)) throw ValidationError("lambda_r * tau must be > 0");
  eta = std::clamp(eta, 0.0, 1.0);
  // Multiplied through by exp(-a) so nothing overflows for large a.
  const double tail = std::exp(-a * (1.0 - eta));
  const double all = std::exp(-a);
  const double num = a * (1.0 - eta) * (tail - all) + tail - (a * eta + 1.0) * all;
  const double den = 1.0 - (a + 1.0) * all;
  return std::clamp(num / den, 0.0, 1.0);
}

double g_lambda_inverse(double p, double lambda_r, double tau) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (g_lambda_cdf(mid, lambda_r, tau) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Distinct sorted values and their empirical CDF.
std::pair<std::vector<double>, std::vector<double>> ecdf(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> knots, values;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;
    knots.push_back(xs[i]);
    values.push_back(static_cast<double>(i + 1) / n);
  }
  values.back() = 1.0;
  return {knots, values};
}

}  // namespace

MonotoneCurve estimate_f_sp(const ObservedDataset& ds, const LowReserveSelection& sel, double lambda_hat) {
  std::vector<double> finals;
  for (std::size_t k : sel.V) {
    if (ds.auctions.at(k).sold_above_reserve()) finals.push_back(ds.auctions[k].final_price());
  }
  if (finals.empty()) throw ValidationError("no low-reserve auction sold above its reserve; relax q/epsilon");
  auto [knots, values] = ecdf(std::move(finals));
  for (auto& v : values) v = g_lambda_inverse(v, lambda_hat, ds.tau);
  return MonotoneCurve(std::move(knots), std::move(values), CurveKind::Step);
}

MonotoneCurve estimate_f_fp(const ObservedDataset& ds, const LowReserveSelection& sel) {
  std::vector<double> firsts;
  for (std::size_t k : sel.V) {
    if (ds.auctions.at(k).sold_above_reserve()) firsts.push_back(ds.auctions[k].jumps.front().price);
  }
  if (firsts.empty()) throw ValidationError("no low-reserve auction has a standing-price change; relax q/epsilon");
  auto [knots, values] = ecdf(std::move(firsts));
  for (auto& v : values) v = 1.0 - std::sqrt(1.0 - v);
  return MonotoneCurve(std::move(knots), std::move(values), CurveKind::Step);
}

SpliceAnchors splice_anchors(const MonotoneCurve& f_fp, const MonotoneCurve& f_sp) {
  if (f_fp.empty() || f_sp.empty()) throw ValidationError("splice needs non-empty curves");
  SpliceAnchors a;
  a.p1 = f_fp.knots().back();
  a.p2 = f_sp.knots().front();
  // Ending the bridge at p1 alone would pin it to F_SP(p1) = 0 whenever every
  // first price lies below every final price.
  a.end = std::max(a.p1, a.p2);
  const double v = f_sp(a.end);
  const double m = std::min(a.p1, a.p2);
  if (f_fp(m) <= v) {
    a.c = m;
    a.c_value = f_fp(m);
    return a;
  }
  // F_FP jumps above v at some knot k <= m; below k it stays <= v, so the
  // supremum of admissible points is k, approached from the left.
  const auto& knots = f_fp.knots();
  const auto& values = f_fp.values();
  std::size_t k = 0;
  while (values[k] <= v) ++k;
  a.c = knots[k];
  a.c_value = f_fp.left_limit(a.c);
  return a;
}

InitialEstimate combine_initial(const MonotoneCurve& f_fp, const MonotoneCurve& f_sp, const SpliceAnchors& anchors) {
  std::vector<double> knots, values;
  for (std::size_t i = 0; i < f_fp.knots().size() && f_fp.knots()[i] < anchors.c; ++i) {
    knots.push_back(f_fp.knots()[i]);
    values.push_back(f_fp.values()[i]);
  }
  const double v = f_sp(anchors.end);
  knots.push_back(anchors.c);
  values.push_back(anchors.c_value);
  if (anchors.end > anchors.c) {
    knots.push_back(anchors.end);
    values.push_back(v);
  } else {
    values.back() = std::max(values.back(), v);
  }
  for (std::size_t i = 0; i < f_sp.knots().size(); ++i) {
    if (f_sp.knots()[i] <= anchors.end) continue;
    knots.push_back(f_sp.knots()[i]);
    values.push_back(f_sp.values()[i]);
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1]) throw NumericalError("initial estimate is not monotone; splice anchors are inconsistent");
  }
  InitialEstimate out;
  out.step = MonotoneCurve(std::move(knots), std::move(values), CurveKind::Step);
  out.continuous = interpolate(out.step, true);
  out.anchors = anchors;
  return out;
}

ThetaVector initial_theta(const MonotoneCurve& f_init, std::span<const double> z) {
  std::vector<double> values(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) values[i] = f_init(z[i]);
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);
  return cdf_to_theta(values);
}

}  // namespace auctionval
