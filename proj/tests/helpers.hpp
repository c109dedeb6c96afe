#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "auctionval/mle.hpp"
#include "auctionval/model.hpp"
#include "auctionval/rng.hpp"

namespace testutil {

using namespace auctionval;

// K = 4, reserves (10, 5, 13, 7): two auctions sold above the reserve, one at
// the reserve, one unsold.
inline ObservedDataset worked_example() {
  ObservedDataset ds;
  ds.tau = 10.0;
  ds.auctions.push_back({10.0, 10.0, {{12, 1.0}, {15, 2.0}, {19, 3.0}}, true});
  ds.auctions.push_back({5.0, 10.0, {{16, 0.5}, {18, 1.5}, {20, 2.5}, {25, 1.0}}, true});
  ds.auctions.push_back({13.0, 10.0, {}, true});
  ds.auctions.push_back({7.0, 10.0, {}, false});
  return ds;
}

// Small dataset with distinct prices on a fine lattice. Auctions with jumps
// are sold; the others are sold at the reserve with probability 1/2.
inline ObservedDataset random_dataset(Rng& rng, std::size_t K, std::size_t max_jumps, double tau = 10.0) {
  ObservedDataset ds;
  ds.tau = tau;
  std::vector<double> used;
  auto fresh = [&](double lo, double hi) {
    for (;;) {
      const double v = std::round(uniform(rng, lo, hi) * 1000.0) / 1000.0;
      if (v > lo && std::find(used.begin(), used.end(), v) == used.end()) {
        used.push_back(v);
        return v;
      }
    }
  };
  for (std::size_t k = 0; k < K; ++k) {
    AuctionRecord a;
    a.duration = tau;
    a.reserve = fresh(0.0, 5.0);
    const auto m = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(max_jumps + 1));
    double price = a.reserve, left = tau;
    for (std::size_t i = 0; i < m; ++i) {
      price = fresh(price, price + 3.0);
      const double w = uniform(rng, 0.05, left / 2.0);
      left -= w;
      a.jumps.push_back({price, w});
    }
    a.sold = m > 0 || uniform01(rng) < 0.5;
    ds.auctions.push_back(a);
  }
  return ds;
}

inline double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

// The log-likelihood written term by term, without the l_i / Q_i bookkeeping.
inline double naive_log_lik(const ThetaVector& th, const PooledData& p, double lambda) {
  const std::size_t n = p.size();
  double out = 0.0;
  for (std::size_t i : p.Sbar) {
    for (std::size_t j = 0; j <= i; ++j) out += safe_log(th[j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j <= i; ++j) prod *= th[j];
    out -= lambda * p.ttilde[i] * prod;
  }
  for (std::size_t u : p.u) {
    out += safe_log(1.0 - th[u]);
    for (std::size_t j = 0; j < u; ++j) out += safe_log(th[j]);
  }
  return out;
}

inline double naive_A(const ThetaVector& th, std::size_t i, const PooledData& p, double lambda) {
  double out = 0.0;
  for (std::size_t k = i; k < p.size(); ++k) {
    double prod = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j != i) prod *= th[j];
    }
    out += p.ttilde[k] * prod;
  }
  return lambda * out;
}

// Random θ strictly inside (0, 1).
inline ThetaVector random_theta(Rng& rng, std::size_t n) {
  ThetaVector th;
  for (std::size_t i = 0; i < n; ++i) th.values.push_back(uniform(rng, 0.05, 0.95));
  return th;
}

}  // namespace testutil
