#pragma once

// Domain types for standing-price auction data, cross-auction pooling, and
// the survival-ratio reparametrization of a CDF on the pooled price grid.
//
// Index conventions: every position stored in PooledData (u, S, Sbar, Ks) is
// 0-based. Counts (l, qsize) are counts and therefore identical to the
// 1-based textbook values.

#include <cstddef>
#include <span>
#include <vector>

namespace auctionval {

// One standing-price change: the new price and the time waited since the
// previous change (or since the auction opened, for the first one).
struct Jump {
  double price;
  double wait;

  bool operator==(const Jump&) const = default;
};

struct AuctionRecord {
  double reserve = 0.0;
  double duration = 0.0;
  std::vector<Jump> jumps;
  bool sold = false;

  std::size_t jump_count() const noexcept { return jumps.size(); }
  // Time spent at the final standing price, τ − Σ waits.
  double tail_time() const noexcept;
  // Time spent at standing price i, where i = 0 is the reserve.
  double time_at(std::size_t i) const noexcept;
  // The standing price after i changes; i = 0 is the reserve.
  double price_at(std::size_t i) const noexcept { return i == 0 ? reserve : jumps[i - 1].price; }
  double final_price() const noexcept { return jumps.empty() ? reserve : jumps.back().price; }
  bool sold_above_reserve() const noexcept { return !jumps.empty(); }

  bool operator==(const AuctionRecord&) const = default;
};

// Unvalidated auction fields as read from a file or produced by a caller.
struct RawAuction {
  double reserve = 0.0;
  double duration = 0.0;
  std::vector<Jump> jumps;
  bool sold = false;
};

// Throws ValidationError listing every violated invariant.
AuctionRecord validate_auction(const RawAuction& candidate);

struct ObservedDataset {
  std::vector<AuctionRecord> auctions;
  double tau = 0.0;

  std::size_t size() const noexcept { return auctions.size(); }
  bool operator==(const ObservedDataset&) const = default;
};

// Checks K >= 1 and a common duration; throws ValidationError.
void validate_dataset(const ObservedDataset& dataset);

// Subset of auctions by index, keeping τ.
ObservedDataset subset(const ObservedDataset& dataset, std::span<const std::size_t> indices);

struct PooledData {
  std::vector<double> xbar;         // non-reserve standing prices, ascending (ℓ)
  std::vector<double> z;            // all standing prices incl. reserves, ascending (ℓ+K)
  std::vector<std::size_t> u;       // xbar[i] == z[u[i]]
  std::vector<std::size_t> S;       // positions in xbar of final prices of auctions sold above reserve
  std::vector<std::size_t> Sbar;    // the same prices located in z
  std::vector<std::size_t> Ks;      // auctions that sold (at or above reserve)
  std::vector<double> tbar;         // time spent at xbar[i]
  std::vector<double> ttilde;       // time spent at z[i]
  std::vector<std::size_t> l;       // l[i] = #{ j : u[j] <= i }
  std::vector<std::size_t> qsize;   // qsize[i] = #{ j in Sbar : j >= i }
  std::vector<double> t0;           // first waiting time of each auction in Ks

  std::size_t ell() const noexcept { return xbar.size(); }
  std::size_t size() const noexcept { return z.size(); }
};

// Throws TieError if two pooled prices coincide.
PooledData pool(const ObservedDataset& dataset);

struct ThetaVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

enum class CurveKind { Step, PiecewiseLinear };

// A CDF estimate tabulated at ascending knots.
//
// Step curves are right-continuous and 0 below the first knot. Piecewise-linear
// curves interpolate between knots. Both are constant beyond the last knot,
// and a piecewise-linear curve is also constant below its first knot.
class MonotoneCurve {
 public:
  MonotoneCurve() = default;
  MonotoneCurve(std::vector<double> knots, std::vector<double> values, CurveKind kind);

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }
  CurveKind kind() const noexcept { return kind_; }
  bool empty() const noexcept { return knots_.empty(); }

  double operator()(double x) const;
  // Limit from the left; differs from operator() only at step-curve knots.
  double left_limit(double x) const;
  double final_value() const noexcept { return values_.empty() ? 0.0 : values_.back(); }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  CurveKind kind_ = CurveKind::Step;
};

// F(z_i) = 1 − Π_{j<=i} θ_j as a step curve on z.
MonotoneCurve theta_to_cdf(const ThetaVector& theta, std::span<const double> z);

// θ_i = (1 − F_i) / (1 − F_{i−1}) with F_0 = 0 and 0/0 := 0.
ThetaVector cdf_to_theta(std::span<const double> values);

// Connects the knot values of a curve with line segments. With anchor_zero the
// curve additionally passes through (0, 0). Knots at the same abscissa are
// merged keeping the larger value.
MonotoneCurve interpolate(const MonotoneCurve& curve, bool anchor_zero);

}  // namespace auctionval
