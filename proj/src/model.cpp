#include "auctionval/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "auctionval/error.hpp"

namespace auctionval {

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::string msg = "validation failed:";
        for (const auto& v : violations) msg += " [" + v + "]";
        return msg;
      }()),
      violations_(std::move(violations)) {}

ValidationError::ValidationError(const std::string& what)
    : std::runtime_error(what), violations_{what} {}

TieError::TieError(double value)
    : ValidationError([&] {
        std::ostringstream os;
        os.precision(17);
        os << "tie among pooled prices at " << value << "; jitter prices before pooling";
        return os.str();
      }()),
      value_(value) {}

double AuctionRecord::tail_time() const noexcept {
  double used = 0.0;
  for (const auto& j : jumps) used += j.wait;
  return std::max(0.0, duration - used);
}

double AuctionRecord::time_at(std::size_t i) const noexcept {
  return i < jumps.size() ? jumps[i].wait : tail_time();
}

namespace {

// Waits are differences of event times, so their sum can overshoot the
// duration by rounding.
constexpr double kDurationSlack = 1e-12;

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (" << value << ")";
  return os.str();
}

}  // namespace

AuctionRecord validate_auction(const RawAuction& c) {
  std::vector<std::string> errors;
  if (!std::isfinite(c.reserve) || c.reserve < 0.0) errors.push_back(describe("reserve must be finite and >= 0", c.reserve));
  if (!std::isfinite(c.duration) || c.duration <= 0.0) errors.push_back(describe("duration must be finite and > 0", c.duration));

  double previous = c.reserve;
  double used = 0.0;
  for (std::size_t i = 0; i < c.jumps.size(); ++i) {
    const auto& j = c.jumps[i];
    if (!std::isfinite(j.price) || !(j.price > previous)) {
      errors.push_back(describe(i == 0 ? "first standing price must exceed the reserve"
                                       : "standing prices must strictly increase",
                                j.price));
    }
    if (!std::isfinite(j.wait) || !(j.wait > 0.0)) errors.push_back(describe("waiting times must be > 0", j.wait));
    previous = j.price;
    used += j.wait;
  }
  if (used > c.duration * (1.0 + kDurationSlack)) errors.push_back(describe("waiting times exceed the duration", used));
  if (!c.jumps.empty() && !c.sold) errors.push_back("an auction with standing-price changes must be sold");

  if (!errors.empty()) throw ValidationError(std::move(errors));
  return AuctionRecord{c.reserve, c.duration, c.jumps, c.sold};
}

void validate_dataset(const ObservedDataset& dataset) {
  std::vector<std::string> errors;
  if (dataset.auctions.empty()) errors.push_back("dataset must contain at least one auction");
  if (!(dataset.tau > 0.0)) errors.push_back(describe("duration must be > 0", dataset.tau));
  for (std::size_t k = 0; k < dataset.auctions.size(); ++k) {
    if (dataset.auctions[k].duration != dataset.tau) {
      errors.push_back("auction " + std::to_string(k) + " has a duration different from the dataset's");
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

ObservedDataset subset(const ObservedDataset& dataset, std::span<const std::size_t> indices) {
  ObservedDataset out;
  out.tau = dataset.tau;
  out.auctions.reserve(indices.size());
  for (std::size_t k : indices) out.auctions.push_back(dataset.auctions.at(k));
  return out;
}

PooledData pool(const ObservedDataset& dataset) {
  validate_dataset(dataset);

  struct Entry {
    double price;
    double time;
    std::size_t auction;
    std::size_t index;  // 0 = reserve
  };
  std::vector<Entry> entries;
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    const auto& a = dataset.auctions[k];
    for (std::size_t i = 0; i <= a.jump_count(); ++i) entries.push_back({a.price_at(i), a.time_at(i), k, i});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.price < b.price; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].price == entries[i - 1].price) throw TieError(entries[i].price);
  }

  PooledData p;
  const std::size_t n = entries.size();
  p.z.reserve(n);
  p.ttilde.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = entries[i];
    const auto& a = dataset.auctions[e.auction];
    p.z.push_back(e.price);
    p.ttilde.push_back(e.time);
    if (e.index > 0) {
      if (e.index == a.jump_count()) {
        p.S.push_back(p.xbar.size());
        p.Sbar.push_back(i);
      }
      p.u.push_back(i);
      p.xbar.push_back(e.price);
      p.tbar.push_back(e.time);
    }
  }

  for (std::size_t k = 0; k < dataset.size(); ++k) {
    const auto& a = dataset.auctions[k];
    if (a.sold) {
      p.Ks.push_back(k);
      p.t0.push_back(a.time_at(0));
    }
  }

  p.l.assign(n, 0);
  p.qsize.assign(n, 0);
  std::size_t below = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (below < p.u.size() && p.u[below] <= i) ++below;
    p.l[i] = below;
  }
  std::size_t above = 0;
  auto s = p.Sbar.rbegin();
  for (std::size_t i = n; i-- > 0;) {
    while (s != p.Sbar.rend() && *s >= i) {
      ++above;
      ++s;
    }
    p.qsize[i] = above;
  }
  return p;
}

MonotoneCurve::MonotoneCurve(std::vector<double> knots, std::vector<double> values, CurveKind kind)
    : knots_(std::move(knots)), values_(std::move(values)), kind_(kind) {
  std::vector<std::string> errors;
  if (knots_.size() != values_.size()) errors.push_back("knots and values differ in length");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) errors.push_back(describe("curve value outside [0, 1]", values_[i]));
    if (i > 0 && values_[i] < values_[i - 1]) errors.push_back(describe("curve values must be non-decreasing", values_[i]));
    if (i > 0 && knots_[i] < knots_[i - 1]) errors.push_back(describe("knots must be ascending", knots_[i]));
    if (i > 0 && kind_ == CurveKind::PiecewiseLinear && knots_[i] == knots_[i - 1]) {
      errors.push_back(describe("piecewise-linear knots must be distinct", knots_[i]));
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

double MonotoneCurve::operator()(double x) const {
  if (knots_.empty()) return 0.0;
  if (kind_ == CurveKind::Step) {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    if (it == knots_.begin()) return 0.0;
    return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
  }
  if (x <= knots_.front()) return values_.front();
  if (x >= knots_.back()) return values_.back();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

double MonotoneCurve::left_limit(double x) const {
  if (kind_ == CurveKind::PiecewiseLinear) return (*this)(x);
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

MonotoneCurve theta_to_cdf(const ThetaVector& theta, std::span<const double> z) {
  if (theta.size() != z.size()) throw ValidationError("theta and z differ in length");
  std::vector<double> values(z.size());
  double survival = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    survival *= theta[i];
    values[i] = std::clamp(1.0 - survival, 0.0, 1.0);
  }
  // Rounding in the running product can break monotonicity by an ulp.
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);
  return MonotoneCurve({z.begin(), z.end()}, std::move(values), CurveKind::Step);
}

ThetaVector cdf_to_theta(std::span<const double> values) {
  ThetaVector theta;
  theta.values.resize(values.size());
  double previous = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double survival = 1.0 - values[i];
    theta[i] = previous > 0.0 ? std::clamp(survival / previous, 0.0, 1.0) : 0.0;
    previous = survival;
  }
  return theta;
}

MonotoneCurve interpolate(const MonotoneCurve& curve, bool anchor_zero) {
  std::vector<double> knots;
  std::vector<double> values;
  knots.reserve(curve.knots().size() + 1);
  values.reserve(curve.knots().size() + 1);
  if (anchor_zero && (curve.empty() || curve.knots().front() > 0.0)) {
    knots.push_back(0.0);
    values.push_back(0.0);
  }
  for (std::size_t i = 0; i < curve.knots().size(); ++i) {
    const double x = curve.knots()[i];
    const double v = curve.values()[i];
    if (!knots.empty() && x == knots.back()) {
      values.back() = std::max(values.back(), v);
    } else {
      knots.push_back(x);
      values.push_back(v);
    }
  }
  return MonotoneCurve(std::move(knots), std::move(values), CurveKind::PiecewiseLinear);
}

}  // namespace auctionval
