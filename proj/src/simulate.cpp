#include "auctionval/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "auctionval/error.hpp"
#include "auctionval/parallel.hpp"

namespace auctionval {

BidOutcome standing_price_update(const AuctionState& state, double bid) {
  if (!(bid > state.second)) return {state, false, false};
  AuctionState next{std::max(bid, state.top), std::min(bid, state.top)};
  return {next, true, next.second > state.second};
}

AuctionRecord replay_bids(double reserve, double tau, std::span<const Bid> bids, std::vector<double>* jump_times) {
  AuctionRecord record;
  record.reserve = reserve;
  record.duration = tau;
  AuctionState state = open_auction(reserve);
  double last = 0.0;
  if (jump_times) jump_times->clear();
  for (const Bid& b : bids) {
    const BidOutcome out = standing_price_update(state, b.value);
    state = out.state;
    if (out.jumped) {
      record.jumps.push_back({state.second, b.time - last});
      last = b.time;
      if (jump_times) jump_times->push_back(b.time);
    }
  }
  record.sold = state.top > reserve;
  return record;
}

void validate_config(const SimConfig& c) {
  std::vector<std::string> errors;
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) errors.push_back("lambda must be > 0");
  if (!(c.tau > 0.0) || !std::isfinite(c.tau)) errors.push_back("tau must be > 0");
  if (c.K < 1) errors.push_back("K must be >= 1");
  if (!(c.tie_jitter > 0.0)) errors.push_back("tie jitter must be > 0");
  if (const auto* list = std::get_if<std::vector<double>>(&c.reserve); list && list->size() != c.K) {
    errors.push_back("explicit reserve list must have K entries");
  }
  if (const auto* r = std::get_if<double>(&c.reserve); r && !(*r >= 0.0)) errors.push_back("reserve must be >= 0");
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

AuctionRecord run_auction(double reserve, double lambda, double tau, const ValuationDistribution& dist, Rng& rng,
                          BidTrace* trace) {
  std::vector<Bid> bids;
  for (double t = exponential(rng, lambda); t <= tau; t += exponential(rng, lambda)) {
    bids.push_back({t, dist.sample(rng)});
  }
  if (!trace) return replay_bids(reserve, tau, bids);
  trace->reserve = reserve;
  AuctionRecord record = replay_bids(reserve, tau, bids, &trace->jump_times);
  trace->bids = std::move(bids);
  return record;
}

namespace {

std::vector<double> draw_reserves(const SimConfig& c) {
  std::vector<double> reserves(c.K);
  if (const auto* r = std::get_if<double>(&c.reserve)) {
    std::fill(reserves.begin(), reserves.end(), *r);
  } else if (const auto* d = std::get_if<ValuationDistribution>(&c.reserve)) {
    for (std::size_t k = 0; k < c.K; ++k) {
      Rng rng = substream(c.seed, {k, 0});
      reserves[k] = d->sample(rng);
    }
  } else {
    reserves = std::get<std::vector<double>>(c.reserve);
  }
  std::vector<double> sorted = reserves;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    for (std::size_t k = 0; k < c.K; ++k) {
      Rng rng = substream(c.seed, {k, 1});
      reserves[k] += uniform(rng, 0.0, c.tie_jitter);
    }
  }
  return reserves;
}

// Auctions owning a non-reserve price that coincides with another pooled price.
std::vector<std::size_t> tied_auctions(const ObservedDataset& ds) {
  struct Entry {
    double price;
    std::size_t auction;
    bool reserve;
  };
  std::vector<Entry> entries;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    entries.push_back({ds.auctions[k].reserve, k, true});
    for (const auto& j : ds.auctions[k].jumps) entries.push_back({j.price, k, false});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.price < b.price; });
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].price != entries[i - 1].price) continue;
    if (!entries[i].reserve) {
      out.push_back(entries[i].auction);
    } else if (!entries[i - 1].reserve) {
      out.push_back(entries[i - 1].auction);
    } else {
      throw TieError(entries[i].price);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ObservedDataset run_study(const SimConfig& config, const ValuationDistribution& dist, std::vector<BidTrace>* traces) {
  validate_config(config);
  const std::vector<double> reserves = draw_reserves(config);
  ObservedDataset ds;
  ds.tau = config.tau;
  ds.auctions.resize(config.K);
  if (traces) traces->assign(config.K, BidTrace{});
  parallel_for(config.K, [&](std::size_t k) {
    Rng rng = substream(config.seed, {k, 2});
    ds.auctions[k] = run_auction(reserves[k], config.lambda, config.tau, dist, rng, traces ? &(*traces)[k] : nullptr);
  });
  for (std::uint64_t attempt = 1;; ++attempt) {
    const auto tied = tied_auctions(ds);
    if (tied.empty()) break;
    if (attempt > 100) throw NumericalError("could not resolve tied prices by re-simulation");
    for (std::size_t k : tied) {
      Rng rng = substream(config.seed, {k, 2, attempt});
      ds.auctions[k] = run_auction(reserves[k], config.lambda, config.tau, dist, rng, traces ? &(*traces)[k] : nullptr);
    }
  }
  return ds;
}

}  // namespace auctionval
