#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "auctionval/distribution.hpp"
#include "auctionval/model.hpp"
#include "auctionval/rng.hpp"

namespace auctionval {

// The reserve counts as a placed bid, so an auction opens with top = second =
// reserve. The standing price is the running second maximum of the reserve and
// all placed bids.
struct AuctionState {
  double top = 0.0;
  double second = 0.0;
};

inline AuctionState open_auction(double reserve) { return {reserve, reserve}; }

struct BidOutcome {
  AuctionState state;
  bool placed = false;  // bid exceeded the standing price
  bool jumped = false;  // standing price strictly increased
};

BidOutcome standing_price_update(const AuctionState& state, double bid);

struct Bid {
  double time;
  double value;
};

struct BidTrace {
  double reserve = 0.0;
  std::vector<Bid> bids;
  std::vector<double> jump_times;  // absolute times of standing-price changes
};

// Replays bids in the given order (times ascending, within [0, tau]) starting
// from the reserve. Waits are differences of consecutive jump times. When
// jump_times is non-null it receives the absolute jump times.
AuctionRecord replay_bids(double reserve, double tau, std::span<const Bid> bids,
                          std::vector<double>* jump_times = nullptr);

// Constant reserve, a reserve distribution, or an explicit per-auction list
// whose length must equal K.
using ReservePolicy = std::variant<double, ValuationDistribution, std::vector<double>>;

struct SimConfig {
  double lambda = 1.0;
  double tau = 100.0;
  std::size_t K = 100;
  std::uint64_t seed = 0;
  ReservePolicy reserve = 0.0;
  // Width of the Uniform(0, w) noise added to every reserve when two
  // reserves coincide.
  double tie_jitter = 0.01;
};

void validate_config(const SimConfig& config);

// One auction: exponential(lambda) inter-arrival times, one bid per arrival.
AuctionRecord run_auction(double reserve, double lambda, double tau, const ValuationDistribution& dist,
                          Rng& rng, BidTrace* trace = nullptr);

// K auctions on per-auction substreams of config.seed. The result has no
// pooled ties. When traces is non-null it receives one trace per auction.
ObservedDataset run_study(const SimConfig& config, const ValuationDistribution& dist,
                          std::vector<BidTrace>* traces = nullptr);

}  // namespace auctionval
