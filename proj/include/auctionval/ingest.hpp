#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "auctionval/model.hpp"
#include "auctionval/simulate.hpp"

namespace auctionval {

// One row of an eBay-style bid log. A row with an empty bid field stands for
// an auction that received no bids.
struct BidRow {
  std::string auctionid;
  bool has_bid = true;
  double bid = 0.0;
  double bidtime = 0.0;
  std::string bidder;
  double bidderrate = 0.0;
  double openbid = 0.0;
  double price = 0.0;
  std::size_t line = 0;  // 1-based line in the source file
};

// Expects the header auctionid,bid,bidtime,bidder,bidderrate,openbid,price (any
// column order). Throws ValidationError naming the line of every bad field.
std::vector<BidRow> read_bid_csv(std::istream& in);

struct IngestOptions {
  double duration = 7.0;
  std::uint64_t seed = 0;
  double noise = 0.01;           // Uniform(0, noise) added to every retained bid
  double reserve_jitter = 1e-3;  // Uniform(0, w) added to openbids shared by several auctions
};

struct CleaningReport {
  std::size_t rows = 0;
  std::size_t auctions = 0;
  std::size_t bidders = 0;            // distinct (auction, bidder) pairs
  std::size_t multi_bid_bidders = 0;  // pairs with more than one row
  std::size_t removed_rows = 0;
  std::size_t jittered_reserves = 0;
  std::vector<std::string> anomalies;
};

struct IngestResult {
  ObservedDataset dataset;
  std::vector<std::string> auction_ids;  // dataset.auctions[k] came from auction_ids[k]
  CleaningReport report;
};

// Per auction: sort by bidtime, keep each bidder's latest row, add noise, and
// replay the bids from openbid. Auctions are ordered by id (numerically when
// every id is a number).
IngestResult ingest_bid_rows(std::span<const BidRow> rows, const IngestOptions& options);
IngestResult ingest_bid_csv(const std::filesystem::path& path, const IngestOptions& options);

void write_report(const CleaningReport& report, std::ostream& out);

// Canonical dataset text: "auction,k,reserve,tau,sold" rows, each followed by
// its "jump,k,price,wait" rows. Lines starting with '#' are comments.
void export_dataset(const ObservedDataset& dataset, std::ostream& out, std::span<const std::string> comments = {});
void export_dataset(const ObservedDataset& dataset, const std::filesystem::path& path,
                    std::span<const std::string> comments = {});
ObservedDataset import_dataset(std::istream& in);
ObservedDataset import_dataset(const std::filesystem::path& path);

// Simulator traces as a bid log: auction k is "k+1", bidder j is "b<k+1>_<j+1>",
// openbid is the reserve and price the final standing price.
void write_bid_trace(std::span<const BidTrace> traces, const ObservedDataset& dataset, std::ostream& out);

}  // namespace auctionval
