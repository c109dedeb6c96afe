#include <gtest/gtest.h>

#include <sstream>

#include "auctionval/distribution.hpp"
#include "auctionval/error.hpp"
#include "auctionval/ingest.hpp"
#include "auctionval/simulate.hpp"
#include "helpers.hpp"

using namespace auctionval;

namespace {

const char* kHeader = "auctionid,bid,bidtime,bidder,bidderrate,openbid,price\n";

IngestOptions exact(double duration) {
  IngestOptions o;
  o.duration = duration;
  o.noise = 0.0;
  o.reserve_jitter = 0.0;
  return o;
}

IngestResult ingest_text(const std::string& body, const IngestOptions& o) {
  std::istringstream in(kHeader + body);
  const auto rows = read_bid_csv(in);
  return ingest_bid_rows(rows, o);
}

}  // namespace

TEST(Ingest, SimulatorTraceRoundTrip) {
  for (std::uint64_t seed : {1, 2, 3}) {
    SimConfig c;
    c.K = 40;
    c.tau = 7;
    c.lambda = 2;
    c.seed = seed;
    std::vector<BidTrace> traces;
    const auto ds = run_study(c, ValuationDistribution::parse("uniform:1,20"), &traces);
    std::stringstream csv;
    write_bid_trace(traces, ds, csv);
    const auto rows = read_bid_csv(csv);
    const auto res = ingest_bid_rows(rows, exact(7));
    EXPECT_EQ(res.dataset, ds);
    EXPECT_EQ(res.report.auctions, 40u);
    EXPECT_EQ(res.report.removed_rows, 0u);
  }
}

TEST(Ingest, IncreasingBidsReconstructJumps) {
  Rng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const auto m = 1 + static_cast<std::size_t>(uniform01(rng) * 6);
    const double open = uniform(rng, 0, 5);
    double bid = open, t = 0;
    std::vector<double> bids, times;
    std::string body;
    for (std::size_t i = 0; i < m; ++i) {
      bid += uniform(rng, 0.5, 3);
      t += uniform(rng, 0.01, 1);
      bids.push_back(bid);
      times.push_back(t);
      body += "1," + std::to_string(bid) + "," + std::to_string(t) + ",u" + std::to_string(i) + ",0," +
              std::to_string(open) + ",0\n";
    }
    const auto res = ingest_text(body, exact(7));
    const auto& a = res.dataset.auctions.at(0);
    ASSERT_EQ(a.jump_count(), m - 1);
    EXPECT_TRUE(a.sold);
    double prev = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      EXPECT_NEAR(a.jumps[i].price, bids[i], 1e-6);
      EXPECT_NEAR(a.jumps[i].wait, times[i + 1] - prev, 1e-6);
      prev = times[i + 1];
    }
  }
}

TEST(Ingest, SingleBidSellsAtReserve) {
  const auto res = ingest_text("7,12,1.5,alice,3,10,10\n", exact(7));
  const auto& a = res.dataset.auctions.at(0);
  EXPECT_EQ(a.jump_count(), 0u);
  EXPECT_TRUE(a.sold);
  EXPECT_EQ(a.reserve, 10.0);
}

TEST(Ingest, NoBidsIsUnsold) {
  const auto res = ingest_text("8,,,,0,10,10\n", exact(7));
  EXPECT_FALSE(res.dataset.auctions.at(0).sold);
}

TEST(Ingest, KeepsLatestBidPerBidder) {
  // bob raises from 11 to 14; only the later bid counts.
  const auto res = ingest_text(
      "1,11,1,bob,0,10,13\n"
      "1,13,2,carol,0,10,13\n"
      "1,14,3,bob,0,10,13\n",
      exact(7));
  EXPECT_EQ(res.report.bidders, 2u);
  EXPECT_EQ(res.report.multi_bid_bidders, 1u);
  EXPECT_EQ(res.report.removed_rows, 1u);
  const auto& a = res.dataset.auctions.at(0);
  ASSERT_EQ(a.jump_count(), 1u);
  EXPECT_EQ(a.jumps[0].price, 13.0);
  EXPECT_EQ(a.jumps[0].wait, 3.0);
  EXPECT_TRUE(res.report.anomalies.empty());
}

TEST(Ingest, ErrorsCarryLineNumbers) {
  std::istringstream in(std::string(kHeader) + "1,12,1,a,0,10,10\n1,abc,1,a,0,10,10\n1,2,3\n");
  try {
    read_bid_csv(in);
    FAIL();
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 2u);
    EXPECT_NE(e.violations()[0].find("line 3"), std::string::npos);
    EXPECT_NE(e.violations()[1].find("line 4"), std::string::npos);
  }
  try {
    ingest_text("1,12,1,a,0,10,10\n1,13,1,a,0,10,10\n2,12,9,b,0,10,10\n", exact(7));
    FAIL();
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 2u);
    EXPECT_NE(e.violations()[0].find("line 3"), std::string::npos);
    EXPECT_NE(e.violations()[1].find("line 4"), std::string::npos);
  }
  std::istringstream missing("auctionid,bid\n");
  EXPECT_THROW(read_bid_csv(missing), ValidationError);
}

TEST(Ingest, QuotedFieldsAndColumnOrder) {
  std::istringstream in("price,openbid,bidderrate,bidder,bidtime,bid,auctionid\n13,10,0,\"x,y\",1,12,\"5\"\n");
  const auto rows = read_bid_csv(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].bidder, "x,y");
  EXPECT_EQ(rows[0].auctionid, "5");
  EXPECT_EQ(rows[0].bid, 12.0);
}

TEST(Ingest, CleaningReportFlags) {
  IngestOptions o = exact(7);
  o.reserve_jitter = 1e-3;
  const auto res = ingest_text(
      "1,10.005,1,a,0,10,10\n"
      "2,15,1,b,0,10,10\n"
      "2,16,2,c,0,10,99\n",
      o);
  EXPECT_EQ(res.report.jittered_reserves, 2u);
  EXPECT_NE(res.dataset.auctions[0].reserve, res.dataset.auctions[1].reserve);
  bool near_tie = false, price_mismatch = false;
  for (const auto& a : res.report.anomalies) {
    near_tie |= a.find("closer than 0.01") != std::string::npos;
    price_mismatch |= a.find("differs from recorded price") != std::string::npos;
  }
  EXPECT_TRUE(near_tie);
  EXPECT_TRUE(price_mismatch);
}

TEST(Ingest, DeterministicBySeed) {
  const std::string body = "1,12,1,a,0,10,13\n1,13,2,b,0,10,13\n2,20,3,c,0,5,5\n";
  IngestOptions o;
  o.seed = 4;
  const auto a = ingest_text(body, o);
  const auto b = ingest_text(body, o);
  EXPECT_EQ(a.dataset, b.dataset);
  o.seed = 5;
  EXPECT_NE(ingest_text(body, o).dataset, a.dataset);
}

TEST(Ingest, NumericIdsSortNumerically) {
  const auto res = ingest_text("10,,,,0,1,1\n9,,,,0,2,2\n100,,,,0,3,3\n", exact(7));
  EXPECT_EQ(res.auction_ids, (std::vector<std::string>{"9", "10", "100"}));
}

TEST(Dataset, ExportImportRoundTrip) {
  const auto ds = testutil::worked_example();
  std::stringstream s;
  const std::vector<std::string> comments{"seed=1"};
  export_dataset(ds, s, comments);
  const std::string text = s.str();
  EXPECT_EQ(text.rfind("# seed=1\n", 0), 0u);
  std::size_t auctions = 0, jumps = 0;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    auctions += line.rfind("auction,", 0) == 0;
    jumps += line.rfind("jump,", 0) == 0;
  }
  EXPECT_EQ(auctions, 4u);
  EXPECT_EQ(jumps, 7u);
  EXPECT_EQ(import_dataset(s), ds);
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const auto r = testutil::random_dataset(rng, 5, 4);
    std::stringstream t;
    export_dataset(r, t);
    EXPECT_EQ(import_dataset(t), r);
  }
}

TEST(Dataset, ImportRejectsBadInput) {
  std::istringstream empty("");
  EXPECT_THROW(import_dataset(empty), ValidationError);
  std::istringstream bad("auction,0,10,5,1\njump,0,9,1\n");
  EXPECT_THROW(import_dataset(bad), ValidationError);
}
