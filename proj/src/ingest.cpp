#include "auctionval/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "auctionval/error.hpp"
#include "auctionval/format.hpp"
#include "auctionval/rng.hpp"

namespace auctionval {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

std::vector<BidRow> read_bid_csv(std::istream& in) {
  static const std::vector<std::string> kColumns{"auctionid", "bid",        "bidtime", "bidder",
                                                 "bidderrate", "openbid", "price"};
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> col(kColumns.size(), SIZE_MAX);
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '#') continue;
    auto header = split_csv(line);
    for (std::size_t j = 0; j < header.size(); ++j) {
      std::string h = trim(header[j]);
      if (j == 0 && h.rfind("\xEF\xBB\xBF", 0) == 0) h = h.substr(3);
      auto it = std::find(kColumns.begin(), kColumns.end(), h);
      if (it != kColumns.end()) col[static_cast<std::size_t>(it - kColumns.begin())] = j;
    }
    break;
  }
  std::vector<std::string> errors;
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (col[c] == SIZE_MAX) errors.push_back("header: missing column '" + kColumns[c] + "'");
  }
  if (!errors.empty()) throw ValidationError(errors);

  std::vector<BidRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '#') continue;
    const auto f = split_csv(line);
    if (f.size() < kColumns.size()) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 7 fields, got " + std::to_string(f.size()));
      continue;
    }
    BidRow r;
    r.line = lineno;
    r.auctionid = trim(f[col[0]]);
    r.bidder = trim(f[col[3]]);
    // Records a parse error and returns false when the field is not a finite number.
    auto num = [&](std::size_t c, double& out) {
      const std::string t = trim(f[col[c]]);
      if (parse_double(t, out) && std::isfinite(out)) return true;
      errors.push_back("line " + std::to_string(lineno) + ": cannot parse " + kColumns[c] + " '" + t + "'");
      return false;
    };
    if (r.auctionid.empty()) errors.push_back("line " + std::to_string(lineno) + ": empty auctionid");
    r.has_bid = !trim(f[col[1]]).empty();
    if (r.has_bid) {
      if (num(1, r.bid) && !(r.bid > 0.0)) errors.push_back("line " + std::to_string(lineno) + ": bid must be > 0");
      if (num(2, r.bidtime) && r.bidtime < 0.0) {
        errors.push_back("line " + std::to_string(lineno) + ": negative bidtime");
      }
    }
    if (!trim(f[col[4]]).empty()) num(4, r.bidderrate);
    if (num(5, r.openbid) && r.openbid < 0.0) {
      errors.push_back("line " + std::to_string(lineno) + ": negative openbid");
    }
    if (!trim(f[col[6]]).empty()) num(6, r.price);
    rows.push_back(std::move(r));
  }
  if (!errors.empty()) throw ValidationError(errors);
  return rows;
}

IngestResult ingest_bid_rows(std::span<const BidRow> rows, const IngestOptions& opt) {
  if (!(opt.duration > 0.0)) throw ValidationError("duration must be > 0");
  if (opt.noise < 0.0 || opt.reserve_jitter < 0.0) throw ValidationError("noise widths must be >= 0");

  std::map<std::string, std::vector<const BidRow*>> groups;
  for (const auto& r : rows) groups[r.auctionid].push_back(&r);

  std::vector<std::string> errors;
  std::set<std::tuple<std::string, std::string, double>> seen;
  for (const auto& r : rows) {
    if (!r.has_bid) continue;
    if (r.bidtime > opt.duration) {
      errors.push_back("line " + std::to_string(r.line) + ": bidtime " + format_double(r.bidtime) +
                       " exceeds the duration " + format_double(opt.duration));
    }
    if (!seen.insert({r.auctionid, r.bidder, r.bidtime}).second) {
      errors.push_back("line " + std::to_string(r.line) + ": duplicate (auctionid, bidder, bidtime) row");
    }
  }
  if (!errors.empty()) throw ValidationError(errors);

  IngestResult res;
  for (const auto& [id, _] : groups) res.auction_ids.push_back(id);
  const bool numeric = std::all_of(res.auction_ids.begin(), res.auction_ids.end(), [](const std::string& s) {
    double v;
    return parse_double(s, v);
  });
  if (numeric) {
    std::stable_sort(res.auction_ids.begin(), res.auction_ids.end(), [](const std::string& a, const std::string& b) {
      double x = 0, y = 0;
      parse_double(a, x);
      parse_double(b, y);
      return x < y;
    });
  }

  CleaningReport& rep = res.report;
  rep.rows = rows.size();
  rep.auctions = groups.size();

  std::map<double, std::size_t> openbid_count;
  for (const auto& id : res.auction_ids) ++openbid_count[groups[id].front()->openbid];

  res.dataset.tau = opt.duration;
  for (std::size_t k = 0; k < res.auction_ids.size(); ++k) {
    const std::string& id = res.auction_ids[k];
    std::vector<const BidRow*> g = groups[id];
    std::stable_sort(g.begin(), g.end(), [](const BidRow* a, const BidRow* b) { return a->bidtime < b->bidtime; });
    const double openbid = g.front()->openbid;
    const double price = g.front()->price;
    for (const BidRow* r : g) {
      if (r->openbid != openbid) rep.anomalies.push_back("auction " + id + ": openbid differs between rows");
    }

    std::map<std::string, std::size_t> per_bidder;
    for (const BidRow* r : g) {
      if (r->has_bid) ++per_bidder[r->bidder];
    }
    rep.bidders += per_bidder.size();
    for (const auto& [b, n] : per_bidder) {
      if (n > 1) {
        ++rep.multi_bid_bidders;
        rep.removed_rows += n - 1;
      }
    }
    // Keep the latest row of each bidder.
    std::vector<const BidRow*> kept;
    std::set<std::string> later;
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
      if ((*it)->has_bid && later.insert((*it)->bidder).second) kept.push_back(*it);
    }
    std::reverse(kept.begin(), kept.end());

    Rng rng = substream(opt.seed, {k});
    std::vector<Bid> bids;
    for (const BidRow* r : kept) {
      const double noise = opt.noise > 0.0 ? uniform(rng, 0.0, opt.noise) : 0.0;
      bids.push_back({r->bidtime, r->bid + noise});
    }
    double reserve = openbid;
    if (openbid_count[openbid] > 1 && opt.reserve_jitter > 0.0) {
      Rng jr = substream(opt.seed, {k, 1});
      reserve += uniform(jr, 0.0, opt.reserve_jitter);
      ++rep.jittered_reserves;
    }

    std::vector<double> raw{openbid};
    for (const BidRow* r : kept) raw.push_back(r->bid);
    std::sort(raw.begin(), raw.end());
    for (std::size_t i = 1; i < raw.size(); ++i) {
      if (raw[i] - raw[i - 1] < 0.01) {
        rep.anomalies.push_back("auction " + id + ": values " + format_double(raw[i - 1]) + " and " +
                                format_double(raw[i]) + " closer than 0.01");
      }
    }

    AuctionRecord rec = replay_bids(reserve, opt.duration, bids);
    if (rec.sold_above_reserve() && price > 0.0 && std::abs(rec.final_price() - price) > 0.02) {
      rep.anomalies.push_back("auction " + id + ": replayed final price " + format_double(rec.final_price()) +
                              " differs from recorded price " + format_double(price));
    }
    res.dataset.auctions.push_back(std::move(rec));
  }
  return res;
}

IngestResult ingest_bid_csv(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const auto rows = read_bid_csv(in);
  return ingest_bid_rows(rows, options);
}

void write_report(const CleaningReport& r, std::ostream& out) {
  out << "rows," << r.rows << "\n"
      << "auctions," << r.auctions << "\n"
      << "bidders," << r.bidders << "\n"
      << "multi_bid_bidders," << r.multi_bid_bidders << "\n"
      << "removed_rows," << r.removed_rows << "\n"
      << "jittered_reserves," << r.jittered_reserves << "\n"
      << "anomalies," << r.anomalies.size() << "\n";
  for (const auto& a : r.anomalies) out << "# " << a << "\n";
}

void export_dataset(const ObservedDataset& ds, std::ostream& out, std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << "\n";
  for (std::size_t k = 0; k < ds.size(); ++k) {
    const auto& a = ds.auctions[k];
    out << "auction," << k << "," << format_double(a.reserve) << "," << format_double(a.duration) << ","
        << (a.sold ? 1 : 0) << "\n";
    for (const auto& j : a.jumps) out << "jump," << k << "," << format_double(j.price) << "," << format_double(j.wait) << "\n";
  }
  if (!out) throw IoError("write failed");
}

void export_dataset(const ObservedDataset& ds, const std::filesystem::path& path, std::span<const std::string> comments) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  export_dataset(ds, out, comments);
}

ObservedDataset import_dataset(std::istream& in) {
  std::vector<RawAuction> raw;
  std::vector<std::string> errors;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '#') continue;
    const auto f = split_csv(line);
    const std::string where = "line " + std::to_string(lineno) + ": ";
    double k = -1, a = 0, b = 0, c = 0;
    const bool ok = f.size() >= 4 && parse_double(f[1], k) && parse_double(f[2], a) && parse_double(f[3], b);
    if (f[0] == "auction" && ok && f.size() == 5 && parse_double(f[4], c)) {
      if (k != static_cast<double>(raw.size())) {
        errors.push_back(where + "auction index out of sequence");
        continue;
      }
      raw.push_back({a, b, {}, c != 0.0});
    } else if (f[0] == "jump" && ok && f.size() == 4) {
      if (raw.empty() || k != static_cast<double>(raw.size() - 1)) {
        errors.push_back(where + "jump does not follow its auction row");
        continue;
      }
      raw.back().jumps.push_back({a, b});
    } else {
      errors.push_back(where + "unrecognised record '" + line + "'");
    }
  }
  ObservedDataset ds;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    try {
      ds.auctions.push_back(validate_auction(raw[k]));
    } catch (const ValidationError& e) {
      for (const auto& v : e.violations()) errors.push_back("auction " + std::to_string(k) + ": " + v);
    }
  }
  if (!errors.empty()) throw ValidationError(errors);
  if (!ds.auctions.empty()) ds.tau = ds.auctions.front().duration;
  validate_dataset(ds);
  return ds;
}

ObservedDataset import_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return import_dataset(in);
}

void write_bid_trace(std::span<const BidTrace> traces, const ObservedDataset& ds, std::ostream& out) {
  if (traces.size() != ds.size()) throw ValidationError("one trace per auction is required");
  out << "auctionid,bid,bidtime,bidder,bidderrate,openbid,price\n";
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const auto& t = traces[k];
    const std::string id = std::to_string(k + 1);
    const std::string tail = "," + format_double(t.reserve) + "," + format_double(ds.auctions[k].final_price()) + "\n";
    if (t.bids.empty()) out << id << ",,,,0" << tail;
    for (std::size_t j = 0; j < t.bids.size(); ++j) {
      out << id << "," << format_double(t.bids[j].value) << "," << format_double(t.bids[j].time) << ",b" << id << "_"
          << j + 1 << ",0" << tail;
    }
  }
  if (!out) throw IoError("write failed");
}

}  // namespace auctionval
