#include "auctionval/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "auctionval/error.hpp"
#include "auctionval/format.hpp"
#include "auctionval/parallel.hpp"
#include "auctionval/rng.hpp"

namespace auctionval {

double conditional_mean_jumps(std::size_t n) {
  if (n <= 1) return 0.0;
  double h = 0.0;
  for (std::size_t i = n; i >= 2; --i) h += 1.0 / static_cast<double>(i);
  return 2.0 * h;
}

namespace {

constexpr double kMaxArgument = 1e6;

// g(x) = Σ_{n>=2} (2/n) P(N >= n), with P(N >= n) replaced by the fraction of
// the sorted uniforms at or above F(n-1).
double g_at(double x, const std::vector<double>& sorted_u) {
  if (x <= 0.0) return 0.0;
  const double reps = static_cast<double>(sorted_u.size());
  const auto n_hi = static_cast<std::size_t>(std::ceil(x + 12.0 * std::sqrt(x) + 40.0));
  const double log_x = std::log(x);
  double cdf = 0.0;
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_hi; ++n) {
    const double k = static_cast<double>(n - 1);
    cdf = std::min(1.0, cdf + std::exp(k * log_x - x - std::lgamma(k + 1.0)));
    if (n < 2) continue;
    const auto at_or_above = sorted_u.end() - std::lower_bound(sorted_u.begin(), sorted_u.end(), cdf);
    if (at_or_above == 0) break;
    sum += 2.0 / static_cast<double>(n) * static_cast<double>(at_or_above);
  }
  return sum / reps;
}

std::vector<double> common_uniforms(std::size_t reps, std::uint64_t seed) {
  Rng rng = substream(seed, {0x67});
  std::vector<double> u(reps);
  for (auto& x : u) x = uniform01(rng);
  std::sort(u.begin(), u.end());
  return u;
}

std::vector<double> evaluate(std::span<const double> grid, std::size_t reps, std::uint64_t seed) {
  const auto u = common_uniforms(reps, seed);
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t j) { out[j] = g_at(grid[j], u); });
  return out;
}

}  // namespace

std::vector<double> isotonic(std::span<const double> values) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum / static_cast<double>(a.count) <= b.sum / static_cast<double>(b.count)) break;
      Block merged{a.sum + b.sum, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.sum / static_cast<double>(b.count));
  return out;
}

GTable build_g_table(std::span<const double> grid, std::size_t mc_reps, std::uint64_t seed) {
  if (mc_reps < 1) throw ValidationError("mc_reps must be >= 1");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= 0.0) || (j > 0 && !(grid[j] > grid[j - 1]))) {
      throw ValidationError("g grid must be ascending and start at >= 0");
    }
  }
  GTable t;
  t.grid.assign(grid.begin(), grid.end());
  t.gvals = isotonic(evaluate(grid, mc_reps, seed));
  if (!t.grid.empty() && t.grid.front() == 0.0) t.gvals.front() = 0.0;
  t.mc_reps = mc_reps;
  t.seed = seed;
  if (t.grid.size() >= 2) t.spacing = t.grid[1] - t.grid[0];
  return t;
}

GTable build_g_table(double x_max, std::size_t mc_reps, std::uint64_t seed, double spacing) {
  if (!(spacing > 0.0)) throw ValidationError("g grid spacing must be > 0");
  const auto points = static_cast<std::size_t>(std::ceil(x_max / spacing)) + 1;
  std::vector<double> grid(std::max<std::size_t>(points, 2));
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = static_cast<double>(j) * spacing;
  GTable t = build_g_table(grid, mc_reps, seed);
  t.spacing = spacing;
  return t;
}

double g_eval(const GTable& t, double x) {
  if (t.grid.empty()) throw ValidationError("empty g table");
  if (x <= t.grid.front()) return t.gvals.front();
  if (x >= t.grid.back()) return t.gvals.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(t.grid.begin(), t.grid.end(), x) - t.grid.begin());
  const double w = (x - t.grid[hi - 1]) / (t.grid[hi] - t.grid[hi - 1]);
  return t.gvals[hi - 1] + w * (t.gvals[hi] - t.gvals[hi - 1]);
}

namespace {

void extend(GTable& t) {
  const double start = t.grid.back();
  const double target = std::max(2.0 * start, start + 5.0);
  if (target > kMaxArgument) throw NumericalError("mean jump count is beyond the range of the g table");
  // Tables built on j * spacing keep that form so an extended table equals a
  // table built directly over the larger range.
  const bool regular = t.grid.front() == 0.0 &&
                       std::abs(start - static_cast<double>(t.grid.size() - 1) * t.spacing) <= 1e-9 * start;
  std::vector<double> more;
  for (std::size_t i = 1; more.empty() || more.back() < target; ++i) {
    more.push_back(regular ? static_cast<double>(t.grid.size() - 1 + i) * t.spacing
                           : start + static_cast<double>(i) * t.spacing);
  }
  std::vector<double> vals = evaluate(more, t.mc_reps, t.seed);
  t.grid.insert(t.grid.end(), more.begin(), more.end());
  t.gvals.insert(t.gvals.end(), vals.begin(), vals.end());
  t.gvals = isotonic(t.gvals);
}

}  // namespace

double g_inverse(GTable& t, double y) {
  if (!(y >= 0.0)) throw ValidationError("mean jump count must be >= 0");
  if (t.grid.empty()) throw ValidationError("empty g table");
  while (t.gvals.back() < y) extend(t);
  const auto j = static_cast<std::size_t>(std::lower_bound(t.gvals.begin(), t.gvals.end(), y) - t.gvals.begin());
  if (j == 0) return t.grid.front();
  const double w = (y - t.gvals[j - 1]) / (t.gvals[j] - t.gvals[j - 1]);
  return t.grid[j - 1] + w * (t.grid[j] - t.grid[j - 1]);
}

void save_g_table(const GTable& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write g table to " + path.string());
  out << "# mc_reps=" << t.mc_reps << " seed=" << t.seed << " spacing=" << format_double(t.spacing) << "\n";
  out << "grid,gvals\n";
  for (std::size_t j = 0; j < t.grid.size(); ++j) out << format_double(t.grid[j]) << ',' << format_double(t.gvals[j]) << '\n';
  if (!out) throw IoError("failed writing g table to " + path.string());
}

std::optional<GTable> load_g_table(const std::filesystem::path& path, std::size_t mc_reps, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  GTable t;
  {
    std::istringstream head(line);
    std::string hash, reps_field, seed_field, spacing_field;
    head >> hash >> reps_field >> seed_field >> spacing_field;
    if (hash != "#" || reps_field.rfind("mc_reps=", 0) != 0 || seed_field.rfind("seed=", 0) != 0 ||
        spacing_field.rfind("spacing=", 0) != 0) {
      return std::nullopt;
    }
    try {
      t.mc_reps = std::stoull(reps_field.substr(8));
      t.seed = std::stoull(seed_field.substr(5));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (!parse_double(spacing_field.substr(8), t.spacing)) return std::nullopt;
  }
  if (t.mc_reps != mc_reps || t.seed != seed) return std::nullopt;
  if (!std::getline(in, line) || line != "grid,gvals") return std::nullopt;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    double x = 0.0, g = 0.0;
    if (comma == std::string::npos || !parse_double(std::string_view(line).substr(0, comma), x) ||
        !parse_double(std::string_view(line).substr(comma + 1), g)) {
      return std::nullopt;
    }
    t.grid.push_back(x);
    t.gvals.push_back(g);
  }
  if (t.grid.size() < 2) return std::nullopt;
  return t;
}

GFunction::GFunction(std::size_t mc_reps, std::uint64_t seed, double x_max, std::optional<std::filesystem::path> cache)
    : mc_reps_(mc_reps), seed_(seed), cache_(std::move(cache)) {
  if (cache_) {
    if (auto loaded = load_g_table(*cache_, mc_reps, seed)) {
      table_ = std::move(*loaded);
      return;
    }
  }
  table_ = build_g_table(x_max, mc_reps, seed);
  if (cache_) save_g_table(table_, *cache_);
}

double GFunction::operator()(double x) {
  std::lock_guard lock(mutex_);
  while (x > table_.grid.back()) extend(table_);
  return g_eval(table_, x);
}

double GFunction::inverse(double y) {
  std::lock_guard lock(mutex_);
  const std::size_t before = table_.grid.size();
  const double x = g_inverse(table_, y);
  if (cache_ && table_.grid.size() != before) save_g_table(table_, *cache_);
  return x;
}

GTable GFunction::snapshot() const {
  std::lock_guard lock(mutex_);
  return table_;
}

double estimate_lambda(const ObservedDataset& dataset, GFunction& g, std::span<const std::size_t> low_reserve_set) {
  if (low_reserve_set.empty()) throw ValidationError("low-reserve set is empty; relax q/epsilon or the reserve threshold");
  double total = 0.0;
  for (std::size_t k : low_reserve_set) total += static_cast<double>(dataset.auctions.at(k).jump_count());
  return g.inverse(total / static_cast<double>(low_reserve_set.size())) / dataset.tau;
}

}  // namespace auctionval
