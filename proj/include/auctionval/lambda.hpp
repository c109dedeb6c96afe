#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "auctionval/model.hpp"

namespace auctionval {

// E[M | N = n]: expected number of standing-price changes when n bidders with
// continuous valuations arrive above a negligible reserve.
double conditional_mean_jumps(std::size_t n);

// g(x) = E[M] for N ~ Poisson(x), tabulated by Monte Carlo.
struct GTable {
  std::vector<double> grid;
  std::vector<double> gvals;
  std::size_t mc_reps = 0;
  std::uint64_t seed = 0;
  double spacing = 0.1;  // step used when the table is extended
};

inline constexpr std::size_t kDefaultGReps = 1'000'000;
inline constexpr double kGSpacing = 0.1;

// Every grid point reuses the same mc_reps uniforms (common random numbers),
// each turned into a Poisson(x) draw by inversion. The estimate is therefore
// non-decreasing in x before the isotonic projection, and a point's value
// does not depend on the rest of the grid. g(0) = 0 is pinned.
GTable build_g_table(std::span<const double> grid, std::size_t mc_reps, std::uint64_t seed);

// Grid 0, spacing, 2*spacing, ... up to at least x_max.
GTable build_g_table(double x_max, std::size_t mc_reps, std::uint64_t seed, double spacing = kGSpacing);

// Linear interpolation of the table; constant beyond the last grid point.
double g_eval(const GTable& table, double x);

// Monotone inverse by linear interpolation. Extends the table (doubling its
// range) until y is covered. Throws ValidationError for y < 0.
double g_inverse(GTable& table, double y);

// Pool-adjacent-violators projection onto non-decreasing sequences.
std::vector<double> isotonic(std::span<const double> values);

void save_g_table(const GTable& table, const std::filesystem::path& path);
// Returns nothing when the file is missing or was built with other settings.
std::optional<GTable> load_g_table(const std::filesystem::path& path, std::size_t mc_reps, std::uint64_t seed);

// A GTable shared between threads. Inversions extend the table on demand;
// an optional cache file is read on construction and rewritten on growth.
class GFunction {
 public:
  explicit GFunction(std::size_t mc_reps = kDefaultGReps, std::uint64_t seed = 0, double x_max = 5.0,
                     std::optional<std::filesystem::path> cache = std::nullopt);

  double operator()(double x);
  double inverse(double y);
  GTable snapshot() const;
  std::size_t mc_reps() const noexcept { return mc_reps_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t mc_reps_;
  std::uint64_t seed_;
  std::optional<std::filesystem::path> cache_;
  mutable std::mutex mutex_;
  GTable table_;
};

// λ̂ = g⁻¹(mean jump count over the low-reserve auctions) / τ.
// Throws ValidationError for an empty set.
double estimate_lambda(const ObservedDataset& dataset, GFunction& g, std::span<const std::size_t> low_reserve_set);

}  // namespace auctionval
