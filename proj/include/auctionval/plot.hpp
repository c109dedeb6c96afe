#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "auctionval/bands.hpp"
#include "auctionval/model.hpp"

namespace auctionval {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// One series per curve, plus "<name>_lower" and "<name>_upper" per band.
std::vector<Series> plot_series(std::span<const std::pair<std::string, MonotoneCurve>> curves,
                                std::span<const std::pair<std::string, ConfidenceBand>> bands);

// Long format: x,series,value.
void write_plot_csv(std::span<const Series> series, std::ostream& out, std::span<const std::string> comments = {});

// Static line chart with axes, ticks and a legend. Non-finite points are dropped.
void write_plot_svg(std::span<const Series> series, std::ostream& out, const std::string& title = "");

}  // namespace auctionval
