#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "auctionval/rng.hpp"

namespace auctionval {

// Valuation distributions used by the simulator and as analytic truths in
// the metrics. Every family is supported on [0, inf).
class ValuationDistribution {
 public:
  struct Uniform {
    double a, b;
  };
  // Mixture of uniforms on [lo_i, hi_i] with the given weights.
  struct PiecewiseUniform {
    std::vector<Uniform> parts;
    std::vector<double> weights;
  };
  // Pareto type I: F(x) = 1 - (scale / x)^shape for x >= scale.
  struct Pareto {
    double scale, shape;
  };
  // Pareto type II with location 0: F(x) = 1 - (1 + x / scale)^-shape.
  struct Lomax {
    double scale, shape;
  };
  struct Gamma {
    double shape, rate;
  };
  struct Beta {
    double alpha, beta;
  };
  // Quantile function tabulated at probabilities 0 = p_0 < ... < p_n = 1 and
  // linear in between.
  struct Table {
    std::vector<double> probs;
    std::vector<double> values;
  };

  using Params = std::variant<Uniform, PiecewiseUniform, Pareto, Lomax, Gamma, Beta, Table>;

  // Throws ValidationError for out-of-range parameters.
  explicit ValuationDistribution(Params params);

  // "uniform:1,20", "pwuniform:1,2,0.5,3,4,0.5", "pareto:3,100", "lomax:3,100",
  // "gamma:10,2", "beta:2,2", "table:0,1,0.5,4,1,9" (probability,value pairs).
  static ValuationDistribution parse(std::string_view spec);
  std::string spec() const;

  const Params& params() const noexcept { return params_; }

  double sample(Rng& rng) const;
  double cdf(double x) const;
  double pdf(double x) const;
  double quantile(double p) const;
  // Points where the density is discontinuous or the support starts/ends.
  std::vector<double> breakpoints() const;
  // Lower and upper support bounds; the upper bound may be infinite.
  std::pair<double, double> support() const;

 private:
  Params params_;
};

}  // namespace auctionval
