#include "auctionval/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "auctionval/error.hpp"
#include "auctionval/format.hpp"

namespace auctionval {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
      throw ValidationError("cannot parse distribution parameter '" + std::string(token) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

double uniform_cdf(const ValuationDistribution::Uniform& u, double x) {
  return std::clamp((x - u.a) / (u.b - u.a), 0.0, 1.0);
}

// Smallest x with cdf(x) >= p for a continuous, non-decreasing cdf on [lo, hi].
template <class Cdf>
double bisect_quantile(Cdf&& cdf, double p, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

ValuationDistribution::ValuationDistribution(Params params) : params_(std::move(params)) {
  std::visit(overloaded{
                 [](const Uniform& u) {
                   require(std::isfinite(u.a) && std::isfinite(u.b) && u.a >= 0.0 && u.a < u.b,
                           "uniform needs 0 <= a < b");
                 },
                 [](PiecewiseUniform& p) {
                   require(!p.parts.empty() && p.parts.size() == p.weights.size(),
                           "piecewise uniform needs one weight per part");
                   double total = 0.0;
                   for (std::size_t i = 0; i < p.parts.size(); ++i) {
                     require(p.parts[i].a >= 0.0 && p.parts[i].a < p.parts[i].b, "piecewise uniform needs 0 <= a < b");
                     require(p.weights[i] > 0.0, "piecewise uniform weights must be positive");
                     total += p.weights[i];
                   }
                   require(std::abs(total - 1.0) < 1e-9, "piecewise uniform weights must sum to 1");
                   for (auto& w : p.weights) w /= total;
                 },
                 [](const Pareto& p) { require(p.scale > 0.0 && p.shape > 0.0, "pareto needs scale > 0 and shape > 0"); },
                 [](const Lomax& p) { require(p.scale > 0.0 && p.shape > 0.0, "lomax needs scale > 0 and shape > 0"); },
                 [](const Gamma& g) { require(g.shape > 0.0 && g.rate > 0.0, "gamma needs shape > 0 and rate > 0"); },
                 [](const Beta& b) { require(b.alpha > 0.0 && b.beta > 0.0, "beta needs alpha > 0 and beta > 0"); },
                 [](const Table& t) {
                   require(t.probs.size() >= 2 && t.probs.size() == t.values.size(),
                           "table needs at least two (probability, value) pairs");
                   require(t.probs.front() == 0.0 && t.probs.back() == 1.0, "table probabilities must run from 0 to 1");
                   require(t.values.front() >= 0.0, "table values must be >= 0");
                   for (std::size_t i = 1; i < t.probs.size(); ++i) {
                     require(t.probs[i] > t.probs[i - 1], "table probabilities must increase");
                     require(t.values[i] > t.values[i - 1], "table values must increase");
                   }
                 },
             },
             params_);
}

ValuationDistribution ValuationDistribution::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  require(colon != std::string_view::npos, "distribution spec must look like name:p1,p2,...");
  const std::string_view name = spec.substr(0, colon);
  const auto v = parse_numbers(spec.substr(colon + 1));
  auto expect = [&](std::size_t n) {
    require(v.size() == n, std::string(name) + " takes " + std::to_string(n) + " parameters");
  };
  if (name == "uniform") {
    expect(2);
    return ValuationDistribution(Uniform{v[0], v[1]});
  }
  if (name == "pwuniform") {
    require(!v.empty() && v.size() % 3 == 0, "pwuniform takes lo,hi,weight triples");
    PiecewiseUniform p;
    for (std::size_t i = 0; i < v.size(); i += 3) {
      p.parts.push_back({v[i], v[i + 1]});
      p.weights.push_back(v[i + 2]);
    }
    return ValuationDistribution(std::move(p));
  }
  if (name == "pareto") {
    expect(2);
    return ValuationDistribution(Pareto{v[0], v[1]});
  }
  if (name == "lomax") {
    expect(2);
    return ValuationDistribution(Lomax{v[0], v[1]});
  }
  if (name == "gamma") {
    expect(2);
    return ValuationDistribution(Gamma{v[0], v[1]});
  }
  if (name == "beta") {
    expect(2);
    return ValuationDistribution(Beta{v[0], v[1]});
  }
  if (name == "table") {
    require(v.size() % 2 == 0, "table takes probability,value pairs");
    Table t;
    for (std::size_t i = 0; i < v.size(); i += 2) {
      t.probs.push_back(v[i]);
      t.values.push_back(v[i + 1]);
    }
    return ValuationDistribution(std::move(t));
  }
  throw ValidationError("unknown distribution '" + std::string(name) + "'");
}

std::string ValuationDistribution::spec() const {
  auto join = [](std::string name, std::initializer_list<double> xs) {
    name += ':';
    bool first = true;
    for (double x : xs) {
      if (!first) name += ',';
      name += format_double(x);
      first = false;
    }
    return name;
  };
  return std::visit(overloaded{
                        [&](const Uniform& u) { return join("uniform", {u.a, u.b}); },
                        [&](const PiecewiseUniform& p) {
                          std::string s = "pwuniform:";
                          for (std::size_t i = 0; i < p.parts.size(); ++i) {
                            if (i) s += ',';
                            s += format_double(p.parts[i].a) + ',' + format_double(p.parts[i].b) + ',' +
                                 format_double(p.weights[i]);
                          }
                          return s;
                        },
                        [&](const Pareto& p) { return join("pareto", {p.scale, p.shape}); },
                        [&](const Lomax& p) { return join("lomax", {p.scale, p.shape}); },
                        [&](const Gamma& g) { return join("gamma", {g.shape, g.rate}); },
                        [&](const Beta& b) { return join("beta", {b.alpha, b.beta}); },
                        [&](const Table& t) {
                          std::string s = "table:";
                          for (std::size_t i = 0; i < t.probs.size(); ++i) {
                            if (i) s += ',';
                            s += format_double(t.probs[i]) + ',' + format_double(t.values[i]);
                          }
                          return s;
                        },
                    },
                    params_);
}

double ValuationDistribution::sample(Rng& rng) const {
  return std::visit(overloaded{
                        [&](const Gamma& g) {
                          std::gamma_distribution<double> d(g.shape, 1.0 / g.rate);
                          return d(rng);
                        },
                        [&](const Beta& b) {
                          std::gamma_distribution<double> x(b.alpha, 1.0), y(b.beta, 1.0);
                          const double gx = x(rng);
                          const double gy = y(rng);
                          return gx / (gx + gy);
                        },
                        [&](const PiecewiseUniform& p) {
                          double pick = uniform01(rng);
                          std::size_t i = 0;
                          while (i + 1 < p.parts.size() && pick >= p.weights[i]) pick -= p.weights[i++];
                          return uniform(rng, p.parts[i].a, p.parts[i].b);
                        },
                        [&](const auto&) { return quantile(uniform01(rng)); },
                    },
                    params_);
}

double ValuationDistribution::cdf(double x) const {
  return std::visit(overloaded{
                        [&](const Uniform& u) { return uniform_cdf(u, x); },
                        [&](const PiecewiseUniform& p) {
                          double s = 0.0;
                          for (std::size_t i = 0; i < p.parts.size(); ++i) s += p.weights[i] * uniform_cdf(p.parts[i], x);
                          return std::min(1.0, s);
                        },
                        [&](const Pareto& p) { return x <= p.scale ? 0.0 : -std::expm1(p.shape * std::log(p.scale / x)); },
                        [&](const Lomax& p) { return x <= 0.0 ? 0.0 : -std::expm1(-p.shape * std::log1p(x / p.scale)); },
                        [&](const Gamma& g) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(g.shape, g.rate * x); },
                        [&](const Beta& b) {
                          if (x <= 0.0) return 0.0;
                          if (x >= 1.0) return 1.0;
                          return boost::math::ibeta(b.alpha, b.beta, x);
                        },
                        [&](const Table& t) {
                          if (x < t.values.front()) return 0.0;
                          if (x >= t.values.back()) return 1.0;
                          const auto i = static_cast<std::size_t>(
                              std::upper_bound(t.values.begin(), t.values.end(), x) - t.values.begin() - 1);
                          const double w = (x - t.values[i]) / (t.values[i + 1] - t.values[i]);
                          return t.probs[i] + w * (t.probs[i + 1] - t.probs[i]);
                        },
                    },
                    params_);
}

double ValuationDistribution::pdf(double x) const {
  return std::visit(overloaded{
                        [&](const Uniform& u) { return (x >= u.a && x <= u.b) ? 1.0 / (u.b - u.a) : 0.0; },
                        [&](const PiecewiseUniform& p) {
                          double s = 0.0;
                          for (std::size_t i = 0; i < p.parts.size(); ++i) {
                            const auto& u = p.parts[i];
                            if (x >= u.a && x <= u.b) s += p.weights[i] / (u.b - u.a);
                          }
                          return s;
                        },
                        [&](const Pareto& p) { return x < p.scale ? 0.0 : p.shape / x * std::pow(p.scale / x, p.shape); },
                        [&](const Lomax& p) {
                          return x < 0.0 ? 0.0 : p.shape / p.scale * std::pow(1.0 + x / p.scale, -p.shape - 1.0);
                        },
                        [&](const Gamma& g) {
                          return x <= 0.0 ? 0.0 : g.rate * boost::math::gamma_p_derivative(g.shape, g.rate * x);
                        },
                        [&](const Beta& b) {
                          return (x <= 0.0 || x >= 1.0) ? 0.0 : boost::math::ibeta_derivative(b.alpha, b.beta, x);
                        },
                        [&](const Table& t) {
                          if (x < t.values.front() || x >= t.values.back()) return 0.0;
                          const auto i = static_cast<std::size_t>(
                              std::upper_bound(t.values.begin(), t.values.end(), x) - t.values.begin() - 1);
                          return (t.probs[i + 1] - t.probs[i]) / (t.values[i + 1] - t.values[i]);
                        },
                    },
                    params_);
}

double ValuationDistribution::quantile(double p) const {
  p = std::clamp(p, 0.0, 1.0);
  return std::visit(overloaded{
                        [&](const Uniform& u) { return u.a + p * (u.b - u.a); },
                        [&](const PiecewiseUniform&) {
                          auto [lo, hi] = support();
                          return bisect_quantile([&](double x) { return cdf(x); }, p, lo, hi);
                        },
                        [&](const Pareto& d) { return p >= 1.0 ? kInf : d.scale * std::exp(-std::log1p(-p) / d.shape); },
                        [&](const Lomax& d) { return p >= 1.0 ? kInf : d.scale * std::expm1(-std::log1p(-p) / d.shape); },
                        [&](const Gamma& g) {
                          if (p <= 0.0) return 0.0;
                          if (p >= 1.0) return kInf;
                          return boost::math::gamma_p_inv(g.shape, p) / g.rate;
                        },
                        [&](const Beta& b) {
                          if (p <= 0.0) return 0.0;
                          if (p >= 1.0) return 1.0;
                          return boost::math::ibeta_inv(b.alpha, b.beta, p);
                        },
                        [&](const Table& t) {
                          if (p >= 1.0) return t.values.back();
                          const auto i = static_cast<std::size_t>(
                              std::upper_bound(t.probs.begin(), t.probs.end(), p) - t.probs.begin() - 1);
                          const double w = (p - t.probs[i]) / (t.probs[i + 1] - t.probs[i]);
                          return t.values[i] + w * (t.values[i + 1] - t.values[i]);
                        },
                    },
                    params_);
}

std::vector<double> ValuationDistribution::breakpoints() const {
  std::vector<double> out = std::visit(overloaded{
                                           [](const Uniform& u) { return std::vector<double>{u.a, u.b}; },
                                           [](const PiecewiseUniform& p) {
                                             std::vector<double> v;
                                             for (const auto& u : p.parts) {
                                               v.push_back(u.a);
                                               v.push_back(u.b);
                                             }
                                             return v;
                                           },
                                           [](const Pareto& p) { return std::vector<double>{p.scale}; },
                                           [](const Lomax&) { return std::vector<double>{0.0}; },
                                           [](const Gamma&) { return std::vector<double>{0.0}; },
                                           [](const Beta&) { return std::vector<double>{0.0, 1.0}; },
                                           [](const Table& t) { return t.values; },
                                       },
                                       params_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<double, double> ValuationDistribution::support() const {
  return std::visit(overloaded{
                        [](const Uniform& u) { return std::pair{u.a, u.b}; },
                        [](const PiecewiseUniform& p) {
                          double lo = kInf, hi = 0.0;
                          for (const auto& u : p.parts) {
                            lo = std::min(lo, u.a);
                            hi = std::max(hi, u.b);
                          }
                          return std::pair{lo, hi};
                        },
                        [](const Pareto& p) { return std::pair{p.scale, kInf}; },
                        [](const Lomax&) { return std::pair{0.0, kInf}; },
                        [](const Gamma&) { return std::pair{0.0, kInf}; },
                        [](const Beta&) { return std::pair{0.0, 1.0}; },
                        [](const Table& t) { return std::pair{t.values.front(), t.values.back()}; },
                    },
                    params_);
}

}  // namespace auctionval
