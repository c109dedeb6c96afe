#include "auctionval/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "auctionval/error.hpp"

namespace auctionval {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<char> membership(const PooledData& p) {
  std::vector<char> in_u(p.size(), 0);
  for (std::size_t i : p.u) in_u[i] = 1;
  return in_u;
}

double rounding_slack(double value) { return 1e-9 * (1.0 + std::abs(value)); }

}  // namespace

double log_coefficient(std::size_t i, const PooledData& p) {
  const double q = static_cast<double>(p.qsize[i]);
  if (p.ell() == 0) return q;
  return q + static_cast<double>(p.ell() - p.l[i]);
}

double log_lik(const ThetaVector& theta, const LikelihoodContext& ctx) {
  const PooledData& p = ctx.pooled;
  if (theta.size() != p.size()) throw ValidationError("theta length differs from the pooled grid");
  double value = 0.0;
  double prod = 1.0;
  std::size_t next_u = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double th = theta[i];
    prod *= th;
    value -= ctx.lambda_hat * p.ttilde[i] * prod;
    const double c = log_coefficient(i, p);
    if (c > 0.0) {
      if (!(th > 0.0)) return kNegInf;
      value += c * std::log(th);
    }
    if (next_u < p.u.size() && p.u[next_u] == i) {
      ++next_u;
      if (!(th < 1.0)) return kNegInf;
      value += std::log1p(-th);
    }
  }
  return value;
}

double compute_A(const ThetaVector& theta, std::size_t i, const LikelihoodContext& ctx) {
  const PooledData& p = ctx.pooled;
  double prefix = 1.0;
  for (std::size_t j = 0; j < i; ++j) prefix *= theta[j];
  double sum = 0.0;
  for (std::size_t k = i; k < p.size(); ++k) {
    if (k > i) prefix *= theta[k];
    sum += p.ttilde[k] * prefix;
  }
  return ctx.lambda_hat * sum;
}

UpdateCase update_case(std::size_t i, const PooledData& p) {
  if (p.ell() == 0) return UpdateCase::III;
  if (std::binary_search(p.u.begin(), p.u.end(), i)) return UpdateCase::I;
  return i < p.u.back() ? UpdateCase::II : UpdateCase::III;
}

double case_one_root(double A, double B) {
  const double D = (A - B + 1.0) * (A - B + 1.0) + 4.0 * B;
  return 2.0 * B / ((A + B + 1.0) + std::sqrt(D));
}

double coord_update(std::size_t i, double A, const LikelihoodContext& ctx) {
  const PooledData& p = ctx.pooled;
  switch (update_case(i, p)) {
    case UpdateCase::I:
      return case_one_root(A, log_coefficient(i, p));
    case UpdateCase::II:
      return A > 0.0 ? std::min(1.0, log_coefficient(i, p) / A) : 1.0;
    case UpdateCase::III:
      break;
  }
  return 0.0;
}

AscentRun coordinate_ascent(const LikelihoodContext& ctx, ThetaVector theta0, const AscentOptions& options) {
  const PooledData& p = ctx.pooled;
  const std::size_t n = p.size();
  if (theta0.size() != n) throw ValidationError("theta length differs from the pooled grid");
  if (!(options.tol > 0.0)) throw ValidationError("tolerance must be > 0");

  AscentRun run;
  run.theta = std::move(theta0);
  run.frozen = options.constrained && p.ell() > 0 ? p.u.front() + 1 : 0;
  double current = log_lik(run.theta, ctx);
  if (!std::isfinite(current)) throw NumericalError("log-likelihood is not finite at the starting point");
  run.objective.push_back(current);

  std::vector<double> R(n);
  while (run.sweeps < options.max_sweeps) {
    // R_i = t̃_i + θ_{i+1} R_{i+1}: the part of A_i that only involves
    // coordinates not yet visited in this sweep.
    R[n - 1] = p.ttilde[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) R[i] = p.ttilde[i] + run.theta[i + 1] * R[i + 1];

    double prefix = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= run.frozen) {
        const double A = ctx.lambda_hat * prefix * R[i];
        if (options.check_updates) {
          const double before = log_lik(run.theta, ctx);
          run.theta[i] = coord_update(i, A, ctx);
          const double after = log_lik(run.theta, ctx);
          ++run.update_checks;
          const double drop = before - after;
          if (!(after >= before - rounding_slack(before))) {
            ++run.update_violations;
            run.worst_update_drop = std::max(run.worst_update_drop, std::isfinite(drop) ? drop : HUGE_VAL);
          }
        } else {
          run.theta[i] = coord_update(i, A, ctx);
        }
      }
      prefix *= run.theta[i];
    }
    ++run.sweeps;

    const double next = log_lik(run.theta, ctx);
    if (!(next >= current - rounding_slack(current))) {
      throw NumericalError("coordinate sweep decreased the log-likelihood");
    }
    run.objective.push_back(next);
    const double gain = next - current;
    current = next;
    if (gain <= options.tol) {
      run.converged = true;
      break;
    }
  }
  return run;
}

ThetaVector project_feasible(ThetaVector theta, const PooledData& p, double floor) {
  if (theta.size() != p.size()) throw ValidationError("theta length differs from the pooled grid");
  const auto in_u = membership(p);
  const std::size_t last_u = p.ell() > 0 ? p.u.back() : 0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    double& th = theta.values[i];
    th = std::clamp(th, 0.0, 1.0);
    if (in_u[i]) {
      th = std::clamp(th, floor, 1.0 - floor);
    } else if (p.ell() > 0 && i < last_u) {
      th = std::max(th, floor);
    }
  }
  return theta;
}

MonotoneCurve reconstruct_cdf(const ThetaVector& theta_hat, std::span<const double> z) {
  return interpolate(theta_to_cdf(theta_hat, z), true);
}

}  // namespace auctionval
