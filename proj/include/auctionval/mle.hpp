#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "auctionval/model.hpp"

namespace auctionval {

struct LikelihoodContext {
  PooledData pooled;
  double lambda_hat = 0.0;
};

// Profile log-likelihood in θ without the additive constant
// ln C* + (ℓ + |K_s|) ln λ̂ + ℓ ln 2 + Σ ln t_{0,k}. Returns -inf outside the
// feasible region (θ_{u_l} = 1, or θ_i = 0 with a positive log coefficient).
double log_lik(const ThetaVector& theta, const LikelihoodContext& ctx);

// A_i = λ̂ Σ_{k>=i} t̃_k Π_{j<=k, j!=i} θ_j, evaluated directly in O(n).
double compute_A(const ThetaVector& theta, std::size_t i, const LikelihoodContext& ctx);

enum class UpdateCase { I, II, III };

// I: i in u. II: i not in u and i < u_ℓ. III: everything else (including all
// indices when ℓ = 0).
UpdateCase update_case(std::size_t i, const PooledData& pooled);

// Coefficient of ln θ_i: |Q_i| + 1{ℓ>0} (ℓ - l_i).
double log_coefficient(std::size_t i, const PooledData& pooled);

// Smaller root of A θ² - (A+B+1) θ + B = 0, written as 2B / ((A+B+1) + √D)
// so it stays accurate for small A and equals B/(B+1) at A = 0.
double case_one_root(double A, double B);

// Maximizer of the log-likelihood in θ_i given A_i.
double coord_update(std::size_t i, double A, const LikelihoodContext& ctx);

struct AscentOptions {
  double tol = 1e-8;
  std::size_t max_sweeps = 10000;
  // Hold θ_i at its starting value for every i <= u_1.
  bool constrained = true;
  // Re-evaluate the objective after every coordinate update (O(n²) per sweep).
  bool check_updates = false;
};

struct AscentRun {
  ThetaVector theta;
  std::vector<double> objective;  // value at θ⁽⁰⁾, then after each sweep
  std::size_t sweeps = 0;
  bool converged = false;
  std::size_t frozen = 0;  // number of leading coordinates held fixed
  std::size_t update_checks = 0;
  std::size_t update_violations = 0;
  double worst_update_drop = 0.0;
};

// Throws NumericalError if the objective at theta0 is not finite or a sweep
// decreases it beyond rounding.
AscentRun coordinate_ascent(const LikelihoodContext& ctx, ThetaVector theta0, const AscentOptions& options);

// Moves θ into the region where the objective is finite: θ_i in
// [floor, 1 - floor] for i in u, θ_i >= floor for the other i < u_ℓ.
ThetaVector project_feasible(ThetaVector theta, const PooledData& pooled, double floor = 1e-10);

// theta_to_cdf followed by linear interpolation through (0, 0).
MonotoneCurve reconstruct_cdf(const ThetaVector& theta_hat, std::span<const double> z);

}  // namespace auctionval
