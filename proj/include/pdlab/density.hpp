#pragma once

#include <cmath>
#include <limits>

#include "pdlab/core.hpp"
#include "pdlab/mc.hpp"
#include "pdlab/sampler.hpp"

namespace pdlab {

// log rho_d value; negative infinity exactly on the boundary of Delta_d.
struct LogDensityValue {
  double logval = -std::numeric_limits<double>::infinity();
  bool finite() const { return std::isfinite(logval); }
  operator double() const { return logval; }
};

// log of the projected density
//   rho_d(x) = C * x_1^{-3/2}...x_{d+1}^{-3/2} / (sum_i p_i^2/x_i)^{theta+(d+1)/2},
//   C = p_1...p_{d+1} Gamma(theta+(d+1)/2) / (pi^{d/2} Gamma(theta+1/2)),
// computed entirely in log space (Gamma(theta+(d+1)/2) overflows for large d).
inline LogDensityValue log_rho(const SimplexPoint& x, const BaseWeights& base,
                               const Params& params) {
  if (x.d() != base.d())
    throw DimensionMismatch("point dimension " + std::to_string(x.d()) +
                            " does not match base with d = " + std::to_string(base.d()));
  const int d = x.d();
  const double expo = params.theta() + 0.5 * (d + 1);

  double log_c = std::lgamma(expo) - std::lgamma(params.theta() + 0.5) -
                 0.5 * d * std::log(M_PI);
  for (int i = 0; i <= d; ++i) log_c += std::log(base[i]);

  double log_prod = 0.0;
  double ratio_sum = 0.0;
  double xi = 0.0;
  double tail = 1.0;
  for (int i = 0; i <= d; ++i) {
    xi = i < d ? x[i] : tail;
    if (!(xi > 0.0)) return LogDensityValue{};
    if (i < d) tail -= x[i];
    log_prod += std::log(xi);
    ratio_sum += base[i] * base[i] / xi;
  }
  return LogDensityValue{log_c - 1.5 * log_prod - expo * std::log(ratio_sum)};
}

// d = 1 symmetric-base reduction: Beta(theta+1/2, theta+1/2) density
// (rho_1 collapses via 1/(4x) + 1/(4(1-x)) = 1/(4x(1-x)) and the Legendre
// duplication formula).
inline double rho1_closed_form(double x, const Params& params) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("rho1_closed_form needs x in (0,1)");
  const double a = params.theta() + 0.5;
  const double log_b = 2.0 * std::lgamma(a) - std::lgamma(2.0 * a);
  return std::exp((a - 1.0) * (std::log(x) + std::log1p(-x)) - log_b);
}

// Importance estimate of the total mass of rho_d: draws from the exact
// theta = 0 sampler and averages exp(log_rho(theta) - log_rho(0)). Target 1.
inline MCEstimate normalization_check(const BaseWeights& base, const Params& params,
                                      const McConfig& cfg) {
  if (cfg.n < 10'000) throw DomainError("normalization_check needs n >= 10^4");
  const Params untilted(0.0);
  MultiAccum acc = mc_run(cfg, 1, [&](RngStream& rng, std::span<double> out) {
    const SimplexPoint x = sample_rho_levy(base, rng);
    out[0] = std::exp(log_rho(x, base, params).logval - log_rho(x, base, untilted).logval);
  });
  return acc.estimate(0, cfg.seed);
}

}  // namespace pdlab
