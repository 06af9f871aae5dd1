#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pdlab/core.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

// Stick-breaking stops either after a fixed number of sticks or once the
// unbroken residual falls below a threshold (hard cap 10^6 sticks).
class TruncationPolicy {
 public:
  static TruncationPolicy fixed_count(std::uint64_t n) {
    if (n < 1 || n > kHardCap) throw DomainError("fixed stick count out of range");
    TruncationPolicy t;
    t.count_ = n;
    return t;
  }

  static TruncationPolicy residual_threshold(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("residual threshold must be in (0,1)");
    TruncationPolicy t;
    t.eps_ = eps;
    return t;
  }

  bool by_count() const { return count_ > 0; }
  std::uint64_t count() const { return count_; }
  double eps() const { return eps_; }

  static constexpr std::uint64_t kHardCap = 1'000'000;

 private:
  TruncationPolicy() = default;
  std::uint64_t count_ = 0;
  double eps_ = 0.0;
};

// Sequential GEM weights V_k = (1-U_1)...(1-U_{k-1}) U_k plus the unbroken
// residual; sum(v) + residual == 1 up to rounding (telescoping).
struct StickWeights {
  std::vector<double> v;
  double residual = 1.0;
};

// Stick weights with i.i.d. category labels in {0..d} drawn from a base.
struct LabeledAtoms {
  StickWeights weights;
  std::vector<int> labels;
};

// GEM(1/2, theta): U_k ~ Beta(1/2, theta + k/2), k = 1, 2, ...
inline StickWeights sample_gem(const Params& params, const TruncationPolicy& trunc,
                               RngStream& rng) {
  StickWeights out;
  if (trunc.by_count()) out.v.reserve(trunc.count());
  double residual = 1.0;
  for (std::uint64_t k = 1;; ++k) {
    if (trunc.by_count() && k > trunc.count()) break;
    if (!trunc.by_count() && residual <= trunc.eps()) break;
    if (k > TruncationPolicy::kHardCap)
      throw NonConvergence("residual threshold not reached within 10^6 sticks");
    const double u = rng.beta(0.5, params.theta() + 0.5 * static_cast<double>(k));
    out.v.push_back(residual * u);
    residual *= (1.0 - u);
  }
  out.residual = residual;
  return out;
}

// GEM weights in descending order (a draw from PD(1/2, theta) truncated).
inline std::vector<double> sample_pd(const Params& params, const TruncationPolicy& trunc,
                                     RngStream& rng) {
  StickWeights s = sample_gem(params, trunc, rng);
  std::sort(s.v.begin(), s.v.end(), std::greater<>());
  return std::move(s.v);
}

namespace detail {

// index in {0..d} distributed as the base masses
inline int sample_category(const BaseWeights& base, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  const int last = base.cells() - 1;
  for (int i = 0; i < last; ++i) {
    acc += base[i];
    if (u < acc) return i;
  }
  return last;
}

}  // namespace detail

inline LabeledAtoms sample_labeled_atoms(const Params& params, const BaseWeights& base,
                                         const TruncationPolicy& trunc, RngStream& rng) {
  LabeledAtoms out;
  out.weights = sample_gem(params, trunc, rng);
  out.labels.reserve(out.weights.v.size());
  for (std::size_t k = 0; k < out.weights.v.size(); ++k)
    out.labels.push_back(detail::sample_category(base, rng));
  return out;
}

// Projection of the Dirichlet process Theta_{1/2,theta,nu0} onto the base
// partition: aggregates stick mass per category and dumps the residual onto
// one extra atom with a base-distributed label, so the output stays on the
// simplex with total-variation bias bounded by the residual.
inline SimplexPoint sample_dp_projected(const Params& params, const BaseWeights& base,
                                        const TruncationPolicy& trunc, RngStream& rng) {
  LabeledAtoms atoms = sample_labeled_atoms(params, base, trunc, rng);
  std::vector<double> mass(static_cast<std::size_t>(base.cells()), 0.0);
  for (std::size_t k = 0; k < atoms.weights.v.size(); ++k)
    mass[static_cast<std::size_t>(atoms.labels[k])] += atoms.weights.v[k];
  mass[static_cast<std::size_t>(detail::sample_category(base, rng))] += atoms.weights.residual;
  mass.pop_back();  // keep the first d coordinates
  return SimplexPoint(SimplexPoint::Unchecked{}, std::move(mass));
}

// Exact draw from rho_d at theta = 0: t_j = p_j^2 / Z_j^2 are one-sided
// stable-1/2 (Levy) with scale p_j^2, and x = t / sum(t).
inline SimplexPoint sample_rho_levy(const BaseWeights& base, RngStream& rng) {
  const int cells = base.cells();
  std::vector<double> t(static_cast<std::size_t>(cells));
  double sum = 0.0;
  for (int j = 0; j < cells; ++j) {
    double z;
    do {
      z = rng.normal();
    } while (std::abs(z) < 1e-150);  // resample the measure-zero event Z = 0
    const double r = base[j] / z;
    t[static_cast<std::size_t>(j)] = r * r;
    sum += r * r;
  }
  std::vector<double> x(static_cast<std::size_t>(cells - 1));
  for (int i = 0; i < cells - 1; ++i) x[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)] / sum;
  return SimplexPoint(SimplexPoint::Unchecked{}, std::move(x));
}

// Levy mechanics plus the importance weight (sum_j t_j)^{-theta}; the
// self-normalized estimator over these samples targets rho_d at theta.
// Weight variance is finite for theta > -1/4; draws for theta in
// (-1/2, -1/4] are flagged high_variance instead of being refused.
inline WeightedSample sample_rho_tilted(const Params& params, const BaseWeights& base,
                                        RngStream& rng) {
  const int cells = base.cells();
  std::vector<double> t(static_cast<std::size_t>(cells));
  double sum = 0.0;
  for (int j = 0; j < cells; ++j) {
    double z;
    do {
      z = rng.normal();
    } while (std::abs(z) < 1e-150);
    const double r = base[j] / z;
    t[static_cast<std::size_t>(j)] = r * r;
    sum += r * r;
  }
  std::vector<double> x(static_cast<std::size_t>(cells - 1));
  for (int i = 0; i < cells - 1; ++i) x[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)] / sum;
  const double theta = params.theta();
  const double w = theta == 0.0 ? 1.0 : std::pow(sum, -theta);
  return WeightedSample{SimplexPoint(SimplexPoint::Unchecked{}, std::move(x)), w,
                        theta <= -0.25};
}

}  // namespace pdlab
