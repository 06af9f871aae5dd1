#pragma once

#include <cmath>
#include <vector>

#include "pdlab/core.hpp"
#include "pdlab/cylinder.hpp"
#include "pdlab/mc.hpp"
#include "pdlab/sampler.hpp"

namespace pdlab {

struct DriftVector {
  std::vector<double> b;
};

// a_ij = x_i (delta_ij - x_j); symmetric, PSD on Delta_d.
struct DiffusionMatrix {
  int d = 0;
  std::vector<double> a;  // row-major d x d
  double at(int i, int j) const { return a[static_cast<std::size_t>(i * d + j)]; }
};

namespace detail {

// w_i = (p_i^2/x_i) / sum_{j=1}^{d+1} (p_j^2/x_j), over all d+1 coordinates.
inline std::vector<double> singular_weights(const SimplexPoint& x, const BaseWeights& base) {
  const int d = x.d();
  std::vector<double> w(static_cast<std::size_t>(d) + 1);
  const std::vector<double> full = x.full();
  double sum = 0.0;
  for (int i = 0; i <= d; ++i) {
    w[static_cast<std::size_t>(i)] = base[i] * base[i] / full[static_cast<std::size_t>(i)];
    sum += w[static_cast<std::size_t>(i)];
  }
  for (double& wi : w) wi /= sum;
  return w;
}

inline void require_interior(const SimplexPoint& x, const char* op) {
  if (!x.interior()) throw BoundaryPoint(std::string(op) + " requires an interior point");
}

}  // namespace detail

// First-order coefficients of L^(d):
//   b_i = (1/2) [ -1/2 - theta x_i + (theta + (d+1)/2) w_i ].
// w_i is bounded in (0,1), so the drift is bounded up to the boundary; the
// operator is nevertheless defined only on the interior.
inline DriftVector drift(const SimplexPoint& x, const BaseWeights& base, const Params& params) {
  detail::require_interior(x, "drift");
  if (x.d() != base.d()) throw DimensionMismatch("drift: point/base dimension mismatch");
  const int d = x.d();
  const double coef = params.theta() + 0.5 * (d + 1);
  const std::vector<double> w = detail::singular_weights(x, base);
  DriftVector out;
  out.b.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    out.b[static_cast<std::size_t>(i)] =
        0.5 * (-0.5 - params.theta() * x[i] + coef * w[static_cast<std::size_t>(i)]);
  return out;
}

// Same formula applied to all d+1 coordinates; the entries sum to zero.
inline std::vector<double> drift_extended(const SimplexPoint& x, const BaseWeights& base,
                                          const Params& params) {
  detail::require_interior(x, "drift_extended");
  const int d = x.d();
  const double coef = params.theta() + 0.5 * (d + 1);
  const std::vector<double> w = detail::singular_weights(x, base);
  const std::vector<double> full = x.full();
  std::vector<double> b(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i <= d; ++i)
    b[static_cast<std::size_t>(i)] =
        0.5 * (-0.5 - params.theta() * full[static_cast<std::size_t>(i)] +
               coef * w[static_cast<std::size_t>(i)]);
  return b;
}

inline DiffusionMatrix diffusion_matrix(const SimplexPoint& x) {
  const int d = x.d();
  DiffusionMatrix m;
  m.d = d;
  m.a.resize(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m.a[static_cast<std::size_t>(i * d + j)] = x[i] * ((i == j ? 1.0 : 0.0) - x[j]);
  return m;
}

// L^(d) f(x) = (1/2) sum_i x_i d2_i f - (1/2) sum_ij x_i x_j d_i d_j f
//              + sum_i b_i d_i f
// evaluated with the cylinder function's analytic derivative oracles.
inline double apply_generator(const CylinderFunction& f, const SimplexPoint& x,
                              const BaseWeights& base, const Params& params) {
  detail::require_interior(x, "apply_generator");
  if (f.active > x.d()) throw DimensionMismatch("cylinder function has more active coordinates than d");
  const int p = f.active;
  const std::size_t sp = static_cast<std::size_t>(p);
  std::vector<double> g(sp), h(sp * sp);
  const std::span<const double> xs(x.coords().data(), sp);
  f.gradient(xs, g);
  f.hessian(xs, h);

  const DriftVector b = drift(x, base, params);
  double second = 0.0;
  for (int i = 0; i < p; ++i) {
    second += x[i] * h[static_cast<std::size_t>(i * p + i)];
    for (int j = 0; j < p; ++j) second -= x[i] * x[j] * h[static_cast<std::size_t>(i * p + j)];
  }
  double first = 0.0;
  for (int i = 0; i < p; ++i) first += b.b[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
  return 0.5 * second + first;
}

// Carre du champ (1/2) grad f . a(x) grad g, the integrand of E^(d).
inline double carre_du_champ(const CylinderFunction& f, const CylinderFunction& g,
                             const SimplexPoint& x) {
  const int p = std::max(f.active, g.active);
  if (p > x.d()) throw DimensionMismatch("cylinder function has more active coordinates than d");
  std::vector<double> gf(static_cast<std::size_t>(p), 0.0), gg(static_cast<std::size_t>(p), 0.0);
  f.gradient(std::span<const double>(x.coords().data(), static_cast<std::size_t>(f.active)),
             std::span<double>(gf.data(), static_cast<std::size_t>(f.active)));
  g.gradient(std::span<const double>(x.coords().data(), static_cast<std::size_t>(g.active)),
             std::span<double>(gg.data(), static_cast<std::size_t>(g.active)));
  double dot = 0.0;
  double xf = 0.0, xg = 0.0;
  for (int i = 0; i < p; ++i) {
    dot += x[i] * gf[static_cast<std::size_t>(i)] * gg[static_cast<std::size_t>(i)];
    xf += x[i] * gf[static_cast<std::size_t>(i)];
    xg += x[i] * gg[static_cast<std::size_t>(i)];
  }
  return 0.5 * (dot - xf * xg);
}

// One row of the B_i convergence diagnostic (Theorem-2.2-style limit drift).
struct BiDiagnosticsRow {
  int d = 0;
  MCEstimate second_moment;        // E[R_d^2], tail-aggregate denominator
  MCEstimate second_moment_paper;  // E[R_d^2], single-next-category denominator
  MCEstimate diff_sq_to_next;      // E[(R_d - R_{d_next})^2] (tail variant); n=0 on last row
};

namespace detail {

// R_d with a choice of last denominator term. mu has d coordinates + tail.
inline double r_functional(int i0, double q, std::span<const double> mu, double tail_mu,
                           bool paper_last_term) {
  const int d = static_cast<int>(mu.size());
  auto nu = [q](int j) { return (1.0 - q) * std::pow(q, j - 1); };  // nu0(j), 1-based
  const double nu_i = nu(i0);
  if (!(mu[static_cast<std::size_t>(i0 - 1)] > 0.0)) return d + 1;  // limiting value
  double denom = 0.0;
  for (int j = 1; j <= d; ++j) {
    const double m = mu[static_cast<std::size_t>(j - 1)];
    denom += nu(j) * nu(j) / m;  // +inf when m == 0; the ratio then vanishes
  }
  const double last_num = paper_last_term ? nu(d + 1) : std::pow(q, d);
  denom += last_num * last_num / tail_mu;
  return (d + 1) * (nu_i * nu_i / mu[static_cast<std::size_t>(i0 - 1)]) / denom;
}

}  // namespace detail

// Monte Carlo Cauchy diagnostic for the L^2 limit of
//   R_d(mu) = (d+1) nu0(i)^2/mu(i) / (sum_{j<=d} nu0(j)^2/mu(j) + last),
// for geometric nu0 with ratio q, across the increasing d_list. `last` is
// the tail aggregate nu0(>d)^2/mu(>d) by default; the single-next-category
// variant nu0(d+1)^2/mu(>d) is reported alongside for comparison.
inline std::vector<BiDiagnosticsRow> estimate_Bi(int i, double q, const Params& params,
                                                 const std::vector<int>& d_list,
                                                 const McConfig& cfg) {
  if (d_list.empty()) throw DomainError("estimate_Bi needs a nonempty d_list");
  for (std::size_t m = 1; m < d_list.size(); ++m)
    if (d_list[m] <= d_list[m - 1]) throw DomainError("d_list must be strictly increasing");
  if (i < 1 || i > d_list.front()) throw DomainError("category i must lie in [1, d_list[0]]");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("geometric ratio q must be in (0,1)");

  const int d_max = d_list.back();
  const BaseWeights base = geometric_base(q, d_max);
  const TruncationPolicy trunc = TruncationPolicy::residual_threshold(1e-12);
  const std::size_t m_count = d_list.size();
  // components: [R_d per d] + [R_d_paper per d] + [squared diffs]
  const std::size_t k = 3 * m_count - 1;

  MultiAccum acc = mc_run(cfg, k, [&](RngStream& rng, std::span<double> out) {
    const SimplexPoint mu = sample_dp_projected(params, base, trunc, rng);
    const std::vector<double>& c = mu.coords();
    double prefix = 0.0;
    std::vector<double> r_tail(m_count), r_paper(m_count);
    std::size_t ci = 0;
    for (std::size_t m = 0; m < m_count; ++m) {
      const int d = d_list[m];
      while (ci < static_cast<std::size_t>(d)) prefix += c[ci++];
      const double tail_mu = std::max(1.0 - prefix, 0.0);
      r_tail[m] = detail::r_functional(i, q, std::span<const double>(c.data(), ci), tail_mu, false);
      r_paper[m] = detail::r_functional(i, q, std::span<const double>(c.data(), ci), tail_mu, true);
      out[m] = r_tail[m] * r_tail[m];
      out[m_count + m] = r_paper[m] * r_paper[m];
    }
    for (std::size_t m = 0; m + 1 < m_count; ++m) {
      const double diff = r_tail[m] - r_tail[m + 1];
      out[2 * m_count + m] = diff * diff;
    }
  });

  std::vector<BiDiagnosticsRow> rows(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    rows[m].d = d_list[m];
    rows[m].second_moment = acc.estimate(m, cfg.seed);
    rows[m].second_moment_paper = acc.estimate(m_count + m, cfg.seed);
    if (m + 1 < m_count) rows[m].diff_sq_to_next = acc.estimate(2 * m_count + m, cfg.seed);
  }
  return rows;
}

}  // namespace pdlab
