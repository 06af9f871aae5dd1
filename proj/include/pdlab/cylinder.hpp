#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pdlab/core.hpp"

namespace pdlab {

// Smooth test function of the first `active` simplex coordinates, viewed
// inside R^d for any d >= active. Gradient and hessian are analytic oracles;
// both are indexed over the active coordinates only (all later partials
// vanish identically).
struct CylinderFunction {
  int active = 0;
  std::function<double(std::span<const double>)> value;
  // fills grad[0..active)
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  // fills hess[i*active + j], row-major, symmetric
  std::function<void(std::span<const double>, std::span<double>)> hessian;
};

namespace cylinder {

// f(x) = c . (x_1..x_p) + c0
inline CylinderFunction linear(std::vector<double> c, double c0 = 0.0) {
  const int p = static_cast<int>(c.size());
  return CylinderFunction{
      p,
      [c, c0](std::span<const double> x) {
        double v = c0;
        for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * x[i];
        return v;
      },
      [c](std::span<const double>, std::span<double> g) {
        for (std::size_t i = 0; i < c.size(); ++i) g[i] = c[i];
      },
      [p](std::span<const double>, std::span<double> h) {
        for (int i = 0; i < p * p; ++i) h[i] = 0.0;
      }};
}

inline CylinderFunction constant(double c0) { return linear({0.0}, c0); }

// f(x) = x_1 + ... + x_p  (the projection functions of the norm-growth exhibit)
inline CylinderFunction sum_first(int p) {
  return linear(std::vector<double>(static_cast<std::size_t>(p), 1.0));
}

// f(x) = prod_i x_i^{e_i}, exponents e_i >= 0
inline CylinderFunction monomial(std::vector<int> e) {
  const int p = static_cast<int>(e.size());
  auto pw = [](double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
  };
  return CylinderFunction{
      p,
      [e, pw](std::span<const double> x) {
        double v = 1.0;
        for (std::size_t i = 0; i < e.size(); ++i) v *= pw(x[i], e[i]);
        return v;
      },
      [e, pw](std::span<const double> x, std::span<double> g) {
        for (std::size_t i = 0; i < e.size(); ++i) {
          if (e[i] == 0) {
            g[i] = 0.0;
            continue;
          }
          double v = e[i] * pw(x[i], e[i] - 1);
          for (std::size_t j = 0; j < e.size(); ++j)
            if (j != i) v *= pw(x[j], e[j]);
          g[i] = v;
        }
      },
      [e, p, pw](std::span<const double> x, std::span<double> h) {
        auto part = [&](std::size_t i, std::size_t skip_a, std::size_t skip_b) {
          double v = 1.0;
          for (std::size_t j = 0; j < e.size(); ++j)
            if (j != skip_a && j != skip_b) v *= pw(x[j], e[j]);
          (void)i;
          return v;
        };
        for (int i = 0; i < p; ++i)
          for (int j = 0; j < p; ++j) {
            const std::size_t si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
            double v;
            if (i == j) {
              v = e[si] < 2 ? 0.0
                            : static_cast<double>(e[si] * (e[si] - 1)) * pw(x[si], e[si] - 2) *
                                  part(si, si, si);
            } else {
              v = (e[si] == 0 || e[sj] == 0)
                      ? 0.0
                      : static_cast<double>(e[si] * e[sj]) * pw(x[si], e[si] - 1) *
                            pw(x[sj], e[sj] - 1) * part(si, si, sj);
            }
            h[static_cast<std::size_t>(i * p + j)] = v;
          }
      }};
}

// a*f + b*g as a cylinder function over max(active) coordinates.
inline CylinderFunction combine(double a, const CylinderFunction& f, double b,
                                const CylinderFunction& g) {
  const int p = std::max(f.active, g.active);
  auto pad = [p](const CylinderFunction& fn, std::span<const double> x) {
    return fn.value(x.first(static_cast<std::size_t>(fn.active)));
  };
  return CylinderFunction{
      p,
      [a, b, f, g, pad](std::span<const double> x) { return a * pad(f, x) + b * pad(g, x); },
      [a, b, f, g, p](std::span<const double> x, std::span<double> out) {
        std::vector<double> gf(static_cast<std::size_t>(f.active), 0.0);
        std::vector<double> gg(static_cast<std::size_t>(g.active), 0.0);
        f.gradient(x.first(static_cast<std::size_t>(f.active)), gf);
        g.gradient(x.first(static_cast<std::size_t>(g.active)), gg);
        for (int i = 0; i < p; ++i) {
          double v = 0.0;
          if (i < f.active) v += a * gf[static_cast<std::size_t>(i)];
          if (i < g.active) v += b * gg[static_cast<std::size_t>(i)];
          out[static_cast<std::size_t>(i)] = v;
        }
      },
      [a, b, f, g, p](std::span<const double> x, std::span<double> out) {
        std::vector<double> hf(static_cast<std::size_t>(f.active * f.active), 0.0);
        std::vector<double> hg(static_cast<std::size_t>(g.active * g.active), 0.0);
        f.hessian(x.first(static_cast<std::size_t>(f.active)), hf);
        g.hessian(x.first(static_cast<std::size_t>(g.active)), hg);
        for (int i = 0; i < p; ++i)
          for (int j = 0; j < p; ++j) {
            double v = 0.0;
            if (i < f.active && j < f.active) v += a * hf[static_cast<std::size_t>(i * f.active + j)];
            if (i < g.active && j < g.active) v += b * hg[static_cast<std::size_t>(i * g.active + j)];
            out[static_cast<std::size_t>(i * p + j)] = v;
          }
      }};
}

// Central finite differences of the value oracle, for consistency tests.
inline std::vector<double> fd_gradient(const CylinderFunction& f, std::span<const double> x,
                                       double h = 1e-5) {
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> g(static_cast<std::size_t>(f.active));
  for (int i = 0; i < f.active; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    const double x0 = xs[si];
    xs[si] = x0 + h;
    const double fp = f.value(xs);
    xs[si] = x0 - h;
    const double fm = f.value(xs);
    xs[si] = x0;
    g[si] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline std::vector<double> fd_hessian(const CylinderFunction& f, std::span<const double> x,
                                      double h = 1e-4) {
  const int p = f.active;
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> hess(static_cast<std::size_t>(p * p));
  const double f0 = f.value(xs);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      const std::size_t si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
      double v;
      if (i == j) {
        const double x0 = xs[si];
        xs[si] = x0 + h;
        const double fp = f.value(xs);
        xs[si] = x0 - h;
        const double fm = f.value(xs);
        xs[si] = x0;
        v = (fp - 2.0 * f0 + fm) / (h * h);
      } else {
        const double xi = xs[si], xj = xs[sj];
        double s = 0.0;
        for (int a : {+1, -1})
          for (int b : {+1, -1}) {
            xs[si] = xi + a * h;
            xs[sj] = xj + b * h;
            s += a * b * f.value(xs);
          }
        xs[si] = xi;
        xs[sj] = xj;
        v = s / (4.0 * h * h);
      }
      hess[static_cast<std::size_t>(i * p + j)] = v;
    }
  return hess;
}

}  // namespace cylinder
}  // namespace pdlab
