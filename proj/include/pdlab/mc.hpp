#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "pdlab/core.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

// Shared knobs for Monte Carlo operations.
struct McConfig {
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;  // first chunk stream id
  int threads = 1;
};

// Per-component running sums for a vector-valued kernel.
struct MultiAccum {
  std::vector<double> sum, sumsq;
  std::uint64_t n = 0;

  explicit MultiAccum(std::size_t k = 0) : sum(k, 0.0), sumsq(k, 0.0) {}

  void add(std::span<const double> v) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += v[i];
      sumsq[i] += v[i] * v[i];
    }
    ++n;
  }

  void merge(const MultiAccum& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sumsq[i] += o.sumsq[i];
    }
    n += o.n;
  }

  double mean(std::size_t i) const { return sum[i] / static_cast<double>(n); }

  double std_err(std::size_t i) const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double var = (sumsq[i] - sum[i] * sum[i] / nn) / (nn - 1.0);
    return std::sqrt(std::max(var, 0.0) / nn);
  }

  MCEstimate estimate(std::size_t i, std::uint64_t seed) const {
    return MCEstimate{mean(i), std_err(i), n, seed};
  }
};

// Fixed chunk size so results are independent of thread count: chunk c draws
// from stream (stream_base + c) and partial sums are merged in chunk order.
inline constexpr std::uint64_t kMcChunk = 1u << 14;

// Runs `kernel(rng, out)` cfg.n times, k outputs per sample.
template <class Kernel>
MultiAccum mc_run(const McConfig& cfg, std::size_t k, Kernel&& kernel) {
  const std::uint64_t n_chunks = (cfg.n + kMcChunk - 1) / kMcChunk;
  std::vector<MultiAccum> partial(n_chunks, MultiAccum(k));

  auto run_chunk = [&](std::uint64_t c) {
    RngStream rng(cfg.seed, cfg.stream_base + c);
    const std::uint64_t lo = c * kMcChunk;
    const std::uint64_t hi = std::min(cfg.n, lo + kMcChunk);
    std::vector<double> out(k);
    for (std::uint64_t s = lo; s < hi; ++s) {
      kernel(rng, std::span<double>(out));
      partial[c].add(out);
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || n_chunks <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t c = next.fetch_add(1);
          if (c >= n_chunks) return;
          run_chunk(c);
        }
      });
    for (auto& th : pool) th.join();
  }

  MultiAccum total(k);
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace pdlab
