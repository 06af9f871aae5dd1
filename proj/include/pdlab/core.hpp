#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdlab {

// Tolerance for simplex-sum validation. Accumulated rounding in
// stick-breaking must not reject valid samples.
inline constexpr double kSimplexTol = 1e-12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeCoordinate : Error { using Error::Error; };
struct MassExceedsOne : Error { using Error::Error; };
struct ThetaOutOfRange : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct BoundaryPoint : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct MeshTooFine : Error { using Error::Error; };
struct SolverFailure : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// Model parameters. alpha is stored but locked to 1/2: every closed form in
// this library   (rho_d, the -3/2 exponents, the Levy sampler)   is specific
// to alpha = 1/2.
class Params {
 public:
  explicit Params(double theta, double alpha = 0.5) : theta_(theta) {
    if (!(theta > -0.5) || !std::isfinite(theta))
      throw ThetaOutOfRange("theta must satisfy theta > -1/2, got " + std::to_string(theta));
    if (alpha != 0.5)
      throw DomainError("alpha is fixed to 1/2 in this model");
  }

  double theta() const { return theta_; }
  double alpha() const { return 0.5; }

 private:
  double theta_;
};

// A point of the d-simplex Delta_d: d explicit coordinates with
// x_i >= 0 and sum <= 1; the (d+1)-th coordinate is the remainder.
class SimplexPoint {
 public:
  struct Unchecked {};  // tag for trusted construction by samplers

  static SimplexPoint make(std::vector<double> coords) {
    double sum = 0.0;
    for (double c : coords) {
      if (!std::isfinite(c)) throw DomainError("non-finite simplex coordinate");
      if (c < 0.0) throw NegativeCoordinate("simplex coordinate " + std::to_string(c) + " < 0");
      sum += c;
    }
    if (sum > 1.0 + kSimplexTol)
      throw MassExceedsOne("coordinate sum " + std::to_string(sum) + " exceeds 1");
    return SimplexPoint(std::move(coords));
  }

  SimplexPoint(Unchecked, std::vector<double> coords) : coords_(std::move(coords)) {}

  int d() const { return static_cast<int>(coords_.size()); }
  const std::vector<double>& coords() const { return coords_; }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }

  // Implicit last coordinate x_{d+1} = 1 - sum, floored at 0.
  double remainder() const {
    double sum = 0.0;
    for (double c : coords_) sum += c;
    return std::max(0.0, 1.0 - sum);
  }

  // All d+1 coordinates.
  std::vector<double> full() const {
    std::vector<double> out(coords_);
    out.push_back(remainder());
    return out;
  }

  bool interior() const {
    for (double c : coords_)
      if (!(c > 0.0)) return false;
    return remainder() > 0.0;
  }

 private:
  explicit SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)) {}
  std::vector<double> coords_;
};

inline SimplexPoint make_simplex_point(std::vector<double> coords) {
  return SimplexPoint::make(std::move(coords));
}

// Partition masses p_1..p_{d+1} of the base measure nu_0. All masses are
// strictly positive and sum to 1 (within kSimplexTol).
class BaseWeights {
 public:
  static BaseWeights make(std::vector<double> p) {
    if (p.size() < 2) throw DomainError("base weights need at least 2 cells");
    double sum = 0.0;
    for (double w : p) {
      if (!(w > 0.0) || !std::isfinite(w))
        throw DomainError("base weight must be strictly positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexTol)
      throw DomainError("base weights sum to " + std::to_string(sum) + ", expected 1");
    return BaseWeights(std::move(p));
  }

  int d() const { return static_cast<int>(p_.size()) - 1; }
  int cells() const { return static_cast<int>(p_.size()); }
  const std::vector<double>& p() const { return p_; }
  double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }

  bool symmetric() const {
    for (double w : p_)
      if (std::abs(w - p_[0]) > kSimplexTol) return false;
    return true;
  }

 private:
  explicit BaseWeights(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

// Level-k dyadic partition: 2^k cells of mass 2^{-k} each.
inline BaseWeights dyadic_base(int k) {
  if (k < 1 || k > 30) throw DomainError("dyadic level k must be in [1,30]");
  const std::size_t cells = std::size_t{1} << k;
  return BaseWeights::make(std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
}

// Refinement map between dyadic levels: cell j (1-based) at level k splits
// into cells {2j-1, 2j} at level k+1.
inline std::pair<int, int> dyadic_refine_cell(int j) {
  if (j < 1) throw DomainError("cell index is 1-based");
  return {2 * j - 1, 2 * j};
}

// Aggregate level-(k+1) weights along the refinement map back to level k.
inline std::vector<double> dyadic_aggregate(std::span<const double> fine) {
  if (fine.size() % 2 != 0) throw DimensionMismatch("fine level must have even cell count");
  std::vector<double> coarse(fine.size() / 2);
  for (std::size_t j = 0; j < coarse.size(); ++j)
    coarse[j] = fine[2 * j] + fine[2 * j + 1];
  return coarse;
}

// Geometric base nu_0(j) = (1-q) q^{j-1} on N, projected onto the partition
// {1},...,{d},{d+1,d+2,...}; the last cell carries the tail mass q^d.
inline BaseWeights geometric_base(double q, int d) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("geometric ratio q must be in (0,1)");
  if (d < 1) throw DomainError("need d >= 1 categories");
  std::vector<double> p(static_cast<std::size_t>(d) + 1);
  double tail = 1.0;
  for (int j = 0; j < d; ++j) {
    p[static_cast<std::size_t>(j)] = (1.0 - q) * std::pow(q, j);
    tail -= p[static_cast<std::size_t>(j)];
  }
  p[static_cast<std::size_t>(d)] = std::max(tail, std::pow(q, d));
  return BaseWeights::make(std::move(p));
}

// A simplex point with an importance weight. weight == 1 exactly for
// untilted (theta = 0) samples; high_variance marks theta in (-1/2, -1/4]
// where the tilt has infinite weight variance.
struct WeightedSample {
  SimplexPoint point;
  double weight = 1.0;
  bool high_variance = false;
};

// Monte Carlo estimate; std_err is the sample standard deviation / sqrt(n).
struct MCEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

}  // namespace pdlab
