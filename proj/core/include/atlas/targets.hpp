#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "atlas/rng.hpp"

namespace atlas {

// Axis-aligned box inside the unit cube.
struct Box {
  std::vector<double> lo, hi;

  int dim() const noexcept { return static_cast<int>(lo.size()); }
  bool strictly_inside(std::span<const double> x) const noexcept {
    for (std::size_t j = 0; j < lo.size(); ++j)
      if (!(x[j] > lo[j] && x[j] < hi[j])) return false;
    return true;
  }
  static Box unit(int n) {
    return {std::vector<double>(static_cast<std::size_t>(n), 0.0),
            std::vector<double>(static_cast<std::size_t>(n), 1.0)};
  }
};

// Throws std::invalid_argument unless every lo_j < hi_j within [0, 1].
void validate_region(const Box& box, int expected_dim);

// Radial-basis mixture sum_m weights[m] * exp(-(scales[m] * |x - c_m|)^2).
class RbfTarget {
 public:
  RbfTarget(int dim, std::vector<double> centers, std::vector<double> scales,
            std::vector<double> weights);

  // Draw order: all centers (coordinate-major per RBF), then all scales
  // (exponential, mean 10), then all weights (standard normal).
  static RbfTarget sample(int dim, SplitRng& rng, int count = 1000);

  double operator()(std::span<const double> x) const;

  int dim() const noexcept { return dim_; }
  int count() const noexcept { return static_cast<int>(scales_.size()); }
  std::span<const double> centers() const noexcept { return centers_; }
  std::span<const double> scales() const noexcept { return scales_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  int dim_;
  std::vector<double> centers_;  // count * dim, row-major
  std::vector<double> scales_;
  std::vector<double> scales_sq_;
  std::vector<double> weights_;
};

// Base target everywhere except strictly inside the region, where an
// independent replacement target takes over. No blending at the boundary.
class PatchedTarget {
 public:
  PatchedTarget(RbfTarget base, RbfTarget replacement, Box region);

  double operator()(std::span<const double> x) const {
    return region_.strictly_inside(x) ? replacement_(x) : base_(x);
  }

  const RbfTarget& base() const noexcept { return base_; }
  const RbfTarget& replacement() const noexcept { return replacement_; }
  const Box& region() const noexcept { return region_; }

 private:
  RbfTarget base_, replacement_;
  Box region_;
};

// Two-variable analytic benchmark targets.
enum class AnalyticId { A, B, C, D };
std::string to_string(AnalyticId id);
AnalyticId analytic_id_from_string(const std::string& s);

// Target A's angle argument: the published form squares both atan2 arguments;
// atan2_unsquared instead uses the plain centered coordinates.
enum class ExpAThetaMode { as_written, atan2_unsquared };

double analytic_target(AnalyticId id, double x1, double x2,
                       ExpAThetaMode mode = ExpAThetaMode::as_written);

// Second-task target: zero strictly inside (0.45, 0.55)^2, analytic elsewhere.
double appendix_task2_target(AnalyticId id, double x1, double x2,
                             ExpAThetaMode mode = ExpAThetaMode::as_written);

using ScalarTarget = std::function<double(std::span<const double>)>;

struct Dataset {
  int input_dim = 0;
  int output_dim = 1;
  std::vector<double> inputs;   // size * input_dim
  std::vector<double> targets;  // size * output_dim

  std::int64_t size() const noexcept {
    return input_dim == 0 ? 0 : static_cast<std::int64_t>(inputs.size()) / input_dim;
  }
  std::span<const double> input(std::int64_t i) const noexcept {
    return {inputs.data() + i * input_dim, static_cast<std::size_t>(input_dim)};
  }
  std::span<const double> target(std::int64_t i) const noexcept {
    return {targets.data() + i * output_dim, static_cast<std::size_t>(output_dim)};
  }
};

// Inputs uniform over the region, targets target(x) + noise_sigma * N(0, 1).
// Draw order per point: the dim coordinates, then one normal (drawn even when
// noise_sigma is zero, so noisy and clean datasets share input streams).
Dataset sample_dataset(const ScalarTarget& target, int dim, std::int64_t count,
                       const Box& region, double noise_sigma, SplitRng& rng);

// Probability that exactly n-k of n coordinates of a uniform point fall in an
// update region of width delta: C(n, k) delta^(n-k) (1-delta)^k.
double permutation_prob(int n, int k, double delta);

// sum_k ((n-k)/n) permutation_prob(n, k, delta); identically delta.
double expected_epsilon(int n, double delta);

// Expected off-target error heuristic delta - delta^n (the fully-inside
// fraction, which training corrects, subtracted from expected_epsilon).
double expected_off_target(int n, double delta);

}  // namespace atlas
