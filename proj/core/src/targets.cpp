#include "atlas/targets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace atlas {

void validate_region(const Box& box, int expected_dim) {
  if (box.dim() != expected_dim || static_cast<int>(box.hi.size()) != expected_dim)
    throw std::invalid_argument("region: dimension mismatch");
  for (int j = 0; j < expected_dim; ++j) {
    if (!(box.lo[j] >= 0.0 && box.hi[j] <= 1.0 && box.lo[j] < box.hi[j]))
      throw std::invalid_argument("region: needs 0 <= lo < hi <= 1 in every coordinate");
  }
}

RbfTarget::RbfTarget(int dim, std::vector<double> centers, std::vector<double> scales,
                     std::vector<double> weights)
    : dim_(dim),
      centers_(std::move(centers)),
      scales_(std::move(scales)),
      weights_(std::move(weights)) {
  if (dim_ < 1) throw std::invalid_argument("RbfTarget: dim must be >= 1");
  const std::size_t count = scales_.size();
  if (count == 0 || weights_.size() != count ||
      centers_.size() != count * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("RbfTarget: component size mismatch");
  scales_sq_.resize(count);
  for (std::size_t m = 0; m < count; ++m) {
    if (!(scales_[m] > 0.0))
      throw std::invalid_argument("RbfTarget: scales must be positive");
    scales_sq_[m] = scales_[m] * scales_[m];
  }
}

RbfTarget RbfTarget::sample(int dim, SplitRng& rng, int count) {
  if (dim < 1 || count < 1)
    throw std::invalid_argument("RbfTarget::sample: dim and count must be >= 1");
  std::vector<double> centers(static_cast<std::size_t>(count) * dim);
  for (double& c : centers) c = rng.uniform();
  std::vector<double> scales(static_cast<std::size_t>(count));
  for (double& s : scales) s = rng.exponential(10.0);
  std::vector<double> weights(static_cast<std::size_t>(count));
  for (double& w : weights) w = rng.normal();
  return RbfTarget(dim, std::move(centers), std::move(scales), std::move(weights));
}

double RbfTarget::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("RbfTarget: input dimension mismatch");
  double acc = 0.0;
  const std::size_t count = scales_.size();
  for (std::size_t m = 0; m < count; ++m) {
    const double* c = centers_.data() + m * static_cast<std::size_t>(dim_);
    double d2 = 0.0;
    for (int j = 0; j < dim_; ++j) {
      const double d = x[j] - c[j];
      d2 += d * d;
    }
    acc += weights_[m] * std::exp(-scales_sq_[m] * d2);
  }
  return acc;
}

PatchedTarget::PatchedTarget(RbfTarget base, RbfTarget replacement, Box region)
    : base_(std::move(base)), replacement_(std::move(replacement)), region_(std::move(region)) {
  if (base_.dim() != replacement_.dim())
    throw std::invalid_argument("PatchedTarget: base/replacement dimension mismatch");
  validate_region(region_, base_.dim());
}

std::string to_string(AnalyticId id) {
  switch (id) {
    case AnalyticId::A: return "A";
    case AnalyticId::B: return "B";
    case AnalyticId::C: return "C";
    case AnalyticId::D: return "D";
  }
  throw std::invalid_argument("to_string: unknown analytic target");
}

AnalyticId analytic_id_from_string(const std::string& s) {
  if (s == "A") return AnalyticId::A;
  if (s == "B") return AnalyticId::B;
  if (s == "C") return AnalyticId::C;
  if (s == "D") return AnalyticId::D;
  throw std::invalid_argument("analytic_id_from_string: expected A, B, C or D");
}

double analytic_target(AnalyticId id, double x1, double x2, ExpAThetaMode mode) {
  switch (id) {
    case AnalyticId::A: {
      const double cx = x1 - 0.5, cy = x2 - 0.5;
      const double r = std::sqrt(cx * cx + cy * cy);
      const double theta = mode == ExpAThetaMode::as_written
                               ? std::atan2(cx * cx, cy * cy)
                               : std::atan2(cy, cx);
      return std::sin(30.0 * r + theta) + 2.0;
    }
    case AnalyticId::B: {
      const double a = std::cos(20.0 * x1 - 10.0);
      const double b = std::cos(10.0 * x2 - 5.0);
      const double e1 = 20.0 * x1 - 10.0, e2 = 20.0 * x2 - 10.0;
      return a * a + b * b + std::exp(-e1 * e1 - e2 * e2);
    }
    case AnalyticId::C:
      return 2.0 + std::cos(20.0 * x1 - 10.0) * std::cos(20.0 * x2 - 10.0);
    case AnalyticId::D: {
      const double s = std::sin(2.0 * std::numbers::pi * x1) *
                       std::sin(2.0 * std::numbers::pi * x2);
      return 2.0 + 1.0 / (1.0 + std::exp(-s));
    }
  }
  throw std::invalid_argument("analytic_target: unknown id");
}

double appendix_task2_target(AnalyticId id, double x1, double x2, ExpAThetaMode mode) {
  if (x1 > 0.45 && x1 < 0.55 && x2 > 0.45 && x2 < 0.55) return 0.0;
  return analytic_target(id, x1, x2, mode);
}

Dataset sample_dataset(const ScalarTarget& target, int dim, std::int64_t count,
                       const Box& region, double noise_sigma, SplitRng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_dataset: dim must be >= 1");
  if (count < 1) throw std::invalid_argument("sample_dataset: count must be >= 1");
  if (!(noise_sigma >= 0.0))
    throw std::invalid_argument("sample_dataset: noise_sigma must be >= 0");
  validate_region(region, dim);
  Dataset data;
  data.input_dim = dim;
  data.output_dim = 1;
  data.inputs.resize(static_cast<std::size_t>(count) * dim);
  data.targets.resize(static_cast<std::size_t>(count));
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (std::int64_t i = 0; i < count; ++i) {
    for (int j = 0; j < dim; ++j) {
      x[static_cast<std::size_t>(j)] = rng.uniform(region.lo[j], region.hi[j]);
      data.inputs[static_cast<std::size_t>(i) * dim + j] = x[static_cast<std::size_t>(j)];
    }
    const double noise = rng.normal();
    data.targets[static_cast<std::size_t>(i)] = target(x) + noise_sigma * noise;
  }
  return data;
}

namespace {
double binomial(int n, int k) {
  // Multiplicative form; exact in double for the small n used here.
  double c = 1.0;
  for (int i = 1; i <= k; ++i)
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}
}  // namespace

double permutation_prob(int n, int k, double delta) {
  if (n < 1) throw std::invalid_argument("permutation_prob: n must be >= 1");
  if (k < 0 || k > n) throw std::invalid_argument("permutation_prob: k out of range");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("permutation_prob: delta outside [0, 1]");
  return binomial(n, k) * std::pow(delta, n - k) * std::pow(1.0 - delta, k);
}

double expected_epsilon(int n, double delta) {
  double acc = 0.0;
  for (int k = 0; k <= n; ++k)
    acc += (static_cast<double>(n - k) / n) * permutation_prob(n, k, delta);
  return acc;
}

double expected_off_target(int n, double delta) {
  if (n < 1) throw std::invalid_argument("expected_off_target: n must be >= 1");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("expected_off_target: delta outside [0, 1]");
  return delta - std::pow(delta, n);
}

}  // namespace atlas
