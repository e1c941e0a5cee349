#include "atlas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace atlas {

namespace {

constexpr std::uint64_t kSparsityToken = 0xA1;
constexpr std::uint64_t kBoundToken = 0xA2;
constexpr std::uint64_t kOrthoToken = 0xA3;
constexpr std::uint64_t kExpansionToken = 0xA4;
constexpr std::uint64_t kFiniteDiffToken = 0xA5;

std::vector<double> random_point(int n, SplitRng& rng) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = rng.uniform();
  return x;
}

}  // namespace

void print_report(std::ostream& out, const PropertyReport& r) {
  nlohmann::json j{{"property", r.property}, {"samples", r.samples},
                   {"violations", r.violations}, {"worst_value", r.worst_value},
                   {"bound_used", r.bound_used}, {"pass", r.pass},
                   {"note", r.note}};
  out << j.dump() << '\n';
}

PropertyReport check_sparsity(const AtlasModel& model, int points, SplitRng& rng) {
  if (points < 1) throw std::invalid_argument("check_sparsity: points must be >= 1");
  SplitRng stream = rng.split(kSparsityToken);
  const int banks_per_spline =
      model.variant() == Variant::all_densities_trainable ? model.max_density() + 1 : 1;
  const std::int64_t bound = 4LL * model.input_dim() *
                             (2LL * model.num_exponentials() + 1) * banks_per_spline;
  PropertyReport report;
  report.property = "sparsity";
  report.samples = points;
  report.bound_used = static_cast<double>(bound);
  AtlasModel::Scratch scratch;
  SparseGradient grad;
  std::vector<double> upstream(static_cast<std::size_t>(model.output_dim()), 0.0);
  std::int64_t worst = 0;
  for (int i = 0; i < points; ++i) {
    const std::vector<double> x = random_point(model.input_dim(), stream);
    for (int o = 0; o < model.output_dim(); ++o) {
      upstream[static_cast<std::size_t>(o)] = 1.0;
      model.backward(x, upstream, grad, scratch);
      upstream[static_cast<std::size_t>(o)] = 0.0;
      const auto nnz = static_cast<std::int64_t>(grad.nnz());
      worst = std::max(worst, nnz);
      if (nnz > bound) ++report.violations;
    }
  }
  report.worst_value = static_cast<double>(worst);
  report.pass = report.violations == 0;
  return report;
}

PropertyReport check_gradient_bound(const AtlasModel& model, int points, SplitRng& rng) {
  if (points < 1) throw std::invalid_argument("check_gradient_bound: points must be >= 1");
  SplitRng stream = rng.split(kBoundToken);
  const GradientBoundReport bound = model.gradient_bound();
  PropertyReport report;
  report.property = "gradient_bound";
  report.samples = points;
  report.bound_used = bound.bound;
  report.note = "u_g=" + std::to_string(bound.u_g) + " u_h=" + std::to_string(bound.u_h);
  AtlasModel::Scratch scratch;
  SparseGradient grad;
  const std::vector<double> ones(static_cast<std::size_t>(model.output_dim()), 1.0);
  for (int i = 0; i < points; ++i) {
    const std::vector<double> x = random_point(model.input_dim(), stream);
    model.backward(x, ones, grad, scratch);
    const double norm = grad.l1_norm();
    report.worst_value = std::max(report.worst_value, norm);
    if (!(norm < bound.bound)) ++report.violations;
  }
  report.pass = report.violations == 0;
  return report;
}

double default_orthogonality_gap(const AtlasModel& model) {
  return bank_support_width(model.max_density());
}

PropertyReport check_orthogonality(const AtlasModel& model, int pairs, double min_gap,
                                   SplitRng& rng) {
  if (pairs < 1) throw std::invalid_argument("check_orthogonality: pairs must be >= 1");
  if (!(min_gap >= 0.0)) throw std::invalid_argument("check_orthogonality: bad min_gap");
  SplitRng stream = rng.split(kOrthoToken);
  constexpr int kMaxAttempts = 100000;
  PropertyReport report;
  report.property = "distal_orthogonality";
  report.samples = pairs;
  report.bound_used = min_gap;
  const int n = model.input_dim();
  for (int i = 0; i < pairs; ++i) {
    std::vector<double> x, y;
    bool found = false;
    for (int attempt = 0; attempt < kMaxAttempts && !found; ++attempt) {
      x = random_point(n, stream);
      y = random_point(n, stream);
      found = true;
      for (int j = 0; j < n; ++j)
        if (std::abs(x[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)]) < min_gap) {
          found = false;
          break;
        }
    }
    if (!found)
      throw std::runtime_error(
          "check_orthogonality: could not sample a pair with the requested gap");
    const double ip = model.grad_inner_product(x, y);
    if (ip != 0.0) {
      ++report.violations;
      report.worst_value = std::max(report.worst_value, std::abs(ip));
    }
  }
  report.pass = report.violations == 0;
  return report;
}

PropertyReport check_expansion(const AtlasModel& model, int points, int delta_M,
                               SplitRng& rng) {
  if (points < 1) throw std::invalid_argument("check_expansion: points must be >= 1");
  if (delta_M < 0) throw std::invalid_argument("check_expansion: delta_M must be >= 0");
  SplitRng stream = rng.split(kExpansionToken);
  AtlasModel expanded = model;
  expanded.expand_density_all();
  expanded.expand_exponentials(delta_M);
  PropertyReport report;
  report.property = "expansion_invariance";
  report.samples = points;
  report.bound_used = kExpansionTolerance;
  if (expanded.max_density() != model.max_density() + 1 ||
      expanded.num_exponentials() != model.num_exponentials() + delta_M)
    throw std::logic_error("check_expansion: expansion bookkeeping failed");
  AtlasModel::Scratch s1, s2;
  std::vector<double> out_a(static_cast<std::size_t>(model.output_dim()));
  std::vector<double> out_b(static_cast<std::size_t>(model.output_dim()));
  for (int i = 0; i < points; ++i) {
    const std::vector<double> x = random_point(model.input_dim(), stream);
    model.forward(x, out_a, s1);
    expanded.forward(x, out_b, s2);
    double delta = 0.0;
    for (std::size_t o = 0; o < out_a.size(); ++o)
      delta = std::max(delta, std::abs(out_a[o] - out_b[o]));
    report.worst_value = std::max(report.worst_value, delta);
    if (delta > kExpansionTolerance) ++report.violations;
  }
  report.note = "delta_M=" + std::to_string(delta_M);
  report.pass = report.violations == 0;
  return report;
}

PropertyReport check_finite_diff(const AtlasModel& model, int points, double step,
                                 double tolerance, SplitRng& rng) {
  if (points < 1) throw std::invalid_argument("check_finite_diff: points must be >= 1");
  if (!(step > 0.0)) throw std::invalid_argument("check_finite_diff: step must be positive");
  SplitRng stream = rng.split(kFiniteDiffToken);
  AtlasModel probe = model;  // parameters are perturbed and restored
  PropertyReport report;
  report.property = "gradient_finite_diff";
  report.bound_used = tolerance;
  AtlasModel::Scratch scratch;
  SparseGradient grad;
  const std::vector<double> ones(static_cast<std::size_t>(model.output_dim()), 1.0);
  std::vector<double> out(static_cast<std::size_t>(model.output_dim()));
  auto output_sum = [&](std::span<const double> x) {
    probe.forward(x, out, scratch);
    double acc = 0.0;
    for (double v : out) acc += v;
    return acc;
  };
  for (int i = 0; i < points; ++i) {
    const std::vector<double> x = random_point(model.input_dim(), stream);
    probe.backward(x, ones, grad, scratch);
    for (const SparseGradient::Entry& e : grad.entries) {
      const double saved = probe.trainable_coeff(e.index);
      probe.set_trainable_coeff(e.index, saved + step);
      const double plus = output_sum(x);
      probe.set_trainable_coeff(e.index, saved - step);
      const double minus = output_sum(x);
      probe.set_trainable_coeff(e.index, saved);
      const double fd = (plus - minus) / (2.0 * step);
      const double rel =
          std::abs(e.value - fd) / std::max({std::abs(e.value), std::abs(fd), 1e-3});
      ++report.samples;
      report.worst_value = std::max(report.worst_value, rel);
      if (!(rel < tolerance)) ++report.violations;
    }
  }
  report.pass = report.violations == 0;
  return report;
}

std::vector<PropertyReport> run_all_checks(const AtlasModel& model, SplitRng& rng) {
  std::vector<PropertyReport> reports;
  reports.push_back(check_sparsity(model, 1000, rng));
  reports.push_back(check_gradient_bound(model, 1000, rng));
  reports.push_back(
      check_orthogonality(model, 10000, default_orthogonality_gap(model), rng));
  reports.push_back(check_expansion(model, 1000, 2, rng));
  reports.push_back(check_finite_diff(model, 50, 1e-5, 1e-5, rng));
  return reports;
}

}  // namespace atlas
