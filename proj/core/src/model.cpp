#include "atlas/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace atlas {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::distal_orthogonal: return "distal_orthogonal";
    case Variant::all_densities_trainable: return "all_densities_trainable";
  }
  throw std::invalid_argument("to_string: unknown variant");
}

Variant variant_from_string(const std::string& s) {
  if (s == "distal_orthogonal") return Variant::distal_orthogonal;
  if (s == "all_densities_trainable") return Variant::all_densities_trainable;
  throw std::invalid_argument("variant_from_string: unknown variant '" + s + "'");
}

AtlasModel::AtlasModel(int n, int p, int M, int r, Variant variant)
    : n_(n), p_(p), M_(M), r_(r), variant_(variant) {
  if (n < 1) throw std::invalid_argument("AtlasModel: n must be >= 1");
  if (p < 1) throw std::invalid_argument("AtlasModel: p must be >= 1");
  if (M < 0) throw std::invalid_argument("AtlasModel: M must be >= 0");
  if (r < 0) throw std::invalid_argument("AtlasModel: r must be >= 0");
  const std::size_t total =
      static_cast<std::size_t>(p) * static_cast<std::size_t>(splines_per_output());
  splines_.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    splines_.emplace_back(r_);
    if (variant_ == Variant::all_densities_trainable)
      splines_.back().set_all_trainable();
  }
}

const MixedDensitySpline& AtlasModel::f(int o, int j) const {
  if (o < 0 || o >= p_ || j < 0 || j >= n_)
    throw std::out_of_range("AtlasModel::f: index out of range");
  return splines_[spline_index(o, j)];
}
MixedDensitySpline& AtlasModel::f(int o, int j) {
  return const_cast<MixedDensitySpline&>(std::as_const(*this).f(o, j));
}

const MixedDensitySpline& AtlasModel::g(int o, int k, int j) const {
  if (o < 0 || o >= p_ || k < 1 || k > M_ || j < 0 || j >= n_)
    throw std::out_of_range("AtlasModel::g: index out of range");
  return splines_[spline_index(o, n_ + (k - 1) * n_ + j)];
}
MixedDensitySpline& AtlasModel::g(int o, int k, int j) {
  return const_cast<MixedDensitySpline&>(std::as_const(*this).g(o, k, j));
}

const MixedDensitySpline& AtlasModel::h(int o, int k, int j) const {
  if (o < 0 || o >= p_ || k < 1 || k > M_ || j < 0 || j >= n_)
    throw std::out_of_range("AtlasModel::h: index out of range");
  return splines_[spline_index(o, n_ + M_ * n_ + (k - 1) * n_ + j)];
}
MixedDensitySpline& AtlasModel::h(int o, int k, int j) {
  return const_cast<MixedDensitySpline&>(std::as_const(*this).h(o, k, j));
}

void AtlasModel::fill_windows(std::span<const double> x, Scratch& scratch) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("AtlasModel: input dimension mismatch");
  const int nb = r_ + 1;
  scratch.windows.resize(static_cast<std::size_t>(n_) * nb);
  for (int j = 0; j < n_; ++j) {
    if (!(x[j] >= 0.0 && x[j] <= 1.0))
      throw std::domain_error("AtlasModel: input outside the unit cube");
    for (int rho = 0; rho < nb; ++rho)
      scratch.windows[static_cast<std::size_t>(j) * nb + rho] =
          active_window(rho, x[j]);
  }
}

void AtlasModel::forward(std::span<const double> x, std::span<double> out,
                         Scratch& scratch) const {
  if (static_cast<int>(out.size()) != p_)
    throw std::invalid_argument("AtlasModel: output dimension mismatch");
  fill_windows(x, scratch);
  const int nb = r_ + 1;
  const ActiveWindow* wins = scratch.windows.data();
  auto win = [&](int j) {
    return std::span<const ActiveWindow>(wins + static_cast<std::size_t>(j) * nb, nb);
  };
  for (int o = 0; o < p_; ++o) {
    const MixedDensitySpline* base = &splines_[spline_index(o, 0)];
    const MixedDensitySpline* gs = base + n_;
    const MixedDensitySpline* hs = base + n_ + static_cast<std::size_t>(M_) * n_;
    double acc = 0.0;
    for (int j = 0; j < n_; ++j) acc += base[j].eval_windows(win(j));
    for (int k = 1; k <= M_; ++k) {
      double G = 0.0, H = 0.0;
      for (int j = 0; j < n_; ++j) {
        G += gs[(k - 1) * n_ + j].eval_windows(win(j));
        H += hs[(k - 1) * n_ + j].eval_windows(win(j));
      }
      if (G > kInteriorGuard || H > kInteriorGuard)
        throw std::range_error("AtlasModel: exponential interior exceeds overflow guard");
      acc += (std::exp(G) - std::exp(H)) / (static_cast<double>(k) * k);
    }
    out[o] = acc;
  }
}

void AtlasModel::forward(std::span<const double> x, std::span<double> out) const {
  Scratch scratch;
  forward(x, out, scratch);
}

std::vector<double> AtlasModel::forward(std::span<const double> x) const {
  std::vector<double> out(static_cast<std::size_t>(p_), 0.0);
  forward(x, std::span<double>(out));
  return out;
}

void AtlasModel::backward(std::span<const double> x, std::span<const double> upstream,
                          SparseGradient& out, Scratch& scratch) const {
  if (static_cast<int>(upstream.size()) != p_)
    throw std::invalid_argument("AtlasModel: upstream dimension mismatch");
  fill_windows(x, scratch);
  const int nb = r_ + 1;
  const ActiveWindow* wins = scratch.windows.data();
  auto win = [&](int j) {
    return std::span<const ActiveWindow>(wins + static_cast<std::size_t>(j) * nb, nb);
  };
  scratch.exp_g.resize(static_cast<std::size_t>(M_));
  scratch.exp_h.resize(static_cast<std::size_t>(M_));
  out.clear();
  const std::int64_t per_spline = splines_[0].trainable_count();
  for (int o = 0; o < p_; ++o) {
    const double u = upstream[o];
    if (u == 0.0) continue;
    const std::size_t s0 = spline_index(o, 0);
    const MixedDensitySpline* base = &splines_[s0];
    const MixedDensitySpline* gs = base + n_;
    const MixedDensitySpline* hs = base + n_ + static_cast<std::size_t>(M_) * n_;
    for (int k = 1; k <= M_; ++k) {
      double G = 0.0, H = 0.0;
      for (int j = 0; j < n_; ++j) {
        G += gs[(k - 1) * n_ + j].eval_windows(win(j));
        H += hs[(k - 1) * n_ + j].eval_windows(win(j));
      }
      if (G > kInteriorGuard || H > kInteriorGuard)
        throw std::range_error("AtlasModel: exponential interior exceeds overflow guard");
      const double kk = static_cast<double>(k) * k;
      scratch.exp_g[k - 1] = std::exp(G) / kk;
      scratch.exp_h[k - 1] = std::exp(H) / kk;
    }
    std::int64_t index_base = static_cast<std::int64_t>(s0) * per_spline;
    for (int j = 0; j < n_; ++j, index_base += per_spline)
      base[j].accumulate_grad(win(j), u, index_base, out);
    for (int k = 1; k <= M_; ++k) {
      const double scale = u * scratch.exp_g[k - 1];
      for (int j = 0; j < n_; ++j, index_base += per_spline)
        gs[(k - 1) * n_ + j].accumulate_grad(win(j), scale, index_base, out);
    }
    for (int k = 1; k <= M_; ++k) {
      const double scale = -u * scratch.exp_h[k - 1];
      for (int j = 0; j < n_; ++j, index_base += per_spline)
        hs[(k - 1) * n_ + j].accumulate_grad(win(j), scale, index_base, out);
    }
  }
}

SparseGradient AtlasModel::backward(std::span<const double> x,
                                    std::span<const double> upstream) const {
  Scratch scratch;
  SparseGradient g;
  backward(x, upstream, g, scratch);
  return g;
}

void AtlasModel::expand_exponentials(int delta_M) {
  if (delta_M < 0)
    throw std::invalid_argument("expand_exponentials: delta_M must be >= 0");
  if (delta_M == 0) return;
  const int new_M = M_ + delta_M;
  auto fresh = [&]() {
    MixedDensitySpline s(r_);
    if (variant_ == Variant::all_densities_trainable) s.set_all_trainable();
    return s;
  };
  std::vector<MixedDensitySpline> next;
  next.reserve(static_cast<std::size_t>(p_) * n_ * (2 * new_M + 1));
  for (int o = 0; o < p_; ++o) {
    const MixedDensitySpline* base = &splines_[spline_index(o, 0)];
    for (int j = 0; j < n_; ++j) next.push_back(base[j]);
    for (int i = 0; i < M_ * n_; ++i) next.push_back(base[n_ + i]);
    for (int i = 0; i < delta_M * n_; ++i) next.push_back(fresh());
    for (int i = 0; i < M_ * n_; ++i) next.push_back(base[n_ + M_ * n_ + i]);
    for (int i = 0; i < delta_M * n_; ++i) next.push_back(fresh());
  }
  splines_ = std::move(next);
  M_ = new_M;
}

void AtlasModel::expand_density_all() {
  for (MixedDensitySpline& s : splines_) {
    s.expand_density();
    if (variant_ == Variant::all_densities_trainable) s.set_all_trainable();
  }
  ++r_;
}

std::int64_t AtlasModel::count_trainable() const noexcept {
  std::int64_t c = 0;
  for (const MixedDensitySpline& s : splines_) c += s.trainable_count();
  return c;
}

std::int64_t AtlasModel::count_coeffs() const noexcept {
  std::int64_t c = 0;
  for (const MixedDensitySpline& s : splines_) c += s.coeff_count();
  return c;
}

double AtlasModel::trainable_coeff(std::int64_t index) const {
  const std::int64_t per_spline = splines_[0].trainable_count();
  if (index < 0 || index >= count_trainable())
    throw std::out_of_range("AtlasModel: trainable index out of range");
  return splines_[static_cast<std::size_t>(index / per_spline)]
      .trainable_coeff(index % per_spline);
}

void AtlasModel::set_trainable_coeff(std::int64_t index, double value) {
  const std::int64_t per_spline = splines_[0].trainable_count();
  if (index < 0 || index >= count_trainable())
    throw std::out_of_range("AtlasModel: trainable index out of range");
  splines_[static_cast<std::size_t>(index / per_spline)]
      .set_trainable_coeff(index % per_spline, value);
}

GradientBoundReport AtlasModel::gradient_bound() const {
  const double u = 2.0 / 3.0;
  auto interior_bound = [](const MixedDensitySpline& s) {
    // |spline(x)| <= sum_rho max_i |coeff|: each bank's active values are
    // nonnegative and sum to one.
    double b = 0.0;
    for (int rho = 0; rho < s.bank_count(); ++rho) {
      double worst = 0.0;
      for (double c : s.bank(rho).coeffs()) worst = std::max(worst, std::abs(c));
      b += worst;
    }
    return b;
  };
  double u_g = 0.0, u_h = 0.0;
  for (int o = 0; o < p_; ++o) {
    for (int k = 1; k <= M_; ++k) {
      double sum_g = 0.0, sum_h = 0.0;
      for (int j = 0; j < n_; ++j) {
        sum_g += interior_bound(g(o, k, j));
        sum_h += interior_bound(h(o, k, j));
      }
      u_g = std::max(u_g, sum_g);
      u_h = std::max(u_h, sum_h);
    }
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double bound = 4.0 * n_ * u * pi2 * (1.0 + std::exp(u_g) + std::exp(u_h));
  return {u, u_g, u_h, bound};
}

double AtlasModel::grad_inner_product(std::span<const double> x,
                                      std::span<const double> y) const {
  const std::vector<double> ones(static_cast<std::size_t>(p_), 1.0);
  Scratch scratch;
  SparseGradient gx, gy;
  backward(x, ones, gx, scratch);
  backward(y, ones, gy, scratch);
  return gx.dot(gy);
}

}  // namespace atlas
