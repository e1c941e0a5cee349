#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "atlas/activation.hpp"
#include "atlas/gradient.hpp"

namespace atlas {

// One density bank on [0, 1]: f(x) = sum_i coeffs[i-1] * S(w x + 4 - i),
// i = 1 .. 2^(rho+2), w = 2^(rho+2) - 3.
class RhoDensitySpline {
 public:
  explicit RhoDensitySpline(int rho)
      : rho_(rho), coeffs_(static_cast<std::size_t>(bank_size(rho)), 0.0) {}

  int rho() const noexcept { return rho_; }
  int size() const noexcept { return static_cast<int>(coeffs_.size()); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }

  double eval(double x) const { return eval_window(active_window(rho_, x)); }

  // Fast path; `win` must be this bank's window at the point of interest.
  double eval_window(const ActiveWindow& win) const noexcept {
    const double* c = coeffs_.data() + (win.first_index - 1);
    double acc = 0.0;
    for (int t = 0; t < win.count; ++t) acc += c[t] * win.values[t];
    return acc;
  }

 private:
  int rho_;
  std::vector<double> coeffs_;
};

// Sum of density banks rho = 0 .. max_density. Only the top bank is
// trainable by default; lower banks act as frozen constants so that training
// at the finest density cannot disturb coarser structure.
class MixedDensitySpline {
 public:
  explicit MixedDensitySpline(int max_density) {
    if (max_density < 0)
      throw std::invalid_argument("MixedDensitySpline: max_density < 0");
    banks_.reserve(static_cast<std::size_t>(max_density) + 1);
    for (int rho = 0; rho <= max_density; ++rho) banks_.emplace_back(rho);
    trainable_.assign(banks_.size(), 0);
    trainable_.back() = 1;
  }

  int max_density() const noexcept { return banks_.back().rho(); }
  int bank_count() const noexcept { return static_cast<int>(banks_.size()); }

  const RhoDensitySpline& bank(int rho) const { return banks_.at(static_cast<std::size_t>(rho)); }
  RhoDensitySpline& bank(int rho) { return banks_.at(static_cast<std::size_t>(rho)); }

  bool trainable(int rho) const { return trainable_.at(static_cast<std::size_t>(rho)) != 0; }
  void set_all_trainable() noexcept { trainable_.assign(banks_.size(), 1); }

  std::int64_t coeff_count() const noexcept {
    std::int64_t c = 0;
    for (const auto& b : banks_) c += b.size();
    return c;
  }
  std::int64_t trainable_count() const noexcept {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < banks_.size(); ++i)
      if (trainable_[i]) c += banks_[i].size();
    return c;
  }

  double eval(double x) const {
    double acc = 0.0;
    for (const auto& b : banks_) acc += b.eval(x);
    return acc;
  }

  // windows[rho] must be bank rho's window at the same x (see AtlasModel,
  // which computes them once per input coordinate).
  double eval_windows(std::span<const ActiveWindow> windows) const noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < banks_.size(); ++i)
      acc += banks_[i].eval_window(windows[i]);
    return acc;
  }

  // Appends entries scale * dEval/dCoeff for every trainable coefficient with
  // a nonzero basis value, indexed index_base + position in this spline's
  // trainable layout (trainable banks concatenated in density order).
  // Indices come out strictly increasing.
  void accumulate_grad(std::span<const ActiveWindow> windows, double scale,
                       std::int64_t index_base, SparseGradient& out) const {
    std::int64_t off = index_base;
    for (std::size_t i = 0; i < banks_.size(); ++i) {
      if (trainable_[i]) {
        const ActiveWindow& win = windows[i];
        for (int t = 0; t < win.count; ++t)
          if (win.values[t] != 0.0)
            out.push(off + win.first_index - 1 + t, scale * win.values[t]);
        off += banks_[i].size();
      }
    }
  }

  // Partials of eval(x) with respect to this spline's trainable coefficients.
  SparseGradient grad(double x) const {
    std::vector<ActiveWindow> windows;
    windows.reserve(banks_.size());
    for (const auto& b : banks_) windows.push_back(active_window(b.rho(), x));
    SparseGradient g;
    accumulate_grad(windows, 1.0, 0, g);
    return g;
  }

  double trainable_coeff(std::int64_t index) const {
    auto [bank, local] = locate(index);
    return bank->coeffs()[static_cast<std::size_t>(local)];
  }
  void set_trainable_coeff(std::int64_t index, double value) {
    auto [bank, local] = locate_mut(index);
    bank->coeffs()[static_cast<std::size_t>(local)] = value;
  }

  // Adds a zero-coefficient bank one density step up; it becomes the sole
  // trainable bank and, because its contribution is identically zero, the
  // spline's values are unchanged.
  void expand_density() {
    const int next = max_density() + 1;
    banks_.emplace_back(next);
    trainable_.assign(banks_.size(), 0);
    trainable_.back() = 1;
  }

 private:
  std::pair<const RhoDensitySpline*, std::int64_t> locate(std::int64_t index) const {
    if (index < 0)
      throw std::out_of_range("MixedDensitySpline: trainable index out of range");
    std::int64_t local = index;
    for (std::size_t i = 0; i < banks_.size(); ++i) {
      if (!trainable_[i]) continue;
      if (local < banks_[i].size()) return {&banks_[i], local};
      local -= banks_[i].size();
    }
    throw std::out_of_range("MixedDensitySpline: trainable index out of range");
  }
  std::pair<RhoDensitySpline*, std::int64_t> locate_mut(std::int64_t index) {
    auto [bank, local] = locate(index);
    return {const_cast<RhoDensitySpline*>(bank), local};
  }

  std::vector<RhoDensitySpline> banks_;
  std::vector<unsigned char> trainable_;
};

}  // namespace atlas
