#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "atlas/gradient.hpp"
#include "atlas/spline.hpp"

namespace atlas {

// Which banks train: only the top density bank of every spline (the default,
// which is what makes far-apart inputs have orthogonal gradients), or every
// bank (the ablation used to demonstrate why the frozen lower banks matter).
enum class Variant { distal_orthogonal, all_densities_trainable };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct GradientBoundReport {
  double u;      // peak basis value, 2/3
  double u_g;    // bound on any positive-block interior sum_j g_{k,j}
  double u_h;    // same for the negative block
  double bound;  // 4 n u pi^2 (1 + e^{u_g} + e^{u_h})
};

// Additive-exponential spline approximator on the unit cube:
//
//   A_o(x) = sum_j f_{o,j}(x_j)
//          + sum_{k=1..M} k^-2 [ exp(sum_j g_{o,k,j}(x_j))
//                              - exp(sum_j h_{o,k,j}(x_j)) ]
//
// where every per-coordinate function is a MixedDensitySpline with densities
// 0..r. Each output component o owns an independent parameter bank. All
// coefficients start at zero, so a fresh model is identically zero and both
// capacity expansions below preserve outputs exactly.
//
// Flat trainable-parameter indexing (used by SparseGradient, the optimizer
// and the serializer) is: output, then block f|g|h, then k, then coordinate
// j, then density bank, then basis index, i.e. model splines in storage
// order, each contributing its trainable banks in density order.
class AtlasModel {
 public:
  AtlasModel(int n, int p, int M, int r,
             Variant variant = Variant::distal_orthogonal);

  int input_dim() const noexcept { return n_; }
  int output_dim() const noexcept { return p_; }
  int num_exponentials() const noexcept { return M_; }
  int max_density() const noexcept { return r_; }
  Variant variant() const noexcept { return variant_; }

  // Splines of one output in storage order: f_j (j = 0..n-1), then g_{k,j}
  // with k outer, then h_{k,j}. k is 1-based to match the k^-2 weights.
  int splines_per_output() const noexcept { return n_ * (2 * M_ + 1); }
  const MixedDensitySpline& f(int o, int j) const;
  MixedDensitySpline& f(int o, int j);
  const MixedDensitySpline& g(int o, int k, int j) const;
  MixedDensitySpline& g(int o, int k, int j);
  const MixedDensitySpline& h(int o, int k, int j) const;
  MixedDensitySpline& h(int o, int k, int j);

  // Reusable workspace for the hot paths; forward/backward allocate one
  // internally when not given any.
  struct Scratch {
    std::vector<ActiveWindow> windows;  // n * (r+1), coordinate-major
    std::vector<double> exp_g, exp_h;   // per-k interior exponentials
  };

  // Inputs must lie in [0, 1]^n. Throws std::range_error if any interior
  // exponent exceeds the overflow guard.
  void forward(std::span<const double> x, std::span<double> out, Scratch& scratch) const;
  void forward(std::span<const double> x, std::span<double> out) const;
  std::vector<double> forward(std::span<const double> x) const;

  // Exact gradient of sum_o upstream[o] * A_o(x) with respect to the flat
  // trainable parameters. Entries have strictly increasing indices; at most
  // 4 n (2M+1) entries per output component carry the default variant's
  // nonzero partials ((r+1) times that for the ablation).
  void backward(std::span<const double> x, std::span<const double> upstream,
                SparseGradient& out, Scratch& scratch) const;
  SparseGradient backward(std::span<const double> x, std::span<const double> upstream) const;

  // Appends delta_M zero exponential terms (k = M+1 .. M+delta_M). Outputs
  // are unchanged: each new term contributes k^-2 (e^0 - e^0) = 0.
  void expand_exponentials(int delta_M);

  // Raises every spline's density by one. The new top banks start at zero
  // (outputs unchanged) and become the sole trainable banks in the default
  // variant; the ablation keeps everything trainable.
  void expand_density_all();

  std::int64_t count_trainable() const noexcept;
  std::int64_t count_coeffs() const noexcept;

  double trainable_coeff(std::int64_t index) const;
  void set_trainable_coeff(std::int64_t index, double value);

  // Visits every trainable coefficient in flat order; fn(index, coeff&).
  template <class F>
  void for_each_trainable(F&& fn) {
    std::int64_t idx = 0;
    for (MixedDensitySpline& s : splines_)
      for (int rho = 0; rho < s.bank_count(); ++rho)
        if (s.trainable(rho))
          for (double& c : s.bank(rho).coeffs()) fn(idx++, c);
  }

  // Worst-case L1 gradient norm bound 4 n u pi^2 (1 + e^{u_g} + e^{u_h});
  // u_g = max_k sum_j sum_rho max_i |coeff| (and likewise u_h), using the
  // partition of unity to bound each interior spline by its largest
  // coefficient. The max over k also runs over outputs.
  GradientBoundReport gradient_bound() const;

  // <grad A(x), grad A(y)> over trainable parameters (all outputs, unit
  // upstream), via sparse-index merge. Exactly zero whenever
  // min_j |x_j - y_j| >= bank_support_width(max_density()) in the default
  // variant: the trainable windows of every shared spline are then disjoint.
  double grad_inner_product(std::span<const double> x, std::span<const double> y) const;

  // Interior sums above this raise std::range_error instead of overflowing.
  static constexpr double kInteriorGuard = 700.0;

 private:
  std::size_t spline_index(int o, int s) const noexcept {
    return static_cast<std::size_t>(o) * splines_per_output() + s;
  }
  void fill_windows(std::span<const double> x, Scratch& scratch) const;

  int n_, p_, M_, r_;
  Variant variant_;
  std::vector<MixedDensitySpline> splines_;  // p * n * (2M+1), output-major
};

}  // namespace atlas
