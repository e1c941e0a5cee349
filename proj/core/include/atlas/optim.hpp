#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "atlas/gradient.hpp"
#include "atlas/model.hpp"
#include "atlas/rng.hpp"
#include "atlas/targets.hpp"

namespace atlas {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Dense semantics by default: every trainable parameter updates each step,
  // treating untouched indices as zero gradient. The lazy mode updates only
  // touched indices (for locality studies; changes trajectories).
  bool lazy = false;
};

class AdamState {
 public:
  AdamState(std::int64_t param_count, AdamConfig config);

  // One update from an index-sorted gradient over the model's flat trainable
  // parameters; the model must still have param_count of them.
  void step(AtlasModel& model, const SparseGradient& grad);

  std::int64_t param_count() const noexcept { return static_cast<std::int64_t>(m_.size()); }
  long step_count() const noexcept { return t_; }
  const AdamConfig& config() const noexcept { return config_; }
  std::span<const double> first_moments() const noexcept { return m_; }
  std::span<const double> second_moments() const noexcept { return v_; }

 private:
  AdamConfig config_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

// Mean absolute error between flat prediction/target arrays.
double mae(std::span<const double> pred, std::span<const double> target);

// d(batch MAE)/d(pred) for one sample: sign(pred - target) / (batch_size * p),
// with sign(0) = 0.
void mae_upstream(std::span<const double> pred, std::span<const double> target,
                  std::int64_t batch_size, std::span<double> out);

double evaluate_mae(const AtlasModel& model, const Dataset& data);

struct TrainCurves {
  std::vector<double> train_mae, val_mae;  // one entry per epoch, end of epoch
};

// MAE/Adam minibatch training. Each epoch shuffles the sample order with the
// given stream, walks fixed-size batches (a shorter final batch divides by
// its own size) and records end-of-epoch MAE on the training and validation
// sets. A fresh optimizer state is created for the call.
TrainCurves train_epochs(AtlasModel& model, const Dataset& train, const Dataset& val,
                         int epochs, std::int64_t batch_size, AdamConfig config,
                         SplitRng& rng);

}  // namespace atlas
