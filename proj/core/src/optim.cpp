#include "atlas/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace atlas {

AdamState::AdamState(std::int64_t param_count, AdamConfig config) : config_(config) {
  if (param_count < 0) throw std::invalid_argument("AdamState: negative parameter count");
  if (!(config.lr > 0.0)) throw std::invalid_argument("AdamState: lr must be positive");
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0) ||
      !(config.beta2 >= 0.0 && config.beta2 < 1.0))
    throw std::invalid_argument("AdamState: betas must lie in [0, 1)");
  m_.assign(static_cast<std::size_t>(param_count), 0.0);
  v_.assign(static_cast<std::size_t>(param_count), 0.0);
}

void AdamState::step(AtlasModel& model, const SparseGradient& grad) {
  if (model.count_trainable() != param_count())
    throw std::invalid_argument("AdamState: model parameter count changed");
  if (!grad.sorted_unique() ||
      (!grad.entries.empty() &&
       (grad.entries.front().index < 0 || grad.entries.back().index >= param_count())))
    throw std::invalid_argument("AdamState: gradient indices invalid");

  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = config_.lr, eps = config_.eps;

  if (config_.lazy) {
    for (const SparseGradient::Entry& e : grad.entries) {
      const auto i = static_cast<std::size_t>(e.index);
      m_[i] = b1 * m_[i] + (1.0 - b1) * e.value;
      v_[i] = b2 * v_[i] + (1.0 - b2) * e.value * e.value;
      const double update = lr * (m_[i] / corr1) / (std::sqrt(v_[i] / corr2) + eps);
      model.set_trainable_coeff(e.index, model.trainable_coeff(e.index) - update);
    }
    return;
  }

  std::size_t cursor = 0;
  const auto& entries = grad.entries;
  model.for_each_trainable([&](std::int64_t index, double& coeff) {
    double gi = 0.0;
    if (cursor < entries.size() && entries[cursor].index == index)
      gi = entries[cursor++].value;
    const auto i = static_cast<std::size_t>(index);
    m_[i] = b1 * m_[i] + (1.0 - b1) * gi;
    v_[i] = b2 * v_[i] + (1.0 - b2) * gi * gi;
    coeff -= lr * (m_[i] / corr1) / (std::sqrt(v_[i] / corr2) + eps);
  });
}

double mae(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size() || pred.empty())
    throw std::invalid_argument("mae: size mismatch or empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - target[i]);
  return acc / static_cast<double>(pred.size());
}

void mae_upstream(std::span<const double> pred, std::span<const double> target,
                  std::int64_t batch_size, std::span<double> out) {
  if (pred.size() != target.size() || pred.size() != out.size())
    throw std::invalid_argument("mae_upstream: size mismatch");
  if (batch_size < 1) throw std::invalid_argument("mae_upstream: batch_size must be >= 1");
  const double scale = 1.0 / (static_cast<double>(batch_size) * static_cast<double>(pred.size()));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    out[i] = d > 0.0 ? scale : d < 0.0 ? -scale : 0.0;
  }
}

double evaluate_mae(const AtlasModel& model, const Dataset& data) {
  if (data.input_dim != model.input_dim() || data.output_dim != model.output_dim())
    throw std::invalid_argument("evaluate_mae: dataset/model shape mismatch");
  if (data.size() == 0) throw std::invalid_argument("evaluate_mae: empty dataset");
  AtlasModel::Scratch scratch;
  std::vector<double> pred(static_cast<std::size_t>(data.output_dim));
  double acc = 0.0;
  for (std::int64_t i = 0; i < data.size(); ++i) {
    model.forward(data.input(i), pred, scratch);
    const auto t = data.target(i);
    for (std::size_t o = 0; o < pred.size(); ++o) acc += std::abs(pred[o] - t[o]);
  }
  return acc / (static_cast<double>(data.size()) * data.output_dim);
}

TrainCurves train_epochs(AtlasModel& model, const Dataset& train, const Dataset& val,
                         int epochs, std::int64_t batch_size, AdamConfig config,
                         SplitRng& rng) {
  if (epochs < 0) throw std::invalid_argument("train_epochs: epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("train_epochs: batch_size must be >= 1");
  if (train.input_dim != model.input_dim() || train.output_dim != model.output_dim())
    throw std::invalid_argument("train_epochs: dataset/model shape mismatch");
  if (train.size() == 0) throw std::invalid_argument("train_epochs: empty training set");
  if (epochs > 0 &&
      (val.input_dim != model.input_dim() || val.output_dim != model.output_dim() ||
       val.size() == 0))
    throw std::invalid_argument("train_epochs: validation set missing or mismatched");

  AdamState adam(model.count_trainable(), config);
  GradientAccumulator accum;
  AtlasModel::Scratch scratch;
  SparseGradient sample_grad, batch_grad;
  std::vector<double> pred(static_cast<std::size_t>(model.output_dim()));
  std::vector<double> upstream(static_cast<std::size_t>(model.output_dim()));
  std::vector<std::int64_t> order(static_cast<std::size_t>(train.size()));
  std::iota(order.begin(), order.end(), std::int64_t{0});

  TrainCurves curves;
  curves.train_mae.reserve(static_cast<std::size_t>(epochs));
  curves.val_mae.reserve(static_cast<std::size_t>(epochs));

  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(std::span<std::int64_t>(order));
    for (std::int64_t start = 0; start < train.size(); start += batch_size) {
      const std::int64_t this_batch = std::min(batch_size, train.size() - start);
      accum.reset(static_cast<std::size_t>(adam.param_count()));
      for (std::int64_t b = 0; b < this_batch; ++b) {
        const std::int64_t i = order[static_cast<std::size_t>(start + b)];
        model.forward(train.input(i), pred, scratch);
        mae_upstream(pred, train.target(i), this_batch, upstream);
        bool live = false;
        for (double u : upstream) live |= (u != 0.0);
        if (!live) continue;  // exact fit on this sample
        model.backward(train.input(i), upstream, sample_grad, scratch);
        accum.add(sample_grad);
      }
      accum.to_sparse(batch_grad);
      adam.step(model, batch_grad);
    }
    curves.train_mae.push_back(evaluate_mae(model, train));
    curves.val_mae.push_back(evaluate_mae(model, val));
  }
  return curves;
}

}  // namespace atlas
