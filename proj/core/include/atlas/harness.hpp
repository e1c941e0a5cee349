#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "atlas/model.hpp"
#include "atlas/targets.hpp"

namespace atlas {

// Shared knobs for the continual-learning protocols. Grid defaults: M=10,
// r=4, batch 100, 10000-point datasets, per-trial learning rate uniform on
// [1e-6, 0.01+1e-6), noise sigma exponential with mean 1, 20 epochs for
// task 1 and 10 for task 2.
struct ExperimentConfig {
  std::vector<int> dims{1, 2, 8};
  std::vector<double> widths{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int trials = 30;
  int M = 10;
  int r = 4;
  std::int64_t dataset_size = 10000;
  std::int64_t batch_size = 100;
  int epochs_task1 = 20;
  int epochs_task2 = 10;
  std::optional<double> fixed_lr;     // unset: per-trial random draw
  std::optional<double> fixed_noise;  // unset: per-trial exponential draw
  std::uint64_t master_seed = 0;
  bool lazy_adam = false;
  int threads = 1;
  int rbf_count = 1000;
  // Train-expand protocol (analytic targets): five 30-epoch segments with an
  // expansion (r+1, M+2) between consecutive segments, then a 6-epoch second
  // task on the zeroed patch; lr 0.01, noise 0.1 unless overridden above.
  int segments = 5;
  int appendix_epochs_task1 = 30;
  int appendix_epochs_task2 = 6;
  ExpAThetaMode expa_theta = ExpAThetaMode::as_written;
};

// One trained variant of one trial. Curves hold end-of-epoch MAE; the
// train-expand protocol concatenates its segments into the task-1 curves and
// records |validation MAE change| across each expansion boundary (evaluated
// before any post-expansion step).
struct TrialRecord {
  std::string trial_id;
  std::string protocol;  // "grid" or "appendix:<target>"
  int n = 0;
  double delta = 0.0;
  Variant variant = Variant::distal_orthogonal;
  double lr = 0.0;
  double noise = 0.0;
  int trial_index = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> task1_train_curve, task1_val_curve;
  std::vector<double> task2_train_curve, task2_val_curve;
  double task1_test_mae = 0.0;
  double task2_test_mae = 0.0;
  std::vector<double> expansion_boundary_deltas;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string message;
};

struct GridTrialResult {
  TrialRecord default_variant;
  TrialRecord ablation;
};

// One grid trial: datasets drawn once from the trial substream
// master.split("grid").split(n).split_real(delta).split(trial_index), in the
// order lr draw, noise draw, task-1 target, region corner, replacement
// target, then the six datasets (task-1 train/val/test, task-2
// train/val/test); both variants then train on identical data with identical
// shuffle streams. Task-2 training samples only the update region; its
// validation/test sets cover the full domain. Noise applies to training
// targets only.
GridTrialResult run_grid_trial(const ExperimentConfig& config, int n, double delta,
                               int trial_index);

// Full sweep dims x widths x trials. Completed trials append to
// records.jsonl under out_dir as they finish; rerunning skips trial keys
// already present with both variants, so an interrupted sweep resumes.
// Returns all records (loaded + new) and writes the result files.
std::vector<TrialRecord> run_grid(const ExperimentConfig& config,
                                  const std::filesystem::path& out_dir);

// Train-expand protocol on one analytic target. Saves per-segment model
// snapshots under out_dir/snapshots/<trial_id>/ and the same result files as
// run_grid. Trial substream: master.split("appendix").split(id).split(trial).
std::vector<TrialRecord> run_appendix(const ExperimentConfig& config, AnalyticId id,
                                      const std::filesystem::path& out_dir);
TrialRecord run_appendix_trial(const ExperimentConfig& config, AnalyticId id,
                               int trial_index,
                               const std::filesystem::path* snapshot_dir);

struct AggregateRow {
  int n = 0;
  double delta = 0.0;
  Variant variant = Variant::distal_orthogonal;
  int trials = 0;
  double mean_task1_test_mae = 0.0;
  double mean_task2_test_mae = 0.0;
  // mean of (task2 test MAE - task1 test MAE), the post-update degradation
  double mean_degradation = 0.0;
};

// Per-(n, delta, variant) means over non-failed records, sorted.
std::vector<AggregateRow> aggregate_records(const std::vector<TrialRecord>& records);

// Writes results.csv (header trial_id,n,delta,variant,lr,noise,task,split,
// epoch,mae; per-epoch train/validation rows for both tasks plus one final
// test row), summary.csv (aggregate means) and manifest.json (config, master
// seed and trial keys; enough to rerun any trial bit-identically).
void emit_results(const std::vector<TrialRecord>& records, const ExperimentConfig& config,
                  const std::filesystem::path& out_dir);

void append_records_jsonl(const std::vector<TrialRecord>& records,
                          const std::filesystem::path& file);
// Missing file gives an empty list; unparseable lines (crash remnants) are
// skipped; later duplicates of a (protocol, n, delta, trial, variant) key win.
std::vector<TrialRecord> load_records_jsonl(const std::filesystem::path& file);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

}  // namespace atlas
