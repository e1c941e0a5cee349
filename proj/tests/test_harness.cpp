#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "atlas/harness.hpp"
#include "atlas/serialize.hpp"

using atlas::ExperimentConfig;
using atlas::TrialRecord;
using atlas::Variant;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.dims = {1};
  cfg.widths = {0.3};
  cfg.trials = 2;
  cfg.M = 1;
  cfg.r = 1;
  cfg.dataset_size = 60;
  cfg.batch_size = 20;
  cfg.epochs_task1 = 2;
  cfg.epochs_task2 = 2;
  cfg.rbf_count = 10;
  cfg.master_seed = 7;
  return cfg;
}

bool same_results(const TrialRecord& a, const TrialRecord& b) {
  return a.trial_id == b.trial_id && a.protocol == b.protocol && a.n == b.n &&
         a.delta == b.delta && a.variant == b.variant && a.lr == b.lr &&
         a.noise == b.noise && a.task1_train_curve == b.task1_train_curve &&
         a.task1_val_curve == b.task1_val_curve &&
         a.task2_train_curve == b.task2_train_curve &&
         a.task2_val_curve == b.task2_val_curve &&
         a.task1_test_mae == b.task1_test_mae &&
         a.task2_test_mae == b.task2_test_mae &&
         a.expansion_boundary_deltas == b.expansion_boundary_deltas &&
         a.failed == b.failed;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& file) {
  std::ifstream in(file);
  REQUIRE(in);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("grid trial pairs share data and draws") {
  const ExperimentConfig cfg = tiny_config();
  const atlas::GridTrialResult result = atlas::run_grid_trial(cfg, 1, 0.3, 0);
  const TrialRecord& d = result.default_variant;
  const TrialRecord& a = result.ablation;

  CHECK(d.trial_id == "n1_d0.30_t000");
  CHECK(d.trial_id == a.trial_id);
  CHECK(d.protocol == "grid");
  CHECK(d.variant == Variant::distal_orthogonal);
  CHECK(a.variant == Variant::all_densities_trainable);
  CHECK(d.lr == a.lr);
  CHECK(d.noise == a.noise);
  CHECK(d.lr > 0.0);
  CHECK(d.lr <= 0.01 + 1e-6);
  CHECK(d.noise >= 0.0);
  CHECK_FALSE(d.failed);
  CHECK_FALSE(a.failed);
  REQUIRE(d.task1_train_curve.size() == 2);
  REQUIRE(d.task1_val_curve.size() == 2);
  REQUIRE(d.task2_train_curve.size() == 2);
  REQUIRE(d.task2_val_curve.size() == 2);
  CHECK(d.task1_test_mae >= 0.0);
  CHECK(d.task2_test_mae >= 0.0);
  CHECK(d.expansion_boundary_deltas.empty());
}

TEST_CASE("fixed draws override the per-trial randomness") {
  ExperimentConfig cfg = tiny_config();
  cfg.fixed_lr = 0.005;
  cfg.fixed_noise = 0.1;
  const auto result = atlas::run_grid_trial(cfg, 1, 0.3, 0);
  CHECK(result.default_variant.lr == 0.005);
  CHECK(result.default_variant.noise == 0.1);
}

TEST_CASE("grid trials are reproducible") {
  const ExperimentConfig cfg = tiny_config();
  const auto first = atlas::run_grid_trial(cfg, 1, 0.3, 1);
  const auto second = atlas::run_grid_trial(cfg, 1, 0.3, 1);
  CHECK(same_results(first.default_variant, second.default_variant));
  CHECK(same_results(first.ablation, second.ablation));

  const auto other = atlas::run_grid_trial(cfg, 1, 0.3, 0);
  CHECK_FALSE(same_results(first.default_variant, other.default_variant));
}

TEST_CASE("grid sweep writes records, results, summary and manifest") {
  const ExperimentConfig cfg = tiny_config();
  const TempDir dir("atlas_test_grid");
  const auto records = atlas::run_grid(cfg, dir.path);
  REQUIRE(records.size() == 4);  // 1 dim x 1 width x 2 trials x 2 variants

  const auto csv = read_csv(dir.path / "results.csv");
  REQUIRE(csv.size() == 1 + 4 * 9);  // per record: 4 curves x 2 epochs + 1 test row
  const std::vector<std::string> header{"trial_id", "n",     "delta", "variant",
                                        "lr",       "noise", "task",  "split",
                                        "epoch",    "mae"};
  CHECK(csv[0] == header);

  // The single test row per record restates the final task-2 measurement.
  std::map<std::string, int> split_counts;
  for (std::size_t i = 1; i < csv.size(); ++i) {
    REQUIRE(csv[i].size() == 10);
    ++split_counts[csv[i][7]];
  }
  CHECK(split_counts["train"] == 16);
  CHECK(split_counts["validation"] == 16);
  CHECK(split_counts["test"] == 4);

  double default_sum = 0.0;
  for (const auto& row : csv) {
    if (row.size() == 10 && row[7] == "test" && row[3] == "distal_orthogonal") {
      CHECK(row[6] == "2");
      CHECK(row[8] == "2");
      default_sum += std::stod(row[9]);
    }
  }
  double expected_sum = 0.0;
  for (const auto& r : records)
    if (r.variant == Variant::distal_orthogonal) expected_sum += r.task2_test_mae;
  CHECK(default_sum == expected_sum);

  const auto summary = read_csv(dir.path / "summary.csv");
  REQUIRE(summary.size() == 3);  // header + one row per variant
  CHECK(summary[0][0] == "n");
  bool found_default = false;
  for (std::size_t i = 1; i < summary.size(); ++i) {
    if (summary[i][2] != "distal_orthogonal") continue;
    found_default = true;
    CHECK(std::stoi(summary[i][3]) == 2);
    CHECK(std::stod(summary[i][5]) == expected_sum / 2.0);
  }
  CHECK(found_default);

  std::ifstream mf(dir.path / "manifest.json");
  REQUIRE(mf);
  const nlohmann::json manifest = nlohmann::json::parse(mf);
  CHECK(manifest.at("master_seed").get<std::uint64_t>() == 7);
  CHECK(manifest.at("trials").size() == 2);
  const ExperimentConfig parsed =
      atlas::config_from_json(manifest.at("config").dump());
  CHECK(parsed.dims == cfg.dims);
  CHECK(parsed.widths == cfg.widths);
  CHECK(parsed.master_seed == cfg.master_seed);
}

TEST_CASE("interrupted sweeps resume from the record log") {
  const ExperimentConfig cfg = tiny_config();
  const TempDir dir("atlas_test_resume");
  const auto first = atlas::run_grid(cfg, dir.path);
  REQUIRE(first.size() == 4);

  // Nothing left to do: the log is not extended.
  const auto before = fs::file_size(dir.path / "records.jsonl");
  const auto again = atlas::run_grid(cfg, dir.path);
  CHECK(again.size() == 4);
  CHECK(fs::file_size(dir.path / "records.jsonl") == before);
  for (std::size_t i = 0; i < 4; ++i) CHECK(same_results(first[i], again[i]));

  // Drop one variant of the second trial and leave a torn line behind.
  std::vector<std::string> lines;
  {
    std::ifstream in(dir.path / "records.jsonl");
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  REQUIRE(lines.size() == 4);
  {
    std::ofstream out(dir.path / "records.jsonl", std::ios::trunc);
    out << lines[0] << '\n' << lines[1] << '\n' << lines[2] << '\n';
    out << "{\"trial_id\": \"torn";  // interrupted mid-write
  }
  const auto resumed = atlas::run_grid(cfg, dir.path);
  REQUIRE(resumed.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(same_results(first[i], resumed[i]));
}

TEST_CASE("record log keeps the latest duplicate") {
  const ExperimentConfig cfg = tiny_config();
  const TempDir dir("atlas_test_jsonl");
  fs::create_directories(dir.path);
  const auto file = dir.path / "records.jsonl";

  atlas::GridTrialResult result = atlas::run_grid_trial(cfg, 1, 0.3, 0);
  result.default_variant.task1_test_mae = 111.0;
  atlas::append_records_jsonl({result.default_variant}, file);
  result.default_variant.task1_test_mae = 222.0;
  atlas::append_records_jsonl({result.default_variant}, file);

  const auto loaded = atlas::load_records_jsonl(file);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].task1_test_mae == 222.0);

  CHECK(atlas::load_records_jsonl(dir.path / "absent.jsonl").empty());
}

TEST_CASE("config serialization round-trips") {
  ExperimentConfig cfg = tiny_config();
  cfg.fixed_lr = 0.004;
  cfg.lazy_adam = true;
  cfg.expa_theta = atlas::ExpAThetaMode::atan2_unsquared;
  const ExperimentConfig back = atlas::config_from_json(atlas::config_to_json(cfg));
  CHECK(back.dims == cfg.dims);
  CHECK(back.widths == cfg.widths);
  CHECK(back.trials == cfg.trials);
  CHECK(back.M == cfg.M);
  CHECK(back.r == cfg.r);
  CHECK(back.dataset_size == cfg.dataset_size);
  CHECK(back.batch_size == cfg.batch_size);
  CHECK(back.epochs_task1 == cfg.epochs_task1);
  CHECK(back.epochs_task2 == cfg.epochs_task2);
  REQUIRE(back.fixed_lr.has_value());
  CHECK(*back.fixed_lr == 0.004);
  CHECK_FALSE(back.fixed_noise.has_value());
  CHECK(back.master_seed == cfg.master_seed);
  CHECK(back.lazy_adam == cfg.lazy_adam);
  CHECK(back.rbf_count == cfg.rbf_count);
  CHECK(back.segments == cfg.segments);
  CHECK(back.expa_theta == cfg.expa_theta);
}

TEST_CASE("train-expand trial grows the model and preserves outputs at every boundary") {
  ExperimentConfig cfg = tiny_config();
  cfg.segments = 3;
  cfg.appendix_epochs_task1 = 1;
  cfg.appendix_epochs_task2 = 1;
  cfg.dataset_size = 40;
  cfg.batch_size = 20;

  const TempDir dir("atlas_test_appendix");
  const fs::path snapshots = dir.path / "snaps";
  const TrialRecord rec =
      atlas::run_appendix_trial(cfg, atlas::AnalyticId::A, 0, &snapshots);

  CHECK(rec.trial_id == "appendixA_t000");
  CHECK(rec.protocol == "appendix:A");
  CHECK(rec.n == 2);
  CHECK(rec.lr == 0.01);
  CHECK(rec.noise == 0.1);
  CHECK_FALSE(rec.failed);
  REQUIRE(rec.task1_train_curve.size() == 3);
  REQUIRE(rec.task2_train_curve.size() == 1);
  REQUIRE(rec.expansion_boundary_deltas.size() == 2);
  for (double d : rec.expansion_boundary_deltas) CHECK(d == 0.0);

  const atlas::AtlasModel seg1 = atlas::load_model(snapshots / "task1_segment1.json");
  CHECK(seg1.num_exponentials() == 0);
  CHECK(seg1.max_density() == 0);
  const atlas::AtlasModel seg3 = atlas::load_model(snapshots / "task1_segment3.json");
  CHECK(seg3.num_exponentials() == 4);
  CHECK(seg3.max_density() == 2);
  const atlas::AtlasModel final = atlas::load_model(snapshots / "task2_final.json");
  CHECK(final.num_exponentials() == 4);

  const TrialRecord repeat =
      atlas::run_appendix_trial(cfg, atlas::AnalyticId::A, 0, nullptr);
  CHECK(same_results(rec, repeat));
}

TEST_CASE("train-expand sweep writes and resumes its own record log") {
  ExperimentConfig cfg = tiny_config();
  cfg.trials = 1;
  cfg.segments = 2;
  cfg.appendix_epochs_task1 = 1;
  cfg.appendix_epochs_task2 = 1;
  cfg.dataset_size = 40;
  cfg.batch_size = 20;

  const TempDir dir("atlas_test_appendix_sweep");
  const auto records = atlas::run_appendix(cfg, atlas::AnalyticId::B, dir.path);
  REQUIRE(records.size() == 1);
  CHECK(records[0].protocol == "appendix:B");
  CHECK(fs::exists(dir.path / "results.csv"));
  CHECK(fs::exists(dir.path / "snapshots" / "appendixB_t000" / "task2_final.json"));

  const auto before = fs::file_size(dir.path / "records.jsonl");
  const auto again = atlas::run_appendix(cfg, atlas::AnalyticId::B, dir.path);
  CHECK(again.size() == 1);
  CHECK(fs::file_size(dir.path / "records.jsonl") == before);
}

TEST_SUITE_END();
