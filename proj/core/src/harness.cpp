#include "atlas/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "atlas/optim.hpp"
#include "atlas/serialize.hpp"

namespace atlas {

namespace {

using nlohmann::json;

// Stream-split tokens; together with the documented draw order they pin every
// random draw of a protocol to the master seed.
constexpr std::uint64_t kGridToken = 0x64697267;      // "grid"
constexpr std::uint64_t kAppendixToken = 0x78707061;  // "appx"
constexpr std::uint64_t kTask1Token = 0x3154;
constexpr std::uint64_t kTask2Token = 0x3254;

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string grid_trial_id(int n, double delta, int trial_index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "n%d_d%.2f_t%03d", n, delta, trial_index);
  return buf;
}

std::string appendix_trial_id(AnalyticId id, int trial_index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "appendix%s_t%03d", to_string(id).c_str(), trial_index);
  return buf;
}

json record_to_json(const TrialRecord& r) {
  return json{{"trial_id", r.trial_id},
              {"protocol", r.protocol},
              {"n", r.n},
              {"delta", r.delta},
              {"variant", to_string(r.variant)},
              {"lr", r.lr},
              {"noise", r.noise},
              {"trial_index", r.trial_index},
              {"master_seed", r.master_seed},
              {"task1_train_curve", r.task1_train_curve},
              {"task1_val_curve", r.task1_val_curve},
              {"task2_train_curve", r.task2_train_curve},
              {"task2_val_curve", r.task2_val_curve},
              {"task1_test_mae", r.task1_test_mae},
              {"task2_test_mae", r.task2_test_mae},
              {"expansion_boundary_deltas", r.expansion_boundary_deltas},
              {"wall_seconds", r.wall_seconds},
              {"failed", r.failed},
              {"message", r.message}};
}

TrialRecord record_from_json(const json& j) {
  TrialRecord r;
  r.trial_id = j.at("trial_id").get<std::string>();
  r.protocol = j.at("protocol").get<std::string>();
  r.n = j.at("n").get<int>();
  r.delta = j.at("delta").get<double>();
  r.variant = variant_from_string(j.at("variant").get<std::string>());
  r.lr = j.at("lr").get<double>();
  r.noise = j.at("noise").get<double>();
  r.trial_index = j.at("trial_index").get<int>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.task1_train_curve = j.at("task1_train_curve").get<std::vector<double>>();
  r.task1_val_curve = j.at("task1_val_curve").get<std::vector<double>>();
  r.task2_train_curve = j.at("task2_train_curve").get<std::vector<double>>();
  r.task2_val_curve = j.at("task2_val_curve").get<std::vector<double>>();
  r.task1_test_mae = j.at("task1_test_mae").get<double>();
  r.task2_test_mae = j.at("task2_test_mae").get<double>();
  r.expansion_boundary_deltas =
      j.at("expansion_boundary_deltas").get<std::vector<double>>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  r.failed = j.at("failed").get<bool>();
  r.message = j.at("message").get<std::string>();
  return r;
}

using TrialKey = std::tuple<std::string, int, std::uint64_t, int, int>;

TrialKey key_of(const TrialRecord& r) {
  return {r.protocol, r.n, std::bit_cast<std::uint64_t>(r.delta), r.trial_index,
          static_cast<int>(r.variant)};
}

void sort_records(std::vector<TrialRecord>& records) {
  std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tuple(a.protocol, a.n, a.delta, a.trial_index, static_cast<int>(a.variant)) <
           std::tuple(b.protocol, b.n, b.delta, b.trial_index, static_cast<int>(b.variant));
  });
}

void validate_grid_config(const ExperimentConfig& cfg) {
  if (cfg.dims.empty() || cfg.widths.empty())
    throw std::invalid_argument("run_grid: dims and widths must be nonempty");
  for (int n : cfg.dims)
    if (n < 1) throw std::invalid_argument("run_grid: dims must be >= 1");
  for (double w : cfg.widths)
    if (!(w > 0.0 && w < 1.0))
      throw std::invalid_argument("run_grid: widths must lie in (0, 1)");
  if (cfg.trials < 1) throw std::invalid_argument("run_grid: trials must be >= 1");
}

}  // namespace

GridTrialResult run_grid_trial(const ExperimentConfig& cfg, int n, double delta,
                               int trial_index) {
  if (n < 1) throw std::invalid_argument("run_grid_trial: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("run_grid_trial: delta must lie in (0, 1)");
  if (trial_index < 0) throw std::invalid_argument("run_grid_trial: bad trial index");

  SplitRng trial_rng = SplitRng(cfg.master_seed)
                           .split(kGridToken)
                           .split(static_cast<std::uint64_t>(n))
                           .split_real(delta)
                           .split(static_cast<std::uint64_t>(trial_index));
  const double lr = cfg.fixed_lr ? *cfg.fixed_lr : trial_rng.uniform(1e-6, 0.01 + 1e-6);
  const double noise = cfg.fixed_noise ? *cfg.fixed_noise : trial_rng.exponential(1.0);

  const RbfTarget task1 = RbfTarget::sample(n, trial_rng, cfg.rbf_count);
  Box region;
  region.lo.resize(static_cast<std::size_t>(n));
  region.hi.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    region.lo[static_cast<std::size_t>(j)] = trial_rng.uniform(0.0, 1.0 - delta);
    region.hi[static_cast<std::size_t>(j)] =
        std::min(1.0, region.lo[static_cast<std::size_t>(j)] + delta);
  }
  const RbfTarget replacement = RbfTarget::sample(n, trial_rng, cfg.rbf_count);
  const PatchedTarget task2(task1, replacement, region);

  const Box unit = Box::unit(n);
  const ScalarTarget t1 = [&task1](std::span<const double> x) { return task1(x); };
  const ScalarTarget t2 = [&task2](std::span<const double> x) { return task2(x); };
  const Dataset t1_train = sample_dataset(t1, n, cfg.dataset_size, unit, noise, trial_rng);
  const Dataset t1_val = sample_dataset(t1, n, cfg.dataset_size, unit, 0.0, trial_rng);
  const Dataset t1_test = sample_dataset(t1, n, cfg.dataset_size, unit, 0.0, trial_rng);
  const Dataset t2_train = sample_dataset(t2, n, cfg.dataset_size, region, noise, trial_rng);
  const Dataset t2_val = sample_dataset(t2, n, cfg.dataset_size, unit, 0.0, trial_rng);
  const Dataset t2_test = sample_dataset(t2, n, cfg.dataset_size, unit, 0.0, trial_rng);

  // Both variants replay identical shuffle streams on the shared datasets.
  const SplitRng shuffle1 = trial_rng.split(kTask1Token);
  const SplitRng shuffle2 = trial_rng.split(kTask2Token);

  auto run_variant = [&](Variant variant) {
    TrialRecord rec;
    rec.trial_id = grid_trial_id(n, delta, trial_index);
    rec.protocol = "grid";
    rec.n = n;
    rec.delta = delta;
    rec.variant = variant;
    rec.lr = lr;
    rec.noise = noise;
    rec.trial_index = trial_index;
    rec.master_seed = cfg.master_seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      AtlasModel model(n, 1, cfg.M, cfg.r, variant);
      AdamConfig adam;
      adam.lr = lr;
      adam.lazy = cfg.lazy_adam;
      SplitRng rng1 = shuffle1;
      TrainCurves c1 = train_epochs(model, t1_train, t1_val, cfg.epochs_task1,
                                    cfg.batch_size, adam, rng1);
      rec.task1_train_curve = std::move(c1.train_mae);
      rec.task1_val_curve = std::move(c1.val_mae);
      rec.task1_test_mae = evaluate_mae(model, t1_test);
      SplitRng rng2 = shuffle2;
      TrainCurves c2 = train_epochs(model, t2_train, t2_val, cfg.epochs_task2,
                                    cfg.batch_size, adam, rng2);
      rec.task2_train_curve = std::move(c2.train_mae);
      rec.task2_val_curve = std::move(c2.val_mae);
      rec.task2_test_mae = evaluate_mae(model, t2_test);
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.message = e.what();
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
  };
  return {run_variant(Variant::distal_orthogonal),
          run_variant(Variant::all_densities_trainable)};
}

std::vector<TrialRecord> run_grid(const ExperimentConfig& cfg,
                                  const std::filesystem::path& out_dir) {
  validate_grid_config(cfg);
  std::filesystem::create_directories(out_dir);
  const auto jsonl = out_dir / "records.jsonl";

  std::vector<TrialRecord> records;
  std::map<std::tuple<int, std::uint64_t, int>, int> variant_count;
  for (TrialRecord& r : load_records_jsonl(jsonl)) {
    if (r.protocol != "grid") continue;
    ++variant_count[{r.n, std::bit_cast<std::uint64_t>(r.delta), r.trial_index}];
    records.push_back(std::move(r));
  }
  // Keep only trials with both variants on file; incomplete ones rerun.
  std::erase_if(records, [&](const TrialRecord& r) {
    return variant_count[{r.n, std::bit_cast<std::uint64_t>(r.delta), r.trial_index}] < 2;
  });

  std::vector<std::tuple<int, double, int>> tasks;
  for (int n : cfg.dims)
    for (double w : cfg.widths)
      for (int t = 0; t < cfg.trials; ++t)
        if (variant_count[{n, std::bit_cast<std::uint64_t>(w), t}] < 2)
          tasks.emplace_back(n, w, t);

  std::mutex sink;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const auto [n, w, t] = tasks[i];
      GridTrialResult result = run_grid_trial(cfg, n, w, t);
      const std::lock_guard<std::mutex> lock(sink);
      append_records_jsonl({result.default_variant, result.ablation}, jsonl);
      records.push_back(std::move(result.default_variant));
      records.push_back(std::move(result.ablation));
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(std::max(1, cfg.threads), std::max<std::size_t>(1, tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  sort_records(records);
  emit_results(records, cfg, out_dir);
  return records;
}

TrialRecord run_appendix_trial(const ExperimentConfig& cfg, AnalyticId id,
                               int trial_index,
                               const std::filesystem::path* snapshot_dir) {
  if (trial_index < 0) throw std::invalid_argument("run_appendix_trial: bad trial index");
  if (cfg.segments < 1) throw std::invalid_argument("run_appendix_trial: segments must be >= 1");

  SplitRng rng = SplitRng(cfg.master_seed)
                     .split(kAppendixToken)
                     .split(static_cast<std::uint64_t>(id))
                     .split(static_cast<std::uint64_t>(trial_index));
  const double lr = cfg.fixed_lr.value_or(0.01);
  const double noise = cfg.fixed_noise.value_or(0.1);
  const ExpAThetaMode theta = cfg.expa_theta;

  const ScalarTarget t1 = [id, theta](std::span<const double> x) {
    return analytic_target(id, x[0], x[1], theta);
  };
  const ScalarTarget t2 = [id, theta](std::span<const double> x) {
    return appendix_task2_target(id, x[0], x[1], theta);
  };
  const Box unit = Box::unit(2);
  const Box patch{{0.45, 0.45}, {0.55, 0.55}};
  // This protocol carries noise on evaluation sets as well; the test set
  // doubles as the validation set.
  const Dataset t1_train = sample_dataset(t1, 2, cfg.dataset_size, unit, noise, rng);
  const Dataset t1_valtest = sample_dataset(t1, 2, cfg.dataset_size, unit, noise, rng);
  const Dataset t2_train = sample_dataset(t2, 2, cfg.dataset_size, patch, noise, rng);
  const Dataset t2_valtest = sample_dataset(t2, 2, cfg.dataset_size, unit, noise, rng);

  TrialRecord rec;
  rec.trial_id = appendix_trial_id(id, trial_index);
  rec.protocol = "appendix:" + to_string(id);
  rec.n = 2;
  rec.delta = 0.1;
  rec.variant = Variant::distal_orthogonal;
  rec.lr = lr;
  rec.noise = noise;
  rec.trial_index = trial_index;
  rec.master_seed = cfg.master_seed;

  const auto start = std::chrono::steady_clock::now();
  if (snapshot_dir) std::filesystem::create_directories(*snapshot_dir);

  AtlasModel model(2, 1, 0, 0, Variant::distal_orthogonal);
  AdamConfig adam;
  adam.lr = lr;
  adam.lazy = cfg.lazy_adam;

  SplitRng train_rng1 = rng.split(kTask1Token);
  for (int seg = 0; seg < cfg.segments; ++seg) {
    TrainCurves c = train_epochs(model, t1_train, t1_valtest, cfg.appendix_epochs_task1,
                                 cfg.batch_size, adam, train_rng1);
    rec.task1_train_curve.insert(rec.task1_train_curve.end(), c.train_mae.begin(),
                                 c.train_mae.end());
    rec.task1_val_curve.insert(rec.task1_val_curve.end(), c.val_mae.begin(),
                               c.val_mae.end());
    if (snapshot_dir)
      save_model(model,
                 *snapshot_dir / ("task1_segment" + std::to_string(seg + 1) + ".json"));
    if (seg + 1 < cfg.segments) {
      const double before = rec.task1_val_curve.empty()
                                ? evaluate_mae(model, t1_valtest)
                                : rec.task1_val_curve.back();
      model.expand_density_all();
      model.expand_exponentials(2);
      const double after = evaluate_mae(model, t1_valtest);
      rec.expansion_boundary_deltas.push_back(std::abs(after - before));
    }
  }
  rec.task1_test_mae = evaluate_mae(model, t1_valtest);

  SplitRng train_rng2 = rng.split(kTask2Token);
  TrainCurves c2 = train_epochs(model, t2_train, t2_valtest, cfg.appendix_epochs_task2,
                                cfg.batch_size, adam, train_rng2);
  rec.task2_train_curve = std::move(c2.train_mae);
  rec.task2_val_curve = std::move(c2.val_mae);
  rec.task2_test_mae = evaluate_mae(model, t2_valtest);
  if (snapshot_dir) save_model(model, *snapshot_dir / "task2_final.json");

  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<TrialRecord> run_appendix(const ExperimentConfig& cfg, AnalyticId id,
                                      const std::filesystem::path& out_dir) {
  if (cfg.trials < 1) throw std::invalid_argument("run_appendix: trials must be >= 1");
  std::filesystem::create_directories(out_dir);
  const auto jsonl = out_dir / "records.jsonl";
  const std::string protocol = "appendix:" + to_string(id);

  std::vector<TrialRecord> records;
  std::set<int> done;
  for (TrialRecord& r : load_records_jsonl(jsonl)) {
    if (r.protocol != protocol) continue;
    done.insert(r.trial_index);
    records.push_back(std::move(r));
  }
  for (int t = 0; t < cfg.trials; ++t) {
    if (done.count(t)) continue;
    const auto snapshot_dir = out_dir / "snapshots" / appendix_trial_id(id, t);
    TrialRecord rec = run_appendix_trial(cfg, id, t, &snapshot_dir);
    append_records_jsonl({rec}, jsonl);
    records.push_back(std::move(rec));
  }
  sort_records(records);
  emit_results(records, cfg, out_dir);
  return records;
}

std::vector<AggregateRow> aggregate_records(const std::vector<TrialRecord>& records) {
  std::map<std::tuple<int, double, int>, AggregateRow> groups;
  for (const TrialRecord& r : records) {
    if (r.failed) continue;
    AggregateRow& row = groups[{r.n, r.delta, static_cast<int>(r.variant)}];
    row.n = r.n;
    row.delta = r.delta;
    row.variant = r.variant;
    ++row.trials;
    row.mean_task1_test_mae += r.task1_test_mae;
    row.mean_task2_test_mae += r.task2_test_mae;
    row.mean_degradation += r.task2_test_mae - r.task1_test_mae;
  }
  std::vector<AggregateRow> rows;
  rows.reserve(groups.size());
  for (auto& [key, row] : groups) {
    row.mean_task1_test_mae /= row.trials;
    row.mean_task2_test_mae /= row.trials;
    row.mean_degradation /= row.trials;
    rows.push_back(row);
  }
  return rows;
}

void emit_results(const std::vector<TrialRecord>& records, const ExperimentConfig& cfg,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::ofstream csv(out_dir / "results.csv", std::ios::trunc);
  if (!csv) throw std::runtime_error("emit_results: cannot write results.csv");
  csv << "trial_id,n,delta,variant,lr,noise,task,split,epoch,mae\n";
  for (const TrialRecord& r : records) {
    if (r.failed) continue;
    const std::string prefix = r.trial_id + "," + std::to_string(r.n) + "," +
                               fmt(r.delta) + "," + to_string(r.variant) + "," +
                               fmt(r.lr) + "," + fmt(r.noise) + ",";
    auto write_curve = [&](int task, const char* split, const std::vector<double>& curve) {
      for (std::size_t e = 0; e < curve.size(); ++e)
        csv << prefix << task << ',' << split << ',' << (e + 1) << ',' << fmt(curve[e])
            << '\n';
    };
    write_curve(1, "train", r.task1_train_curve);
    write_curve(1, "validation", r.task1_val_curve);
    write_curve(2, "train", r.task2_train_curve);
    write_curve(2, "validation", r.task2_val_curve);
    csv << prefix << 2 << ",test," << r.task2_train_curve.size() << ','
        << fmt(r.task2_test_mae) << '\n';
  }
  csv.flush();
  if (!csv) throw std::runtime_error("emit_results: write to results.csv failed");

  std::ofstream summary(out_dir / "summary.csv", std::ios::trunc);
  if (!summary) throw std::runtime_error("emit_results: cannot write summary.csv");
  summary << "n,delta,variant,trials,mean_task1_test_mae,mean_task2_test_mae,"
             "mean_degradation\n";
  for (const AggregateRow& row : aggregate_records(records)) {
    summary << row.n << ',' << fmt(row.delta) << ',' << to_string(row.variant) << ','
            << row.trials << ',' << fmt(row.mean_task1_test_mae) << ','
            << fmt(row.mean_task2_test_mae) << ',' << fmt(row.mean_degradation) << '\n';
  }
  summary.flush();
  if (!summary) throw std::runtime_error("emit_results: write to summary.csv failed");

  json manifest;
  manifest["format_version"] = 1;
  manifest["config"] = json::parse(config_to_json(cfg));
  manifest["master_seed"] = cfg.master_seed;
  json trials = json::array();
  std::set<TrialKey> seen;
  for (const TrialRecord& r : records) {
    const TrialKey key{r.protocol, r.n, std::bit_cast<std::uint64_t>(r.delta),
                       r.trial_index, 0};
    if (!seen.insert(key).second) continue;
    trials.push_back(json{{"trial_id", r.trial_id},
                          {"protocol", r.protocol},
                          {"n", r.n},
                          {"delta", r.delta},
                          {"trial_index", r.trial_index},
                          {"lr", r.lr},
                          {"noise", r.noise},
                          {"failed", r.failed}});
  }
  manifest["trials"] = std::move(trials);
  std::ofstream mf(out_dir / "manifest.json", std::ios::trunc);
  if (!mf) throw std::runtime_error("emit_results: cannot write manifest.json");
  mf << manifest.dump(1, '\t') << '\n';
  mf.flush();
  if (!mf) throw std::runtime_error("emit_results: write to manifest.json failed");
}

void append_records_jsonl(const std::vector<TrialRecord>& records,
                          const std::filesystem::path& file) {
  // A run killed mid-write can leave the log without a trailing newline;
  // terminate that fragment so the next record starts on its own line.
  bool needs_newline = false;
  if (std::ifstream probe(file, std::ios::binary); probe) {
    probe.seekg(0, std::ios::end);
    if (probe.tellg() > 0) {
      probe.seekg(-1, std::ios::end);
      needs_newline = probe.get() != '\n';
    }
  }
  std::ofstream out(file, std::ios::app);
  if (!out) throw std::runtime_error("append_records_jsonl: cannot open " + file.string());
  if (needs_newline) out << '\n';
  for (const TrialRecord& r : records) out << record_to_json(r).dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("append_records_jsonl: write failed");
}

std::vector<TrialRecord> load_records_jsonl(const std::filesystem::path& file) {
  std::vector<TrialRecord> records;
  std::ifstream in(file);
  if (!in) return records;
  std::map<TrialKey, std::size_t> index;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TrialRecord rec;
    try {
      rec = record_from_json(json::parse(line));
    } catch (const std::exception&) {
      continue;  // torn line from an interrupted run
    }
    const TrialKey key = key_of(rec);
    const auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, records.size());
      records.push_back(std::move(rec));
    } else {
      records[it->second] = std::move(rec);
    }
  }
  return records;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["dims"] = c.dims;
  j["widths"] = c.widths;
  j["trials"] = c.trials;
  j["M"] = c.M;
  j["r"] = c.r;
  j["dataset_size"] = c.dataset_size;
  j["batch_size"] = c.batch_size;
  j["epochs_task1"] = c.epochs_task1;
  j["epochs_task2"] = c.epochs_task2;
  if (c.fixed_lr)
    j["lr"] = json{{"mode", "fixed"}, {"value", *c.fixed_lr}};
  else
    j["lr"] = json{{"mode", "random_uniform"}, {"low", 1e-6}, {"high", 0.01 + 1e-6}};
  if (c.fixed_noise)
    j["noise"] = json{{"mode", "fixed"}, {"value", *c.fixed_noise}};
  else
    j["noise"] = json{{"mode", "exponential"}, {"mean", 1.0}};
  j["master_seed"] = c.master_seed;
  j["lazy_adam"] = c.lazy_adam;
  j["threads"] = c.threads;
  j["rbf_count"] = c.rbf_count;
  j["segments"] = c.segments;
  j["appendix_epochs_task1"] = c.appendix_epochs_task1;
  j["appendix_epochs_task2"] = c.appendix_epochs_task2;
  j["expa_theta"] =
      c.expa_theta == ExpAThetaMode::as_written ? "as_written" : "atan2_unsquared";
  return j.dump(1, '\t');
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  c.dims = j.at("dims").get<std::vector<int>>();
  c.widths = j.at("widths").get<std::vector<double>>();
  c.trials = j.at("trials").get<int>();
  c.M = j.at("M").get<int>();
  c.r = j.at("r").get<int>();
  c.dataset_size = j.at("dataset_size").get<std::int64_t>();
  c.batch_size = j.at("batch_size").get<std::int64_t>();
  c.epochs_task1 = j.at("epochs_task1").get<int>();
  c.epochs_task2 = j.at("epochs_task2").get<int>();
  if (j.at("lr").at("mode").get<std::string>() == "fixed")
    c.fixed_lr = j.at("lr").at("value").get<double>();
  if (j.at("noise").at("mode").get<std::string>() == "fixed")
    c.fixed_noise = j.at("noise").at("value").get<double>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.lazy_adam = j.at("lazy_adam").get<bool>();
  c.threads = j.at("threads").get<int>();
  c.rbf_count = j.at("rbf_count").get<int>();
  c.segments = j.at("segments").get<int>();
  c.appendix_epochs_task1 = j.at("appendix_epochs_task1").get<int>();
  c.appendix_epochs_task2 = j.at("appendix_epochs_task2").get<int>();
  c.expa_theta = j.at("expa_theta").get<std::string>() == "as_written"
                     ? ExpAThetaMode::as_written
                     : ExpAThetaMode::atan2_unsquared;
  return c;
}

}  // namespace atlas
