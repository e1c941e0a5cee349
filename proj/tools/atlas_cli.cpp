// Command-line front end: continual-learning experiment sweeps, the
// train-expand protocol, property checks on saved models, and batch
// evaluation.

#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atlas/harness.hpp"
#include "atlas/serialize.hpp"
#include "atlas/verify.hpp"

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct GridArgs {
  atlas::ExperimentConfig cfg;
  std::string out = "results/grid";
  bool full = false;
};

struct AppendixArgs {
  atlas::ExperimentConfig cfg;
  std::string target = "A";
  std::string theta = "as_written";
  std::string out;
};

struct VerifyArgs {
  std::string model;
  int points = 1000;
  int pairs = 10000;
  double gap = -1.0;  // negative: use the model's own support width
  int expand_delta_m = 2;
  int fd_points = 50;
  double fd_step = 1e-5;
  double fd_tol = 1e-5;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string model;
  std::string points;
  std::string out;
};

void add_common_options(CLI::App* cmd, atlas::ExperimentConfig& cfg) {
  cmd->add_option("--seed", cfg.master_seed, "Master seed")->envname("ATLAS_SEED");
  cmd->add_option("--trials", cfg.trials, "Trials per cell");
  cmd->add_option("--dataset-size", cfg.dataset_size, "Points per dataset")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--batch-size", cfg.batch_size, "Minibatch size")
      ->check(CLI::PositiveNumber);
  cmd->add_option_function<double>(
         "--lr", [&cfg](const double& v) { cfg.fixed_lr = v; },
         "Fixed learning rate (default: per-trial draw)")
      ->check(CLI::PositiveNumber);
  cmd->add_option_function<double>(
         "--noise", [&cfg](const double& v) { cfg.fixed_noise = v; },
         "Fixed noise sigma (default: per-trial draw)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--lazy-adam", cfg.lazy_adam,
                "Update only touched parameters each step");
}

int run_grid_command(const GridArgs& args) {
  atlas::ExperimentConfig cfg = args.cfg;
  if (args.full) {
    cfg.dims = {1, 2, 8};
    cfg.widths = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    cfg.trials = 30;
  }
  const auto records = atlas::run_grid(cfg, args.out);
  int failed = 0;
  for (const auto& r : records) {
    if (!r.failed) continue;
    ++failed;
    std::cerr << "trial " << r.trial_id << " (" << atlas::to_string(r.variant)
              << ") failed: " << r.message << '\n';
  }
  std::cout << records.size() << " records written to " << args.out << '\n';
  return failed == 0 ? 0 : 2;
}

int run_appendix_command(const AppendixArgs& args) {
  atlas::ExperimentConfig cfg = args.cfg;
  cfg.expa_theta = args.theta == "as_written" ? atlas::ExpAThetaMode::as_written
                                              : atlas::ExpAThetaMode::atan2_unsquared;
  const atlas::AnalyticId id = atlas::analytic_id_from_string(args.target);
  const std::string out =
      args.out.empty() ? "results/appendix" + atlas::to_string(id) : args.out;
  const auto records = atlas::run_appendix(cfg, id, out);
  for (const auto& r : records) {
    std::cout << r.trial_id << ": task1 test mae " << fmt(r.task1_test_mae)
              << ", task2 test mae " << fmt(r.task2_test_mae)
              << ", max expansion delta ";
    double worst = 0.0;
    for (double d : r.expansion_boundary_deltas) worst = std::max(worst, d);
    std::cout << fmt(worst) << '\n';
  }
  std::cout << records.size() << " records written to " << out << '\n';
  return 0;
}

int run_verify_command(const VerifyArgs& args) {
  const atlas::AtlasModel model = atlas::load_model(args.model);
  atlas::SplitRng rng(args.seed);
  const double gap =
      args.gap >= 0.0 ? args.gap : atlas::default_orthogonality_gap(model);
  std::vector<atlas::PropertyReport> reports;
  reports.push_back(atlas::check_sparsity(model, args.points, rng));
  reports.push_back(atlas::check_gradient_bound(model, args.points, rng));
  reports.push_back(atlas::check_orthogonality(model, args.pairs, gap, rng));
  reports.push_back(atlas::check_expansion(model, args.points, args.expand_delta_m, rng));
  reports.push_back(
      atlas::check_finite_diff(model, args.fd_points, args.fd_step, args.fd_tol, rng));
  bool ok = true;
  for (const auto& report : reports) {
    atlas::print_report(std::cout, report);
    ok = ok && report.pass;
  }
  return ok ? 0 : 2;
}

int run_eval_command(const EvalArgs& args) {
  const atlas::AtlasModel model = atlas::load_model(args.model);
  std::ifstream in(args.points);
  if (!in) throw std::runtime_error("cannot open points file: " + args.points);
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out, std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file: " + args.out);
  }
  std::ostream& out = args.out.empty() ? std::cout : file;

  atlas::AtlasModel::Scratch scratch;
  std::vector<double> x, y(static_cast<std::size_t>(model.output_dim()));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream fields(line);
    x.clear();
    double v = 0.0;
    while (fields >> v) x.push_back(v);
    if (x.empty()) continue;
    if (x.size() != static_cast<std::size_t>(model.input_dim()))
      throw std::runtime_error("points file line " + std::to_string(line_no) + ": got " +
                               std::to_string(x.size()) + " coordinates, model expects " +
                               std::to_string(model.input_dim()));
    model.forward(x, y, scratch);
    for (std::size_t o = 0; o < y.size(); ++o) out << (o ? " " : "") << fmt(y[o]);
    out << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Additive-exponential spline models: experiments and property checks"};
  app.require_subcommand(1);

  GridArgs grid;
  grid.cfg.dims = {1, 2};
  grid.cfg.trials = 5;
  CLI::App* grid_cmd = app.add_subcommand(
      "grid", "Two-task continual-learning sweep over dimensions and region widths");
  grid_cmd->add_option("--out", grid.out, "Output directory");
  grid_cmd->add_flag("--full", grid.full,
                     "Full protocol: dims {1,2,8}, widths 0.1-0.9, 30 trials");
  grid_cmd->add_option("--dims", grid.cfg.dims, "Input dimensions")->delimiter(',');
  grid_cmd->add_option("--widths", grid.cfg.widths, "Region widths in (0,1)")
      ->delimiter(',');
  grid_cmd->add_option("--exponentials", grid.cfg.M, "Exponential pairs per output")
      ->check(CLI::NonNegativeNumber);
  grid_cmd->add_option("--max-density", grid.cfg.r, "Top density level")
      ->check(CLI::NonNegativeNumber);
  grid_cmd->add_option("--epochs1", grid.cfg.epochs_task1, "Task-1 epochs")
      ->check(CLI::NonNegativeNumber);
  grid_cmd->add_option("--epochs2", grid.cfg.epochs_task2, "Task-2 epochs")
      ->check(CLI::NonNegativeNumber);
  grid_cmd->add_option("--rbf-count", grid.cfg.rbf_count, "Components per target")
      ->check(CLI::PositiveNumber);
  grid_cmd->add_option("--threads", grid.cfg.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  add_common_options(grid_cmd, grid.cfg);

  AppendixArgs appendix;
  appendix.cfg.trials = 1;
  CLI::App* appendix_cmd = app.add_subcommand(
      "appendix", "Train-expand protocol on an analytic two-variable target");
  appendix_cmd->add_option("--target", appendix.target, "Target id")
      ->check(CLI::IsMember({"A", "B", "C", "D"}))
      ->required();
  appendix_cmd->add_option("--out", appendix.out,
                           "Output directory (default results/appendix<ID>)");
  appendix_cmd->add_option("--segments", appendix.cfg.segments, "Training segments")
      ->check(CLI::PositiveNumber);
  appendix_cmd
      ->add_option("--epochs1", appendix.cfg.appendix_epochs_task1,
                   "Task-1 epochs per segment")
      ->check(CLI::NonNegativeNumber);
  appendix_cmd
      ->add_option("--epochs2", appendix.cfg.appendix_epochs_task2, "Task-2 epochs")
      ->check(CLI::NonNegativeNumber);
  appendix_cmd
      ->add_option("--theta", appendix.theta,
                   "Angle convention for target A: as_written squares the centered "
                   "coordinates inside atan2")
      ->check(CLI::IsMember({"as_written", "atan2_unsquared"}));
  add_common_options(appendix_cmd, appendix.cfg);

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Run property checks against a saved model; exit 2 on any failure");
  verify_cmd->add_option("--model", verify.model, "Model JSON file")->required();
  verify_cmd->add_option("--points", verify.points, "Sample points per check")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--pairs", verify.pairs, "Point pairs for the overlap check")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option(
      "--gap", verify.gap,
      "Minimum per-coordinate separation (default: the model's support width)");
  verify_cmd->add_option("--expand", verify.expand_delta_m,
                         "Exponential pairs added by the expansion check")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--fd-points", verify.fd_points, "Finite-difference probes")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--fd-step", verify.fd_step, "Finite-difference step")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--fd-tol", verify.fd_tol, "Relative error tolerance")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify.seed, "Sampling seed")->envname("ATLAS_SEED");

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Evaluate a saved model on points read from a file");
  eval_cmd->add_option("--model", eval.model, "Model JSON file")->required();
  eval_cmd
      ->add_option("--points", eval.points,
                   "Text file, one point per line, coordinates separated by spaces "
                   "or commas")
      ->required();
  eval_cmd->add_option("--out", eval.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (grid_cmd->parsed()) return run_grid_command(grid);
    if (appendix_cmd->parsed()) return run_appendix_command(appendix);
    if (verify_cmd->parsed()) return run_verify_command(verify);
    if (eval_cmd->parsed()) return run_eval_command(eval);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
