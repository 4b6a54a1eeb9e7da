#include <CLI11.hpp>

#include <ostream>

#include "fare/cli/commands.hpp"
#include "fare/core/error.hpp"
#include "fare/core/io.hpp"

namespace fare {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Judge evaluation, data curation and rejection-sampling fine-tuning data tool", "fare"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  app.add_option("--config", config_path, "TOML pipeline config");
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--out", out_dir, "Override the output directory");

  auto* curate = app.add_subcommand("curate", "Build labeled samples from seed responses");
  auto* rollout = app.add_subcommand("rollout", "Sample k completions per input");
  auto* rsft = app.add_subcommand("rsft-step", "Run one rejection-sampling iteration");
  auto* evaluate = app.add_subcommand("evaluate", "Score a judge on a benchmark file");
  auto* rerank = app.add_subcommand("rerank", "Best-of-N selection with a pairwise judge");
  auto* reward = app.add_subcommand("reward", "Verifier rewards for (response, gold) pairs");
  auto* report = app.add_subcommand("report", "Summarize manifests and metric reports");

  std::string task_name;
  bool consistent = false;
  std::optional<int> sc_k;
  bool direct = false;
  evaluate->add_option("--task", task_name, "pairwise, step_level, ref_based, ref_free, rating");
  evaluate->add_flag("--consistent", consistent, "Judge both response orders (pairwise)");
  evaluate->add_option("--sc-k", sc_k, "Self-consistency samples per judgment")
      ->check(CLI::PositiveNumber);
  for (auto* sub : {evaluate, rollout, rerank}) {
    sub->add_flag("--direct", direct, "Use direct-judgment prompts");
  }
  std::vector<std::string> report_paths;
  report->add_option("paths", report_paths, "Files or directories (default: output directory)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (report->parsed() && config_path.empty()) {
      if (report_paths.empty()) throw ConfigError("report needs paths or --config");
      std::vector<std::filesystem::path> paths(report_paths.begin(), report_paths.end());
      out << render_summary(paths);
      return kExitOk;
    }
    if (config_path.empty()) throw ConfigError("--config is required");

    PipelineConfig config = load_config(config_path);
    if (seed) {
      config.seed = *seed;
      config.rsft.seed = *seed;
      config.rerank.options.seed = *seed;
    }
    if (!out_dir.empty()) config.out_dir = std::filesystem::absolute(out_dir).lexically_normal();
    if (!task_name.empty()) {
      const auto task = parse_task_kind(task_name);
      if (!task) throw ConfigError("--task: unknown task '" + task_name + "'");
      config.benchmark.task = *task;
    }
    if (consistent) config.benchmark.flags.consistent = true;
    if (sc_k) config.benchmark.flags.sc_k = *sc_k;
    if (direct) {
      config.benchmark.flags.direct = true;
      config.rollout.direct = true;
      config.rerank.options.direct = true;
    }
    validate_config(config);

    if (curate->parsed()) {
      run_curate(config, out);
    } else if (rollout->parsed()) {
      run_rollout(config, out);
    } else if (rsft->parsed()) {
      run_rsft_step(config, out);
    } else if (evaluate->parsed()) {
      run_evaluate(config, out);
    } else if (rerank->parsed()) {
      run_rerank_command(config, out);
    } else if (reward->parsed()) {
      run_reward(config, out);
    } else {
      std::vector<std::filesystem::path> paths(report_paths.begin(), report_paths.end());
      if (paths.empty()) paths.push_back(config.out_dir);
      const std::string text = render_summary(paths);
      if (report_paths.empty()) write_text_atomic(config.out_dir / "summary.txt", text);
      out << text;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "fare: error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace fare
