#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fare/cli/config.hpp"

namespace fare {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitTransport = 3,
  kExitData = 4,
};

/// ConfigError -> 2; TransportError, ProtocolError -> 3; DataError,
/// PoolExhaustedError -> 4; anything else -> 1.
int exit_code_for(const std::exception& e);

// Each command reads its inputs from the config and writes only under
// config.out_dir. Progress lines go to `log`.
void run_curate(const PipelineConfig& config, std::ostream& log);
void run_rollout(const PipelineConfig& config, std::ostream& log);
void run_rsft_step(const PipelineConfig& config, std::ostream& log);
void run_evaluate(const PipelineConfig& config, std::ostream& log);
void run_rerank_command(const PipelineConfig& config, std::ostream& log);
void run_reward(const PipelineConfig& config, std::ostream& log);

/// Summarizes manifests, metric reports, rerank selections and dataset stats
/// found in `inputs` (files or directories, searched recursively).
std::string render_summary(const std::vector<std::filesystem::path>& inputs);

/// Full command line, argv[0] included. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fare
