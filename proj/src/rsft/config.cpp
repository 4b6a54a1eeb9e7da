#include "fare/rsft/config.hpp"

#include "fare/core/error.hpp"

namespace fare {

namespace {

void check_fractions(const TaskFractions& fractions, const std::string& field) {
  for (const auto& [task, f] : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ConfigError(field + "." + std::string(to_string(task)) + " must be in [0, 1], got " +
                        std::to_string(f));
    }
  }
}

}  // namespace

void validate(const RsftConfig& config) {
  if (config.n_rollout < 1) throw ConfigError("rsft.n_rollout must be >= 1");
  validate(config.sampling);
  check_fractions(config.direct_fraction, "rsft.direct_fraction");
  check_fractions(config.task_mix, "rsft.task_mix");
  if (!config.task_mix.empty()) {
    double total = 0;
    for (const auto& [_, f] : config.task_mix) total += f;
    if (total <= 0) throw ConfigError("rsft.task_mix must have a positive entry");
  }
  if (config.total_iterations < 1) throw ConfigError("rsft.iterations must be >= 1");
  if (config.max_in_flight < 1) throw ConfigError("rsft.max_in_flight must be >= 1");
  if (config.trainer.batch_size < 1) throw ConfigError("rsft.trainer.batch_size must be >= 1");
}

ordered_json fractions_to_json(const TaskFractions& fractions) {
  ordered_json out = ordered_json::object();
  for (const auto& [task, f] : fractions) out[std::string(to_string(task))] = f;
  return out;
}

ordered_json config_to_json(const RsftConfig& c) {
  return ordered_json{
      {"n_rollout", c.n_rollout},
      {"k", c.sampling.k},
      {"temperature", c.sampling.temperature},
      {"max_tokens", c.sampling.max_tokens},
      {"direct_fraction", fractions_to_json(c.direct_fraction)},
      {"task_mix", fractions_to_json(c.task_mix)},
      {"curriculum", c.curriculum},
      {"drop_intermediate_cot", c.drop_intermediate_cot},
      {"seed", c.seed},
      {"iterations", c.total_iterations},
      {"max_in_flight", c.max_in_flight}};
}

}  // namespace fare
