#include "fare/rsft/loop.hpp"

#include <cstdio>

#include "fare/core/error.hpp"
#include "fare/core/prompt.hpp"
#include "fare/core/rng.hpp"

namespace fare {

namespace {

constexpr const char* kCheckpoint = "checkpoint.json";

std::string iteration_dir(int t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "iter_%04d", t);
  return buf;
}

}  // namespace

ordered_json checkpoint_to_json(const LoopState& state) {
  return ordered_json{{"next_iteration", state.next_iteration}, {"seen", state.seen}};
}

LoopState load_loop_state(std::vector<LabeledSample> pool, const std::filesystem::path& out_dir) {
  LoopState state;
  std::set<std::string> ids;
  for (const auto& s : pool) {
    if (!ids.insert(s.id()).second) throw DataError("duplicate sample id in pool: " + s.id());
  }
  state.pool = std::move(pool);
  const auto path = out_dir / kCheckpoint;
  if (!std::filesystem::exists(path)) return state;
  try {
    const auto doc = nlohmann::json::parse(read_text(path));
    state.next_iteration = doc.at("next_iteration").get<int>();
    for (const auto& id : doc.at("seen")) state.seen.insert(id.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt checkpoint " + path.string() + ": " + e.what());
  }
  return state;
}

ordered_json manifest_to_json(const IterationManifest& m) {
  ordered_json per_task = ordered_json::object();
  for (const auto& [task, c] : m.per_task) {
    per_task[std::string(to_string(task))] = ordered_json{
        {"rolled", c.rolled}, {"kept", c.kept}, {"converted_direct", c.converted_direct}};
  }
  return ordered_json{
      {"iteration", m.iteration},
      {"batch_ids", m.batch_ids},
      {"counts",
       {{"rolled", m.rolled},
        {"kept", m.kept},
        {"discarded_all_wrong", m.discarded_all_wrong},
        {"rollout_errors", m.rollout_errors},
        {"per_task", per_task}}},
      {"config", m.config},
      {"dataset", m.dataset},
      {"checksum", m.checksum},
      {"trainer",
       {{"batch_size", m.trainer.batch_size},
        {"learning_rate", m.trainer.learning_rate},
        {"lr_schedule", m.trainer.lr_schedule},
        {"executed", false}}}};
}

IterationManifest run_iteration(LoopState& state, const RsftConfig& config, ChatBackend& backend,
                                const EndpointDescriptor& endpoint,
                                const std::filesystem::path& out_dir) {
  validate(config);
  const int t = state.next_iteration;
  const std::uint64_t it_seed = mix_seed(config.seed, static_cast<std::uint64_t>(t));
  const TaskFractions mix =
      config.task_mix.empty() ? task_composition(state.pool) : config.task_mix;

  std::set<std::string> seen = state.seen;
  const RolloutBatch batch =
      compose_batch(state.pool, seen, config.n_rollout, mix, mix_seed(it_seed, "compose"));

  IterationManifest m;
  m.iteration = t;
  m.trainer = config.trainer;
  m.config = config_to_json(config);
  m.config["endpoint"] = {{"backend", to_string(endpoint.backend)},
                          {"model", endpoint.model},
                          {"use_n_parameter", endpoint.use_n_parameter}};

  std::vector<RolloutRequest> requests;
  requests.reserve(batch.indices.size());
  for (auto i : batch.indices) {
    EvalInput input = state.pool[i].input;
    input.protocol.variant = TemplateVariant::WithCritique;
    requests.push_back({input.id, render_prompt(input)});
    m.batch_ids.push_back(input.id);
  }
  const auto rollouts =
      run_rollout_batch(backend, endpoint, requests, config.sampling, config.max_in_flight);

  const std::uint64_t reject_seed = mix_seed(it_seed, "reject");
  std::vector<SFTExample> kept;
  for (std::size_t b = 0; b < batch.indices.size(); ++b) {
    const LabeledSample& sample = state.pool[batch.indices[b]];
    auto& counts = m.per_task[sample.task()];
    ++counts.rolled;
    ++m.rolled;
    if (!rollouts[b].ok()) {
      ++m.rollout_errors;
      ++m.discarded_all_wrong;
      continue;
    }
    auto decision = reject_sample(sample, rollouts[b], reject_seed);
    if (!decision.kept) {
      ++m.discarded_all_wrong;
      continue;
    }
    ++counts.kept;
    ++m.kept;
    kept.push_back(std::move(*decision.kept));
  }

  kept = convert_direct_judgment(std::move(kept), config.direct_fraction,
                                 config.drop_intermediate_cot, mix_seed(it_seed, "convert"));
  for (const auto& ex : kept) {
    if (ex.direct) ++m.per_task[ex.task()].converted_direct;
  }
  if (config.curriculum) kept = curriculum_sort(std::move(kept));

  const std::string dir = iteration_dir(t);
  m.dataset = dir + "/sft.jsonl";
  m.checksum = emit_sft_dataset(kept, out_dir / m.dataset);
  write_text_atomic(out_dir / dir / "manifest.json", manifest_to_json(m).dump(2) + "\n");

  state.seen = std::move(seen);
  state.next_iteration = t + 1;
  write_text_atomic(out_dir / kCheckpoint, checkpoint_to_json(state).dump(2) + "\n");
  return m;
}

}  // namespace fare
