#include "fare/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "fare/core/error.hpp"
#include "fare/core/io.hpp"
#include "fare/core/prompt.hpp"
#include "fare/core/rng.hpp"
#include "fare/curation/decontam.hpp"
#include "fare/curation/seed.hpp"
#include "fare/curation/stats.hpp"
#include "fare/harness/report.hpp"
#include "fare/rsft/loop.hpp"

namespace fare {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_json(const fs::path& path, const ordered_json& value) {
  write_text_atomic(path, value.dump(2, ' ', false, json::error_handler_t::replace) + "\n");
}

void write_jsonl(const fs::path& path, const std::vector<ordered_json>& rows) {
  std::string content;
  for (const auto& r : rows) content += dump_line(r) + "\n";
  write_text_atomic(path, content);
}

fs::path require_input(const fs::path& p, const char* key) {
  if (p.empty()) throw ConfigError(std::string(key) + " is not set");
  return p;
}

std::shared_ptr<ChatBackend> backend_for(const PipelineConfig& config, EndpointDescriptor& endpoint) {
  endpoint = resolve_endpoint(config);
  return make_backend(endpoint);
}

// All requests failed at the transport level: report it as such rather than
// as a run with zero score.
void fail_if_all_failed(const std::vector<RolloutResult>& results) {
  if (results.empty()) return;
  for (const auto& r : results) {
    if (r.error != RolloutErrorKind::Transport) return;
  }
  throw TransportError("all " + std::to_string(results.size()) + " requests failed; last: " +
                           (results.back().failures.empty() ? "unknown"
                                                            : results.back().failures.back()),
                       results.back().last_status);
}

std::vector<std::string> read_questions(const fs::path& path) {
  std::vector<std::string> out;
  const auto rows = read_jsonl(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto it = rows[i].find("question");
    if (!rows[i].is_object() || it == rows[i].end() || !it->is_string()) {
      throw DataError(path.string() + ": record " + std::to_string(i + 1) +
                      ": missing string field 'question'");
    }
    out.push_back(it->get<std::string>());
  }
  return out;
}

ordered_json seed_to_json(const SeedBundle& b) {
  ordered_json responses = ordered_json::array();
  for (const auto& r : b.responses) {
    responses.push_back({{"text", r.text}, {"generator", r.generator_id}, {"temperature", r.temperature}});
  }
  return ordered_json{{"id", b.record.id},
                      {"question", b.record.question},
                      {"gold_answer", b.record.gold_answer},
                      {"domain", b.record.domain_tag},
                      {"dataset", b.record.source_dataset},
                      {"kind", to_string(b.record.kind)},
                      {"responses", responses}};
}

ordered_json rollout_to_json(const RolloutResult& r) {
  ordered_json usage = ordered_json::array();
  for (const auto& u : r.usage) {
    usage.push_back({{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens}});
  }
  ordered_json row{{"id", r.input_id}, {"completions", r.completions}, {"usage", usage}};
  if (!r.ok()) {
    row["error"] = r.error == RolloutErrorKind::Transport ? "transport" : "protocol";
    row["last_status"] = r.last_status;
  }
  if (!r.failures.empty()) row["failures"] = r.failures;
  return row;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const TransportError*>(&e) || dynamic_cast<const ProtocolError*>(&e)) {
    return kExitTransport;
  }
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const PoolExhaustedError*>(&e)) {
    return kExitData;
  }
  return kExitOther;
}

void run_curate(const PipelineConfig& config, std::ostream& log) {
  const auto& cur = config.curation;
  if (cur.seeds.empty()) throw ConfigError("curation.seeds is not set");

  std::vector<LabeledSample> samples;
  std::size_t n_seeds = 0;
  for (const auto& path : cur.seeds) {
    for (const auto& bundle : read_seeds(path)) {
      ++n_seeds;
      const SeedRecord& seed = bundle.record;
      if (seed.kind == SeedKind::ToolCall) {
        auto inj = build_injection_samples(seed, cur.corruptions,
                                           mix_seed(config.seed, "inject:" + seed.id), cur.rubrics);
        std::move(inj.begin(), inj.end(), std::back_inserter(samples));
        continue;
      }
      const auto graded = grade_responses(seed, bundle.responses);
      auto pw = build_pairwise_samples(seed, graded, cur.pairwise_limit,
                                       mix_seed(config.seed, "pairwise:" + seed.id), cur.rubrics);
      std::move(pw.begin(), pw.end(), std::back_inserter(samples));
      for (VerificationMode mode : cur.verification) {
        if (mode == VerificationMode::RefBased && seed.gold_answer.empty()) continue;
        auto v = build_verification_samples(seed, graded, mode, cur.rubrics);
        std::move(v.begin(), v.end(), std::back_inserter(samples));
      }
    }
  }

  std::vector<std::string> eval;
  for (const auto& path : cur.eval_questions) {
    auto q = read_questions(path);
    std::move(q.begin(), q.end(), std::back_inserter(eval));
  }
  const auto result = decontaminate(samples, eval, cur.ngram);

  write_samples(config.out_dir / "curated.jsonl", result.kept);
  write_json(config.out_dir / "curation_stats.json", stats_to_json(dataset_stats(result.kept)));
  write_json(config.out_dir / "decontamination.json", removal_report(result));
  log << "curate: " << n_seeds << " seeds -> " << samples.size() << " samples, "
      << result.removed.size() << " removed by decontamination, " << result.kept.size()
      << " written to " << (config.out_dir / "curated.jsonl").string() << "\n";
}

void run_rollout(const PipelineConfig& config, std::ostream& log) {
  const fs::path inputs = require_input(config.rollout.inputs, "rollout.inputs");
  const auto rows = read_jsonl(inputs);
  const bool labeled = !rows.empty() && rows.front().is_object() && rows.front().contains("task");

  std::vector<RolloutRequest> batch;
  std::vector<SeedBundle> seeds;
  if (labeled) {
    for (const auto& s : read_samples(inputs)) {
      EvalInput in = s.input;
      in.protocol.variant =
          config.rollout.direct ? TemplateVariant::DirectJudgment : TemplateVariant::WithCritique;
      batch.push_back({in.id, render_prompt(in)});
    }
  } else {
    seeds = read_seeds(inputs);
    for (const auto& b : seeds) batch.push_back({b.record.id, {{Role::User, b.record.question}}});
  }

  EndpointDescriptor endpoint;
  const auto backend = backend_for(config, endpoint);
  const auto results =
      run_rollout_batch(*backend, endpoint, batch, config.sampling, config.rollout.max_in_flight);
  fail_if_all_failed(results);

  std::vector<ordered_json> out;
  std::size_t failed = 0;
  for (const auto& r : results) {
    out.push_back(rollout_to_json(r));
    failed += !r.ok();
  }
  write_jsonl(config.out_dir / "rollouts.jsonl", out);

  if (!labeled) {
    std::vector<ordered_json> rows_out;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      for (const auto& text : results[i].completions) {
        seeds[i].responses.push_back({text, endpoint.model, config.sampling.temperature});
      }
      rows_out.push_back(seed_to_json(seeds[i]));
    }
    write_jsonl(config.out_dir / "seeds_with_responses.jsonl", rows_out);
  }
  log << "rollout: " << results.size() << " inputs x k=" << config.sampling.k << ", " << failed
      << " failed\n";
}

void run_rsft_step(const PipelineConfig& config, std::ostream& log) {
  const fs::path pool_path = require_input(config.rsft_pool, "rsft.pool");
  LoopState state = load_loop_state(read_samples(pool_path), config.out_dir);
  if (state.next_iteration > config.rsft.total_iterations) {
    throw ConfigError("all " + std::to_string(config.rsft.total_iterations) +
                      " iterations (rsft.iterations) are already done in " +
                      config.out_dir.string());
  }
  EndpointDescriptor endpoint;
  const auto backend = backend_for(config, endpoint);
  const auto m = run_iteration(state, config.rsft, *backend, endpoint, config.out_dir);
  if (m.rolled > 0 && m.rollout_errors == m.rolled) {
    throw TransportError("iteration " + std::to_string(m.iteration) + ": all " +
                             std::to_string(m.rolled) + " rollouts failed",
                         0);
  }
  log << "rsft-step: iteration " << m.iteration << " rolled " << m.rolled << ", kept " << m.kept
      << ", discarded " << m.discarded_all_wrong << " (" << m.rollout_errors
      << " rollout errors); dataset " << m.dataset << " sha256 " << m.checksum << "\n";
}

void run_evaluate(const PipelineConfig& config, std::ostream& log) {
  const auto& bench = config.benchmark;
  const fs::path path = require_input(bench.samples, "benchmark.samples");
  auto samples = read_samples(path);
  if (samples.empty()) throw DataError(path.string() + " contains no samples");
  const TaskKind task = bench.task.value_or(samples.front().task());
  const auto total = samples.size();
  std::erase_if(samples, [&](const LabeledSample& s) { return s.task() != task; });
  if (samples.empty()) {
    throw DataError(path.string() + " has no " + std::string(to_string(task)) + " samples");
  }
  if (samples.size() != total) {
    log << "evaluate: skipping " << total - samples.size() << " samples of other tasks\n";
  }

  EndpointDescriptor endpoint;
  const auto backend = backend_for(config, endpoint);
  BenchmarkJob job;
  job.task = task;
  job.samples = std::move(samples);
  job.backend = backend.get();
  job.endpoint = endpoint;
  job.params = config.sampling;
  job.flags = bench.flags;
  job.max_in_flight = bench.max_in_flight;

  MetricReport report;
  if (task == TaskKind::SingleRating && bench.human_ratings) {
    const auto doc = json::parse(read_text(*bench.human_ratings), nullptr, false);
    if (!doc.is_array()) throw DataError(bench.human_ratings->string() + " must be a JSON array");
    std::vector<double> human;
    for (const auto& v : doc) {
      if (!v.is_number()) throw DataError(bench.human_ratings->string() + " must hold numbers");
      human.push_back(v.get<double>());
    }
    report = run_rating_benchmark(job, human);
  } else {
    report = run_benchmark(job);
  }

  const bool all_failed = std::all_of(report.rows.begin(), report.rows.end(), [](const ReportRow& r) {
    return !r.predictions.empty() &&
           std::all_of(r.predictions.begin(), r.predictions.end(),
                       [](const std::string& p) { return p == "error"; });
  });
  if (all_failed) throw TransportError("every judge request failed", 0);

  const fs::path out = config.out_dir / ("report_" + std::string(to_string(task)) + ".json");
  write_json(out, report_to_json(report));
  log << "evaluate: " << report.metric << " = " << fixed(report.value) << " (n=" << report.n
      << ") -> " << out.string() << "\n";
}

void run_rerank_command(const PipelineConfig& config, std::ostream& log) {
  const fs::path path = require_input(config.rerank.candidates, "rerank.candidates");
  const auto candidates = read_rerank_candidates(path);
  EndpointDescriptor endpoint;
  const auto backend = backend_for(config, endpoint);
  SamplingParams params = config.sampling;
  params.k = 1;
  const auto summary = run_rerank(candidates, *backend, endpoint, params, config.rerank.options,
                                  config.rerank.max_in_flight);
  write_json(config.out_dir / "rerank.json", rerank_to_json(candidates, summary));
  log << "rerank: " << candidates.size() << " sets";
  if (summary.scored > 0) {
    log << ", selected correct " << fixed(summary.accuracy) << ", oracle " << fixed(summary.oracle);
  }
  log << "\n";
}

void run_reward(const PipelineConfig& config, std::ostream& log) {
  const fs::path path = require_input(config.reward.inputs, "reward.inputs");
  const auto rows = read_jsonl(path);

  std::shared_ptr<ChatBackend> backend;
  EndpointDescriptor endpoint;
  if (config.reward.grader == GraderKind::Judge) backend = backend_for(config, endpoint);
  SamplingParams params = config.sampling;
  params.k = 1;

  std::vector<ordered_json> out;
  double total = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto where = path.string() + ": record " + std::to_string(i + 1);
    if (!row.is_object() || !row.contains("response") || !row["response"].is_string() ||
        !row.contains("gold") || !row["gold"].is_string()) {
      throw DataError(where + ": needs string fields 'response' and 'gold'");
    }
    const std::string id = row.value("id", std::to_string(i + 1));
    const auto response = row["response"].get<std::string>();
    const auto gold = row["gold"].get<std::string>();
    AnswerGrader grader = rule_grader();
    if (backend) grader = judge_grader(*backend, endpoint, params, row.value("question", std::string()));
    const auto b = verifier_reward(response, gold, grader, config.reward.options);
    total += b.reward;
    ordered_json r{{"id", id}, {"reward", b.reward}, {"extracted", nullptr}, {"correct", b.correct},
                   {"length_delta", b.length_delta}};
    if (b.extracted) r["extracted"] = *b.extracted;
    out.push_back(std::move(r));
  }
  write_jsonl(config.out_dir / "rewards.jsonl", out);
  log << "reward: " << out.size() << " responses, mean reward "
      << fixed(out.empty() ? 0.0 : total / static_cast<double>(out.size())) << "\n";
}

std::string render_summary(const std::vector<fs::path>& inputs) {
  struct Line {
    std::string kind, file, summary;
  };
  std::vector<Line> lines;

  auto describe = [&](const fs::path& file, const fs::path& root) {
    const auto doc = json::parse(read_text(file), nullptr, false);
    if (!doc.is_object()) return;
    const std::string rel = file == root ? file.filename().string()
                                         : file.lexically_relative(root).generic_string();
    if (doc.contains("metric") && doc.contains("value")) {
      const auto r = report_from_json(doc);
      std::string s = r.metric + " = " + fixed(r.value) + " (n=" + std::to_string(r.n) + ")";
      for (const auto& [k, v] : r.extras) s += ", " + k + " " + fixed(v);
      lines.push_back({"report", rel, s});
    } else if (doc.contains("iteration") && doc.contains("counts")) {
      const auto& c = doc["counts"];
      lines.push_back({"rsft", rel,
                       "iteration " + doc["iteration"].dump() + ": rolled " + c.value("rolled", json(0)).dump() +
                           ", kept " + c.value("kept", json(0)).dump() + ", discarded " +
                           c.value("discarded_all_wrong", json(0)).dump() + ", errors " +
                           c.value("rollout_errors", json(0)).dump()});
    } else if (doc.contains("selections")) {
      std::string s = std::to_string(doc["selections"].size()) + " sets";
      if (doc.contains("accuracy")) {
        s += ", selected correct " + fixed(doc["accuracy"].get<double>()) + ", oracle " +
             fixed(doc["oracle"].get<double>());
      }
      lines.push_back({"rerank", rel, s});
    } else if (doc.contains("total") && doc.contains("task")) {
      std::string s = doc["total"].dump() + " samples";
      for (const auto& [task, entry] : doc["task"].items()) {
        s += ", " + task + " " + entry.value("count", json(0)).dump();
      }
      lines.push_back({"dataset", rel, s});
    } else if (doc.contains("removed") && doc.contains("kept")) {
      lines.push_back({"decontam", rel,
                       std::to_string(doc["removed"].size()) + " removed at n=" + doc["n"].dump() +
                           ", " + doc["kept"].dump() + " kept"});
    }
  };

  for (const auto& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::recursive_directory_iterator(input)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) describe(f, input);
    } else if (fs::is_regular_file(input, ec)) {
      describe(input, input);
    } else {
      throw DataError("no such file or directory: " + input.string());
    }
  }

  std::size_t wk = 4, wf = 4;
  for (const auto& l : lines) {
    wk = std::max(wk, l.kind.size());
    wf = std::max(wf, l.file.size());
  }
  std::ostringstream os;
  auto row = [&](const std::string& k, const std::string& f, const std::string& s) {
    os << k << std::string(wk - k.size() + 2, ' ') << f << std::string(wf - f.size() + 2, ' ') << s
       << "\n";
  };
  row("kind", "file", "summary");
  row(std::string(wk, '-'), std::string(wf, '-'), std::string(7, '-'));
  for (const auto& l : lines) row(l.kind, l.file, l.summary);
  if (lines.empty()) os << "(no manifests or reports found)\n";
  return os.str();
}

}  // namespace fare
