#include "fare/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

#include <toml.hpp>

#include "fare/core/error.hpp"
#include "fare/core/io.hpp"

namespace fare {
namespace {

namespace fs = std::filesystem;

// A TOML table whose keys are consumed one by one; whatever is left over at
// finish() is an unknown key.
class Section {
 public:
  Section(const toml::table* table, std::string path) : table_(table), path_(std::move(path)) {}

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const toml::node* take(std::string_view key) {
    used_.insert(std::string(key));
    if (table_ == nullptr) return nullptr;
    return table_->get(key);
  }

  std::optional<Section> table(std::string_view key) {
    const auto* node = take(key);
    if (node == nullptr) return std::nullopt;
    if (!node->is_table()) throw ConfigError(key_path(key) + " must be a table");
    return Section(node->as_table(), key_path(key));
  }

  std::optional<std::int64_t> integer(std::string_view key, std::int64_t min,
                                      std::int64_t max = std::numeric_limits<std::int64_t>::max()) {
    const auto* node = take(key);
    if (node == nullptr) return std::nullopt;
    if (!node->is_integer()) throw ConfigError(key_path(key) + " must be an integer");
    const auto v = node->as_integer()->get();
    if (v < min || v > max) {
      throw ConfigError(key_path(key) + " must be in [" + std::to_string(min) + ", " +
                        std::to_string(max) + "], got " + std::to_string(v));
    }
    return v;
  }

  std::optional<double> number(std::string_view key) {
    const auto* node = take(key);
    if (node == nullptr) return std::nullopt;
    double v = 0;
    if (node->is_integer()) {
      v = static_cast<double>(node->as_integer()->get());
    } else if (node->is_floating_point()) {
      v = node->as_floating_point()->get();
    } else {
      throw ConfigError(key_path(key) + " must be a number");
    }
    if (!std::isfinite(v)) throw ConfigError(key_path(key) + " must be finite");
    return v;
  }

  std::optional<bool> boolean(std::string_view key) {
    const auto* node = take(key);
    if (node == nullptr) return std::nullopt;
    if (!node->is_boolean()) throw ConfigError(key_path(key) + " must be true or false");
    return node->as_boolean()->get();
  }

  std::optional<std::string> string(std::string_view key) {
    const auto* node = take(key);
    if (node == nullptr) return std::nullopt;
    if (!node->is_string()) throw ConfigError(key_path(key) + " must be a string");
    return node->as_string()->get();
  }

  // A string or an array of strings.
  std::optional<std::vector<std::string>> strings(std::string_view key) {
    const auto* node = take(key);
    if (node == nullptr) return std::nullopt;
    if (node->is_string()) return std::vector<std::string>{node->as_string()->get()};
    if (!node->is_array()) throw ConfigError(key_path(key) + " must be a string or an array");
    std::vector<std::string> out;
    for (const auto& item : *node->as_array()) {
      if (!item.is_string()) throw ConfigError(key_path(key) + " must contain only strings");
      out.push_back(item.as_string()->get());
    }
    return out;
  }

  void finish() const {
    if (table_ == nullptr) return;
    for (const auto& [key, _] : *table_) {
      if (!used_.count(std::string(key.str()))) {
        throw ConfigError("unknown key '" + key_path(key.str()) + "'");
      }
    }
  }

  const toml::table* raw() const { return table_; }

 private:
  const toml::table* table_;
  std::string path_;
  std::set<std::string> used_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::size_t to_size(std::int64_t v) { return static_cast<std::size_t>(v); }

TaskKind task_named(const std::string& name, const std::string& where) {
  const auto task = parse_task_kind(name);
  if (!task) throw ConfigError(where + ": unknown task '" + name + "'");
  return *task;
}

TaskFractions read_fractions(Section& parent, std::string_view key) {
  TaskFractions out;
  auto section = parent.table(key);
  if (!section) return out;
  for (const auto& [k, _] : *section->raw()) {
    const std::string name(k.str());
    const TaskKind task = task_named(name, section->key_path(name));
    out[task] = *section->number(name);
  }
  return out;
}

void read_endpoint(Section s, PipelineConfig& c, const fs::path& base) {
  if (auto v = s.string("backend")) {
    const auto kind = parse_backend_kind(*v);
    if (!kind) throw ConfigError("endpoint.backend must be \"http\" or \"mock\", got \"" + *v + "\"");
    c.endpoint.backend = *kind;
  }
  if (auto v = s.string("base_url")) c.endpoint.base_url = *v;
  if (auto v = s.string("model")) c.endpoint.model = *v;
  if (auto v = s.string("auth_env")) {
    if (v->empty()) throw ConfigError("endpoint.auth_env must not be empty");
    c.auth_env = *v;
  }
  constexpr std::int64_t kIntMax = std::numeric_limits<int>::max();
  if (auto v = s.integer("timeout_ms", 1, kIntMax)) c.endpoint.timeout_ms = static_cast<int>(*v);
  if (auto v = s.integer("max_retries", 0, 100)) c.endpoint.max_retries = static_cast<int>(*v);
  if (auto v = s.integer("retry_base_ms", 0, kIntMax)) c.endpoint.retry_base_ms = static_cast<int>(*v);
  if (auto v = s.boolean("use_n_parameter")) c.endpoint.use_n_parameter = *v;
  if (auto v = s.string("mock_script")) c.endpoint.mock_script = resolve(base, *v);
  s.finish();
}

void read_sampling(Section s, SamplingParams& p) {
  if (auto v = s.integer("k", 1, 4096)) p.k = static_cast<int>(*v);
  if (auto v = s.number("temperature")) {
    if (*v < 0) throw ConfigError("sampling.temperature must be >= 0");
    p.temperature = *v;
  }
  if (auto v = s.integer("max_tokens", 1, std::numeric_limits<int>::max())) {
    p.max_tokens = static_cast<int>(*v);
  }
  if (auto v = s.strings("stop")) p.stop = *v;
  s.finish();
}

void read_rsft(Section s, PipelineConfig& c, const fs::path& base) {
  if (auto v = s.string("pool")) c.rsft_pool = resolve(base, *v);
  if (auto v = s.integer("n_rollout", 1)) c.rsft.n_rollout = to_size(*v);
  c.rsft.direct_fraction = read_fractions(s, "direct_fraction");
  c.rsft.task_mix = read_fractions(s, "task_mix");
  if (auto v = s.boolean("curriculum")) c.rsft.curriculum = *v;
  if (auto v = s.boolean("drop_intermediate_cot")) c.rsft.drop_intermediate_cot = *v;
  if (auto v = s.integer("iterations", 1, 1000000)) c.rsft.total_iterations = static_cast<int>(*v);
  if (auto v = s.integer("max_in_flight", 1, 4096)) c.rsft.max_in_flight = to_size(*v);
  if (auto t = s.table("trainer")) {
    if (auto v = t->integer("batch_size", 1, std::numeric_limits<int>::max())) {
      c.rsft.trainer.batch_size = static_cast<int>(*v);
    }
    if (auto v = t->number("learning_rate")) c.rsft.trainer.learning_rate = *v;
    if (auto v = t->string("lr_schedule")) c.rsft.trainer.lr_schedule = *v;
    t->finish();
  }
  s.finish();
}

void read_curation(Section s, PipelineConfig& c, const fs::path& base) {
  auto& cur = c.curation;
  if (auto v = s.strings("seeds")) {
    for (const auto& p : *v) cur.seeds.push_back(resolve(base, p));
  }
  if (auto v = s.strings("eval_questions")) {
    for (const auto& p : *v) cur.eval_questions.push_back(resolve(base, p));
  }
  if (auto v = s.integer("ngram", 1, 1000)) cur.ngram = to_size(*v);
  if (auto v = s.integer("pairwise_limit", 1, 1000000)) cur.pairwise_limit = to_size(*v);
  if (auto v = s.strings("verification")) {
    cur.verification.clear();
    for (const auto& m : *v) {
      if (m == "ref_free") {
        cur.verification.push_back(VerificationMode::RefFree);
      } else if (m == "ref_based") {
        cur.verification.push_back(VerificationMode::RefBased);
      } else {
        throw ConfigError("curation.verification: unknown mode '" + m + "'");
      }
    }
  }
  if (auto v = s.strings("corruptions")) {
    cur.corruptions.clear();
    for (const auto& name : *v) {
      const auto kind = parse_corruption_kind(name);
      if (!kind) throw ConfigError("curation.corruptions: unknown kind '" + name + "'");
      cur.corruptions.push_back(*kind);
    }
  }
  if (const auto* node = s.take("rubrics")) {
    const auto* arr = node->as_array();
    if (arr == nullptr) throw ConfigError("curation.rubrics must be an array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* t = arr->get(i)->as_table();
      const std::string where = "curation.rubrics[" + std::to_string(i) + "]";
      if (t == nullptr) throw ConfigError(where + " must be a table");
      Section r(t, where);
      const auto dataset = r.string("dataset").value_or("*");
      const auto task = r.string("task");
      const auto id = r.string("id");
      const auto text = r.string("text");
      if (!task || !id || !text) throw ConfigError(where + " needs task, id and text");
      r.finish();
      cur.rubrics.add(dataset, task_named(*task, where + ".task"), Rubric{*id, *text});
    }
  }
  s.finish();
}

void read_benchmark(Section s, PipelineConfig& c, const fs::path& base) {
  auto& b = c.benchmark;
  if (auto v = s.string("task")) b.task = task_named(*v, "benchmark.task");
  if (auto v = s.string("samples")) b.samples = resolve(base, *v);
  if (auto v = s.string("human_ratings")) b.human_ratings = resolve(base, *v);
  if (auto v = s.boolean("consistent")) b.flags.consistent = *v;
  if (auto v = s.integer("sc_k", 1, 4096)) b.flags.sc_k = static_cast<int>(*v);
  if (auto v = s.boolean("direct")) b.flags.direct = *v;
  if (auto v = s.boolean("drop_failed_requests")) b.flags.drop_failed_requests = *v;
  if (auto v = s.integer("max_in_flight", 1, 4096)) b.max_in_flight = to_size(*v);
  s.finish();
}

void read_rollout(Section s, PipelineConfig& c, const fs::path& base) {
  if (auto v = s.string("inputs")) c.rollout.inputs = resolve(base, *v);
  if (auto v = s.boolean("direct")) c.rollout.direct = *v;
  if (auto v = s.integer("max_in_flight", 1, 4096)) c.rollout.max_in_flight = to_size(*v);
  s.finish();
}

void read_rerank(Section s, PipelineConfig& c, const fs::path& base) {
  if (auto v = s.string("candidates")) c.rerank.candidates = resolve(base, *v);
  if (auto v = s.boolean("direct")) c.rerank.options.direct = *v;
  if (auto v = s.boolean("randomize_positions")) c.rerank.options.randomize_positions = *v;
  if (auto v = s.integer("max_in_flight", 1, 4096)) c.rerank.max_in_flight = to_size(*v);
  s.finish();
}

void read_reward(Section s, PipelineConfig& c, const fs::path& base) {
  auto& r = c.reward;
  if (auto v = s.string("inputs")) r.inputs = resolve(base, *v);
  if (auto v = s.string("grader")) {
    if (*v == "rule") {
      r.grader = GraderKind::Rule;
    } else if (*v == "judge") {
      r.grader = GraderKind::Judge;
    } else {
      throw ConfigError("reward.grader must be \"rule\" or \"judge\"");
    }
  }
  if (auto v = s.number("parse_fail_reward")) r.options.parse_fail_reward = *v;
  if (auto v = s.number("incorrect_reward")) r.options.incorrect_reward = *v;
  if (auto v = s.number("length_penalty")) {
    if (*v < 0) throw ConfigError("reward.length_penalty must be >= 0");
    r.options.length_penalty = *v;
  }
  if (auto v = s.integer("length_cap", 0, 1000000)) r.options.length_cap = to_size(*v);
  s.finish();
}

void require_file(const fs::path& p, const std::string& key) {
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) {
    throw ConfigError(key + ": file not found: " + p.string());
  }
}

}  // namespace

PipelineConfig parse_config(std::string_view toml_text, const fs::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    throw ConfigError("TOML syntax error at line " + std::to_string(e.source().begin.line) + ": " +
                      std::string(e.description()));
  }

  PipelineConfig c;
  c.out_dir = base_dir / "out";
  Section top(&root, "");
  if (auto v = top.integer("seed", 0)) c.seed = static_cast<std::uint64_t>(*v);
  if (auto v = top.string("out_dir")) c.out_dir = resolve(base_dir, *v);
  if (auto s = top.table("endpoint")) read_endpoint(std::move(*s), c, base_dir);
  if (auto s = top.table("sampling")) read_sampling(std::move(*s), c.sampling);
  if (auto s = top.table("rsft")) read_rsft(std::move(*s), c, base_dir);
  if (auto s = top.table("curation")) read_curation(std::move(*s), c, base_dir);
  if (auto s = top.table("benchmark")) read_benchmark(std::move(*s), c, base_dir);
  if (auto s = top.table("rollout")) read_rollout(std::move(*s), c, base_dir);
  if (auto s = top.table("rerank")) read_rerank(std::move(*s), c, base_dir);
  if (auto s = top.table("reward")) read_reward(std::move(*s), c, base_dir);
  top.finish();

  c.rsft.sampling = c.sampling;
  c.rsft.seed = c.seed;
  c.rerank.options.seed = c.seed;
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ConfigError("config file not found: " + path.string());
  const fs::path absolute = fs::absolute(path).lexically_normal();
  PipelineConfig c = parse_config(read_text(absolute), absolute.parent_path());
  c.source = absolute;
  validate_config(c);
  return c;
}

void validate_config(const PipelineConfig& c) {
  validate(c.sampling);
  if (c.endpoint.backend == BackendKind::Mock) {
    if (c.endpoint.mock_script.empty()) {
      throw ConfigError("endpoint.mock_script is required for the mock backend");
    }
    require_file(c.endpoint.mock_script, "endpoint.mock_script");
  } else if (!c.endpoint.base_url.empty()) {
    validate(c.endpoint);
  }
  validate(c.rsft);
  if (!c.rsft_pool.empty()) require_file(c.rsft_pool, "rsft.pool");
  for (const auto& p : c.curation.seeds) require_file(p, "curation.seeds");
  for (const auto& p : c.curation.eval_questions) require_file(p, "curation.eval_questions");
  if (!c.benchmark.samples.empty()) require_file(c.benchmark.samples, "benchmark.samples");
  if (c.benchmark.human_ratings) require_file(*c.benchmark.human_ratings, "benchmark.human_ratings");
  if (c.benchmark.flags.consistent && c.benchmark.task && *c.benchmark.task != TaskKind::Pairwise) {
    throw ConfigError("benchmark.consistent applies to the pairwise task only");
  }
  if (!c.rollout.inputs.empty()) require_file(c.rollout.inputs, "rollout.inputs");
  if (!c.rerank.candidates.empty()) require_file(c.rerank.candidates, "rerank.candidates");
  if (!c.reward.inputs.empty()) require_file(c.reward.inputs, "reward.inputs");
}

EndpointDescriptor resolve_endpoint(const PipelineConfig& config) {
  EndpointDescriptor e = config.endpoint;
  if (config.auth_env) {
    const char* token = std::getenv(config.auth_env->c_str());
    if (token != nullptr && *token != '\0') {
      e.auth_token = std::string(token);
    } else if (e.backend == BackendKind::Http) {
      throw ConfigError("environment variable " + *config.auth_env +
                        " (endpoint.auth_env) is not set");
    }
  }
  validate(e);
  return e;
}

}  // namespace fare
