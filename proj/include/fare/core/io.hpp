#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "fare/core/types.hpp"

namespace fare {

using ordered_json = nlohmann::ordered_json;

// LabeledSample JSONL line:
//   {"id", "task", "variant", "rubric_id", "rubric", "question",
//    "responses": {...}, "gold", "provenance", "domain", "source"}
// responses by task: pairwise {"a","b"}; step_level {"steps": [..]};
// ref_based_verification {"candidate","reference"}; ref_free_verification and
// single_rating {"response"}. gold: "A"/"B", step index, "correct"/"incorrect",
// or rating. On read, rubric/rubric_id/variant fall back to the task defaults.

ordered_json judgment_to_json(const Judgment& judgment);
Judgment judgment_from_json(const nlohmann::json& value, TaskKind task);

ordered_json messages_to_json(const ChatMessages& messages);
ChatMessages messages_from_json(const nlohmann::json& value);

ordered_json sample_to_json(const LabeledSample& sample);
/// Throws DataError on schema violations; the sample is validated.
LabeledSample sample_from_json(const nlohmann::json& value);

/// One parsed JSON value per non-blank line. Errors carry "path:line".
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

std::vector<LabeledSample> read_samples(const std::filesystem::path& path);
void write_samples(const std::filesystem::path& path, const std::vector<LabeledSample>& samples);

/// Compact single-line dump; invalid UTF-8 is replaced rather than thrown.
std::string dump_line(const ordered_json& value);

std::string read_text(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it into place. On failure
/// the temp file is removed and DataError is thrown.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace fare
