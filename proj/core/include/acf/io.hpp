#pragma once

// JSON file formats. Every document carries "format_version"; readers
// throw SchemaViolation on missing or mistyped fields.

#include "acf/evaluation.hpp"
#include "acf/pipeline.hpp"
#include "acf/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace acf::io {

using nlohmann::json;

json to_json(const Acf& acf);
Acf acf_from_json(const json& j);

json to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const json& j);

json to_json(const Scene& scene);
Scene scene_from_json(const json& j);

json to_json(const PredictionBundle& bundle);
PredictionBundle bundle_from_json(const json& j);

json to_json(const SceneEstimates& estimates);
SceneEstimates estimates_from_json(const json& j);

json to_json(const SceneAssociation& association);
SceneAssociation association_from_json(const json& j);

json to_json(const ManipulationPlan& plan);

json to_json(const EvalReport& report);

json to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const json& j);

/// Throws SchemaViolation unless j["format_version"] == kFormatVersion.
void check_format_version(const json& j);

/// Reads and parses a file; throws std::runtime_error if it cannot be
/// opened and SchemaViolation if it is not valid JSON.
json read_json(const std::filesystem::path& path);

/// Writes via a temporary file renamed into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const json& j);

}  // namespace acf::io
