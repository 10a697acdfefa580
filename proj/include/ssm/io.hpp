#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ssm/aggregation.hpp"
#include "ssm/belief.hpp"
#include "ssm/evidence_model.hpp"

// JSON and CSV documents. Field names are the lowerCamelCase domain names;
// see docs/schema.md. Every reader throws ssm::ParseError with the source
// name and, where known, the byte offset or field path.
namespace ssm::io {

using Json = nlohmann::ordered_json;

Json to_json(const HypothesisSet& h);
Json to_json(const ValueConcept& c);
Json to_json(const EffectStatistics& s);
Json to_json(const Effect& e);
Json to_json(const EvidenceModel& m);
Json to_json(const Glossary& g);
Json to_json(const JoinMap& j);
Json to_json(const IntensityThresholds& t);
Json to_json(const AggregationRecord& r);
// generated_at is omitted when empty.
Json to_json(const AggregatedModel& m, std::string_view generated_at = {});

EvidenceModel model_from_json(const Json& j, std::string_view source);
Glossary glossary_from_json(const Json& j, std::string_view source);
JoinMap join_map_from_json(const Json& j, std::string_view source);
IntensityThresholds thresholds_from_json(const Json& j, std::string_view source);
AggregatedModel aggregated_model_from_json(const Json& j, std::string_view source);

// Checklist plus every study's answers.
struct QuestionnaireSet {
  std::vector<Question> questions;
  std::map<std::string, std::map<std::string, Answer>> answers;  // study -> id -> answer

  std::optional<QualityQuestionnaire> for_study(const std::string& study_id) const;
};

QuestionnaireSet questionnaire_from_json(const Json& j, std::string_view source);

// Parses text; source names the document in error messages.
Json parse_json(std::string_view text, std::string_view source);

std::string read_text_file(const std::filesystem::path& path);
// Throws IoError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view content);

EvidenceModel load_model(const std::filesystem::path& path);
Glossary load_glossary(const std::filesystem::path& path);
JoinMap load_join_map(const std::filesystem::path& path);
IntensityThresholds load_thresholds(const std::filesystem::path& path);
QuestionnaireSet load_questionnaire(const std::filesystem::path& path);

// Every *.json file directly inside dir, in file-name order.
std::vector<EvidenceModel> load_corpus(const std::filesystem::path& dir);

// A "baseline,treated" CSV preceded by "# key: value" metadata lines.
// Recognized keys: effect, polarity, units; all keys are kept.
struct MeasurementFile {
  MeasurementSeries series;
  std::map<std::string, std::string> metadata;
};

MeasurementFile parse_measurement_csv(std::string_view text, std::string_view source);
MeasurementFile load_measurement_csv(const std::filesystem::path& path);

}  // namespace ssm::io
