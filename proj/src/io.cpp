#include "ssm/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ssm/error.hpp"

namespace ssm::io {
namespace {

namespace fs = std::filesystem;

// Field access with a readable location for error messages.
class Reader {
 public:
  Reader(const Json& j, std::string source, std::string path = "")
      : j_(j), source_(std::move(source)), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_ + ": " + (path_.empty() ? "<root>" : path_) + ": " + what);
  }

  bool has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }

  const Json& at(const char* key) const {
    if (!has(key)) fail(std::string("missing field '") + key + "'");
    return j_[key];
  }

  std::string child(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string child(const char* key, std::size_t i) const {
    return child(key) + "[" + std::to_string(i) + "]";
  }

  std::string string(const char* key) const {
    const auto& v = at(key);
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string string_or(const char* key, std::string fallback) const {
    return has(key) ? string(key) : fallback;
  }
  double number(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number()) fail(std::string("field '") + key + "' must be a number");
    return v.get<double>();
  }
  int integer(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) {
      fail(std::string("field '") + key + "' must be an integer");
    }
    return v.get<int>();
  }
  bool boolean_or(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) fail(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
  }
  const Json& array(const char* key) const {
    const auto& v = at(key);
    if (!v.is_array()) fail(std::string("field '") + key + "' must be an array");
    return v;
  }
  std::vector<std::string> strings(const char* key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const auto& arr = array(key);
    for (const auto& v : arr) {
      if (!v.is_string()) fail(std::string("field '") + key + "' must hold strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }
  std::vector<double> numbers(const char* key) const {
    std::vector<double> out;
    for (const auto& v : array(key)) {
      if (!v.is_number()) fail(std::string("field '") + key + "' must hold numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  Reader sub(const Json& j, std::string path) const { return Reader(j, source_, std::move(path)); }
  const std::string& source() const { return source_; }

 private:
  const Json& j_;
  std::string source_;
  std::string path_;
};

HypothesisSet hypothesis_field(const Reader& r, const char* key) {
  try {
    return hypothesis_from_notation(r.string(key));
  } catch (const ParseError& e) {
    r.fail(e.what());
  }
}

ValueConcept concept_from(const Reader& r) {
  ValueConcept c;
  c.name = r.string("name");
  const auto kind = r.string("kind");
  if (auto k = concept_kind_from_string(kind)) {
    c.kind = *k;
  } else {
    r.fail("unknown concept kind '" + kind + "'");
  }
  if (r.has("relations")) {
    const auto& rels = r.array("relations");
    for (std::size_t i = 0; i < rels.size(); ++i) {
      const auto rr = r.sub(rels[i], r.child("relations", i));
      const auto rk = rr.string("kind");
      const auto parsed = relation_kind_from_string(rk);
      if (!parsed) rr.fail("unknown relation kind '" + rk + "'");
      c.relations.push_back({*parsed, rr.string("target")});
    }
  }
  return c;
}

EffectStatistics stats_from(const Reader& r) {
  EffectStatistics s;
  s.improvements = r.numbers("improvements");
  s.mean = r.number("mean");
  s.iqr = r.number("iqr");
  const auto ci = r.numbers("ci95");
  if (ci.size() != 2) r.fail("ci95 must be [low, high]");
  s.ci95 = {ci[0], ci[1]};
  s.sample_count = r.integer("sampleCount");
  if (s.iqr < 0.0) r.fail("iqr must be non-negative");
  return s;
}

Effect effect_from(const Reader& r) {
  Effect e;
  e.name = r.string("name");
  e.hypothesis = hypothesis_field(r, "hypothesis");
  e.belief = r.number("belief");
  e.sample_count = r.integer("sampleCount");
  if (r.has("stats")) e.stats = stats_from(r.sub(r.at("stats"), r.child("stats")));
  return e;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

Json to_json(const HypothesisSet& h) { return h.notation(); }

Json to_json(const ValueConcept& c) {
  Json j;
  j["name"] = c.name;
  j["kind"] = to_string(c.kind);
  Json rels = Json::array();
  for (const auto& r : c.relations) {
    rels.push_back({{"kind", to_string(r.kind)}, {"target", r.target}});
  }
  j["relations"] = std::move(rels);
  return j;
}

Json to_json(const EffectStatistics& s) {
  Json j;
  j["improvements"] = s.improvements;
  j["mean"] = s.mean;
  j["iqr"] = s.iqr;
  j["ci95"] = {s.ci95.first, s.ci95.second};
  j["sampleCount"] = s.sample_count;
  return j;
}

Json to_json(const Effect& e) {
  Json j;
  j["name"] = e.name;
  j["hypothesis"] = to_json(e.hypothesis);
  j["belief"] = e.belief;
  j["sampleCount"] = e.sample_count;
  if (e.stats) j["stats"] = to_json(*e.stats);
  return j;
}

Json to_json(const EvidenceModel& m) {
  Json j;
  j["id"] = m.id;
  j["studyId"] = m.study_id;
  j["provenance"] = m.provenance;
  j["cause"] = to_json(m.cause);
  j["context"] = Json::array();
  for (const auto& c : m.context) j["context"].push_back(to_json(c));
  j["effects"] = Json::array();
  for (const auto& e : m.effects) j["effects"].push_back(to_json(e));
  j["metadata"] = Json::object();
  for (const auto& [k, v] : m.metadata) j["metadata"][k] = v;
  return j;
}

Json to_json(const Glossary& g) {
  Json entries = Json::array();
  for (const auto& e : g.entries()) {
    entries.push_back(
        {{"term", e.term}, {"definition", e.definition}, {"synonyms", e.synonyms}});
  }
  return {{"entries", std::move(entries)}};
}

Json to_json(const JoinMap& jm) {
  Json joins = Json::array();
  for (const auto& j : jm.joins) {
    joins.push_back({{"canonicalName", j.canonical_name}, {"members", j.members}});
  }
  return {{"joins", std::move(joins)},
          {"drops", jm.drops},
          {"keepUnmerged", jm.keep_unmerged}};
}

Json to_json(const IntensityThresholds& t) {
  return {{"tIndifferent", t.indifferent}, {"tWeak", t.weak}, {"tModerate", t.moderate}};
}

Json to_json(const AggregationRecord& r) {
  Json j;
  j["effectName"] = r.effect_name;
  j["studyIds"] = r.study_ids;
  j["modelCount"] = r.model_count;
  j["intensity"] = to_json(r.intensity);
  j["belief"] = r.belief;
  j["conflict"] = r.conflict;
  j["difference"] = r.difference;
  return j;
}

Json to_json(const AggregatedModel& m, std::string_view generated_at) {
  Json j;
  if (!m.group.empty()) j["group"] = m.group;
  j["cause"] = to_json(m.cause);
  j["context"] = Json::array();
  for (const auto& c : m.context) {
    auto entry = to_json(c.value_concept);
    entry["sourceModels"] = c.source_models;
    entry["merged"] = c.merged;
    entry["unmerged"] = c.unmerged;
    j["context"].push_back(std::move(entry));
  }
  j["records"] = Json::array();
  for (const auto& r : m.records) j["records"].push_back(to_json(r));
  j["inputs"] = m.inputs;
  if (!generated_at.empty()) j["generatedAt"] = generated_at;
  return j;
}

EvidenceModel model_from_json(const Json& j, std::string_view source) {
  const Reader r(j, std::string(source));
  EvidenceModel m;
  m.id = r.string("id");
  m.study_id = r.string("studyId");
  m.provenance = r.string_or("provenance", "");
  m.cause = concept_from(r.sub(r.at("cause"), "cause"));
  if (r.has("context")) {
    const auto& ctx = r.array("context");
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      m.context.push_back(concept_from(r.sub(ctx[i], r.child("context", i))));
    }
  }
  const auto& effects = r.array("effects");
  for (std::size_t i = 0; i < effects.size(); ++i) {
    m.effects.push_back(effect_from(r.sub(effects[i], r.child("effects", i))));
  }
  if (r.has("metadata")) {
    const auto& meta = r.at("metadata");
    if (!meta.is_object()) r.fail("metadata must be an object");
    for (const auto& [k, v] : meta.items()) {
      m.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return m;
}

Glossary glossary_from_json(const Json& j, std::string_view source) {
  const Reader r(j, std::string(source));
  std::vector<GlossaryEntry> entries;
  const auto& arr = r.array("entries");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto e = r.sub(arr[i], r.child("entries", i));
    entries.push_back({e.string("term"), e.string("definition"), e.strings("synonyms")});
  }
  try {
    return Glossary(std::move(entries));
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
}

JoinMap join_map_from_json(const Json& j, std::string_view source) {
  const Reader r(j, std::string(source));
  JoinMap jm;
  if (r.has("joins")) {
    const auto& arr = r.array("joins");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto e = r.sub(arr[i], r.child("joins", i));
      jm.joins.push_back({e.string("canonicalName"), e.strings("members")});
    }
  }
  jm.drops = r.strings("drops");
  jm.keep_unmerged = r.strings("keepUnmerged");
  try {
    jm.check();
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  return jm;
}

IntensityThresholds thresholds_from_json(const Json& j, std::string_view source) {
  const Reader r(j, std::string(source));
  IntensityThresholds t;
  if (r.has("tIndifferent")) t.indifferent = r.number("tIndifferent");
  if (r.has("tWeak")) t.weak = r.number("tWeak");
  if (r.has("tModerate")) t.moderate = r.number("tModerate");
  try {
    t.check();
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  return t;
}

AggregatedModel aggregated_model_from_json(const Json& j, std::string_view source) {
  const Reader r(j, std::string(source));
  AggregatedModel m;
  m.group = r.string_or("group", "");
  m.cause = concept_from(r.sub(r.at("cause"), "cause"));
  const auto& ctx = r.array("context");
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto c = r.sub(ctx[i], r.child("context", i));
    AggregatedConcept ac;
    ac.value_concept = concept_from(c);
    ac.source_models = c.strings("sourceModels");
    ac.merged = c.boolean_or("merged", false);
    ac.unmerged = c.boolean_or("unmerged", false);
    m.context.push_back(std::move(ac));
  }
  const auto& recs = r.array("records");
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto e = r.sub(recs[i], r.child("records", i));
    AggregationRecord rec;
    rec.effect_name = e.string("effectName");
    rec.study_ids = e.strings("studyIds");
    rec.model_count = e.integer("modelCount");
    rec.intensity = hypothesis_field(e, "intensity");
    rec.belief = e.number("belief");
    rec.conflict = e.number("conflict");
    rec.difference = e.number("difference");
    m.records.push_back(std::move(rec));
  }
  m.inputs = r.strings("inputs");
  return m;
}

std::optional<QualityQuestionnaire> QuestionnaireSet::for_study(
    const std::string& study_id) const {
  const auto it = answers.find(study_id);
  if (it == answers.end()) return std::nullopt;
  return QualityQuestionnaire{questions, it->second};
}

QuestionnaireSet questionnaire_from_json(const Json& j, std::string_view source) {
  const Reader r(j, std::string(source));
  QuestionnaireSet q;
  const auto& qs = r.array("questions");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const auto e = r.sub(qs[i], r.child("questions", i));
    Question question{e.string("id"), e.string_or("text", ""),
                      e.has("weight") ? e.number("weight") : 1.0};
    if (!(question.weight > 0.0)) e.fail("weight must be positive");
    q.questions.push_back(std::move(question));
  }
  if (r.has("answers")) {
    const auto& all = r.at("answers");
    if (!all.is_object()) r.fail("answers must be an object keyed by study id");
    for (const auto& [study, answers] : all.items()) {
      const auto s = r.sub(answers, "answers." + study);
      auto& out = q.answers[study];
      for (const auto& [id, value] : answers.items()) {
        if (!value.is_string()) s.fail("answer to '" + id + "' must be a string");
        const auto parsed = answer_from_string(value.get<std::string>());
        if (!parsed) s.fail("answer to '" + id + "' must be yes, no or not-applicable");
        const bool known = std::any_of(q.questions.begin(), q.questions.end(),
                                       [&](const Question& x) { return x.id == id; });
        if (!known) s.fail("answer to unknown question '" + id + "'");
        out[id] = *parsed;
      }
    }
  }
  return q;
}

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(source) + ": byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

namespace {

template <typename F>
auto load(const fs::path& path, F&& convert) {
  const auto source = path.string();
  return convert(parse_json(read_text_file(path), source), source);
}

}  // namespace

EvidenceModel load_model(const fs::path& p) { return load(p, model_from_json); }
Glossary load_glossary(const fs::path& p) { return load(p, glossary_from_json); }
JoinMap load_join_map(const fs::path& p) { return load(p, join_map_from_json); }
IntensityThresholds load_thresholds(const fs::path& p) {
  return load(p, thresholds_from_json);
}
QuestionnaireSet load_questionnaire(const fs::path& p) {
  return load(p, questionnaire_from_json);
}

std::vector<EvidenceModel> load_corpus(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw ParseError(dir.string() + ": not a readable directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<EvidenceModel> models;
  models.reserve(files.size());
  for (const auto& f : files) models.push_back(load_model(f));
  return models;
}

MeasurementFile parse_measurement_csv(std::string_view text, std::string_view source) {
  MeasurementFile out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  auto fail = [&](const std::string& what) {
    throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
  };
  auto number = [&](std::string_view field) {
    const auto t = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      fail("not a number: '" + t + "'");
    }
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (header_seen) continue;
      const auto colon = t.find(':');
      if (colon == std::string::npos) continue;
      out.metadata[trim(std::string_view(t).substr(1, colon - 1))] =
          trim(std::string_view(t).substr(colon + 1));
      continue;
    }
    if (!header_seen) {
      std::string header = t;
      header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
      if (header != "baseline,treated") fail("expected header 'baseline,treated'");
      header_seen = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      fail("expected two columns");
    }
    out.series.pairs.emplace_back(number(std::string_view(t).substr(0, comma)),
                                  number(std::string_view(t).substr(comma + 1)));
  }
  if (!header_seen) fail("missing header 'baseline,treated'");
  if (out.series.pairs.empty()) fail("no measurement rows");

  out.series.effect_name = out.metadata.count("effect") ? out.metadata["effect"] : "";
  out.series.units = out.metadata.count("units") ? out.metadata["units"] : "";
  if (const auto it = out.metadata.find("polarity"); it != out.metadata.end()) {
    const auto p = polarity_from_string(it->second);
    if (!p) {
      throw ParseError(std::string(source) + ": unknown polarity '" + it->second + "'");
    }
    out.series.polarity = *p;
  }
  return out;
}

MeasurementFile load_measurement_csv(const fs::path& path) {
  return parse_measurement_csv(read_text_file(path), path.string());
}

}  // namespace ssm::io
