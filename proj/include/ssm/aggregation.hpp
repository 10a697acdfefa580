#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ssm/dst.hpp"
#include "ssm/evidence_model.hpp"

namespace ssm {

struct Join {
  std::string canonical_name;
  std::vector<std::string> members;
};

// Researcher decisions on concepts that do not match by name.
struct JoinMap {
  std::vector<Join> joins;
  std::vector<std::string> drops;
  std::vector<std::string> keep_unmerged;

  // Throws std::invalid_argument when a name appears in more than one of
  // joins / drops / keepUnmerged.
  void check() const;
};

// Resolves raw concept and effect names: glossary first, then joins.
class ConceptResolver {
 public:
  ConceptResolver(const Glossary& glossary, const JoinMap& joins);

  struct Resolved {
    std::string name;
    bool joined = false;
  };
  Resolved resolve(std::string_view raw) const;
  bool dropped(std::string_view raw) const;
  bool kept_unmerged(std::string_view raw) const;

 private:
  const Glossary& glossary_;
  std::map<std::string, std::string> join_of_;  // folded member -> canonical
  std::set<std::string> drops_;
  std::set<std::string> keep_;
};

enum class Compatibility { Compatible, CompatibleAfterJoin, Incompatible };

std::string_view to_string(Compatibility c);

struct CompatibilityReport {
  std::pair<std::string, std::string> pair;
  Compatibility verdict = Compatibility::Compatible;
  std::vector<std::string> matched_concepts;
  std::vector<std::string> joined_concepts;
  std::vector<std::string> unmatched_concepts;
};

CompatibilityReport check_compatibility(const EvidenceModel& a,
                                        const EvidenceModel& b,
                                        const Glossary& glossary,
                                        const JoinMap& joins);

struct AggregationRecord {
  std::string effect_name;
  std::vector<std::string> study_ids;
  int model_count = 0;
  HypothesisSet intensity{Intensity::IF};
  double belief = 0.0;
  double conflict = 0.0;
  double difference = 0.0;
};

struct PoolInput {
  Effect effect;
  std::string model_id;
  std::string study_id;
};

// Combines every input as a simple support (focus = hypothesis, mass =
// belief). Throws dst::TotalConflictError naming the contributing models.
AggregationRecord pool_effect(const std::string& effect_name,
                              std::span<const PoolInput> inputs);

struct AggregatedConcept {
  ValueConcept value_concept;
  std::vector<std::string> source_models;
  // Several models contributed, or a join folded differently named concepts.
  bool merged = false;
  // Listed on the researcher's keep-unmerged list.
  bool unmerged = false;
};

struct AggregatedModel {
  ValueConcept cause;
  std::vector<AggregatedConcept> context;
  std::vector<AggregationRecord> records;
  std::vector<std::string> inputs;
  std::string group;  // empty unless produced by a group-by run
};

// Thrown when two inputs have causes that do not match.
class IncompatibleModelsError : public DomainError {
 public:
  IncompatibleModelsError(CompatibilityReport report);
  const CompatibilityReport& report() const { return report_; }

 private:
  CompatibilityReport report_;
};

AggregatedModel aggregate(std::span<const EvidenceModel> models,
                          const Glossary& glossary, const JoinMap& joins);

// Splits the models by metadata[key] (missing key -> "unspecified") and
// aggregates each group. Groups come back in key order.
std::vector<AggregatedModel> aggregate_by(std::span<const EvidenceModel> models,
                                          const std::string& key,
                                          const Glossary& glossary,
                                          const JoinMap& joins);

}  // namespace ssm
