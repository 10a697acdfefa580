#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssm/intensity.hpp"

namespace ssm {

enum class ConceptKind { Archetype, Cause, ContextualAspect };
enum class RelationKind { IsA, PartOf, PropertyOf };

std::string_view to_string(ConceptKind k);
std::string_view to_string(RelationKind k);
std::optional<ConceptKind> concept_kind_from_string(std::string_view s);
std::optional<RelationKind> relation_kind_from_string(std::string_view s);

struct Relation {
  RelationKind kind;
  std::string target;

  friend bool operator==(const Relation&, const Relation&) = default;
};

// A fixed value of an independent variable: archetype, cause or context.
struct ValueConcept {
  std::string name;
  ConceptKind kind = ConceptKind::ContextualAspect;
  std::vector<Relation> relations;

  friend bool operator==(const ValueConcept&, const ValueConcept&) = default;
};

// Polarity-adjusted relative improvements of one effect and their summary.
// Improvements are fractions: +0.10 is a 10% improvement.
struct EffectStatistics {
  std::vector<double> improvements;
  double mean = 0.0;
  double iqr = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  int sample_count = 0;

  friend bool operator==(const EffectStatistics&, const EffectStatistics&) = default;
};

// A dependent variable influenced by the cause.
struct Effect {
  std::string name;
  HypothesisSet hypothesis{Intensity::IF};
  double belief = 0.0;
  int sample_count = 0;
  std::optional<EffectStatistics> stats;

  friend bool operator==(const Effect&, const Effect&) = default;
};

// One theoretical structure extracted from a primary study.
struct EvidenceModel {
  std::string id;
  std::string study_id;
  ValueConcept cause;
  std::vector<ValueConcept> context;
  std::vector<Effect> effects;
  std::string provenance;
  // Study-level facts that do not feed the structure itself (study type,
  // year, quantization method, ...). Ordered for stable serialization.
  std::map<std::string, std::string> metadata;

  friend bool operator==(const EvidenceModel&, const EvidenceModel&) = default;
};

struct GlossaryEntry {
  std::string term;
  std::string definition;
  std::vector<std::string> synonyms;

  friend bool operator==(const GlossaryEntry&, const GlossaryEntry&) = default;
};

struct NormalizedTerm {
  std::string term;
  bool glossed = false;
};

// Canonical vocabulary shared by every evidence model. Lookups ignore case
// and surrounding whitespace; definitions are never matched on.
class Glossary {
 public:
  Glossary() = default;
  // Throws std::invalid_argument when a definition is empty or a term or
  // synonym is claimed by two entries.
  explicit Glossary(std::vector<GlossaryEntry> entries);

  const std::vector<GlossaryEntry>& entries() const { return entries_; }
  NormalizedTerm normalize(std::string_view raw) const;
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<GlossaryEntry> entries_;
  std::map<std::string, std::size_t> lookup_;  // folded key -> entry index
};

NormalizedTerm normalize_term(std::string_view raw, const Glossary& glossary);

// Lower-cased, whitespace-trimmed key used for every name comparison.
std::string fold_term(std::string_view raw);

enum class ViolationKind {
  MultipleCauses,
  MissingCause,
  DanglingRelation,
  StructuralCycle,
  DuplicateEffect,
  BeliefOutOfRange,
  StatisticsMismatch,
  UnglossedTerm,
  MissingIdentifier,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::string model_id;
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
};

ValidationReport validate_model(const EvidenceModel& model,
                                const Glossary& glossary);

}  // namespace ssm
