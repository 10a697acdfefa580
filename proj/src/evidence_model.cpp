#include "ssm/evidence_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "ssm/belief.hpp"

namespace ssm {
namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names,
                           std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

constexpr std::array<std::string_view, 3> kConceptKinds = {
    "archetype", "cause", "contextual-aspect"};
constexpr std::array<std::string_view, 3> kRelationKinds = {
    "is-a", "part-of", "property-of"};

}  // namespace

std::string_view to_string(ConceptKind k) {
  return kConceptKinds[static_cast<std::size_t>(k)];
}
std::string_view to_string(RelationKind k) {
  return kRelationKinds[static_cast<std::size_t>(k)];
}
std::optional<ConceptKind> concept_kind_from_string(std::string_view s) {
  return lookup<ConceptKind>(kConceptKinds, s);
}
std::optional<RelationKind> relation_kind_from_string(std::string_view s) {
  return lookup<RelationKind>(kRelationKinds, s);
}

std::string fold_term(std::string_view raw) {
  const auto first = raw.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = raw.find_last_not_of(" \t\r\n");
  std::string out(raw.substr(first, last - first + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

Glossary::Glossary(std::vector<GlossaryEntry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (fold_term(e.term).empty()) {
      throw std::invalid_argument("glossary entry with empty term");
    }
    if (fold_term(e.definition).empty()) {
      throw std::invalid_argument("glossary term '" + e.term +
                                  "' has no definition");
    }
    auto claim = [&](const std::string& name) {
      const auto key = fold_term(name);
      const auto [it, inserted] = lookup_.emplace(key, i);
      if (!inserted && it->second != i) {
        throw std::invalid_argument("glossary name '" + name +
                                    "' claimed by both '" +
                                    entries_[it->second].term + "' and '" +
                                    e.term + "'");
      }
    };
    claim(e.term);
    for (const auto& s : e.synonyms) claim(s);
  }
}

NormalizedTerm Glossary::normalize(std::string_view raw) const {
  if (auto it = lookup_.find(fold_term(raw)); it != lookup_.end()) {
    return {entries_[it->second].term, true};
  }
  return {std::string(raw), false};
}

NormalizedTerm normalize_term(std::string_view raw, const Glossary& glossary) {
  return glossary.normalize(raw);
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::MultipleCauses: return "multiple causes";
    case ViolationKind::MissingCause: return "missing cause";
    case ViolationKind::DanglingRelation: return "dangling relation";
    case ViolationKind::StructuralCycle: return "cycle in structural relations";
    case ViolationKind::DuplicateEffect: return "duplicate effect";
    case ViolationKind::BeliefOutOfRange: return "belief out of range";
    case ViolationKind::StatisticsMismatch: return "statistics mismatch";
    case ViolationKind::UnglossedTerm: return "unglossed term";
    case ViolationKind::MissingIdentifier: return "missing identifier";
  }
  return "unknown";
}

ValidationReport validate_model(const EvidenceModel& model,
                                const Glossary& glossary) {
  ValidationReport report{model.id, {}};
  auto flag = [&](ViolationKind kind, std::string detail) {
    report.violations.push_back(
        {kind, std::string(to_string(kind)) + ": " + std::move(detail)});
  };

  if (fold_term(model.id).empty()) flag(ViolationKind::MissingIdentifier, "model id");
  if (fold_term(model.study_id).empty()) {
    flag(ViolationKind::MissingIdentifier, "study id");
  }

  std::vector<const ValueConcept*> concepts{&model.cause};
  for (const auto& c : model.context) concepts.push_back(&c);

  if (model.cause.kind != ConceptKind::Cause) {
    flag(ViolationKind::MissingCause,
         "'" + model.cause.name + "' is not marked as cause");
  }
  const auto causes = std::count_if(concepts.begin(), concepts.end(), [](auto* c) {
    return c->kind == ConceptKind::Cause;
  });
  if (causes > 1) {
    flag(ViolationKind::MultipleCauses,
         std::to_string(causes) + " concepts are marked as cause");
  }

  // Concept names resolved through the glossary.
  auto key = [&](const std::string& name) {
    return fold_term(glossary.normalize(name).term);
  };
  std::set<std::string> known;
  for (const auto* c : concepts) {
    known.insert(key(c->name));
    if (!glossary.normalize(c->name).glossed) {
      flag(ViolationKind::UnglossedTerm, "concept '" + c->name + "'");
    }
  }

  std::map<std::string, std::vector<std::string>> structural;
  for (const auto* c : concepts) {
    for (const auto& r : c->relations) {
      if (!known.contains(key(r.target))) {
        flag(ViolationKind::DanglingRelation,
             "'" + c->name + "' " + std::string(to_string(r.kind)) + " '" +
                 r.target + "' names no concept of this model");
        continue;
      }
      if (r.kind == RelationKind::IsA || r.kind == RelationKind::PartOf) {
        structural[key(c->name)].push_back(key(r.target));
      }
    }
  }

  // Three-colour DFS over is-a / part-of edges.
  std::map<std::string, int> colour;
  std::function<bool(const std::string&)> has_cycle = [&](const std::string& n) {
    colour[n] = 1;
    for (const auto& next : structural[n]) {
      if (colour[next] == 1) return true;
      if (colour[next] == 0 && has_cycle(next)) return true;
    }
    colour[n] = 2;
    return false;
  };
  for (const auto& name : known) {
    if (colour[name] == 0 && has_cycle(name)) {
      flag(ViolationKind::StructuralCycle, "reachable from '" + name + "'");
      break;
    }
  }

  std::set<std::string> effect_names;
  for (const auto& e : model.effects) {
    if (!effect_names.insert(key(e.name)).second) {
      flag(ViolationKind::DuplicateEffect, "'" + e.name + "'");
    }
    if (!glossary.normalize(e.name).glossed) {
      flag(ViolationKind::UnglossedTerm, "effect '" + e.name + "'");
    }
    if (!(e.belief >= 0.0 && e.belief <= 1.0)) {
      flag(ViolationKind::BeliefOutOfRange,
           "'" + e.name + "' has belief " + std::to_string(e.belief));
    }
    if (e.sample_count < 0) {
      flag(ViolationKind::StatisticsMismatch,
           "'" + e.name + "' has a negative sample count");
    }
    if (e.stats) {
      if (e.sample_count < 1) {
        flag(ViolationKind::StatisticsMismatch,
             "'" + e.name + "' has statistics but no samples");
      }
      const auto& s = *e.stats;
      bool consistent = !s.improvements.empty() &&
                        s.sample_count == static_cast<int>(s.improvements.size());
      if (consistent) {
        const auto expected = summarize_improvements(s.improvements);
        constexpr double tol = 1e-9;
        consistent = std::abs(expected.mean - s.mean) <= tol &&
                     std::abs(expected.iqr - s.iqr) <= tol &&
                     std::abs(expected.ci95.first - s.ci95.first) <= tol &&
                     std::abs(expected.ci95.second - s.ci95.second) <= tol;
      }
      if (!consistent) {
        flag(ViolationKind::StatisticsMismatch,
             "'" + e.name + "' summary does not match its improvements");
      }
    }
  }
  return report;
}

}  // namespace ssm
