#include "ssm/aggregation.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssm {
namespace {

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<const ValueConcept*> all_concepts(const EvidenceModel& m) {
  std::vector<const ValueConcept*> out{&m.cause};
  for (const auto& c : m.context) out.push_back(&c);
  return out;
}

}  // namespace

void JoinMap::check() const {
  std::map<std::string, std::string> seen;
  auto claim = [&](const std::string& name, const std::string& where) {
    const auto [it, inserted] = seen.emplace(fold_term(name), where);
    if (!inserted && it->second != where) {
      throw std::invalid_argument("join map: '" + name + "' appears in both " +
                                  it->second + " and " + where);
    }
  };
  for (const auto& j : joins) {
    for (const auto& m : j.members) claim(m, "joins");
  }
  for (const auto& d : drops) claim(d, "drops");
  for (const auto& k : keep_unmerged) claim(k, "keepUnmerged");
}

ConceptResolver::ConceptResolver(const Glossary& glossary, const JoinMap& joins)
    : glossary_(glossary) {
  joins.check();
  for (const auto& j : joins.joins) {
    for (const auto& m : j.members) {
      join_of_[fold_term(m)] = j.canonical_name;
      join_of_[fold_term(glossary_.normalize(m).term)] = j.canonical_name;
    }
  }
  for (const auto& d : joins.drops) {
    drops_.insert(fold_term(d));
    drops_.insert(fold_term(glossary_.normalize(d).term));
  }
  for (const auto& k : joins.keep_unmerged) {
    keep_.insert(fold_term(k));
    keep_.insert(fold_term(glossary_.normalize(k).term));
  }
}

ConceptResolver::Resolved ConceptResolver::resolve(std::string_view raw) const {
  auto normalized = glossary_.normalize(raw).term;
  for (const auto& key : {fold_term(normalized), fold_term(raw)}) {
    if (auto it = join_of_.find(key); it != join_of_.end()) {
      return {it->second, fold_term(it->second) != fold_term(normalized)};
    }
  }
  return {std::move(normalized), false};
}

bool ConceptResolver::dropped(std::string_view raw) const {
  return drops_.contains(fold_term(raw)) ||
         drops_.contains(fold_term(glossary_.normalize(raw).term)) ||
         drops_.contains(fold_term(resolve(raw).name));
}

bool ConceptResolver::kept_unmerged(std::string_view raw) const {
  return keep_.contains(fold_term(raw)) ||
         keep_.contains(fold_term(glossary_.normalize(raw).term)) ||
         keep_.contains(fold_term(resolve(raw).name));
}

std::string_view to_string(Compatibility c) {
  switch (c) {
    case Compatibility::Compatible: return "compatible";
    case Compatibility::CompatibleAfterJoin: return "compatible-after-join";
    case Compatibility::Incompatible: return "incompatible";
  }
  return "unknown";
}

CompatibilityReport check_compatibility(const EvidenceModel& a,
                                        const EvidenceModel& b,
                                        const Glossary& glossary,
                                        const JoinMap& joins) {
  const ConceptResolver resolver(glossary, joins);
  CompatibilityReport report;
  report.pair = {a.id, b.id};

  // canonical -> glossary-normalized names seen on each side
  using Side = std::map<std::string, std::set<std::string>>;
  auto collect = [&](const EvidenceModel& m) {
    Side side;
    for (const auto* c : all_concepts(m)) {
      if (c != &m.cause && resolver.dropped(c->name)) continue;
      side[resolver.resolve(c->name).name].insert(
          fold_term(glossary.normalize(c->name).term));
    }
    return side;
  };
  const Side left = collect(a), right = collect(b);

  for (const auto& [name, raw] : left) {
    const auto it = right.find(name);
    if (it == right.end()) {
      report.unmatched_concepts.push_back(name);
      continue;
    }
    const bool shared = std::any_of(raw.begin(), raw.end(), [&](const auto& r) {
      return it->second.contains(r);
    });
    (shared ? report.matched_concepts : report.joined_concepts).push_back(name);
  }
  for (const auto& [name, raw] : right) {
    if (!left.contains(name)) report.unmatched_concepts.push_back(name);
  }
  sort_unique(report.unmatched_concepts);

  const auto cause_a = resolver.resolve(a.cause.name).name;
  const auto cause_b = resolver.resolve(b.cause.name).name;
  if (fold_term(cause_a) != fold_term(cause_b)) {
    report.verdict = Compatibility::Incompatible;
  } else if (!report.joined_concepts.empty()) {
    report.verdict = Compatibility::CompatibleAfterJoin;
  } else {
    report.verdict = Compatibility::Compatible;
  }
  return report;
}

AggregationRecord pool_effect(const std::string& effect_name,
                              std::span<const PoolInput> inputs) {
  if (inputs.empty()) {
    throw std::invalid_argument("pool_effect: no evidence for '" + effect_name + "'");
  }
  std::vector<dst::MassFunction> masses;
  masses.reserve(inputs.size());
  AggregationRecord record;
  record.effect_name = effect_name;
  record.model_count = static_cast<int>(inputs.size());
  double max_input = 0.0;
  for (const auto& in : inputs) {
    masses.push_back(dst::from_simple_support({in.effect.hypothesis, in.effect.belief}));
    max_input = std::max(max_input, in.effect.belief);
    record.study_ids.push_back(in.study_id);
  }
  sort_unique(record.study_ids);

  dst::CombinationResult combined;
  try {
    combined = dst::combine_all(masses);
  } catch (const dst::TotalConflictError&) {
    std::string ids;
    for (const auto& in : inputs) ids += (ids.empty() ? "" : ", ") + in.model_id;
    throw dst::TotalConflictError("total conflict while pooling '" + effect_name +
                                  "' from models: " + ids);
  }
  const auto decision = dst::decide_intensity(combined.combined);
  record.intensity = decision.intensity;
  record.belief = decision.belief;
  record.conflict = combined.conflict;
  record.difference = record.belief - max_input;
  return record;
}

namespace {

std::string describe(const CompatibilityReport& r) {
  return "models '" + r.pair.first + "' and '" + r.pair.second +
         "' are incompatible: causes differ";
}

}  // namespace

IncompatibleModelsError::IncompatibleModelsError(CompatibilityReport report)
    : DomainError(describe(report)), report_(std::move(report)) {}

AggregatedModel aggregate(std::span<const EvidenceModel> models,
                          const Glossary& glossary, const JoinMap& joins) {
  if (models.empty()) throw DomainError("no models to aggregate");
  const ConceptResolver resolver(glossary, joins);

  std::vector<const EvidenceModel*> ordered;
  for (const auto& m : models) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(),
            [](auto* x, auto* y) { return x->id < y->id; });

  const auto& first = *ordered.front();
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    auto report = check_compatibility(first, *ordered[i], glossary, joins);
    if (report.verdict == Compatibility::Incompatible) {
      throw IncompatibleModelsError(std::move(report));
    }
  }

  AggregatedModel out;
  out.cause = first.cause;
  out.cause.name = resolver.resolve(first.cause.name).name;

  std::map<std::string, std::vector<PoolInput>> groups;
  std::map<std::string, std::string> display;  // folded -> canonical spelling
  std::map<std::string, AggregatedConcept> context;
  std::map<std::string, bool> context_joined;
  for (const auto* m : ordered) {
    out.inputs.push_back(m->id);
    for (const auto& e : m->effects) {
      if (resolver.dropped(e.name)) continue;
      const auto name = resolver.resolve(e.name).name;
      display.emplace(fold_term(name), name);
      groups[fold_term(name)].push_back({e, m->id, m->study_id});
    }
    for (const auto& c : m->context) {
      if (resolver.dropped(c.name)) continue;
      const auto resolved = resolver.resolve(c.name);
      auto& entry = context[fold_term(resolved.name)];
      if (entry.source_models.empty()) {
        entry.value_concept = ValueConcept{resolved.name, c.kind, {}};
      }
      for (const auto& r : c.relations) {
        Relation rel{r.kind, resolver.resolve(r.target).name};
        if (std::find(entry.value_concept.relations.begin(), entry.value_concept.relations.end(),
                      rel) == entry.value_concept.relations.end()) {
          entry.value_concept.relations.push_back(std::move(rel));
        }
      }
      entry.source_models.push_back(m->id);
      context_joined[fold_term(resolved.name)] |= resolved.joined;
      entry.unmerged = resolver.kept_unmerged(c.name);
    }
  }

  for (auto& [key, inputs] : groups) {
    out.records.push_back(pool_effect(display[key], inputs));
  }
  for (auto& [key, entry] : context) {
    sort_unique(entry.source_models);
    entry.merged = !entry.unmerged &&
                   (entry.source_models.size() > 1 || context_joined[key]);
    out.context.push_back(std::move(entry));
  }
  return out;
}

std::vector<AggregatedModel> aggregate_by(std::span<const EvidenceModel> models,
                                          const std::string& key,
                                          const Glossary& glossary,
                                          const JoinMap& joins) {
  if (models.empty()) throw DomainError("no models to aggregate");
  std::map<std::string, std::vector<EvidenceModel>> groups;
  for (const auto& m : models) {
    const auto it = m.metadata.find(key);
    groups[it == m.metadata.end() ? "unspecified" : it->second].push_back(m);
  }
  std::vector<AggregatedModel> out;
  for (auto& [value, members] : groups) {
    auto agg = aggregate(members, glossary, joins);
    agg.group = value;
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace ssm
