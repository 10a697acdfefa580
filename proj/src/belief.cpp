#include "ssm/belief.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ssm/error.hpp"

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

constexpr std::array<std::string_view, 2> kPolarities = {"higher-is-better",
                                                         "lower-is-better"};
constexpr std::array<std::string_view, 4> kStudyTypes = {
    "unsystematic", "observational", "quasi-experiment",
    "randomized-controlled-trial"};
constexpr std::array<std::string_view, 3> kAnswers = {"yes", "no",
                                                      "not-applicable"};

}  // namespace

std::string_view to_string(Polarity p) { return kPolarities[static_cast<int>(p)]; }
std::optional<Polarity> polarity_from_string(std::string_view s) {
  return lookup<Polarity>(kPolarities, s);
}
std::string_view to_string(StudyType t) { return kStudyTypes[static_cast<int>(t)]; }
std::optional<StudyType> study_type_from_string(std::string_view s) {
  return lookup<StudyType>(kStudyTypes, s);
}
std::string_view to_string(Answer a) { return kAnswers[static_cast<int>(a)]; }
std::optional<Answer> answer_from_string(std::string_view s) {
  return lookup<Answer>(kAnswers, s);
}

double quantile_r7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

EffectStatistics summarize_improvements(std::vector<double> improvements) {
  if (improvements.empty()) {
    throw std::invalid_argument("no improvements to summarize");
  }
  EffectStatistics s;
  const auto n = static_cast<double>(improvements.size());
  s.mean = std::accumulate(improvements.begin(), improvements.end(), 0.0) / n;

  std::vector<double> sorted = improvements;
  std::sort(sorted.begin(), sorted.end());
  s.iqr = quantile_r7(sorted, 0.75) - quantile_r7(sorted, 0.25);

  if (improvements.size() == 1) {
    s.ci95 = {s.mean, s.mean};
  } else {
    double ss = 0.0;
    for (double v : improvements) ss += (v - s.mean) * (v - s.mean);
    const double half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    s.ci95 = {s.mean - half, s.mean + half};
  }
  s.sample_count = static_cast<int>(improvements.size());
  s.improvements = std::move(improvements);
  return s;
}

EffectStatistics relative_improvements(const MeasurementSeries& series) {
  if (series.pairs.empty()) {
    throw DomainError("measurement series '" + series.effect_name +
                      "' has no pairs");
  }
  std::vector<double> out;
  out.reserve(series.pairs.size());
  for (std::size_t i = 0; i < series.pairs.size(); ++i) {
    const auto [baseline, treated] = series.pairs[i];
    if (baseline == 0.0) {
      throw DomainError("measurement series '" + series.effect_name +
                        "': pair " + std::to_string(i + 1) +
                        " has a zero baseline");
    }
    const double delta = series.polarity == Polarity::HigherIsBetter
                             ? treated - baseline
                             : baseline - treated;
    out.push_back(delta / std::abs(baseline));
  }
  return summarize_improvements(std::move(out));
}

void IntensityThresholds::check() const {
  if (!(indifferent > 0.0 && indifferent < weak && weak < moderate)) {
    throw std::invalid_argument(
        "intensity thresholds must satisfy 0 < indifferent < weak < moderate");
  }
}

Intensity intensity_band(double improvement, const IntensityThresholds& t) {
  const double mag = std::abs(improvement);
  int step = 0;  // distance from IF
  if (mag >= t.moderate) {
    step = 3;
  } else if (mag >= t.weak) {
    step = 2;
  } else if (mag >= t.indifferent) {
    step = 1;
  }
  const int centre = index_of(Intensity::IF);
  return static_cast<Intensity>(improvement < 0 ? centre - step : centre + step);
}

std::pair<double, double> band_extent(const HypothesisSet& h,
                                      const IntensityThresholds& t) {
  // Edges between consecutive points, SN|NE ... PO|SP, plus the clamp.
  const std::array<double, 8> edges = {-1.0,          -t.moderate, -t.weak,
                                       -t.indifferent, t.indifferent, t.weak,
                                       t.moderate,    1.0};
  return {edges[index_of(h.lowest())], edges[index_of(h.highest()) + 1]};
}

HypothesisSet intensity_from_stats(const EffectStatistics& stats,
                                   const IntensityThresholds& thresholds) {
  thresholds.check();
  const auto centre = intensity_band(stats.mean, thresholds);
  const auto low = intensity_band(stats.ci95.first, thresholds);
  const auto high = intensity_band(stats.ci95.second, thresholds);
  if (std::abs(index_of(high) - index_of(low)) == 1) {
    return HypothesisSet::range(low, high);
  }
  return HypothesisSet(centre);
}

std::pair<double, double> grade_range(StudyType t) {
  const double lower = 0.25 * static_cast<int>(t);
  return {lower, lower + 0.25};
}

double QualityQuestionnaire::score() const {
  double yes = 0.0, applicable = 0.0;
  for (const auto& q : questions) {
    const auto it = answers.find(q.id);
    if (it == answers.end() || it->second == Answer::NotApplicable) continue;
    applicable += q.weight;
    if (it->second == Answer::Yes) yes += q.weight;
  }
  return applicable > 0.0 ? yes / applicable : 0.0;
}

double base_belief(StudyType type, double quality_score) {
  if (!(quality_score >= 0.0 && quality_score <= 1.0)) {
    throw std::invalid_argument("quality score outside [0,1]");
  }
  return grade_range(type).first + 0.25 * quality_score;
}

double base_belief(StudyType type, const QualityQuestionnaire& quality) {
  return base_belief(type, quality.score());
}

double dispersion_discount(const EffectStatistics& stats) {
  if (stats.iqr == 0.0) return 0.0;
  if (stats.mean == 0.0) return 1.0;
  return 1.0 - std::exp(-0.1 * std::abs(stats.iqr / stats.mean));
}

BeliefAssessment assess(StudyType type, const QualityQuestionnaire& quality,
                        const EffectStatistics& stats) {
  BeliefAssessment a;
  a.study_type = type;
  a.quality_score = quality.score();
  a.base_belief = base_belief(type, a.quality_score);
  a.discount = dispersion_discount(stats);
  a.final_belief = a.base_belief * (1.0 - a.discount);
  return a;
}

BeliefAssessment assess(StudyType type, const QualityQuestionnaire& quality) {
  BeliefAssessment a;
  a.study_type = type;
  a.quality_score = quality.score();
  a.base_belief = base_belief(type, a.quality_score);
  a.final_belief = a.base_belief;
  return a;
}

}  // namespace ssm
