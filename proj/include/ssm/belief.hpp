#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssm/evidence_model.hpp"
#include "ssm/intensity.hpp"

namespace ssm {

enum class Polarity { HigherIsBetter, LowerIsBetter };

std::string_view to_string(Polarity p);
std::optional<Polarity> polarity_from_string(std::string_view s);

// Raw before/after measurements of one metric, one pair per configuration.
struct MeasurementSeries {
  std::string effect_name;
  Polarity polarity = Polarity::HigherIsBetter;
  std::vector<std::pair<double, double>> pairs;  // (baseline, treated)
  std::string units;
};

// Mean, R-7 interquartile range and normal-approximation 95% CI.
EffectStatistics summarize_improvements(std::vector<double> improvements);

// R-7 quantile (linear interpolation between order statistics).
double quantile_r7(std::span<const double> sorted, double p);

// Throws ssm::DomainError on an empty series or a zero baseline.
EffectStatistics relative_improvements(const MeasurementSeries& series);

// Symmetric band edges around zero improvement.
struct IntensityThresholds {
  double indifferent = 0.05;
  double weak = 0.20;
  double moderate = 0.50;

  // Throws std::invalid_argument unless 0 < indifferent < weak < moderate.
  void check() const;
  friend bool operator==(const IntensityThresholds&, const IntensityThresholds&) = default;
};

// Band containing an improvement value.
Intensity intensity_band(double improvement, const IntensityThresholds& t);

// Extent of a hypothesis on the improvement axis. The outermost bands are
// clamped to [-1, 1].
std::pair<double, double> band_extent(const HypothesisSet& h,
                                      const IntensityThresholds& t);

HypothesisSet intensity_from_stats(const EffectStatistics& stats,
                                   const IntensityThresholds& thresholds);

enum class StudyType { Unsystematic, Observational, QuasiExperiment, RandomizedControlledTrial };

std::string_view to_string(StudyType t);
std::optional<StudyType> study_type_from_string(std::string_view s);
// GRADE sub-range [lower, lower + 0.25].
std::pair<double, double> grade_range(StudyType t);

enum class Answer { Yes, No, NotApplicable };

std::string_view to_string(Answer a);
std::optional<Answer> answer_from_string(std::string_view s);

struct Question {
  std::string id;
  std::string text;
  double weight = 1.0;
};

// A study-quality checklist and one study's answers to it.
struct QualityQuestionnaire {
  std::vector<Question> questions;
  std::map<std::string, Answer> answers;

  // Weighted share of "yes" among applicable answers; 0 when nothing applies.
  // Unanswered questions count as not applicable.
  double score() const;
};

double base_belief(StudyType type, const QualityQuestionnaire& quality);
double base_belief(StudyType type, double quality_score);

// 1 - exp(-0.1 |IQR / mean|), with 0 for (mean 0, IQR 0) and 1 for
// (mean 0, IQR > 0).
double dispersion_discount(const EffectStatistics& stats);

struct BeliefAssessment {
  StudyType study_type = StudyType::Unsystematic;
  double quality_score = 0.0;
  double base_belief = 0.0;
  double discount = 0.0;
  double final_belief = 0.0;
};

BeliefAssessment assess(StudyType type, const QualityQuestionnaire& quality,
                        const EffectStatistics& stats);
// Same composition for effects reported without raw data: no discount.
BeliefAssessment assess(StudyType type, const QualityQuestionnaire& quality);

}  // namespace ssm
