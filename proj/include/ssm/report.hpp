#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssm/aggregation.hpp"
#include "ssm/belief.hpp"
#include "ssm/evidence_model.hpp"

namespace ssm::report {

enum class ForestFormat { Svg, Text };
enum class SummaryFormat { Text, Csv };

struct ForestRow {
  enum class Kind { Evidence, Aggregated };

  std::string label;
  int sample_count = 0;
  double belief = 0.0;
  // Absent for evidence reported without raw data.
  std::optional<double> mean;
  std::optional<std::pair<double, double>> ci95;
  Kind kind = Kind::Evidence;
};

struct ForestGroup {
  std::string effect;
  std::vector<ForestRow> rows;
};

struct ReportDocument {
  std::string title;
  std::vector<ForestGroup> groups;
  IntensityThresholds thresholds;
  std::string generated_at;
};

// Fixed plot geometry. Improvements map affinely onto [plot_left,
// plot_left + 2 * half_width], clamped to [-1, 1].
struct ForestGeometry {
  static constexpr double kWidth = 900.0;
  static constexpr double kPlotLeft = 420.0;
  static constexpr double kHalfWidth = 220.0;
  static constexpr double kTop = 70.0;
  static constexpr double kRowHeight = 20.0;
  static constexpr double kLabelX = 20.0;
  static constexpr double kCountX = 310.0;
  static constexpr double kBeliefX = 380.0;

  static double clamp(double improvement);
  static double x_of(double improvement) {
    return kPlotLeft + (clamp(improvement) + 1.0) * kHalfWidth;
  }
};

// Collects rows: for every record, one row per input model reporting the
// effect (in input order) and one aggregated row. Only models listed in
// agg.inputs are used. Effect names are matched through resolver when given,
// otherwise case-insensitively. Throws DomainError when models is empty.
ReportDocument build_forest(std::span<const EvidenceModel> models,
                            const AggregatedModel& agg,
                            const IntensityThresholds& thresholds,
                            std::string generated_at,
                            const ConceptResolver* resolver = nullptr);

std::string render_svg(const ReportDocument& doc);
std::string render_text(const ReportDocument& doc);

std::string render_forest(std::span<const EvidenceModel> models,
                          const AggregatedModel& agg,
                          const IntensityThresholds& thresholds,
                          ForestFormat format, std::string generated_at = {},
                          const ConceptResolver* resolver = nullptr);

std::string render_summary(const AggregatedModel& agg, SummaryFormat format);

// Table formatting helpers: "90%", "0.41" / "-", "+24%".
std::string format_belief(double belief);
std::string format_conflict(double conflict);
std::string format_difference(double difference);

// RFC 4180 quoting, applied only when the field needs it.
std::string csv_field(std::string_view field);

}  // namespace ssm::report
