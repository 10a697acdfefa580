#include "ssm/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "ssm/error.hpp"

namespace ssm::report {
namespace {

using Geo = ForestGeometry;

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string percent(double fraction, bool signed_plus) {
  const double rounded = std::round(fraction * 100.0);
  if (rounded == 0.0) return "0%";
  return signed_plus ? fmt::format("{:+.0f}%", rounded) : fmt::format("{:.0f}%", rounded);
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<double> threshold_rules(const IntensityThresholds& t) {
  return {-t.moderate, -t.weak, -t.indifferent, t.indifferent, t.weak, t.moderate};
}

}  // namespace

double ForestGeometry::clamp(double improvement) {
  return std::clamp(improvement, -1.0, 1.0);
}

std::string format_belief(double belief) { return percent(belief, false); }

std::string format_conflict(double conflict) {
  if (conflict == 0.0) return "-";
  return fmt::format("{:.2f}", conflict);
}

std::string format_difference(double difference) { return percent(difference, true); }

ReportDocument build_forest(std::span<const EvidenceModel> models,
                            const AggregatedModel& agg,
                            const IntensityThresholds& thresholds,
                            std::string generated_at,
                            const ConceptResolver* resolver) {
  if (models.empty()) throw DomainError("nothing to render");
  thresholds.check();

  ReportDocument doc;
  doc.title = "Effects of " + agg.cause.name;
  if (!agg.group.empty()) doc.title += " (" + agg.group + ")";
  doc.thresholds = thresholds;
  doc.generated_at = std::move(generated_at);

  auto canonical = [&](const std::string& name) {
    return fold_term(resolver ? resolver->resolve(name).name : name);
  };
  const std::set<std::string> inputs(agg.inputs.begin(), agg.inputs.end());

  for (const auto& record : agg.records) {
    ForestGroup group{record.effect_name, {}};
    const auto key = canonical(record.effect_name);
    int total_samples = 0;
    for (const auto& m : models) {
      if (!inputs.contains(m.id)) continue;
      for (const auto& e : m.effects) {
        if (canonical(e.name) != key) continue;
        ForestRow row;
        row.label = m.id;
        row.sample_count = e.sample_count;
        row.belief = e.belief;
        if (e.stats) {
          row.mean = e.stats->mean;
          row.ci95 = e.stats->ci95;
        }
        total_samples += e.sample_count;
        group.rows.push_back(std::move(row));
      }
    }
    const auto extent = band_extent(record.intensity, thresholds);
    ForestRow summary;
    summary.label = "Aggregated " + record.intensity.notation();
    summary.sample_count = total_samples;
    summary.belief = record.belief;
    summary.mean = (extent.first + extent.second) / 2.0;
    summary.ci95 = extent;
    summary.kind = ForestRow::Kind::Aggregated;
    group.rows.push_back(std::move(summary));
    doc.groups.push_back(std::move(group));
  }
  return doc;
}

std::string render_svg(const ReportDocument& doc) {
  std::size_t lines = 0;
  for (const auto& g : doc.groups) lines += 1 + g.rows.size();
  const double plot_bottom = Geo::kTop + static_cast<double>(lines) * Geo::kRowHeight;
  const double height = plot_bottom + 70.0;
  const double axis_top = Geo::kTop - 10.0;

  std::string out;
  auto add = [&out](std::string s) {
    out += s;
    out += '\n';
  };
  add(R"(<?xml version="1.0" encoding="UTF-8"?>)");
  add(fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0f}" height="{:.0f}" viewBox="0 0 {:.0f} {:.0f}" font-family="monospace" font-size="12">)",
      Geo::kWidth, height, Geo::kWidth, height));
  add("<title>" + xml_escape(doc.title) + "</title>");
  add(fmt::format(R"(<rect x="0" y="0" width="{:.0f}" height="{:.0f}" fill="white"/>)",
                  Geo::kWidth, height));
  add(fmt::format(R"(<text x="{:.2f}" y="25" font-size="14" font-weight="bold">{}</text>)",
                  Geo::kLabelX, xml_escape(doc.title)));
  add(fmt::format(R"(<text x="{:.2f}" y="50" font-weight="bold">Evidence</text>)", Geo::kLabelX));
  add(fmt::format(R"(<text x="{:.2f}" y="50" font-weight="bold" text-anchor="end">n</text>)",
                  Geo::kCountX));
  add(fmt::format(R"(<text x="{:.2f}" y="50" font-weight="bold" text-anchor="end">Belief</text>)",
                  Geo::kBeliefX));
  add(fmt::format(
      R"(<text x="{:.2f}" y="50" font-weight="bold" text-anchor="middle">Relative improvement (mean, 95% CI)</text>)",
      Geo::x_of(0.0)));

  for (double t : threshold_rules(doc.thresholds)) {
    add(fmt::format(
        R"(<line class="threshold" x1="{0:.2f}" y1="{1:.2f}" x2="{0:.2f}" y2="{2:.2f}" stroke="#cccccc" stroke-dasharray="3,3"/>)",
        Geo::x_of(t), axis_top, plot_bottom));
  }
  add(fmt::format(
      R"(<line class="zero" x1="{0:.2f}" y1="{1:.2f}" x2="{0:.2f}" y2="{2:.2f}" stroke="black"/>)",
      Geo::x_of(0.0), axis_top, plot_bottom));

  double y = Geo::kTop;
  for (const auto& g : doc.groups) {
    add(fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-weight="bold">{}</text>)",
                    Geo::kLabelX, y, xml_escape(g.effect)));
    y += Geo::kRowHeight;
    for (const auto& row : g.rows) {
      const bool aggregated = row.kind == ForestRow::Kind::Aggregated;
      const std::string weight = aggregated ? R"( font-style="italic")" : "";
      add(fmt::format(R"(<text x="{:.2f}" y="{:.2f}"{}>{}</text>)", Geo::kLabelX + 12.0,
                      y, weight, xml_escape(row.label)));
      add(fmt::format(R"(<text x="{:.2f}" y="{:.2f}" text-anchor="end">{}</text>)",
                      Geo::kCountX, y, row.sample_count));
      add(fmt::format(R"(<text x="{:.2f}" y="{:.2f}" text-anchor="end">{}</text>)",
                      Geo::kBeliefX, y, format_belief(row.belief)));
      const double cy = y - 4.0;
      if (!row.mean) {
        add(fmt::format(R"(<text class="no-data" x="{:.2f}" y="{:.2f}" fill="#888888">no raw data</text>)",
                        Geo::kPlotLeft + 4.0, y));
        y += Geo::kRowHeight;
        continue;
      }
      if (row.ci95) {
        add(fmt::format(
            R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="{}" stroke-width="{}"/>)",
            Geo::x_of(row.ci95->first), cy, Geo::x_of(row.ci95->second), cy,
            aggregated ? "#1f4e79" : "black", aggregated ? 2 : 1));
      }
      const double cx = Geo::x_of(*row.mean);
      if (aggregated) {
        add(fmt::format(
            R"(<polygon class="aggregated" points="{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}" fill="#1f4e79"/>)",
            cx - 6.0, cy, cx, cy - 6.0, cx + 6.0, cy, cx, cy + 6.0));
      } else {
        add(fmt::format(
            R"(<rect class="evidence" x="{:.2f}" y="{:.2f}" width="8" height="8" fill="black"/>)",
            cx - 4.0, cy - 4.0));
      }
      y += Geo::kRowHeight;
    }
  }

  const double tick_y = plot_bottom + 15.0;
  add(fmt::format(
      R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="black"/>)",
      Geo::x_of(-1.0), plot_bottom, Geo::x_of(1.0), plot_bottom));
  for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    add(fmt::format(R"(<text x="{:.2f}" y="{:.2f}" text-anchor="middle">{:.0f}%</text>)",
                    Geo::x_of(v), tick_y, v * 100.0));
  }
  add(fmt::format(
      R"(<text x="{:.2f}" y="{:.2f}" fill="#555555">thresholds: indifferent {:.2f}, weak {:.2f}, moderate {:.2f}</text>)",
      Geo::kLabelX, tick_y + 20.0, doc.thresholds.indifferent, doc.thresholds.weak,
      doc.thresholds.moderate));
  if (!doc.generated_at.empty()) {
    add(fmt::format(R"(<text x="{:.2f}" y="{:.2f}" fill="#555555">generated {}</text>)",
                    Geo::kLabelX, tick_y + 35.0, xml_escape(doc.generated_at)));
  }
  add("</svg>");
  return out;
}

std::string render_text(const ReportDocument& doc) {
  constexpr int kPlotCols = 81;  // -100% .. +100%, 2.5% per column
  auto col = [](double v) {
    return static_cast<int>(std::lround((Geo::clamp(v) + 1.0) * (kPlotCols - 1) / 2.0));
  };

  std::size_t label_width = 8;
  for (const auto& g : doc.groups) {
    label_width = std::max(label_width, g.effect.size());
    for (const auto& r : g.rows) label_width = std::max(label_width, r.label.size() + 2);
  }

  std::string axis(kPlotCols, ' ');
  for (double t : threshold_rules(doc.thresholds)) axis[col(t)] = ':';
  axis[col(0.0)] = '|';

  std::string out = doc.title + "\n\n";
  out += fmt::format("{:<{}}  {:>5}  {:>6}  {}\n", "Evidence", label_width, "n",
                     "Belief", "-100%" + std::string(kPlotCols - 10, ' ') + "+100%");
  for (const auto& g : doc.groups) {
    out += fmt::format("{:<{}}  {:>5}  {:>6}  {}\n", g.effect, label_width, "", "", axis);
    for (const auto& row : g.rows) {
      std::string plot = axis;
      if (!row.mean) {
        plot = "(no raw data)";
      } else {
        if (row.ci95) {
          for (int c = col(row.ci95->first); c <= col(row.ci95->second); ++c) plot[c] = '-';
        }
        plot[col(*row.mean)] = row.kind == ForestRow::Kind::Aggregated ? '*' : '#';
      }
      out += fmt::format("{:<{}}  {:>5}  {:>6}  {}\n", "  " + row.label, label_width,
                         row.sample_count, format_belief(row.belief), plot);
    }
  }
  out += fmt::format("\nthresholds: indifferent {:.2f}, weak {:.2f}, moderate {:.2f}\n",
                     doc.thresholds.indifferent, doc.thresholds.weak,
                     doc.thresholds.moderate);
  if (!doc.generated_at.empty()) out += "generated " + doc.generated_at + "\n";
  return out;
}

std::string render_forest(std::span<const EvidenceModel> models,
                          const AggregatedModel& agg,
                          const IntensityThresholds& thresholds, ForestFormat format,
                          std::string generated_at, const ConceptResolver* resolver) {
  const auto doc = build_forest(models, agg, thresholds, std::move(generated_at), resolver);
  return format == ForestFormat::Svg ? render_svg(doc) : render_text(doc);
}

std::string render_summary(const AggregatedModel& agg, SummaryFormat format) {
  const std::vector<std::string> header = {
      "Effect", "Study Id.", "Studies", "Evidence models",
      "Intensity", "Belief", "Conflict", "Difference"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : agg.records) {
    rows.push_back({r.effect_name, join(r.study_ids, ", "),
                    std::to_string(r.study_ids.size()), std::to_string(r.model_count),
                    r.intensity.notation(), format_belief(r.belief),
                    format_conflict(r.conflict), format_difference(r.difference)});
  }

  std::string out;
  if (format == SummaryFormat::Csv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
      }
      out += "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) l += "  ";
      // text columns left, numbers right
      l += i < 2 || i == 4 ? fmt::format("{:<{}}", cells[i], width[i])
                           : fmt::format("{:>{}}", cells[i], width[i]);
    }
    while (!l.empty() && l.back() == ' ') l.pop_back();
    out += l + '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace ssm::report
