#include "ssm/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ssm/aggregation.hpp"
#include "ssm/belief.hpp"
#include "ssm/error.hpp"
#include "ssm/io.hpp"
#include "ssm/report.hpp"

namespace ssm::cli {
namespace {

namespace fs = std::filesystem;

// Runs body and converts engine exceptions into exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const IncompatibleModelsError& e) {
    const auto& r = e.report();
    err << "error: " << e.what() << '\n'
        << "compatibility " << r.pair.first << " / " << r.pair.second << ": "
        << to_string(r.verdict) << '\n';
    auto list = [&](const char* label, const std::vector<std::string>& items) {
      err << "  " << label << ":";
      for (const auto& i : items) err << " [" << i << "]";
      err << '\n';
    };
    list("matched", r.matched_concepts);
    list("joined", r.joined_concepts);
    list("unmatched", r.unmatched_concepts);
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

std::vector<EvidenceModel> load_models(const RunConfig& c) {
  if (c.corpus_dir.empty()) throw ParseError("--corpus is required");
  return io::load_corpus(c.corpus_dir);
}

Glossary load_glossary(const RunConfig& c) {
  if (c.glossary_path.empty()) throw ParseError("--glossary is required");
  return io::load_glossary(c.glossary_path);
}

JoinMap load_joins(const RunConfig& c) {
  return c.join_map_path ? io::load_join_map(*c.join_map_path) : JoinMap{};
}

IntensityThresholds load_thresholds(const RunConfig& c) {
  return c.thresholds_path ? io::load_thresholds(*c.thresholds_path)
                           : IntensityThresholds{};
}

fs::path prepare_output_dir(const RunConfig& c) {
  if (c.output_dir.empty()) throw IoError("--out is required");
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec || !fs::is_directory(c.output_dir)) {
    throw IoError(c.output_dir.string() + ": cannot create output directory");
  }
  return c.output_dir;
}

std::string slug(std::string_view s) {
  std::string out;
  for (char ch : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' ||
                      ch == '-' || ch == '_';
    out += keep ? ch : '_';
  }
  return out.empty() ? "group" : out;
}

std::string file_name(std::string_view stem, const AggregatedModel& agg,
                      bool grouped, std::string_view ext) {
  std::string name(stem);
  if (grouped) name += "-" + slug(agg.group);
  return name + "." + std::string(ext);
}

// Refuses to aggregate a corpus with validation violations.
void require_valid(const std::vector<EvidenceModel>& models, const Glossary& glossary) {
  std::string problems;
  for (const auto& m : models) {
    const auto report = validate_model(m, glossary);
    for (const auto& v : report.violations) problems += "\n  " + m.id + ": " + v.message;
  }
  if (!problems.empty()) throw DomainError("corpus has validation violations:" + problems);
}

std::vector<AggregatedModel> run_aggregation(const RunConfig& c,
                                             const std::vector<EvidenceModel>& models,
                                             const Glossary& glossary,
                                             const JoinMap& joins) {
  if (models.empty()) throw DomainError("no models");
  require_valid(models, glossary);
  if (c.group_by.empty()) return {aggregate(models, glossary, joins)};
  return aggregate_by(models, c.group_by, glossary, joins);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string report_timestamp() {
  if (const char* pinned = std::getenv("SSM_LOOM_SEED_METADATA"); pinned && *pinned) {
    return pinned;
  }
  return utc_now();
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto glossary = load_glossary(config);
    const auto models = load_models(config);
    if (models.empty()) {
      err << "error: no models in " << config.corpus_dir.string() << '\n';
      return kDomainError;
    }
    std::size_t invalid = 0;
    for (const auto& m : models) {
      const auto report = validate_model(m, glossary);
      if (report.valid()) continue;
      ++invalid;
      out << m.id << ": " << report.violations.size() << " violation(s)\n";
      for (const auto& v : report.violations) out << "  " << v.message << '\n';
    }
    if (invalid == 0) {
      out << models.size() << " models valid\n";
      return kOk;
    }
    out << invalid << " of " << models.size() << " models invalid\n";
    return kDomainError;
  });
}

int cmd_beliefs(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    // Without a questionnaire every study lacks answers, reported below.
    const auto questionnaire = config.questionnaire_path
                                   ? io::load_questionnaire(*config.questionnaire_path)
                                   : io::QuestionnaireSet{};
    const auto models = load_models(config);
    if (models.empty()) throw DomainError("no models");
    const bool csv = config.format == "csv";
    if (!config.format.empty() && config.format != "text" && !csv) {
      throw ParseError("--format must be text or csv for beliefs");
    }

    // Raw measurement files override embedded statistics.
    std::map<std::pair<std::string, std::string>, EffectStatistics> measured;
    const auto measurements = config.corpus_dir / "measurements";
    if (fs::is_directory(measurements)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(measurements)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        const auto file = io::load_measurement_csv(f);
        const auto model = file.metadata.find("model");
        if (model == file.metadata.end() || file.series.effect_name.empty()) {
          throw ParseError(f.string() + ": needs '# model:' and '# effect:' lines");
        }
        measured[{model->second, fold_term(file.series.effect_name)}] =
            relative_improvements(file.series);
      }
    }

    std::string table;
    if (csv) {
      table = "studyId,modelId,effect,studyType,qualityScore,baseBelief,discount,finalBelief\r\n";
    } else {
      table = fmt::format("{:<8} {:<22} {:<30} {:>8} {:>8} {:>8}\n", "Study", "Model",
                          "Effect", "Base", "Discount", "Final");
    }
    for (const auto& m : models) {
      const auto type_it = m.metadata.find("studyType");
      const auto type = type_it == m.metadata.end()
                            ? std::nullopt
                            : study_type_from_string(type_it->second);
      if (!type) throw DomainError("model " + m.id + " has no valid metadata.studyType");
      const auto quality = questionnaire.for_study(m.study_id);
      if (!quality) {
        throw DomainError("questionnaire has no answers for study " + m.study_id);
      }
      for (const auto& e : m.effects) {
        std::optional<EffectStatistics> stats = e.stats;
        if (auto it = measured.find({m.id, fold_term(e.name)}); it != measured.end()) {
          stats = it->second;
        }
        const auto a = stats ? assess(*type, *quality, *stats) : assess(*type, *quality);
        if (csv) {
          table += fmt::format("{},{},{},{},{:.4f},{:.4f},{:.4f},{:.4f}\r\n",
                               report::csv_field(m.study_id), report::csv_field(m.id),
                               report::csv_field(e.name), to_string(*type), a.quality_score,
                               a.base_belief, a.discount, a.final_belief);
        } else {
          table += fmt::format("{:<8} {:<22} {:<30} {:>8.2f} {:>8.4f} {:>8.2f}{}\n",
                               m.study_id, m.id, e.name, a.base_belief, a.discount,
                               a.final_belief, stats ? "" : "  (no raw data)");
        }
      }
    }
    out << table;
    if (!config.output_dir.empty()) {
      const auto dir = prepare_output_dir(config);
      io::write_text_file(dir / (csv ? "beliefs.csv" : "beliefs.txt"), table);
    }
    return kOk;
  });
}

int cmd_aggregate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const bool csv = config.format == "csv";
    if (!config.format.empty() && config.format != "text" && !csv) {
      throw ParseError("--format must be text or csv for aggregate");
    }
    const auto glossary = load_glossary(config);
    const auto joins = load_joins(config);
    const auto models = load_models(config);
    const auto dir = prepare_output_dir(config);
    const auto aggregated = run_aggregation(config, models, glossary, joins);
    const auto stamp = report_timestamp();
    const bool grouped = !config.group_by.empty();
    for (const auto& agg : aggregated) {
      const auto summary = report::render_summary(
          agg, csv ? report::SummaryFormat::Csv : report::SummaryFormat::Text);
      io::write_text_file(dir / file_name("aggregated", agg, grouped, "json"),
                          io::to_json(agg, stamp).dump(2) + "\n");
      io::write_text_file(dir / file_name("summary", agg, grouped, csv ? "csv" : "txt"),
                          summary);
      if (grouped) out << "[" << agg.group << "]\n";
      out << summary;
    }
    out << aggregated.size() << " aggregated model(s), "
        << std::accumulate(aggregated.begin(), aggregated.end(), std::size_t{0},
                           [](std::size_t n, const auto& a) { return n + a.records.size(); })
        << " record(s)\n";
    return kOk;
  });
}

int cmd_forest(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const bool text = config.format == "text";
    if (!config.format.empty() && config.format != "svg" && !text) {
      throw ParseError("--format must be svg or text for forest");
    }
    const auto glossary = load_glossary(config);
    const auto joins = load_joins(config);
    const auto thresholds = load_thresholds(config);
    const auto models = load_models(config);
    const auto dir = prepare_output_dir(config);
    const auto aggregated = run_aggregation(config, models, glossary, joins);
    const ConceptResolver resolver(glossary, joins);
    const auto stamp = report_timestamp();
    const bool grouped = !config.group_by.empty();
    for (const auto& agg : aggregated) {
      const auto doc = report::render_forest(
          models, agg, thresholds, text ? report::ForestFormat::Text : report::ForestFormat::Svg,
          stamp, &resolver);
      const auto path = dir / file_name("forest", agg, grouped, text ? "txt" : "svg");
      io::write_text_file(path, doc);
      out << "wrote " << path.string() << '\n';
    }
    return kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured synthesis of research evidence with belief functions", "ssm"};
  app.set_config("--config", "", "TOML/INI file with default flag values");
  app.require_subcommand(1);

  RunConfig config;
  std::string joins, thresholds, questionnaire;
  app.add_option("--corpus", config.corpus_dir, "Directory of evidence-model JSON files");
  app.add_option("--glossary", config.glossary_path, "Glossary JSON");
  app.add_option("--joins", joins, "Join map JSON");
  app.add_option("--thresholds", thresholds, "Intensity threshold overrides JSON");
  app.add_option("--questionnaire", questionnaire, "Quality questionnaire JSON");
  app.add_option("--out", config.output_dir, "Output directory");
  app.add_option("--group-by", config.group_by, "Metadata key to aggregate by");
  app.add_option("--format", config.format, "svg|text (forest), text|csv (tables)");

  std::function<int(const RunConfig&, std::ostream&, std::ostream&)> command;
  auto sub = [&](const char* name, const char* help, auto fn) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->callback([&command, fn] { command = fn; });
  };
  sub("validate", "Validate every evidence model against the glossary", cmd_validate);
  sub("beliefs", "Tabulate base belief, discount and final belief per effect", cmd_beliefs);
  sub("aggregate", "Pool effects across models and write the aggregated model", cmd_aggregate);
  sub("forest", "Render the adapted forest plot", cmd_forest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kIoError;
  }
  if (!joins.empty()) config.join_map_path = joins;
  if (!thresholds.empty()) config.thresholds_path = thresholds;
  if (!questionnaire.empty()) config.questionnaire_path = questionnaire;
  return command(config, out, err);
}

}  // namespace ssm::cli
