#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ssm::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kIoError = 2;

struct RunConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path glossary_path;
  std::optional<std::filesystem::path> join_map_path;
  std::optional<std::filesystem::path> thresholds_path;
  std::optional<std::filesystem::path> questionnaire_path;
  std::filesystem::path output_dir;
  std::string group_by;
  std::string format;
};

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_beliefs(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_aggregate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_forest(const RunConfig& config, std::ostream& out, std::ostream& err);

// Timestamp stamped into reports: $SSM_LOOM_SEED_METADATA when set, else
// the current UTC time.
std::string report_timestamp();

// Parses argv (program name first) and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ssm::cli
