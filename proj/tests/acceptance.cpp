// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "dst_oracle.hpp"
#include "ssm/aggregation.hpp"
#include "ssm/belief.hpp"
#include "ssm/cli.hpp"
#include "ssm/dst.hpp"
#include "ssm/error.hpp"
#include "ssm/io.hpp"
#include "ssm/report.hpp"

namespace fs = std::filesystem;
using namespace ssm;

namespace {

const fs::path kFixtures = SSM_FIXTURES;
const fs::path kGolden = SSM_GOLDEN;
constexpr const char* kPinnedTime = "2026-01-01T00:00:00Z";

// Collects the first few failure messages of one criterion.
struct Check {
  int failures = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures;
    if (notes.size() < 5) notes.push_back(what);
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    expect(std::abs(actual - expected) <= tol,
           fmt::format("{}: got {:.17g}, want {:.17g}", what, actual, expected));
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool bodies_match(const dst::MassFunction& m, const oracle::Body& expected, double tol) {
  const auto actual = oracle::to_body(m);
  for (const auto& [set, mass] : expected) {
    const auto it = actual.find(set);
    if (std::abs((it == actual.end() ? 0.0 : it->second) - mass) > tol) return false;
  }
  for (const auto& [set, mass] : actual) {
    if (!expected.count(set) && std::abs(mass) > tol) return false;
  }
  return true;
}

void criterion_oracle(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> count(1, 4);
  for (int i = 0; i < 1000; ++i) {
    std::vector<dst::MassFunction> ms;
    std::vector<oracle::Body> bodies;
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
      // At most five focal elements; half the cases keep mass on the frame.
      const bool full = (i + k) % 2 == 0;
      ms.push_back(oracle::random_mass(rng, full ? 4 : 5, full));
      bodies.push_back(oracle::to_body(ms.back()));
    }
    const auto joint = oracle::joint_combination(bodies);
    const bool oracle_total = 1.0 - joint.empty_mass < dst::kTotalConflictTolerance;
    try {
      const auto r = dst::combine_all(ms);
      c.expect(!oracle_total, fmt::format("case {}: oracle reports total conflict", i));
      c.expect(bodies_match(r.combined, joint.combined, 1e-9),
               fmt::format("case {}: combined masses differ", i));
      c.near(r.conflict, joint.empty_mass, 1e-9, fmt::format("case {}: conflict", i));
    } catch (const dst::TotalConflictError&) {
      c.expect(oracle_total, fmt::format("case {}: unexpected total conflict", i));
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 10.0, fmt::format("runtime {:.2f}s", elapsed));
}

void criterion_algebra(Check& c) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(0.0, 1.0);
  const auto vacuous = dst::MassFunction::vacuous();
  for (int i = 0; i < 2500; ++i) {
    // commutativity
    const auto a = oracle::random_mass(rng, 5, true);
    const auto b = oracle::random_mass(rng, 5, true);
    const auto ab = dst::combine(a, b), ba = dst::combine(b, a);
    c.expect(bodies_match(ab.combined, oracle::to_body(ba.combined), 1e-9) &&
                 std::abs(ab.conflict - ba.conflict) <= 1e-9,
             fmt::format("commutativity case {}", i));

    // fold-order invariance
    std::vector<dst::MassFunction> ms;
    for (int k = 0; k < 4; ++k) ms.push_back(oracle::random_mass(rng, 5, true));
    const auto forward = dst::combine_all(ms);
    std::shuffle(ms.begin(), ms.end(), rng);
    const auto shuffled = dst::combine_all(ms);
    c.expect(bodies_match(forward.combined, oracle::to_body(shuffled.combined), 1e-9) &&
                 std::abs(forward.conflict - shuffled.conflict) <= 1e-9,
             fmt::format("fold order case {}", i));

    // vacuous neutrality
    const auto m = oracle::random_mass(rng, 5, i % 2 == 0);
    const auto with_vacuous = dst::combine(m, vacuous);
    c.expect(with_vacuous.combined == m && with_vacuous.conflict == 0.0,
             fmt::format("vacuous neutrality case {}", i));

    // unit sum under discounting
    const auto d = dst::discount_mass(m, alpha(rng));
    c.expect(std::abs(d.total() - 1.0) <= 1e-9, fmt::format("discount unit sum case {}", i));
  }
}

void criterion_reinforcement(Check& c) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> belief(0.0, 0.999);
  std::uniform_int_distribution<int> mask(1, kFullMask - 1);
  std::uniform_int_distribution<int> count(1, 8);
  for (int i = 0; i < 1000; ++i) {
    const auto focus = HypothesisSet::from_mask(static_cast<SubsetMask>(mask(rng)));
    std::vector<PoolInput> inputs;
    double keep = 1.0;
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
      Effect e;
      e.name = "Accuracy";
      e.hypothesis = focus;
      e.belief = belief(rng);
      keep *= 1.0 - e.belief;
      inputs.push_back({e, "m" + std::to_string(k), "S" + std::to_string(k)});
    }
    const auto r = pool_effect("Accuracy", inputs);
    c.near(r.belief, 1.0 - keep, 1e-9, fmt::format("case {} belief", i));
    c.expect(r.difference >= -1e-12, fmt::format("case {} difference {}", i, r.difference));
    c.expect(r.conflict == 0.0, fmt::format("case {} conflict", i));
  }
}

EffectStatistics with_dispersion(double mean, double iqr) {
  EffectStatistics s;
  s.mean = mean;
  s.iqr = iqr;
  s.ci95 = {mean, mean};
  s.improvements = {mean};
  s.sample_count = 1;
  return s;
}

void criterion_discount(Check& c) {
  c.expect(dispersion_discount(with_dispersion(0.4, 0.0)) == 0.0, "discount(IQR=0) != 0");
  for (double mean : {0.01, 0.3, -0.7, 2.5}) {
    c.near(dispersion_discount(with_dispersion(mean, std::abs(mean))), 1.0 - std::exp(-0.1),
           1e-12, fmt::format("discount(|IQR/mean|=1), mean {}", mean));
  }
  QualityQuestionnaire q;
  q.questions = {{"a", "", 3.0}, {"b", "", 1.0}};
  q.answers = {{"a", Answer::Yes}, {"b", Answer::No}};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> imps;
    for (int k = 0; k < 2 + i % 9; ++k) imps.push_back(u(rng));
    for (auto type : {StudyType::Unsystematic, StudyType::Observational,
                      StudyType::QuasiExperiment, StudyType::RandomizedControlledTrial}) {
      const auto a = assess(type, q, summarize_improvements(imps));
      c.near(a.final_belief, a.base_belief * (1.0 - a.discount), 1e-12,
             fmt::format("case {} composition", i));
    }
  }
}

void criterion_grade(Check& c) {
  c.expect(base_belief(StudyType::RandomizedControlledTrial, 0.0) == 0.75,
           "base_belief(RCT, 0) != 0.75");
  c.expect(base_belief(StudyType::Observational, 1.0) == 0.50,
           "base_belief(observational, 1) != 0.50");
}

void criterion_intensity(Check& c) {
  const IntensityThresholds defaults;
  EffectStatistics tight = with_dispersion(0.5718, 0.0);
  tight.ci95 = {0.5700, 0.5736};
  c.expect(intensity_from_stats(tight, defaults) == HypothesisSet(Intensity::SP),
           "0.5718 does not map to {SP}");
  c.expect(intensity_from_stats(with_dispersion(0.0, 0.0), defaults) ==
               HypothesisSet(Intensity::IF),
           "0 does not map to {IF}");
}

void criterion_end_to_end(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto file = io::load_measurement_csv(kFixtures / "corpus" / "measurements" /
                                             "s2_inference_energy.csv");
  c.expect(file.series.pairs.size() == 6, "expected six pairs");
  const auto stats = relative_improvements(file.series);
  // (b - t) / b for each lower-is-better pair
  const std::vector<double> expected{79.0 / 120.0, 59.0 / 95.0, 139.5 / 210.0,
                                     36.0 / 88.0,  82.0 / 143.0, 78.0 / 176.0};
  for (std::size_t i = 0; i < expected.size() && i < stats.improvements.size(); ++i) {
    c.near(stats.improvements[i], expected[i], 1e-9, fmt::format("improvement {}", i));
  }
  c.near(stats.mean, 0.5615618299828826, 1e-9, "mean");
  c.near(stats.iqr, 0.17327015090172992, 1e-9, "iqr");
  c.near(stats.ci95.first, 0.4732834236075438, 1e-9, "ci low");
  c.near(stats.ci95.second, 0.6498402363582214, 1e-9, "ci high");

  const auto hypothesis = intensity_from_stats(stats, {});
  c.expect(hypothesis == HypothesisSet::of({Intensity::PO, Intensity::SP}),
           "intensity is not {PO,SP}: " + hypothesis.notation());
  c.near(dispersion_discount(stats), 0.030383885639471364, 1e-9, "discount");

  const auto questionnaire = io::load_questionnaire(kFixtures / "questionnaire.json");
  const auto quality = questionnaire.for_study("S2");
  c.expect(quality.has_value(), "no answers for S2");
  if (!quality) return;
  const auto a = assess(StudyType::Observational, *quality, stats);
  c.near(a.quality_score, 0.56, 1e-9, "quality score");
  c.near(a.base_belief, 0.39, 1e-9, "base belief");
  c.near(a.final_belief, 0.3781502846006062, 1e-9, "final belief");

  Effect e;
  e.name = file.series.effect_name;
  e.hypothesis = hypothesis;
  e.belief = a.final_belief;
  e.sample_count = stats.sample_count;
  e.stats = stats;
  const std::vector<PoolInput> inputs{{e, "S2-INT8", "S2"}};
  const auto r = pool_effect(e.name, inputs);
  c.expect(r.intensity == hypothesis, "pooled intensity");
  c.near(r.belief, 0.3781502846006062, 1e-9, "pooled belief");
  c.expect(r.conflict == 0.0, "pooled conflict");
  c.near(r.difference, 0.0, 1e-9, "pooled difference");

  const double elapsed = seconds_since(start);
  c.expect(elapsed < 1.0, fmt::format("runtime {:.3f}s", elapsed));
}

std::string run_cli(const std::vector<std::string>& args, int* code) {
  std::vector<const char*> argv{"ssm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  *code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return err.str();
}

std::vector<std::string> fixture_args(const fs::path& out) {
  return {"--corpus", (kFixtures / "corpus").string(),
          "--glossary", (kFixtures / "glossary.json").string(),
          "--joins", (kFixtures / "joins.json").string(),
          "--out", out.string()};
}

bool render_fixtures(const fs::path& out, Check& c) {
  for (const char* command : {"aggregate", "forest"}) {
    auto args = fixture_args(out);
    args.push_back(command);
    int code = 0;
    const auto err = run_cli(args, &code);
    c.expect(code == cli::kOk, fmt::format("{} exited {}: {}", command, code, err));
    if (code != cli::kOk) return false;
  }
  return true;
}

void criterion_determinism(Check& c, const fs::path& scratch) {
  const auto a = scratch / "run-a", b = scratch / "run-b";
  if (!render_fixtures(a, c) || !render_fixtures(b, c)) return;
  for (const char* f : {"aggregated.json", "summary.txt", "forest.svg"}) {
    c.expect(io::read_text_file(a / f) == io::read_text_file(b / f),
             fmt::format("{} differs between runs", f));
  }
  const auto agg = io::aggregated_model_from_json(
      io::parse_json(io::read_text_file(a / "aggregated.json"), "aggregated.json"),
      "aggregated.json");
  std::vector<std::string> names;
  for (const auto& r : agg.records) names.push_back(r.effect_name);
  std::sort(names.begin(), names.end());
  std::vector<std::string> expected{
      "Accuracy", "F1 score", "Storage size", "GPU utilization", "GPU memory utilization",
      "GPU power draw", "GPU energy consumption", "Inference latency",
      "Inference power draw", "Inference energy consumption"};
  std::sort(expected.begin(), expected.end());
  c.expect(names == expected, fmt::format("record names: {}", fmt::join(names, "; ")));
}

void criterion_golden(Check& c, const fs::path& scratch) {
  const auto out = scratch / "golden";
  if (!render_fixtures(out, c)) return;
  const auto svg = io::read_text_file(out / "forest.svg");
  c.expect(svg == io::read_text_file(kGolden / "forest.svg"), "forest.svg differs from golden");

  using Geo = report::ForestGeometry;
  const IntensityThresholds t;
  std::vector<std::string> want;
  for (double v : {-t.moderate, -t.weak, -t.indifferent, t.indifferent, t.weak, t.moderate}) {
    want.push_back(fmt::format("{:.2f}", Geo::x_of(v)));
  }
  std::vector<std::string> got;
  const std::regex rule(R"re(<line class="(threshold|zero)" x1="([0-9.]+)" y1="[0-9.]+" x2="([0-9.]+)")re");
  std::string zero;
  for (std::sregex_iterator it(svg.begin(), svg.end(), rule), end; it != end; ++it) {
    c.expect((*it)[2] == (*it)[3], "rule is not vertical");
    if ((*it)[1] == "zero") {
      zero = (*it)[2];
    } else {
      got.push_back((*it)[2]);
    }
  }
  c.expect(got == want, fmt::format("threshold rules at {}", fmt::join(got, ",")));
  c.expect(zero == fmt::format("{:.2f}", Geo::x_of(0.0)), "zero rule at " + zero);
}

}  // namespace

int main() {
  setenv("SSM_LOOM_SEED_METADATA", kPinnedTime, 1);
  const auto scratch = fs::temp_directory_path() / fmt::format("ssm_acceptance_{}", getpid());
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"DST oracle equivalence (1000 cases)", criterion_oracle},
      {"algebra suite (10000 cases)", criterion_algebra},
      {"agreeing-reinforcement closed form", criterion_reinforcement},
      {"dispersion discount anchors", criterion_discount},
      {"GRADE base-belief anchors", criterion_grade},
      {"intensity anchors", criterion_intensity},
      {"six-pair end-to-end", criterion_end_to_end},
      {"pipeline determinism", [&](Check& c) { criterion_determinism(c, scratch); }},
      {"forest golden file", [&](Check& c) { criterion_golden(c, scratch); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    try {
      criteria[i].second(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = check.failures == 0;
    if (!ok) ++failed;
    std::cout << fmt::format("criterion {}: {} - {}", i + 1, ok ? "PASS" : "FAIL",
                             criteria[i].first)
              << '\n';
    for (const auto& note : check.notes) std::cout << "    " << note << '\n';
  }
  fs::remove_all(scratch);
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed,
                           criteria.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
