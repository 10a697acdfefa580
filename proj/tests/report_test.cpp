#include "ssm/report.hpp"

#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "ssm/error.hpp"
#include "test_support.hpp"

namespace ssm::report {
namespace {

using testing::effect;
using testing::simple_model;
using Geo = ForestGeometry;

// Minimal XML check: balanced tags, quoted attributes, declaration first.
bool well_formed(const std::string& xml, std::string* why) {
  if (xml.rfind("<?xml", 0) != 0) {
    *why = "missing declaration";
    return false;
  }
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)((?:\s+[\w:-]+="[^"<]*")*)\s*(/?)>)");
  std::size_t pos = xml.find("?>") + 2;
  while ((pos = xml.find('<', pos)) != std::string::npos) {
    std::smatch m;
    const std::string rest = xml.substr(pos);
    if (!std::regex_search(rest, m, tag, std::regex_constants::match_continuous)) {
      *why = "bad tag at " + std::to_string(pos);
      return false;
    }
    if (m[1].length()) {
      if (stack.empty() || stack.back() != m[2].str()) {
        *why = "unbalanced </" + m[2].str() + ">";
        return false;
      }
      stack.pop_back();
    } else if (!m[4].length()) {
      stack.push_back(m[2].str());
    }
    pos += static_cast<std::size_t>(m.length(0));
  }
  if (!stack.empty()) *why = "unclosed <" + stack.back() + ">";
  return stack.empty();
}

std::vector<double> x_attrs(const std::string& svg, const std::string& cls, const char* attr) {
  std::vector<double> xs;
  const std::regex re("class=\"" + cls + "\"[^>]*?" + attr + "=\"([-0-9.]+)\"");
  for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) {
    xs.push_back(std::stod((*it)[1]));
  }
  return xs;
}

AggregatedModel aggregate_of(const std::vector<EvidenceModel>& models) {
  return aggregate(models, testing::small_glossary(), {});
}

TEST(ForestGeometry, AffineMapping) {
  EXPECT_EQ(Geo::x_of(0.0), 640.0);
  EXPECT_EQ(Geo::x_of(-1.0), 420.0);
  EXPECT_EQ(Geo::x_of(1.0), 860.0);
  EXPECT_EQ(Geo::x_of(0.5), 750.0);
  EXPECT_EQ(Geo::x_of(3.0), 860.0);
  EXPECT_EQ(Geo::x_of(-7.0), 420.0);
}

TEST(Forest, MarkerRightOfStrongRule) {
  auto e = effect("Storage size", HypothesisSet(Intensity::SP), 0.37);
  e.stats = summarize_improvements({0.5718});
  const std::vector<EvidenceModel> models{simple_model("S1-Q0.8", "S1", {e})};
  const auto svg = render_forest(models, aggregate_of(models), {}, ForestFormat::Svg, "t0");
  std::string why;
  ASSERT_TRUE(well_formed(svg, &why)) << why;

  const auto rules = x_attrs(svg, "threshold", "x1");
  EXPECT_EQ(rules, (std::vector<double>{530, 596, 629, 651, 684, 750}));
  EXPECT_EQ(x_attrs(svg, "zero", "x1"), std::vector<double>{640});
  const auto marks = x_attrs(svg, "evidence", "x");
  ASSERT_EQ(marks.size(), 1u);
  EXPECT_NEAR(marks[0] + 4.0, Geo::x_of(0.5718), 0.01);
  EXPECT_GT(marks[0] + 4.0, 750.0);
}

TEST(Forest, AggregatedIndifferentDiamond) {
  auto e = effect("Accuracy", HypothesisSet(Intensity::IF), 0.41);
  e.stats = summarize_improvements({0.01});
  const std::vector<EvidenceModel> models{simple_model("a", "S1", {e})};
  const auto doc = build_forest(models, aggregate_of(models), {}, "");
  ASSERT_EQ(doc.groups.size(), 1u);
  ASSERT_EQ(doc.groups[0].rows.size(), 2u);
  const auto& summary = doc.groups[0].rows[1];
  EXPECT_EQ(summary.kind, ForestRow::Kind::Aggregated);
  EXPECT_EQ(summary.label, "Aggregated IF");
  EXPECT_EQ(*summary.mean, 0.0);
  EXPECT_EQ(*summary.ci95, std::make_pair(-0.05, 0.05));
  const auto svg = render_svg(doc);
  EXPECT_NE(svg.find(R"(x1="629.00" y1="106.00" x2="651.00")"), std::string::npos);
  EXPECT_NE(svg.find(R"(points="634.00,106.00 640.00,100.00 646.00,106.00 640.00,112.00")"),
            std::string::npos);
}

TEST(Forest, EmptyInputIsRejected) {
  EXPECT_THROW(build_forest({}, AggregatedModel{}, {}, ""), DomainError);
}

TEST(Forest, EachModelAppearsOncePerEffect) {
  const auto g = testing::fixture_glossary();
  const auto corpus = testing::fixture_corpus();
  const auto joins = io::load_join_map(testing::fixtures() / "joins.json");
  const auto agg = aggregate(corpus, g, joins);
  const ConceptResolver resolver(g, joins);
  const auto doc = build_forest(corpus, agg, {}, "", &resolver);
  ASSERT_EQ(doc.groups.size(), agg.records.size());
  for (std::size_t i = 0; i < doc.groups.size(); ++i) {
    const auto& rows = doc.groups[i].rows;
    EXPECT_EQ(static_cast<int>(rows.size()), agg.records[i].model_count + 1) << doc.groups[i].effect;
    std::set<std::string> labels;
    for (const auto& r : rows) EXPECT_TRUE(labels.insert(r.label).second) << r.label;
    EXPECT_EQ(rows.back().kind, ForestRow::Kind::Aggregated);
  }
  std::string why;
  EXPECT_TRUE(well_formed(render_svg(doc), &why)) << why;
}

TEST(Forest, NoRawDataRows) {
  const std::vector<EvidenceModel> models{
      simple_model("S4-INT1", "S4", {effect("Inference latency", HypothesisSet(Intensity::PO), 0.18)})};
  const auto svg = render_forest(models, aggregate_of(models), {}, ForestFormat::Svg);
  EXPECT_NE(svg.find("no raw data"), std::string::npos);
  EXPECT_EQ(svg.find("generated"), std::string::npos);
  const auto text = render_forest(models, aggregate_of(models), {}, ForestFormat::Text);
  EXPECT_NE(text.find("no raw data"), std::string::npos);
}

TEST(Forest, TextAxis) {
  auto e = effect("Accuracy", HypothesisSet(Intensity::IF), 0.41);
  e.stats = summarize_improvements({0.0});
  const std::vector<EvidenceModel> models{simple_model("a", "S1", {e})};
  const auto text = render_forest(models, aggregate_of(models), {}, ForestFormat::Text);
  EXPECT_NE(text.find("#"), std::string::npos);
  EXPECT_NE(text.find("*"), std::string::npos);
  EXPECT_NE(text.find("-100%"), std::string::npos);
}

TEST(Summary, AccuracyRowTokens) {
  AggregatedModel agg;
  AggregationRecord r;
  r.effect_name = "Accuracy";
  r.study_ids = {"S1", "S2", "S3", "S5", "S6"};
  r.model_count = 17;
  r.intensity = HypothesisSet(Intensity::WN);
  r.belief = 0.90;
  r.conflict = 0.41;
  r.difference = 0.24;
  agg.records.push_back(r);
  const auto text = render_summary(agg, SummaryFormat::Text);
  std::istringstream lines(text);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header.rfind("Effect", 0), 0u);
  EXPECT_NE(header.find("Difference"), std::string::npos);
  std::istringstream tokens(row.substr(row.find("17") + 2));
  std::vector<std::string> rest{std::istream_iterator<std::string>(tokens), {}};
  EXPECT_EQ(rest, (std::vector<std::string>{"WN", "90%", "0.41", "+24%"}));
}

TEST(Summary, ConflictDashAndEmpty) {
  AggregatedModel agg;
  EXPECT_EQ(render_summary(agg, SummaryFormat::Text).find('\n'),
            render_summary(agg, SummaryFormat::Text).size() - 1);
  EXPECT_EQ(format_conflict(0.0), "-");
  EXPECT_EQ(format_conflict(0.004), "0.00");
  EXPECT_EQ(format_difference(-0.1714), "-17%");
  EXPECT_EQ(format_difference(-0.001), "0%");
  EXPECT_EQ(format_belief(0.3781), "38%");
}

TEST(Summary, CsvQuoting) {
  AggregatedModel agg;
  AggregationRecord r;
  r.effect_name = "Latency, \"p99\"";
  r.study_ids = {"S1", "S2"};
  r.model_count = 2;
  agg.records.push_back(r);
  const auto csv = render_summary(agg, SummaryFormat::Csv);
  EXPECT_EQ(csv.rfind("Effect,Study Id.,Studies,Evidence models,Intensity,Belief,Conflict,Difference\r\n", 0), 0u);
  EXPECT_NE(csv.find(R"("Latency, ""p99""","S1, S2",2,2,IF,0%,-,0%)" "\r\n"), std::string::npos) << csv;
}

}  // namespace
}  // namespace ssm::report
