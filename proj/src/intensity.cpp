#include "ssm/intensity.hpp"

#include <bit>
#include <stdexcept>

#include "ssm/error.hpp"

namespace ssm {
namespace {

constexpr std::array<std::string_view, kIntensityCount> kNames = {
    "SN", "NE", "WN", "IF", "WP", "PO", "SP"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Intensity parse_point(std::string_view token) {
  const auto t = trim(token);
  if (auto p = intensity_from_string(t)) return *p;
  throw ParseError("unknown intensity point '" + std::string(t) + "'");
}

}  // namespace

std::string_view to_string(Intensity p) { return kNames[index_of(p)]; }

std::optional<Intensity> intensity_from_string(std::string_view token) {
  for (int i = 0; i < kIntensityCount; ++i) {
    if (kNames[i] == token) return static_cast<Intensity>(i);
  }
  return std::nullopt;
}

HypothesisSet HypothesisSet::from_mask(SubsetMask mask) {
  if (mask == 0 || mask > kFullMask) {
    throw std::invalid_argument("hypothesis mask must be a non-empty 7-bit set");
  }
  return HypothesisSet(mask);
}

HypothesisSet HypothesisSet::of(std::initializer_list<Intensity> points) {
  SubsetMask m = 0;
  for (auto p : points) m |= bit(p);
  return from_mask(m);
}

HypothesisSet HypothesisSet::range(Intensity from, Intensity to) {
  int lo = index_of(from), hi = index_of(to);
  if (lo > hi) std::swap(lo, hi);
  SubsetMask m = 0;
  for (int i = lo; i <= hi; ++i) m |= static_cast<SubsetMask>(1u << i);
  return HypothesisSet(m);
}

int HypothesisSet::size() const { return std::popcount(mask_); }

std::vector<Intensity> HypothesisSet::points() const {
  std::vector<Intensity> out;
  for (auto p : kAllIntensities) {
    if (contains(p)) out.push_back(p);
  }
  return out;
}

Intensity HypothesisSet::lowest() const {
  return static_cast<Intensity>(std::countr_zero(mask_));
}

Intensity HypothesisSet::highest() const {
  return static_cast<Intensity>(7 - std::countl_zero(mask_));
}

double HypothesisSet::midpoint_index() const {
  double sum = 0.0;
  for (auto p : points()) sum += index_of(p);
  return sum / size();
}

HypothesisSet HypothesisSet::reflected() const {
  SubsetMask m = 0;
  for (auto p : points()) m |= bit(reflect(p));
  return HypothesisSet(m);
}

std::string HypothesisSet::notation() const {
  if (size() == 1) return std::string(to_string(lowest()));
  std::string out = "{";
  bool first = true;
  for (auto p : points()) {
    if (!first) out += ',';
    out += to_string(p);
    first = false;
  }
  out += '}';
  return out;
}

HypothesisSet hypothesis_from_notation(std::string_view text) {
  const auto t = trim(text);
  if (t.empty()) throw ParseError("empty hypothesis notation");

  if (t.front() == '{') {
    if (t.back() != '}') {
      throw ParseError("unterminated brace list '" + std::string(t) + "'");
    }
    const auto body = trim(t.substr(1, t.size() - 2));
    if (body.empty()) throw ParseError("empty braces '" + std::string(t) + "'");
    SubsetMask m = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto token = body.substr(start, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - start);
      m |= HypothesisSet(parse_point(token)).mask();
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return HypothesisSet::from_mask(m);
  }

  if (const auto dots = t.find(".."); dots != std::string_view::npos) {
    return HypothesisSet::range(parse_point(t.substr(0, dots)),
                                parse_point(t.substr(dots + 2)));
  }
  return HypothesisSet(parse_point(t));
}

}  // namespace ssm
