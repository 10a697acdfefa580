#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssm {

// The seven-point effect intensity scale, in its fixed total order.
enum class Intensity : std::uint8_t { SN = 0, NE, WN, IF, WP, PO, SP };

inline constexpr int kIntensityCount = 7;
inline constexpr std::array<Intensity, kIntensityCount> kAllIntensities = {
    Intensity::SN, Intensity::NE, Intensity::WN, Intensity::IF,
    Intensity::WP, Intensity::PO, Intensity::SP};

std::string_view to_string(Intensity p);
std::optional<Intensity> intensity_from_string(std::string_view token);

constexpr int index_of(Intensity p) { return static_cast<int>(p); }

// Mirror image across IF (SN <-> SP, NE <-> PO, WN <-> WP).
constexpr Intensity reflect(Intensity p) {
  return static_cast<Intensity>(kIntensityCount - 1 - index_of(p));
}

// 7-bit subset of the scale, bit i set for point i. Zero is the empty set.
using SubsetMask = std::uint8_t;
inline constexpr SubsetMask kFullMask = 0x7F;
inline constexpr int kSubsetCount = 1 << kIntensityCount;

// A non-empty subset of the intensity scale: a hypothesis (DST focal element).
// The full set stands for total ignorance.
class HypothesisSet {
 public:
  explicit HypothesisSet(Intensity p) : mask_(bit(p)) {}

  // Throws std::invalid_argument on an empty or out-of-range mask.
  static HypothesisSet from_mask(SubsetMask mask);
  static HypothesisSet of(std::initializer_list<Intensity> points);
  // All points between the endpoints inclusive, in either argument order.
  static HypothesisSet range(Intensity from, Intensity to);
  static HypothesisSet full() { return HypothesisSet(kFullMask); }

  SubsetMask mask() const { return mask_; }
  bool is_full() const { return mask_ == kFullMask; }
  bool contains(Intensity p) const { return (mask_ & bit(p)) != 0; }
  bool is_subset_of(const HypothesisSet& other) const {
    return (mask_ & other.mask_) == mask_;
  }
  int size() const;
  std::vector<Intensity> points() const;
  Intensity lowest() const;
  Intensity highest() const;
  // Average scale index of the members (IF = 3).
  double midpoint_index() const;
  HypothesisSet reflected() const;

  // "SP" for singletons, "{IF,WP}" otherwise.
  std::string notation() const;

  friend bool operator==(const HypothesisSet&, const HypothesisSet&) = default;
  friend bool operator<(const HypothesisSet& a, const HypothesisSet& b) {
    return a.mask_ < b.mask_;
  }

 private:
  explicit HypothesisSet(SubsetMask mask) : mask_(mask) {}
  static constexpr SubsetMask bit(Intensity p) {
    return static_cast<SubsetMask>(1u << index_of(p));
  }

  SubsetMask mask_;
};

// Parses "SP", "{IF,WP}" or "WN..PO". Throws ssm::ParseError naming the
// offending token.
HypothesisSet hypothesis_from_notation(std::string_view text);

}  // namespace ssm
