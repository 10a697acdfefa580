#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "ssm/error.hpp"
#include "ssm/intensity.hpp"

namespace ssm::dst {

inline constexpr double kUnitSumTolerance = 1e-9;
inline constexpr double kTotalConflictTolerance = 1e-12;

// Thrown when 1 - K falls below kTotalConflictTolerance.
class TotalConflictError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Basic probability assignment over the 128-subset lattice of the intensity
// frame. Stored densely, one slot per 7-bit mask; slot 0 (empty set) is
// always zero.
class MassFunction {
 public:
  using Focal = std::pair<HypothesisSet, double>;

  // Vacuous mass: everything on the full frame.
  MassFunction();

  // Throws std::invalid_argument unless masses are in [0,1] and sum to one
  // within kUnitSumTolerance. Repeated hypotheses accumulate.
  explicit MassFunction(std::span<const Focal> assignments);
  MassFunction(std::initializer_list<Focal> assignments)
      : MassFunction(std::span<const Focal>(assignments.begin(), assignments.size())) {}

  static MassFunction vacuous() { return MassFunction(); }

  // Dense form indexed by SubsetMask. Same validation as above, and the
  // empty-set slot must be zero.
  static MassFunction from_dense(const std::array<double, kSubsetCount>& dense);
  const std::array<double, kSubsetCount>& dense() const { return masses_; }

  double mass(const HypothesisSet& h) const { return masses_[h.mask()]; }
  double mass(SubsetMask mask) const { return masses_[mask]; }

  // Focal elements (mass > 0) in increasing mask order.
  std::vector<Focal> focal_elements() const;
  bool is_vacuous() const;
  double total() const;

  friend bool operator==(const MassFunction&, const MassFunction&) = default;

 private:
  std::array<double, kSubsetCount> masses_{};
};

struct CombinationResult {
  MassFunction combined;
  double conflict = 0.0;
};

// m(focus) = belief, m(full) = 1 - belief.
struct SimpleSupport {
  HypothesisSet focus;
  double belief;
};

MassFunction from_simple_support(const SimpleSupport& s);

// Dempster's rule. Throws TotalConflictError on fully contradictory input.
CombinationResult combine(const MassFunction& a, const MassFunction& b);

// Left fold of combine. The reported conflict is 1 - prod(1 - K_i), the mass
// a single joint normalization would discard. Throws std::invalid_argument
// on an empty list.
CombinationResult combine_all(std::span<const MassFunction> masses);

// Bel(h) = sum of m(A) over A subset of h.
double belief_of(const MassFunction& m, const HypothesisSet& h);
// Pl(h) = sum of m(A) over A intersecting h.
double plausibility_of(const MassFunction& m, const HypothesisSet& h);

// Shifts a fraction alpha of every non-full focal mass onto the full frame.
MassFunction discount_mass(const MassFunction& m, double alpha);

struct IntensityDecision {
  HypothesisSet intensity;
  double belief;
};

// Maximum-mass focal element other than the full frame. Ties (within 1e-12)
// go to the smaller set, then the midpoint closest to IF, then the lowest
// scale order. A vacuous mass yields (full, 0).
IntensityDecision decide_intensity(const MassFunction& m);

}  // namespace ssm::dst
