#include "ssm/dst.hpp"

#include <cmath>
#include <stdexcept>
#include <algorithm>
#include <string>

namespace ssm::dst {
namespace {

void check_masses(const std::array<double, kSubsetCount>& masses) {
  if (masses[0] != 0.0) {
    throw std::invalid_argument("mass function assigns mass to the empty set");
  }
  double sum = 0.0;
  for (double v : masses) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("mass outside [0,1]: " + std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kUnitSumTolerance) {
    throw std::invalid_argument("masses sum to " + std::to_string(sum) +
                                ", expected 1");
  }
}

}  // namespace

MassFunction::MassFunction() { masses_[kFullMask] = 1.0; }

MassFunction::MassFunction(std::span<const Focal> assignments) {
  for (const auto& [h, v] : assignments) masses_[h.mask()] += v;
  check_masses(masses_);
}

MassFunction MassFunction::from_dense(
    const std::array<double, kSubsetCount>& dense) {
  check_masses(dense);
  MassFunction m;
  m.masses_ = dense;
  return m;
}

std::vector<MassFunction::Focal> MassFunction::focal_elements() const {
  std::vector<Focal> out;
  for (int mask = 1; mask < kSubsetCount; ++mask) {
    if (masses_[mask] > 0.0) {
      out.emplace_back(HypothesisSet::from_mask(static_cast<SubsetMask>(mask)),
                       masses_[mask]);
    }
  }
  return out;
}

bool MassFunction::is_vacuous() const { return masses_[kFullMask] == 1.0; }

double MassFunction::total() const {
  double sum = 0.0;
  for (double v : masses_) sum += v;
  return sum;
}

MassFunction from_simple_support(const SimpleSupport& s) {
  if (!(s.belief >= 0.0 && s.belief <= 1.0)) {
    throw std::invalid_argument("simple support belief outside [0,1]");
  }
  std::array<double, kSubsetCount> dense{};
  dense[s.focus.mask()] += s.belief;
  dense[kFullMask] += 1.0 - s.belief;
  return MassFunction::from_dense(dense);
}

CombinationResult combine(const MassFunction& a, const MassFunction& b) {
  const auto& ma = a.dense();
  const auto& mb = b.dense();
  std::array<double, kSubsetCount> joint{};
  double conflict = 0.0;
  for (int x = 1; x < kSubsetCount; ++x) {
    if (ma[x] == 0.0) continue;
    for (int y = 1; y < kSubsetCount; ++y) {
      if (mb[y] == 0.0) continue;
      const int meet = x & y;
      const double product = ma[x] * mb[y];
      if (meet == 0) {
        conflict += product;
      } else {
        joint[meet] += product;
      }
    }
  }
  const double norm = 1.0 - conflict;
  if (norm < kTotalConflictTolerance) {
    throw TotalConflictError("total conflict: the two bodies of evidence are "
                             "fully contradictory");
  }
  if (conflict != 0.0) {
    // Division can overshoot 1 by an ulp when a single focal element remains.
    for (double& v : joint) v = std::min(v / norm, 1.0);
  }
  return {MassFunction::from_dense(joint), conflict};
}

CombinationResult combine_all(std::span<const MassFunction> masses) {
  if (masses.empty()) {
    throw std::invalid_argument("combine_all needs at least one mass function");
  }
  CombinationResult acc{masses.front(), 0.0};
  double retained = 1.0;
  for (std::size_t i = 1; i < masses.size(); ++i) {
    auto step = combine(acc.combined, masses[i]);
    retained *= 1.0 - step.conflict;
    acc.combined = std::move(step.combined);
  }
  acc.conflict = 1.0 - retained;
  return acc;
}

double belief_of(const MassFunction& m, const HypothesisSet& h) {
  const int target = h.mask();
  double sum = 0.0;
  for (int a = 1; a < kSubsetCount; ++a) {
    if ((a & target) == a) sum += m.mass(static_cast<SubsetMask>(a));
  }
  return sum;
}

double plausibility_of(const MassFunction& m, const HypothesisSet& h) {
  const int target = h.mask();
  double sum = 0.0;
  for (int a = 1; a < kSubsetCount; ++a) {
    if ((a & target) != 0) sum += m.mass(static_cast<SubsetMask>(a));
  }
  return sum;
}

MassFunction discount_mass(const MassFunction& m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("discount factor outside [0,1]");
  }
  if (alpha == 0.0) return m;
  if (alpha == 1.0) return MassFunction::vacuous();
  std::array<double, kSubsetCount> out{};
  const auto& in = m.dense();
  for (int a = 1; a < kFullMask; ++a) out[a] = (1.0 - alpha) * in[a];
  out[kFullMask] = alpha + (1.0 - alpha) * in[kFullMask];
  return MassFunction::from_dense(out);
}

IntensityDecision decide_intensity(const MassFunction& m) {
  constexpr double kTieTolerance = 1e-12;

  // True when a should be preferred over b at equal mass.
  auto tie_break = [](const HypothesisSet& a, const HypothesisSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    const double da = std::abs(a.midpoint_index() - index_of(Intensity::IF));
    const double db = std::abs(b.midpoint_index() - index_of(Intensity::IF));
    if (da != db) return da < db;
    return a.points() < b.points();
  };

  std::optional<HypothesisSet> best;
  double best_mass = 0.0;
  for (const auto& [h, v] : m.focal_elements()) {
    if (h.is_full()) continue;
    if (!best || v > best_mass + kTieTolerance ||
        (std::abs(v - best_mass) <= kTieTolerance && tie_break(h, *best))) {
      if (!best || v > best_mass) best_mass = v;
      best = h;
    }
  }
  if (!best) return {HypothesisSet::full(), 0.0};
  return {*best, belief_of(m, *best)};
}

}  // namespace ssm::dst
