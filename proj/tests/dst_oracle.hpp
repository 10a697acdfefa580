#pragma once

// Test-only reference for Dempster's rule. Works on explicit point sets and
// normalizes once over the joint product of all focal elements, so it shares
// no code path with the bitmask fold in ssm::dst.

#include <map>
#include <random>
#include <set>
#include <vector>

#include "ssm/dst.hpp"

namespace ssm::oracle {

using PointSet = std::set<int>;
using Body = std::map<PointSet, double>;

inline Body to_body(const dst::MassFunction& m) {
  Body b;
  for (const auto& [h, v] : m.focal_elements()) {
    PointSet s;
    for (auto p : h.points()) s.insert(index_of(p));
    b[s] += v;
  }
  return b;
}

struct JointResult {
  Body combined;  // normalized, empty set excluded
  double empty_mass = 0.0;
};

inline JointResult joint_combination(const std::vector<Body>& bodies) {
  Body raw;  // unnormalized, may contain the empty set
  raw[PointSet{0, 1, 2, 3, 4, 5, 6}] = 1.0;
  for (const auto& body : bodies) {
    Body next;
    for (const auto& [acc_set, acc_mass] : raw) {
      for (const auto& [set, mass] : body) {
        PointSet meet;
        for (int p : acc_set) {
          if (set.count(p)) meet.insert(p);
        }
        next[meet] += acc_mass * mass;
      }
    }
    raw = std::move(next);
  }
  JointResult out;
  out.empty_mass = raw.count(PointSet{}) ? raw[PointSet{}] : 0.0;
  for (const auto& [set, mass] : raw) {
    if (!set.empty()) out.combined[set] = mass / (1.0 - out.empty_mass);
  }
  return out;
}

inline PointSet points_of(const HypothesisSet& h) {
  PointSet s;
  for (auto p : h.points()) s.insert(index_of(p));
  return s;
}

// Random mass function with 1..max_focal distinct non-empty focal elements.
inline dst::MassFunction random_mass(std::mt19937_64& rng, int max_focal,
                                     bool include_full = false) {
  std::uniform_int_distribution<int> count_dist(1, max_focal);
  std::uniform_int_distribution<int> mask_dist(1, kFullMask);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  const int count = count_dist(rng);
  std::map<int, double> weights;
  while (static_cast<int>(weights.size()) < count) weights[mask_dist(rng)] = weight(rng);
  if (include_full) weights[kFullMask] = weight(rng);
  double total = 0.0;
  for (const auto& [_, w] : weights) total += w;
  std::array<double, kSubsetCount> dense{};
  for (const auto& [mask, w] : weights) dense[mask] = w / total;
  return dst::MassFunction::from_dense(dense);
}

}  // namespace ssm::oracle
