#pragma once

#include <optional>
#include <vector>

#include "mixcex/rational.hpp"

namespace mixcex {

// One removed open interval of the Smith-Volterra-Cantor construction.
struct Interval {
  int index = 0;       // 1-based, enumerated generation by generation, left to right
  Rat a, b;            // exact endpoints, 0 < a < b < 1
  int generation = 0;  // stage that removed it; length is ratio * 4^-generation

  Rat length() const { return b - a; }
  Rat midpoint() const { return (a + b) / 2; }
  bool contains(const Rat& y) const { return a < y && y < b; }
};

// Depth-K approximant of a fat Cantor set B in [0,1]: the 2^K - 1 removed
// intervals plus an exact measure ledger.  Immutable after build; queries are
// read-only and safe under concurrent readers.
struct CantorSet {
  int depth = 0;
  Rat ratio;                         // stage-g removal length is ratio * 4^-g
  std::vector<Interval> intervals;   // sorted by (generation, a) == by index
  std::vector<int> by_position;      // interval indices (1-based) sorted by a
  Rat removed_measure;               // exact sum of removed lengths

  // Cached doubles for the fast evaluation path, aligned with by_position.
  std::vector<double> pos_a, pos_b;

  int count() const { return static_cast<int>(intervals.size()); }
  const Interval& interval(int n) const;  // 1-based; domain-checked
};

// Builds the depth-K set.  Stage g removes a centered open interval of length
// ratio * 4^-g from each of the 2^(g-1) closed intervals remaining after
// stage g-1.  All endpoints exact rationals.  Throws domain_error unless
// depth >= 1 and 0 < ratio <= 1.
CantorSet build_cantor(int depth, const Rat& ratio);

// True iff y lies in no removed open interval (endpoints count as inside B).
// Throws domain_error for y outside [0,1].
bool in_B(const CantorSet& c, const Rat& y);

// Index of the open interval strictly containing y, or nullopt.  Exact.
std::optional<int> locate_removed(const CantorSet& c, const Rat& y);

// Double-precision locate for hot paths: returns 0 if y is (to double
// comparison) outside every removed interval.
int locate_removed_fast(const CantorSet& c, double y);

// Smallest-index interval I_k with k > m and I_k contained in
// (y0 - delta, y0 + delta).  Requires in_B(c, y0), delta > 0, m >= 1.
// Throws depth_exhausted_error when the built depth has no such interval
// (the caller may rebuild deeper).
const Interval& find_interval_near(const CantorSet& c, const Rat& y0, const Rat& delta, int m);

// Exact distance from a point to the nearest removed interval other than
// self_index (0 = no exclusion).  Distance to an interval is 0 inside it.
Rat distance_to_other_interval(const CantorSet& c, const Rat& point, int self_index);

// Length of the longest maximal run of [0,1] that meets no removed interval,
// i.e. the longest closed piece of the depth-K approximant of B.
Rat max_removed_free_run(const CantorSet& c);

}  // namespace mixcex
