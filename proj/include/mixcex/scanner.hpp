#pragma once

#include <cstdint>
#include <vector>

#include "mixcex/numdiff.hpp"

namespace mixcex {

struct ScanConfig {
  Rect rect{0, 1, 0, 1};
  int grid_nx = 64, grid_ny = 64;
  int m_max = 8;    // cap on the oscillation quantifier
  int n_max = 64;   // cap on the window quantifier
  int subsample = 4;  // deterministic samples per window side; >= 4
};

// Grid classification: per point, does x -> f(x, y) look continuous (A), does
// the two-sided difference quotient look Cauchy (B), and the conjunction (E).
// Sampling makes each flag an over-approximation of the true closed-set
// membership, so exclusions are the load-bearing results.
struct ExistenceMap {
  ScanConfig cfg;
  std::vector<double> xs, ys;
  std::vector<std::uint8_t> in_A, in_B, in_E;  // row-major [iy * nx + ix]

  int nx() const { return static_cast<int>(xs.size()); }
  int ny() const { return static_cast<int>(ys.size()); }
  bool e_at(int ix, int iy) const {
    return in_E[static_cast<std::size_t>(iy) * xs.size() + static_cast<std::size_t>(ix)] != 0;
  }
  int count_in_E() const;
  // Columns whose every row fails the E test.
  std::vector<int> fully_excluded_columns() const;
};

// Window membership surrogates.  Sample offsets follow the van der Corput
// sequence, so a larger subsample count only adds points: a failed test can
// never pass again by sampling more.  Windows are open; samples stay strictly
// interior.  Throws step_geometry_error if (x - 1/n, x + 1/n) leaves the
// rectangle of f.
//
// test_A_mn: |f(u,y) - f(v,y)| <= 1/m over all sampled pairs u, v.
// test_B_mn: |Q(u,v) - Q(u',v')| <= 1/m over sampled u, u' right of x and
//            v, v' left of x, where Q is the two-sided difference quotient.
bool test_A_mn(const FunctionHandle& f, double x, double y, int m, int n, int subsample);
bool test_B_mn(const FunctionHandle& f, double x, double y, int m, int n, int subsample);

// Per grid point: in-A iff some window n <= n_max passes test_A at m = m_max
// (for fixed samples the m-thresholds are nested, so passing the tightest m
// settles every smaller one), likewise in-B; in-E is the conjunction.
// Deterministic; rows may be scanned in parallel.
ExistenceMap scan(const FunctionHandle& f, const ScanConfig& cfg, int threads = 1);

}  // namespace mixcex
