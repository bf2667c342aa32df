#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixcex/cantor.hpp"
#include "mixcex/rational.hpp"

namespace mixcex {

// Per-index schedule record.  The oscillator attached to interval n is
//   phi_n(x) = (eps/2) * (1 - cos(2 pi freq x)),
// so phi_n maps [0,1] into [0, eps] and phi_n' has amplitude eps * pi * freq.
struct ScheduleEntry {
  int index = 0;
  int generation = 0;
  Rat len;    // |I_n|, copied from the set so certificates are self-contained
  Rat eps;    // amplitude; default rule: |I_n|^3
  Rat delta;  // measure allowance; default rule: 1/(n(n+1))
  Int freq;   // q_n: smallest integer with pi * eps * q * sin(pi*delta/2) > 1

  // Cached doubles for hot evaluation paths (exact rationals stay the truth).
  double eps_d = 0;  // eps rounded toward zero
  double amp1_d = 0;  // eps * pi * freq     (|phi'| bound)
  double amp2_d = 0;  // 2 pi^2 freq^2 eps   (|phi''| bound)
  double thresh_d = 0;  // c_n = 1/(pi * eps * freq), the |sin| threshold of A_n
};

// The eps/delta/frequency schedule for every removed interval, with exact
// partial sums of delta.  Immutable after construction.
class KernelSchedule {
public:
  int count() const { return static_cast<int>(entries_.size()); }
  const ScheduleEntry& entry(int n) const;  // 1-based
  const std::vector<ScheduleEntry>& entries() const { return entries_; }

  const std::string& eps_rule() const { return eps_rule_; }
  const std::string& delta_rule() const { return delta_rule_; }

  // Sum of delta_n over m..N, exact.
  Rat delta_tail(int m) const;
  Rat delta_total() const { return delta_tail(1); }

  // Tail of the full infinite series, exact; only the triangular rule has a
  // closed form (1/m).
  bool has_closed_form_tail() const { return delta_rule_ == "triangular"; }
  Rat delta_tail_infinite(int m) const;

  // eps_n / |I_n|^2, the quantity that must shrink along the enumeration.
  Rat shrink_ratio(int n) const;

  friend KernelSchedule make_schedule_impl(const CantorSet&, std::vector<Rat>, std::vector<Rat>,
                                           std::string, std::string);

private:
  std::vector<ScheduleEntry> entries_;
  std::vector<Rat> delta_prefix_;  // delta_prefix_[i] = sum of delta_1..delta_i
  std::string eps_rule_, delta_rule_;
};

// Default rules: eps_n = |I_n|^3 (the shrink ratio is then exactly |I_n|) and
// delta_n = 1/(n(n+1)) (total mass exactly 1, tail from m exactly 1/m).
KernelSchedule make_schedule(const CantorSet& c);

// Explicit per-index tables (sizes must equal the interval count).  Tables
// are validated: positive entries, shrink ratio nonincreasing and bounded by
// |I_1|, and total delta mass at most 1 (the finite stand-in for a summable
// series; it also keeps the tail bounds usable).  Violations throw
// schedule_violation_error.
KernelSchedule make_schedule(const CantorSet& c, const std::vector<Rat>& eps_table,
                             const std::vector<Rat>& delta_table);

// Oscillator values with rounding-error bounds.  The phase 2 pi q x is
// reduced exactly in integer arithmetic before any floating point touches it,
// so the bounds are a few ulps of the natural scale no matter how large q is.
struct OscillatorEval {
  double value = 0, d1 = 0, d2 = 0;
  double value_err = 0, d1_err = 0, d2_err = 0;
};

// phi_n and derivatives at rational x in [0,1].
OscillatorEval phi_eval(const KernelSchedule& s, int n, const Rat& x);

// Double-precision path for grids and finite differences: the phase is still
// reduced exactly (a double is a dyadic rational), only the trig is rounded.
// Accepts any finite x; phi extends periodically.
double phi_fast(const ScheduleEntry& e, double x, int order);

// Certified membership in A_n = { x : |phi_n'(x)| >= 1 }.
// Decided by sign(pi * eps * q * |sin(2 pi frac(q x))| - 1); the two sides
// are never equal at rational x, so the answer is exact.
bool in_A_n(const KernelSchedule& s, int n, const Rat& x);

// Strict certified check of the measure condition for index n:
// (2/pi) * arcsin(c_n) < delta_n, verified as pi * eps * q * sin(pi*delta/2) > 1.
bool measure_condition_certified(const KernelSchedule& s, int n);

// Analytic measure of A_n: 1 - (2/pi) * arcsin(c_n).
double measure_A_analytic(const ScheduleEntry& e);

// Monte Carlo estimate of the measure of A_n with a stateless counter-based
// generator: deterministic for a given seed under any thread count.
double measure_A_mc(const ScheduleEntry& e, long samples, std::uint64_t seed, int threads = 1);

// Deterministic dyadic sweep for a point of the joint tail
// A_m cap ... cap A_{n_max}: tries j/2^d, d = 1,2,..., odd j, and returns the
// first hit.  budget caps the number of candidates.  Throws
// search_exhausted_error when the budget is spent (the caller may raise m or
// the budget).
Rat find_point_in_tail(const KernelSchedule& s, int m, int n_max, int budget = 4096);

}  // namespace mixcex
