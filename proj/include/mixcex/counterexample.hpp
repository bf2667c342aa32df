#pragma once

#include <optional>
#include <vector>

#include "mixcex/bump.hpp"
#include "mixcex/cantor.hpp"
#include "mixcex/kernels.hpp"

namespace mixcex {

// Per-term bounds on the y-derivatives of phi_n(x) psi_n(y):
//   sup |d/dy|   <= eps_n * sup|psi'|  / |I_n|
//   sup |d2/dy2| <= eps_n * sup|psi''| / |I_n|^2
// Under the default eps rule both sequences decay like |I_n|^2 and |I_n|,
// which is what justifies differentiating the sum term by term in y.
struct TailBound {
  int index = 0;
  int generation = 0;
  Rat d1_bound, d2_bound;  // exact rational upper bounds
};

struct TailCertificate {
  std::vector<TailBound> per_index;
  Rat sup_d1, sup_d2;  // maxima over all indices
  bool d1_nonincreasing = false;  // along the enumeration order
  bool d2_nonincreasing = false;
};

// The fully assembled object: f(x,y) = sum_n phi_n(x) psi_n(y) on [0,1]^2,
// where psi_n(y) = psi((y - a_n)/(b_n - a_n)).  The supports are pairwise
// disjoint, so for any fixed y at most one term is nonzero and the depth-K
// object is evaluated exactly, not truncated.  Immutable after assembly.
struct Instance {
  CantorSet set;
  BumpProfile profile;
  KernelSchedule schedule;
  TailCertificate tail;

  int depth() const { return set.depth; }
  int term_count() const { return set.count(); }
};

// Validates that the schedule was built from the same set (same term count
// and interval lengths); throws mismatch_error otherwise.
Instance assemble(CantorSet set, BumpProfile profile, KernelSchedule schedule);
Instance assemble_default(int depth, const Rat& ratio);

// Closed-form values of f and its four separate partials at a rational point.
// If y lies in no removed interval every value is exactly zero.
struct Eval {
  Rat x, y;
  double f = 0, fx = 0, fy = 0, fxx = 0, fyy = 0;
  double f_err = 0, fx_err = 0, fy_err = 0, fxx_err = 0, fyy_err = 0;
  std::optional<int> active;  // index of the single nonzero term, if any
  bool exact_zero = false;
};

Eval eval_all(const Instance& inst, const Rat& x, const Rat& y);

// Grid-speed double paths (exact phase reduction inside, see phi_fast).
// x may leave [0,1] (the formula extends periodically); y outside every
// removed interval gives exactly 0.
double eval_f(const Instance& inst, double x, double y);
double eval_partial(const Instance& inst, double x, double y, int x_order, int y_order);

// A discontinuity certificate at (x0, y0): y0 in B, x0 in the joint tail
// A_m cap ... cap A_N, and a removed interval I_k (k > m) within delta of y0
// whose bump peak y_k realizes |f'_x(x0, y_k) - f'_x(x0, y0)| >= max psi,
// while f'_x(x0, y0) = 0 exactly.
struct Witness {
  Rat x0, y0;
  int m = 0, k = 0;
  Rat y_k;     // peak of psi_k: a_k + argmax * |I_k|
  Rat delta;   // scale at which this witness was requested
  double osc = 0;      // |f'_x(x0, y_k) - f'_x(x0, y0)| = |phi_k'(x0)| * max psi
  double osc_err = 0;
  Rat bound;           // certified lower bound: max psi (lo side)
  bool certified = false;  // |phi_k'(x0)| >= 1 established in exact arithmetic
};

Witness make_witness(const Instance& inst, const Rat& y0, int m, const Rat& delta,
                     int budget = 4096);

// Witness ladder at shrinking scales sharing one x0: scale i+1 is half the
// realized distance |y_k - y0| of scale i, so distances strictly decrease and
// the oscillation lower bounds at least double step over step.
std::vector<Witness> witness_ladder(const Instance& inst, const Rat& y0, int m, const Rat& delta0,
                                    int scales, int budget = 4096);

// Difference quotients of f'_x in the y-direction across a witness sequence:
// (f'_x(x0, y_k) - f'_x(x0, y0)) / (y_k - y0).  |quotient| >= maxpsi/|step|,
// so the magnitudes grow without bound as the scales shrink; this is what
// rules out f''_xy at (x0, y0).
struct QuotientProbeRow {
  Rat step;           // y_k - y0 (signed)
  double quotient;
  double lower_bound;  // maxpsi / |step|, certified when the witness is
};
std::vector<QuotientProbeRow> mixed_quotient_probe(const Instance& inst,
                                                   const std::vector<Witness>& ladder);
std::vector<QuotientProbeRow> mixed_quotient_probe(const Instance& inst, const Witness& w);

}  // namespace mixcex
