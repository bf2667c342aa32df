#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mixcex/counterexample.hpp"
#include "mixcex/numdiff.hpp"

namespace mixcex {

// Total variation of the piecewise-linear interpolant through the samples.
// Sampled data cannot upper-bound the variation of an oscillatory function,
// so this is always reported as a certified lower bound.  Coordinates must be
// strictly increasing.
double variation_1d(std::span<const double> coords, std::span<const double> values);

// Per-section variation lower bounds along one axis, with a trapezoid
// estimate of the integral over sections.
struct VariationProfile {
  int axis = 0;  // 1: V_1(x), variation of y -> f(x,y); 2: V_2(y), variation of x -> f(x,y)
  std::vector<double> coords;
  std::vector<double> values;
  double integral = 0;
};

// Grid profiles of both Tonelli variations on a rectangle.
std::pair<VariationProfile, VariationProfile> tonelli_profile(const FunctionHandle& f,
                                                              const Rect& rect, int grid_nx,
                                                              int grid_ny);

// Exact x-variation of the section F_y(x) = f'_y(x, y).  For y inside I_n,
// F_y(x) = phi_n(x) psi_n'(y), so Var_x F_y = |psi_n'(y)| * 2 eps_n q_n (each
// of the q_n oscillator periods swings up eps_n and back).  Zero when y lies
// in no removed interval.  Requires the exact (polynomial) profile.
struct SectionVariation {
  Rat y;
  std::optional<int> interval_index;
  Rat exact_value;
  double value = 0;
};

struct Cor23Report {
  std::vector<SectionVariation> sections;
  // Section variation at the quarter-point of the first interval of each
  // generation: under the default schedules this grows without bound, which
  // is why finite x-variation of the f'_y sections is not available here and
  // no contradiction arises with the a.e. existence results it would imply.
  std::vector<std::pair<int, Rat>> generation_growth;
  bool growing_across_generations = false;
};

Cor23Report check_cor23_hypothesis(const Instance& inst, const std::vector<Rat>& y_sections);
std::vector<Rat> default_cor23_sections(const Instance& inst);

// Absolute integrability ledger: exact per-generation partial sums of
// integral |f''_xx| over the square against the uniform bound on |f''_yy|.
// Term n contributes  (integral_0^1 |phi_n''|) * (integral psi_n)
//                   = (eps_n omega_n^2 / pi) * |I_n| * integral psi
// with omega_n = 2 pi q_n, since integral_0^1 |cos(2 pi q x)| dx = 2/pi for
// integer q.  The rational core eps_n q_n^2 |I_n| integral-psi is exact; the
// full value is 4 pi times the core.
struct IntegrabilityReport {
  std::vector<int> generations;
  std::vector<Rat> fxx_partial_core;   // cumulative, exact
  std::vector<double> fxx_partial;     // 4 pi * core
  std::vector<Rat> fxx_increment_core; // per-generation increments, exact
  bool partials_strictly_increasing = false;
  bool increments_strictly_increasing = false;
  Rat fyy_sup_bound;         // sup|psi''| * max_n eps_n/|I_n|^2, exact upper bound
  double fyy_sup_observed = 0;  // sup of |f''_yy| over the sample grid
  int sup_grid = 0;
};

IntegrabilityReport integrability_report(const Instance& inst, int sup_grid = 200);

}  // namespace mixcex
