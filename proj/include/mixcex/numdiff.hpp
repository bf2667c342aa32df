#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mixcex/counterexample.hpp"

namespace mixcex {

struct Rect {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool contains(double x, double y) const { return x0 <= x && x <= x1 && y0 <= y && y <= y1; }
};

// A black-box real function on a rectangle.  Instance-backed handles keep a
// pointer to the instance (not owned) so the difference engine can query
// interval geometry for interior-safe steps.
struct FunctionHandle {
  std::string tag;
  Rect rect;
  std::function<double(double, double)> f;
  const Instance* instance = nullptr;

  double operator()(double x, double y) const { return f(x, y); }
};

// Built-in controls: "smooth" (sin x cos y), "abs-x" (|x|), "bilinear" (x y),
// "constant" (1).  All are total on a generous rectangle.
FunctionHandle make_control(const std::string& name);

// The assembled function on [0,1]^2; the x-direction extends periodically so
// windows near the edge stay evaluable.  The instance must outlive the handle.
FunctionHandle make_instance_handle(const Instance& inst);

enum class Partial { X, Y, XX, YY };
std::string partial_name(Partial p);

struct QuotientReport {
  double x = 0, y = 0;
  std::string which;
  std::vector<double> steps;
  std::vector<double> estimates;
  double richardson = 0;  // extrapolation of the last two estimates (order 2)
  std::optional<double> reference;
  std::vector<double> errors;             // |estimate - reference| per step
  std::optional<double> observed_order;   // log-log LS slope; needs >= 3 steps
};

// Geometric ladder with ratio 1/2 starting at base (default 2^-6).
std::vector<double> step_ladder(double base = 1.0 / 64, int count = 4);

// Central differences of f at (x, y) per step.  Steps must be strictly
// decreasing.  Throws step_geometry_error when a stencil leaves the handle's
// rectangle.
QuotientReport fd_partial(const FunctionHandle& f, double x, double y, Partial which,
                          const std::vector<double>& steps,
                          std::optional<double> reference = std::nullopt);

// Symmetric mixed second difference
//   (f(x+hx, y+hy) - f(x+hx, y-hy) - f(x-hx, y+hy) + f(x-hx, y-hy)) / (4 hx hy)
// with hx = h * x_scale, hy = h * y_scale.  Unequal scales realize the two
// nesting orders (x-then-y vs y-then-x) as genuinely different stencils.
QuotientReport fd_mixed(const FunctionHandle& f, double x, double y,
                        const std::vector<double>& steps,
                        std::optional<double> reference = std::nullopt, double x_scale = 1.0,
                        double y_scale = 1.0);

// CSV rows "x,y,which,step,estimate,error" (error column empty without a
// reference), one row per step; no header.
std::string quotient_report_csv(const QuotientReport& r);

// Interior mode for instance-backed handles: halves base until (a) y-stencils
// stay strictly inside the removed interval containing y, and (b) x-stencils
// resolve the active oscillator (2 pi q h <= 1/4).  The result is base * 2^-k,
// so ladders remain exact binary with ratio 1/2.  Returns base unchanged when
// y lies in no removed interval.
double interior_base_step(const Instance& inst, double y, Partial which, double base = 1.0 / 64);

}  // namespace mixcex
