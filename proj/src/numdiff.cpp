#include "mixcex/numdiff.hpp"

#include <cmath>
#include <cstdio>

#include "mixcex/errors.hpp"

namespace mixcex {

namespace {

void check_steps(const std::vector<double>& steps) {
  if (steps.empty()) throw domain_error("finite differences need at least one step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0)) throw domain_error("steps must be positive");
    if (i > 0 && !(steps[i] < steps[i - 1])) throw domain_error("steps must strictly decrease");
  }
}

void check_stencil(const FunctionHandle& f, double x, double y, double ex, double ey) {
  if (!f.rect.contains(x - ex, y - ey) || !f.rect.contains(x + ex, y + ey))
    throw step_geometry_error("stencil leaves the rectangle of '" + f.tag + "' at (" +
                              std::to_string(x) + ", " + std::to_string(y) + ")");
}

void finish_report(QuotientReport& r) {
  const std::size_t n = r.estimates.size();
  r.richardson = n >= 2 ? (4.0 * r.estimates[n - 1] - r.estimates[n - 2]) / 3.0
                        : r.estimates.back();
  if (!r.reference) return;
  r.errors.reserve(n);
  for (double e : r.estimates) r.errors.push_back(std::fabs(e - *r.reference));
  if (n < 3) return;
  // Least-squares slope of log|err| against log h; meaningless if any error
  // underflows to zero (exact reproduction), so skip in that case.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.errors[i] <= 0.0) return;
    const double lx = std::log2(r.steps[i]), ly = std::log2(r.errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom != 0.0) r.observed_order = (n * sxy - sx * sy) / denom;
}

}  // namespace

std::string partial_name(Partial p) {
  switch (p) {
    case Partial::X: return "x";
    case Partial::Y: return "y";
    case Partial::XX: return "xx";
    case Partial::YY: return "yy";
  }
  return "?";
}

std::vector<double> step_ladder(double base, int count) {
  if (!(base > 0) || count < 1) throw domain_error("step_ladder: base > 0 and count >= 1");
  std::vector<double> steps(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) steps[static_cast<std::size_t>(i)] = std::ldexp(base, -i);
  return steps;
}

FunctionHandle make_control(const std::string& name) {
  FunctionHandle h;
  h.tag = name;
  h.rect = Rect{-4, 4, -4, 4};
  if (name == "smooth") {
    h.f = [](double x, double y) { return std::sin(x) * std::cos(y); };
  } else if (name == "abs-x") {
    h.f = [](double x, double) { return std::fabs(x); };
  } else if (name == "bilinear") {
    h.f = [](double x, double y) { return x * y; };
  } else if (name == "constant") {
    h.f = [](double, double) { return 1.0; };
  } else {
    throw domain_error("unknown control function: '" + name + "'");
  }
  return h;
}

FunctionHandle make_instance_handle(const Instance& inst) {
  FunctionHandle h;
  h.tag = "instance";
  h.rect = Rect{-2, 3, 0, 1};
  h.instance = &inst;
  h.f = [&inst](double x, double y) { return eval_f(inst, x, y); };
  return h;
}

QuotientReport fd_partial(const FunctionHandle& f, double x, double y, Partial which,
                          const std::vector<double>& steps, std::optional<double> reference) {
  check_steps(steps);
  QuotientReport r;
  r.x = x;
  r.y = y;
  r.which = partial_name(which);
  r.steps = steps;
  r.reference = reference;
  const bool in_x = which == Partial::X || which == Partial::XX;
  check_stencil(f, x, y, in_x ? steps.front() : 0.0, in_x ? 0.0 : steps.front());
  r.estimates.reserve(steps.size());
  for (double h : steps) {
    double est = 0;
    switch (which) {
      case Partial::X: est = (f(x + h, y) - f(x - h, y)) / (2 * h); break;
      case Partial::Y: est = (f(x, y + h) - f(x, y - h)) / (2 * h); break;
      case Partial::XX: est = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h); break;
      case Partial::YY: est = (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h); break;
    }
    r.estimates.push_back(est);
  }
  finish_report(r);
  return r;
}

QuotientReport fd_mixed(const FunctionHandle& f, double x, double y,
                        const std::vector<double>& steps, std::optional<double> reference,
                        double x_scale, double y_scale) {
  check_steps(steps);
  if (!(x_scale > 0) || !(y_scale > 0)) throw domain_error("fd_mixed: scales must be positive");
  QuotientReport r;
  r.x = x;
  r.y = y;
  r.which = "xy";
  r.steps = steps;
  r.reference = reference;
  check_stencil(f, x, y, steps.front() * x_scale, steps.front() * y_scale);
  r.estimates.reserve(steps.size());
  for (double h : steps) {
    const double hx = h * x_scale, hy = h * y_scale;
    const double est = (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) +
                        f(x - hx, y - hy)) /
                       (4 * hx * hy);
    r.estimates.push_back(est);
  }
  finish_report(r);
  return r;
}

std::string quotient_report_csv(const QuotientReport& r) {
  std::string out;
  char buf[160];
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    if (r.reference)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,%.17g,%.17g\n", r.x, r.y,
                    r.which.c_str(), r.steps[i], r.estimates[i], r.errors[i]);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,%.17g,\n", r.x, r.y, r.which.c_str(),
                    r.steps[i], r.estimates[i]);
    out += buf;
  }
  return out;
}

double interior_base_step(const Instance& inst, double y, Partial which, double base) {
  if (!(base > 0)) throw domain_error("interior_base_step: base must be positive");
  const int n = locate_removed_fast(inst.set, y);
  if (n == 0) return base;
  double b = base;
  if (which == Partial::Y || which == Partial::YY) {
    const Interval& iv = inst.set.interval(n);
    const double dist = std::min(y - to_double(iv.a), to_double(iv.b) - y);
    while (b >= dist && b > 0) b /= 2;
  } else {
    // Resolve the active oscillator: 2 pi q h <= 1/4.
    const double omega = 2.0 * 3.141592653589793 * to_double(inst.schedule.entry(n).freq);
    while (b * omega > 0.25 && b > 0) b /= 2;
  }
  if (b <= 0) throw domain_error("interior_base_step: no positive step fits");
  return b;
}

}  // namespace mixcex
