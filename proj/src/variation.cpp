#include "mixcex/variation.hpp"

#include <cmath>
#include <numbers>

#include "mixcex/errors.hpp"

namespace mixcex {

double variation_1d(std::span<const double> coords, std::span<const double> values) {
  if (coords.size() != values.size()) throw domain_error("variation_1d: size mismatch");
  if (coords.empty()) throw domain_error("variation_1d: empty sample");
  double total = 0;
  for (std::size_t i = 1; i < coords.size(); ++i) {
    if (!(coords[i] > coords[i - 1]))
      throw domain_error("variation_1d: coordinates must strictly increase");
    total += std::fabs(values[i] - values[i - 1]);
  }
  return total;
}

std::pair<VariationProfile, VariationProfile> tonelli_profile(const FunctionHandle& f,
                                                              const Rect& rect, int grid_nx,
                                                              int grid_ny) {
  if (grid_nx < 2 || grid_ny < 2) throw domain_error("tonelli_profile: grids need >= 2 points");
  std::vector<double> xs(static_cast<std::size_t>(grid_nx)), ys(static_cast<std::size_t>(grid_ny));
  for (int i = 0; i < grid_nx; ++i)
    xs[static_cast<std::size_t>(i)] = rect.x0 + (rect.x1 - rect.x0) * i / (grid_nx - 1);
  for (int j = 0; j < grid_ny; ++j)
    ys[static_cast<std::size_t>(j)] = rect.y0 + (rect.y1 - rect.y0) * j / (grid_ny - 1);

  // One pass of evaluations, reused by both profiles.
  std::vector<double> vals(static_cast<std::size_t>(grid_nx) * static_cast<std::size_t>(grid_ny));
  for (int j = 0; j < grid_ny; ++j)
    for (int i = 0; i < grid_nx; ++i) {
      try {
        vals[static_cast<std::size_t>(j) * xs.size() + static_cast<std::size_t>(i)] =
            f(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]);
      } catch (const error& ex) {
        throw error(ex.code(), "section x=" + std::to_string(xs[static_cast<std::size_t>(i)]) +
                                   " y=" + std::to_string(ys[static_cast<std::size_t>(j)]) + ": " +
                                   ex.what());
      }
    }

  VariationProfile v1;  // variation of y-sections, one value per x
  v1.axis = 1;
  v1.coords = xs;
  v1.values.resize(xs.size());
  std::vector<double> column(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) column[j] = vals[j * xs.size() + i];
    v1.values[i] = variation_1d(ys, column);
  }

  VariationProfile v2;
  v2.axis = 2;
  v2.coords = ys;
  v2.values.resize(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    std::span<const double> row(&vals[j * xs.size()], xs.size());
    v2.values[j] = variation_1d(xs, row);
  }

  auto trapezoid = [](const std::vector<double>& t, const std::vector<double>& v) {
    double s = 0;
    for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
    return s;
  };
  v1.integral = trapezoid(v1.coords, v1.values);
  v2.integral = trapezoid(v2.coords, v2.values);
  return {std::move(v1), std::move(v2)};
}

Cor23Report check_cor23_hypothesis(const Instance& inst, const std::vector<Rat>& y_sections) {
  if (!inst.profile.exact())
    throw domain_error("check_cor23_hypothesis requires the exact polynomial profile");
  Cor23Report report;
  report.sections.reserve(y_sections.size());
  for (const Rat& y : y_sections) {
    if (sgn(y) < 0 || y > 1) throw domain_error("cor23 section outside [0,1]");
    SectionVariation sv;
    sv.y = y;
    if (auto n = locate_removed(inst.set, y)) {
      sv.interval_index = *n;
      const Interval& iv = inst.set.interval(*n);
      const ScheduleEntry& e = inst.schedule.entry(*n);
      const Rat t = (y - iv.a) / iv.length();
      sv.exact_value = abs(inst.profile.eval_exact(t, 1)) / iv.length() * 2 * e.eps * Rat(e.freq);
    } else {
      sv.exact_value = 0;
    }
    sv.value = to_double(sv.exact_value);
    report.sections.push_back(std::move(sv));
  }

  // Growth ledger at the quarter-point of the first interval per generation.
  Rat prev;
  report.growing_across_generations = true;
  for (int g = 1; g <= inst.depth(); ++g) {
    const int n = 1 << (g - 1);  // first index of generation g
    const Interval& iv = inst.set.interval(n);
    const ScheduleEntry& e = inst.schedule.entry(n);
    const Rat t(1, 4);
    Rat v = abs(inst.profile.eval_exact(t, 1)) / iv.length() * 2 * e.eps * Rat(e.freq);
    if (g > 1 && v <= prev) report.growing_across_generations = false;
    report.generation_growth.emplace_back(g, v);
    prev = std::move(v);
  }
  return report;
}

std::vector<Rat> default_cor23_sections(const Instance& inst) {
  std::vector<Rat> ys;
  // Quarter-point of the first interval of each generation, plus the peak and
  // an endpoint of I_1 and the left edge of the square.
  for (int g = 1; g <= inst.depth(); ++g) {
    const Interval& iv = inst.set.interval(1 << (g - 1));
    ys.push_back(iv.a + iv.length() / 4);
  }
  ys.push_back(inst.set.interval(1).midpoint());
  ys.push_back(inst.set.interval(1).a);
  ys.push_back(Rat(0));
  return ys;
}

IntegrabilityReport integrability_report(const Instance& inst, int sup_grid) {
  if (sup_grid < 2) throw domain_error("integrability_report: sup_grid must be >= 2");
  IntegrabilityReport rep;
  const Rat int_psi = inst.profile.integral().lo;

  Rat running(0), prev_increment;
  rep.partials_strictly_increasing = true;
  rep.increments_strictly_increasing = true;
  for (int g = 1; g <= inst.depth(); ++g) {
    Rat increment(0);
    for (const ScheduleEntry& e : inst.schedule.entries())
      if (e.generation == g) increment += e.eps * Rat(e.freq * e.freq) * e.len * int_psi;
    if (sgn(increment) <= 0) rep.partials_strictly_increasing = false;
    if (g > 1 && increment <= prev_increment) rep.increments_strictly_increasing = false;
    running += increment;
    rep.generations.push_back(g);
    rep.fxx_increment_core.push_back(increment);
    rep.fxx_partial_core.push_back(running);
    rep.fxx_partial.push_back(4.0 * std::numbers::pi * to_double(running));
    prev_increment = std::move(increment);
  }

  Rat max_ratio = inst.schedule.shrink_ratio(1);
  for (int n = 2; n <= inst.schedule.count(); ++n)
    max_ratio = std::max(max_ratio, inst.schedule.shrink_ratio(n));
  rep.fyy_sup_bound = inst.profile.sup_d2().hi * max_ratio;

  rep.sup_grid = sup_grid;
  double sup = 0;
  for (int j = 0; j < sup_grid; ++j)
    for (int i = 0; i < sup_grid; ++i) {
      const double x = static_cast<double>(i) / (sup_grid - 1);
      const double y = static_cast<double>(j) / (sup_grid - 1);
      sup = std::max(sup, std::fabs(eval_partial(inst, x, y, 0, 2)));
    }
  rep.fyy_sup_observed = sup;
  return rep;
}

}  // namespace mixcex
