#include "mixcex/counterexample.hpp"

#include <cmath>
#include <limits>

#include "mixcex/errors.hpp"

namespace mixcex {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

TailCertificate build_tail_certificate(const CantorSet& set, const BumpProfile& profile,
                                       const KernelSchedule& schedule) {
  TailCertificate cert;
  cert.per_index.reserve(static_cast<std::size_t>(set.count()));
  cert.d1_nonincreasing = true;
  cert.d2_nonincreasing = true;
  for (int n = 1; n <= set.count(); ++n) {
    const ScheduleEntry& e = schedule.entry(n);
    TailBound tb;
    tb.index = n;
    tb.generation = e.generation;
    tb.d1_bound = e.eps * profile.sup_d1().hi / e.len;
    tb.d2_bound = e.eps * profile.sup_d2().hi / (e.len * e.len);
    if (n == 1) {
      cert.sup_d1 = tb.d1_bound;
      cert.sup_d2 = tb.d2_bound;
    } else {
      const TailBound& prev = cert.per_index.back();
      if (tb.d1_bound > prev.d1_bound) cert.d1_nonincreasing = false;
      if (tb.d2_bound > prev.d2_bound) cert.d2_nonincreasing = false;
      if (tb.d1_bound > cert.sup_d1) cert.sup_d1 = tb.d1_bound;
      if (tb.d2_bound > cert.sup_d2) cert.sup_d2 = tb.d2_bound;
    }
    cert.per_index.push_back(std::move(tb));
  }
  return cert;
}

}  // namespace

Instance assemble(CantorSet set, BumpProfile profile, KernelSchedule schedule) {
  if (schedule.count() != set.count())
    throw mismatch_error("assemble: schedule covers " + std::to_string(schedule.count()) +
                         " indices but the set has " + std::to_string(set.count()) +
                         " intervals");
  for (int n = 1; n <= set.count(); ++n)
    if (schedule.entry(n).len != set.interval(n).length())
      throw mismatch_error("assemble: schedule entry " + std::to_string(n) +
                           " was built from a different set");
  Instance inst{std::move(set), std::move(profile), std::move(schedule), {}};
  inst.tail = build_tail_certificate(inst.set, inst.profile, inst.schedule);
  return inst;
}

Instance assemble_default(int depth, const Rat& ratio) {
  CantorSet c = build_cantor(depth, ratio);
  KernelSchedule s = make_schedule(c);
  return assemble(std::move(c), BumpProfile::poly33(), std::move(s));
}

Eval eval_all(const Instance& inst, const Rat& x, const Rat& y) {
  if (sgn(x) < 0 || x > 1 || sgn(y) < 0 || y > 1)
    throw domain_error("eval_all: the point must lie in the unit square");
  Eval out;
  out.x = x;
  out.y = y;
  const auto n = locate_removed(inst.set, y);
  if (!n) {
    out.exact_zero = true;  // every psi_n vanishes on the approximant of B
    return out;
  }
  out.active = *n;
  const Interval& iv = inst.set.interval(*n);
  const OscillatorEval phi = phi_eval(inst.schedule, *n, x);
  const Rat t = (y - iv.a) / iv.length();

  double p0, p1, p2;  // psi_n and y-derivatives at y (chain rule in 1/|I_n|)
  double pa0, pa1, pa2;  // absolute values for error propagation
  if (inst.profile.exact()) {
    const Rat inv_len = 1 / iv.length();
    const Rat b0 = inst.profile.eval_exact(t, 0);
    const Rat b1 = inst.profile.eval_exact(t, 1) * inv_len;
    const Rat b2 = inst.profile.eval_exact(t, 2) * inv_len * inv_len;
    p0 = to_double(b0);
    p1 = to_double(b1);
    p2 = to_double(b2);
  } else {
    const double inv_len = 1.0 / to_double(iv.length());
    const double td = to_double(t);
    p0 = inst.profile.eval(td, 0);
    p1 = inst.profile.eval(td, 1) * inv_len;
    p2 = inst.profile.eval(td, 2) * inv_len * inv_len;
  }
  pa0 = std::fabs(p0);
  pa1 = std::fabs(p1);
  pa2 = std::fabs(p2);

  out.f = phi.value * p0;
  out.fx = phi.d1 * p0;
  out.fy = phi.value * p1;
  out.fxx = phi.d2 * p0;
  out.fyy = phi.value * p2;
  // psi factors carry at most 1 ulp of conversion error on top of the
  // oscillator bounds; fold both into a single bound per value.
  const double slack = 4.0 * kEps;
  out.f_err = phi.value_err * pa0 + std::fabs(out.f) * slack;
  out.fx_err = phi.d1_err * pa0 + std::fabs(out.fx) * slack;
  out.fy_err = phi.value_err * pa1 + std::fabs(out.fy) * slack;
  out.fxx_err = phi.d2_err * pa0 + std::fabs(out.fxx) * slack;
  out.fyy_err = phi.value_err * pa2 + std::fabs(out.fyy) * slack;
  return out;
}

double eval_f(const Instance& inst, double x, double y) {
  return eval_partial(inst, x, y, 0, 0);
}

double eval_partial(const Instance& inst, double x, double y, int x_order, int y_order) {
  if (x_order < 0 || x_order > 2 || y_order < 0 || y_order > 2 || x_order + y_order > 2)
    throw domain_error("eval_partial: separate derivatives up to order 2 only");
  const int n = locate_removed_fast(inst.set, y);
  if (n == 0) return 0.0;
  const std::size_t i = static_cast<std::size_t>(n - 1);
  const double a = to_double(inst.set.intervals[i].a);
  const double len = to_double(inst.set.intervals[i].length());
  const ScheduleEntry& e = inst.schedule.entries()[i];
  double psi = inst.profile.eval((y - a) / len, y_order);
  for (int k = 0; k < y_order; ++k) psi /= len;
  return phi_fast(e, x, x_order) * psi;
}

Witness make_witness(const Instance& inst, const Rat& y0, int m, const Rat& delta, int budget) {
  if (m < 1) throw domain_error("make_witness: m must be >= 1");
  if (!in_B(inst.set, y0)) throw domain_error("make_witness: y0 must lie in B");
  const Rat x0 = find_point_in_tail(inst.schedule, m, inst.term_count(), budget);

  Witness w;
  w.x0 = x0;
  w.y0 = y0;
  w.m = m;
  w.delta = delta;
  const Interval& iv = find_interval_near(inst.set, y0, delta, m);
  w.k = iv.index;
  w.y_k = iv.a + inst.profile.argmax() * iv.length();
  w.bound = inst.profile.max_value().lo;

  // f'_x(x0, y0) = 0 exactly (y0 in B), so the oscillation is the single term
  // |phi_k'(x0)| * psi_k(y_k) = |phi_k'(x0)| * max psi.
  const OscillatorEval phi = phi_eval(inst.schedule, w.k, x0);
  const double maxpsi = inst.profile.eval(to_double(inst.profile.argmax()), 0);
  w.osc = std::fabs(phi.d1) * maxpsi;
  w.osc_err = phi.d1_err * maxpsi + std::fabs(w.osc) * 4.0 * kEps;
  w.certified = in_A_n(inst.schedule, w.k, x0);  // |phi_k'(x0)| >= 1, exact
  return w;
}

std::vector<Witness> witness_ladder(const Instance& inst, const Rat& y0, int m, const Rat& delta0,
                                    int scales, int budget) {
  if (scales < 1) throw domain_error("witness_ladder: scales must be >= 1");
  if (m < 1) throw domain_error("witness_ladder: m must be >= 1");
  if (!in_B(inst.set, y0)) throw domain_error("witness_ladder: y0 must lie in B");
  // One x0 shared by the whole ladder: the quotient probe needs a fixed point.
  const Rat x0 = find_point_in_tail(inst.schedule, m, inst.term_count(), budget);
  const double maxpsi = inst.profile.eval(to_double(inst.profile.argmax()), 0);

  std::vector<Witness> ladder;
  ladder.reserve(static_cast<std::size_t>(scales));
  Rat delta = delta0;
  for (int i = 0; i < scales; ++i) {
    const Interval& iv = find_interval_near(inst.set, y0, delta, m);
    Witness w;
    w.x0 = x0;
    w.y0 = y0;
    w.m = m;
    w.delta = delta;
    w.k = iv.index;
    w.y_k = iv.a + inst.profile.argmax() * iv.length();
    w.bound = inst.profile.max_value().lo;
    const OscillatorEval phi = phi_eval(inst.schedule, w.k, x0);
    w.osc = std::fabs(phi.d1) * maxpsi;
    w.osc_err = phi.d1_err * maxpsi + std::fabs(w.osc) * 4.0 * kEps;
    w.certified = in_A_n(inst.schedule, w.k, x0);
    ladder.push_back(std::move(w));

    const Rat dist = abs(ladder.back().y_k - y0);
    delta = dist / 2;  // next window excludes the peak just used
  }
  return ladder;
}

std::vector<QuotientProbeRow> mixed_quotient_probe(const Instance& inst, const Witness& w) {
  return mixed_quotient_probe(inst, std::vector<Witness>{w});
}

std::vector<QuotientProbeRow> mixed_quotient_probe(const Instance& inst,
                                                   const std::vector<Witness>& ladder) {
  std::vector<QuotientProbeRow> rows;
  rows.reserve(ladder.size());
  for (const Witness& w : ladder) {
    const Eval far = eval_all(inst, w.x0, w.y_k);
    const Eval base = eval_all(inst, w.x0, w.y0);
    QuotientProbeRow row;
    row.step = w.y_k - w.y0;
    const double step_d = to_double(row.step);
    row.quotient = (far.fx - base.fx) / step_d;
    row.lower_bound = to_double(w.bound) / std::fabs(step_d);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mixcex
