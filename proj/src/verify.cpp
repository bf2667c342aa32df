#include "mixcex/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "mixcex/errors.hpp"
#include "mixcex/scanner.hpp"
#include "mixcex/serialize.hpp"
#include "mixcex/variation.hpp"

namespace mixcex {

namespace {

using nlohmann::json;

struct Gate {
  bool ok = true;
  std::ostringstream text;
  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      text << "FAIL " << msg << "; ";
    }
  }
  void note(const std::string& msg) { text << msg << "; "; }
};

// ---- 1. construction -------------------------------------------------------

CheckResult check_construction() {
  Gate g;
  for (int k = 1; k <= 8; ++k) {
    CantorSet c = build_cantor(k, Rat(1));
    const Rat expected = (Rat(1) - pow2(-k)) / 2;
    g.require(c.removed_measure == expected,
              "K=" + std::to_string(k) + " removed measure != (1/2)(1-2^-K)");
    // Disjointness: all pairs at small depth, sorted adjacency always.
    if (k <= 5) {
      for (int i = 1; i <= c.count(); ++i)
        for (int j = i + 1; j <= c.count(); ++j) {
          const Interval &a = c.interval(i), &b = c.interval(j);
          const bool disjoint = a.b <= b.a || b.b <= a.a;
          g.require(disjoint, "K=" + std::to_string(k) + " intervals overlap");
        }
    }
    for (std::size_t p = 1; p < c.by_position.size(); ++p)
      g.require(c.intervals[c.by_position[p - 1] - 1].b <= c.intervals[c.by_position[p] - 1].a,
                "K=" + std::to_string(k) + " adjacency overlap");
    for (const Interval& iv : c.intervals)
      g.require(sgn(iv.a) > 0 && iv.b < 1 && iv.a < iv.b,
                "K=" + std::to_string(k) + " interval outside (0,1)");
    // Density: every subinterval of length >= 2^{-K+2} meets the removed set,
    // i.e. the longest removed-free run is shorter than that.
    g.require(max_removed_free_run(c) < pow2(-k + 2),
              "K=" + std::to_string(k) + " density bound violated");
  }
  g.note("K=1..8: exact measure, disjointness, density");
  return {"construction", g.ok, g.text.str(), 0};
}

// ---- 2. schedules ----------------------------------------------------------

CheckResult check_schedules(const Instance& inst, const VerifyOptions& opt) {
  Gate g;
  const KernelSchedule& s = inst.schedule;
  const int n_terms = s.count();

  Rat prev;
  for (int n = 1; n <= n_terms; ++n) {
    const Rat ratio = s.shrink_ratio(n);
    g.require(ratio == s.entry(n).len, "shrink ratio != |I_n| at n=" + std::to_string(n));
    if (n == 1)
      g.require(ratio <= inst.set.interval(1).length(), "shrink ratio exceeds |I_1|");
    else
      g.require(ratio <= prev, "shrink ratio increases at n=" + std::to_string(n));
    prev = ratio;
  }

  for (int m = 1; m <= n_terms; ++m) {
    g.require(s.delta_tail(m) == Rat(1, m) - Rat(1, n_terms + 1),
              "finite delta tail != 1/m - 1/(N+1) at m=" + std::to_string(m));
    g.require(s.delta_tail_infinite(m) == Rat(1, m), "closed-form tail != 1/m");
  }

  double worst_dev = 0;
  for (int n = 1; n <= n_terms; ++n) {
    g.require(measure_condition_certified(s, n),
              "(2/pi) arcsin(c_n) < delta_n fails at n=" + std::to_string(n));
    const ScheduleEntry& e = s.entry(n);
    const double analytic = measure_A_analytic(e);
    const double mc = measure_A_mc(e, opt.mc_samples, opt.mc_seed + static_cast<std::uint64_t>(n),
                                   opt.threads);
    const double sigma =
        std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) / static_cast<double>(opt.mc_samples));
    worst_dev = std::max(worst_dev, std::fabs(mc - analytic) / sigma);
    g.require(std::fabs(mc - analytic) <= 3.0 * sigma,
              "MC measure of A_n off by >3 sigma at n=" + std::to_string(n));
  }
  std::ostringstream note;
  note << "N=" << n_terms << ", worst MC deviation " << worst_dev << " sigma (cap 3)";
  g.note(note.str());
  return {"schedules", g.ok, g.text.str(), 0};
}

// ---- 3. derivative closed forms vs central differences ---------------------

CheckResult check_derivatives(const Instance& inst) {
  Gate g;
  const FunctionHandle handle = make_instance_handle(inst);
  const Partial kinds[] = {Partial::X, Partial::Y, Partial::XX, Partial::YY};
  const Rat t_positions[] = {Rat(3, 10), Rat(2, 5), Rat(11, 20), Rat(13, 20), Rat(4, 5)};

  int points = 0, orders_checked = 0;
  double worst_low = 10, worst_high = 0;
  for (int n = 1; n <= inst.term_count(); ++n) {
    const Interval& iv = inst.set.interval(n);
    const ScheduleEntry& e = inst.schedule.entry(n);

    // Two x positions where both sin and cos of the active phase are bounded
    // away from 0 and 1, so all four references are clean: |sin| in [.3,.95].
    // A golden-ratio sweep avoids aliasing against any frequency.
    std::vector<double> xs;
    double x_cand = 0.31;
    for (int j = 0; j < 256 && xs.size() < 3; ++j) {
      x_cand += 0.6180339887498949;
      if (x_cand >= 1.0) x_cand -= 1.0;
      const double sin_phase = std::fabs(phi_fast(e, x_cand, 1)) / e.amp1_d;
      if (sin_phase >= 0.3 && sin_phase <= 0.95) xs.push_back(x_cand);
    }
    g.require(xs.size() == 3, "no usable x positions for n=" + std::to_string(n));
    if (xs.size() < 3) continue;

    for (const Rat& t : t_positions) {
      const Rat y_rat = iv.a + t * iv.length();
      const double y = to_double(y_rat);
      for (double x : xs) {
        ++points;
        const Eval ref = eval_all(inst, rat_from_double(x), rat_from_double(y));
        for (Partial which : kinds) {
          const double base = interior_base_step(inst, y, which, 1.0 / 64);
          // x-stencils below ~2^-44 sit within a few hundred ulps of x and
          // would measure quantization, not convergence; not stencil-safe.
          if ((which == Partial::X || which == Partial::XX) && base < 0x1p-44) continue;
          const auto ladder = step_ladder(base, 4);
          double reference = 0;
          switch (which) {
            case Partial::X: reference = ref.fx; break;
            case Partial::Y: reference = ref.fy; break;
            case Partial::XX: reference = ref.fxx; break;
            case Partial::YY: reference = ref.fyy; break;
          }
          const QuotientReport rep = fd_partial(handle, x, y, which, ladder, reference);
          ++orders_checked;
          if (!rep.observed_order) {
            g.require(false, "no observed order at n=" + std::to_string(n) + " " + rep.which);
            continue;
          }
          worst_low = std::min(worst_low, *rep.observed_order);
          worst_high = std::max(worst_high, *rep.observed_order);
          g.require(1.7 <= *rep.observed_order && *rep.observed_order <= 2.3,
                    "order " + std::to_string(*rep.observed_order) + " outside [1.7,2.3] at n=" +
                        std::to_string(n) + " " + rep.which);
        }
      }
    }
  }
  g.require(points >= 100, "fewer than 100 interior points exercised");
  std::ostringstream note;
  note << points << " points, " << orders_checked << " ladders, observed orders in [" << worst_low
       << ", " << worst_high << "] (required [1.7, 2.3])";
  g.note(note.str());
  return {"derivative-closed-forms", g.ok, g.text.str(), 0};
}

// ---- 4. discontinuity witnesses --------------------------------------------

CheckResult check_witnesses(const Rat& ratio) {
  Gate g;
  const Instance inst = assemble_default(6, ratio);
  const Rat y0 = inst.set.interval(1).a;
  const int m = 3;
  const auto ladder = witness_ladder(inst, y0, m, Rat(1, 2), 5);
  g.require(ladder.size() == 5, "expected 5 witnesses");

  const Eval at_y0 = eval_all(inst, ladder.front().x0, y0);
  g.require(at_y0.exact_zero && at_y0.fx == 0.0, "f'_x(x0, y0) not exactly zero");

  const double maxpsi = 1.0 / 64.0;
  Rat prev_dist;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const Witness& w = ladder[i];
    g.require(w.certified, "witness " + std::to_string(i) + " lacks the certified |phi'| >= 1");
    g.require(w.k > m, "witness index k <= m");
    const Rat dist = abs(w.y_k - w.y0);
    g.require(dist < w.delta, "witness peak outside its scale window");
    if (i > 0) g.require(dist < prev_dist, "witness distances not strictly decreasing");
    g.require(w.osc >= maxpsi * (1.0 - 1e-9), "oscillation below max psi = 1/64");
    prev_dist = dist;
  }

  const auto probe = mixed_quotient_probe(inst, ladder);
  for (std::size_t i = 0; i + 1 < probe.size(); ++i) {
    g.require(abs(probe[i].step) >= 2 * abs(probe[i + 1].step),
              "probe steps do not halve");  // exact rational comparison
    g.require(probe[i + 1].lower_bound >= 2.0 * probe[i].lower_bound * (1.0 - 1e-12),
              "probe lower bounds fail to double");
  }
  for (const auto& row : probe)
    g.require(std::fabs(row.quotient) >= row.lower_bound * (1.0 - 1e-9),
              "quotient below its certified lower bound");
  std::ostringstream note;
  note << "5 witnesses at scales down to " << to_double(ladder.back().delta)
       << ", osc >= 1/64 each, probe magnitude up to " << std::fabs(probe.back().quotient);
  g.note(note.str());
  return {"discontinuity-witnesses", g.ok, g.text.str(), 0};
}

// ---- 5. integrability ledger -----------------------------------------------

CheckResult check_integrability(const Instance& inst) {
  Gate g;
  const IntegrabilityReport rep = integrability_report(inst, 200);
  g.require(rep.partials_strictly_increasing, "partial sums of integral |f_xx| not increasing");
  g.require(rep.increments_strictly_increasing, "per-generation increments not increasing");
  g.require(rep.fyy_sup_bound ==
                inst.profile.sup_d2().hi * inst.set.interval(1).length(),
            "analytic |f_yy| bound != sup|psi''| * |I_1|");
  g.require(rep.fyy_sup_observed <= to_double(rep.fyy_sup_bound) * (1.0 + 1e-12),
            "sampled |f_yy| exceeds the analytic bound");
  std::ostringstream note;
  note << "sup|f_yy| observed " << rep.fyy_sup_observed << " <= bound "
       << to_double(rep.fyy_sup_bound) << "; integral |f_xx| partials reach "
       << rep.fxx_partial.back();
  g.note(note.str());
  return {"integrability", g.ok, g.text.str(), 0};
}

// ---- 6. scanner classification ---------------------------------------------

CheckResult check_scanner(const Instance& inst, int threads) {
  Gate g;
  ScanConfig cfg;
  cfg.grid_nx = cfg.grid_ny = 64;
  cfg.m_max = 8;
  cfg.n_max = 64;
  cfg.subsample = 4;

  cfg.rect = Rect{0, 1, 0, 1};
  const ExistenceMap smooth = scan(make_control("smooth"), cfg, threads);
  g.require(smooth.count_in_E() == 64 * 64, "smooth control not fully inside E");

  cfg.rect = Rect{-0.5, 0.5, -0.5, 0.5};
  const ExistenceMap absx = scan(make_control("abs-x"), cfg, threads);
  const auto excluded = absx.fully_excluded_columns();
  // Expected: exactly the columns with minimal |x| (two for an even grid).
  double best = 1e9;
  for (double x : absx.xs) best = std::min(best, std::fabs(x));
  std::vector<int> expected;
  for (int i = 0; i < absx.nx(); ++i)
    if (std::fabs(std::fabs(absx.xs[static_cast<std::size_t>(i)]) - best) < 1e-12)
      expected.push_back(i);
  g.require(excluded == expected, "abs-x exclusion != columns nearest x=0");
  g.require(absx.count_in_E() ==
                (absx.nx() - static_cast<int>(expected.size())) * absx.ny(),
            "abs-x excludes more than the central columns");

  cfg.rect = Rect{0, 1, 0, 1};
  const ExistenceMap self = scan(make_instance_handle(inst), cfg, threads);
  g.require(self.count_in_E() == 64 * 64, "instance not fully inside E");

  std::ostringstream note;
  note << "smooth 4096/4096 in E; abs-x excluded columns {";
  for (std::size_t i = 0; i < excluded.size(); ++i) note << (i ? "," : "") << excluded[i];
  note << "}; instance 4096/4096 in E";
  g.note(note.str());
  return {"scanner", g.ok, g.text.str(), 0};
}

// ---- 7. mixed-derivative sanity on the smooth control -----------------------

CheckResult check_mixed_sanity() {
  Gate g;
  const FunctionHandle smooth = make_control("smooth");
  const auto ladder = step_ladder(1.0 / 64, 4);
  double worst = 0, worst_nest = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double x = 0.1 + 0.2 * i, y = 0.1 + 0.2 * j;
      const double ref = -std::cos(x) * std::sin(y);
      const QuotientReport rep = fd_mixed(smooth, x, y, ladder, ref);
      worst = std::max(worst, std::fabs(rep.richardson - ref));
      g.require(std::fabs(rep.richardson - ref) <= 1e-6,
                "mixed partial off by more than 1e-6 at (" + std::to_string(x) + "," +
                    std::to_string(y) + ")");
      // Two nesting orders as genuinely different stencils; agreement within
      // the order-2 model C h^2 with C = 1/2 for unit fourth derivatives.
      const QuotientReport xy = fd_mixed(smooth, x, y, ladder, std::nullopt, 1.0, 0.5);
      const QuotientReport yx = fd_mixed(smooth, x, y, ladder, std::nullopt, 0.5, 1.0);
      for (std::size_t s = 0; s < ladder.size(); ++s) {
        const double gap = std::fabs(xy.estimates[s] - yx.estimates[s]);
        const double bound = 0.5 * ladder[s] * ladder[s] + 1e-12;
        worst_nest = std::max(worst_nest, gap / bound);
        g.require(gap <= bound, "nesting orders disagree beyond the order-2 model");
      }
    }
  std::ostringstream note;
  note << "25 points; worst |richardson - analytic| = " << worst
       << " (cap 1e-6); worst nesting gap at " << worst_nest << " of the model bound";
  g.note(note.str());
  return {"mixed-derivative-sanity", g.ok, g.text.str(), 0};
}

// ---- 8. variation machinery --------------------------------------------------

CheckResult check_variation(const Rat& ratio) {
  Gate g;
  // Standalone sinusoid (eps/2)(1 - cos 2 pi q t), q = 3: variation 2 eps q.
  const double eps = 0.4;
  const int q = 3;
  auto sample = [&](int panels) {
    std::vector<double> t(static_cast<std::size_t>(panels) + 1), v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<double>(i) / panels;
      v[i] = 0.5 * eps * (1.0 - std::cos(2.0 * 3.14159265358979323846 * q * t[i]));
    }
    return variation_1d(t, v);
  };
  const double exact = 2.0 * eps * q;
  const double coarse = sample(20 * q);
  g.require(std::fabs(coarse - exact) <= 0.01 * exact,
            "sinusoid variation off by more than 1% on the 20q-panel grid");
  double prev = coarse;
  for (int r = 1; r <= 4; ++r) {
    const double finer = sample(20 * q << r);
    g.require(finer >= prev - 1e-12, "variation decreased under refinement");
    prev = finer;
  }

  // Exact section variations of F_y(x) = f'_y(x,y) on a depth-3 instance.
  const Instance inst = assemble_default(3, ratio);
  std::vector<Rat> sections;
  for (int n = 1; n <= inst.term_count(); ++n) {
    const Interval& iv = inst.set.interval(n);
    sections.push_back(iv.a + iv.length() / 4);
  }
  sections.push_back(inst.set.interval(1).a + inst.set.interval(1).length() / 8);
  sections.push_back(inst.set.interval(1).midpoint());
  sections.push_back(inst.set.interval(1).a);
  const Cor23Report rep = check_cor23_hypothesis(inst, sections);
  g.require(rep.sections.size() >= 10, "fewer than 10 sections sampled");
  for (const SectionVariation& sv : rep.sections) {
    // Independent route: factored psi'(t) = 3 t^2 (1-t)^2 (1-2t).
    Rat expect(0);
    if (sv.interval_index) {
      const Interval& iv = inst.set.interval(*sv.interval_index);
      const ScheduleEntry& e = inst.schedule.entry(*sv.interval_index);
      const Rat t = (sv.y - iv.a) / iv.length();
      const Rat d1 = 3 * t * t * (1 - t) * (1 - t) * (1 - 2 * t);
      expect = abs(d1) / iv.length() * 2 * e.eps * Rat(e.freq);
    }
    g.require(sv.exact_value == expect, "section variation disagrees with the closed form");
  }
  g.require(rep.growing_across_generations, "section variations do not grow across generations");

  // Grid cross-check on the small-q (generation 1) section.
  {
    const Interval& iv = inst.set.interval(1);
    const ScheduleEntry& e = inst.schedule.entry(1);
    const double y = to_double(iv.a + iv.length() / 4);
    const long panels = 20L * mpz_get_si(e.freq.get_mpz_t());
    std::vector<double> t(static_cast<std::size_t>(panels) + 1), v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<double>(i) / static_cast<double>(panels);
      v[i] = eval_partial(inst, t[i], y, 0, 1);
    }
    const double grid = variation_1d(t, v);
    const double closed = to_double(rep.sections.front().exact_value);
    g.require(std::fabs(grid - closed) <= 1e-9 * std::max(1.0, closed),
              "grid variation does not reproduce the closed form on the aligned grid");
  }
  g.note("sinusoid within 1%; 4 refinements monotone; 10 exact sections; growth ledger increasing");
  return {"variation", g.ok, g.text.str(), 0};
}

// ---- 9. persistence and determinism -----------------------------------------

std::string deterministic_pipeline(const VerifyOptions& opt) {
  const Instance inst = assemble_default(4, opt.ratio);
  json doc;
  doc["instance"] = instance_to_json(inst);
  const auto ladder = witness_ladder(inst, inst.set.interval(1).a, 2, Rat(1, 4), 2);
  json witnesses = json::array();
  for (const Witness& w : ladder) witnesses.push_back(witness_to_json(w));
  doc["witnesses"] = std::move(witnesses);
  doc["probe"] = probe_to_json(mixed_quotient_probe(inst, ladder));
  ScanConfig cfg;
  cfg.grid_nx = cfg.grid_ny = 16;
  cfg.m_max = 4;
  cfg.n_max = 16;
  const ExistenceMap map = scan(make_instance_handle(inst), cfg, opt.threads);
  doc["scan_in_e"] = map.count_in_E();
  doc["mc"] = measure_A_mc(inst.schedule.entry(1), 10000, opt.mc_seed, opt.threads);
  return canonical_dump(doc);
}

CheckResult check_persistence(const Instance& inst, const VerifyOptions& opt) {
  Gate g;
  const std::string first = canonical_dump(instance_to_json(inst));
  const Instance reparsed = instance_from_json(json::parse(first));
  const std::string second = canonical_dump(instance_to_json(reparsed));
  g.require(first == second, "instance document not byte-identical after a round trip");

  const std::string run1 = deterministic_pipeline(opt);
  const std::string run2 = deterministic_pipeline(opt);
  g.require(run1 == run2, "pipeline output differs between two runs");
  std::ostringstream note;
  note << "round trip " << first.size() << " bytes identical; pipeline " << run1.size()
       << " bytes identical across runs";
  g.note(note.str());
  return {"persistence-determinism", g.ok, g.text.str(), 0};
}

}  // namespace

std::vector<CheckResult> run_acceptance(const VerifyOptions& opt) {
  std::vector<CheckResult> results;
  const Instance inst = assemble_default(opt.depth, opt.ratio);

  const std::vector<std::function<CheckResult()>> checks = {
      [&] { return check_construction(); },
      [&] { return check_schedules(inst, opt); },
      [&] { return check_derivatives(inst); },
      [&] { return check_witnesses(opt.ratio); },
      [&] { return check_integrability(inst); },
      [&] { return check_scanner(inst, opt.threads); },
      [&] { return check_mixed_sanity(); },
      [&] { return check_variation(opt.ratio); },
      [&] { return check_persistence(inst, opt); },
  };
  for (const auto& run : checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r = run();
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

bool all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

nlohmann::json verify_report(const std::vector<CheckResult>& results, bool include_runtimes) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["all_pass"] = all_pass(results);
  json checks = json::array();
  for (const auto& r : results) {
    json one;
    one["name"] = r.name;
    one["status"] = r.pass ? "pass" : "fail";
    one["detail"] = r.detail;
    if (include_runtimes) one["runtime_s"] = r.runtime_s;
    checks.push_back(std::move(one));
  }
  doc["checks"] = std::move(checks);
  return doc;
}

}  // namespace mixcex
