#include <cmath>
#include <random>

#include "doctest.h"
#include "mixcex/counterexample.hpp"
#include "mixcex/errors.hpp"
#include "oracle.hpp"

using namespace mixcex;

TEST_SUITE("counterexample") {

TEST_CASE("assembly: term count, mismatch detection") {
  const Instance one = assemble_default(1, Rat(1));
  CHECK(one.term_count() == 1);

  CantorSet c2 = build_cantor(2, Rat(1));
  CantorSet c3 = build_cantor(3, Rat(1));
  KernelSchedule s2 = make_schedule(c2);
  CHECK_THROWS_AS((void)assemble(std::move(c3), BumpProfile::poly33(), std::move(s2)),
                  mismatch_error);
}

TEST_CASE("tail certificate: default rule collapses to multiples of |I_n|") {
  const Instance inst = assemble_default(4, Rat(1));
  const Rat sup_d1 = inst.profile.sup_d1().hi;
  const Rat sup_d2 = inst.profile.sup_d2().hi;
  for (const TailBound& tb : inst.tail.per_index) {
    const Rat len = inst.set.interval(tb.index).length();
    CHECK(tb.d1_bound == sup_d1 * len * len);  // eps * sup|psi'| / len with eps = len^3
    CHECK(tb.d2_bound == sup_d2 * len);
  }
  CHECK(inst.tail.d1_nonincreasing);
  CHECK(inst.tail.d2_nonincreasing);
  CHECK(inst.tail.per_index.back().d1_bound < inst.tail.per_index.front().d1_bound);
  CHECK(inst.tail.per_index.back().d2_bound < inst.tail.per_index.front().d2_bound);
  CHECK(inst.tail.sup_d2 == sup_d2 * inst.set.interval(1).length());
}

TEST_CASE("eval_all: exact zeros on the residual set at any x") {
  const Instance inst = assemble_default(3, Rat(1));
  for (const Rat& y : {inst.set.interval(1).a, inst.set.interval(2).b, Rat(0), Rat(1)}) {
    for (const Rat& x : {Rat(0), Rat(1, 3), Rat(7, 11), Rat(1)}) {
      const Eval ev = eval_all(inst, x, y);
      CHECK(ev.exact_zero);
      CHECK(ev.f == 0.0);
      CHECK(ev.fx == 0.0);
      CHECK(ev.fy == 0.0);
      CHECK(ev.fxx == 0.0);
      CHECK(ev.fyy == 0.0);
      CHECK_FALSE(ev.active.has_value());
    }
  }
  CHECK_THROWS_AS((void)eval_all(inst, Rat(-1, 2), Rat(1, 2)), domain_error);
  CHECK_THROWS_AS((void)eval_all(inst, Rat(1, 2), Rat(3, 2)), domain_error);
}

TEST_CASE("eval_all: peak of a term against the high-precision oracle") {
  const Instance inst = assemble_default(3, Rat(1));
  for (int k : {1, 2, 5}) {
    const Interval& iv = inst.set.interval(k);
    const ScheduleEntry& e = inst.schedule.entry(k);
    const Rat x = Rat(1) / (4 * Rat(e.freq));  // sin phase exactly 1
    const Rat y = iv.midpoint();               // psi at its 1/64 peak
    const Eval ev = eval_all(inst, x, y);
    CHECK(ev.active == k);
    const double expect = oracle::phi_direct(e.eps, e.freq, x, 1) / 64.0;
    CHECK(ev.fx == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::fabs(ev.fx - expect) <= ev.fx_err);
  }
}

TEST_CASE("single active term: support scan never finds two nonzero bumps") {
  const Instance inst = assemble_default(5, Rat(1));
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 10000; ++trial) {
    const long den = 1 + rng() % 1000000;
    Rat y(static_cast<long>(rng() % (den + 1)), den);
    y.canonicalize();
    int active = 0;
    for (const Interval& iv : inst.set.intervals)
      if (iv.contains(y)) ++active;
    CHECK(active <= 1);
    const auto located = locate_removed(inst.set, y);
    CHECK(static_cast<int>(located.has_value()) == active);
  }
}

TEST_CASE("fyy stays under the tail-certificate constant across samples") {
  const Instance inst = assemble_default(3, Rat(1));
  const double bound = to_double(inst.tail.sup_d2);
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> uni(0, 1);
  for (int trial = 0; trial < 10000; ++trial) {
    const double v = eval_partial(inst, uni(rng), uni(rng), 0, 2);
    CHECK(std::fabs(v) <= bound * (1 + 1e-12));
  }
}

TEST_CASE("fast partials agree with eval_all at random dyadic points") {
  const Instance inst = assemble_default(4, Rat(1));
  std::mt19937_64 rng(8080);
  for (int trial = 0; trial < 300; ++trial) {
    const double x = std::ldexp(static_cast<double>(rng() >> 11), -53);
    const double y = std::ldexp(static_cast<double>(rng() >> 11), -53);
    const Eval ev = eval_all(inst, rat_from_double(x), rat_from_double(y));
    CHECK(eval_partial(inst, x, y, 0, 0) == doctest::Approx(ev.f).epsilon(1e-11));
    CHECK(eval_partial(inst, x, y, 1, 0) == doctest::Approx(ev.fx).epsilon(1e-11));
    CHECK(eval_partial(inst, x, y, 0, 1) == doctest::Approx(ev.fy).epsilon(1e-11));
    CHECK(eval_partial(inst, x, y, 2, 0) == doctest::Approx(ev.fxx).epsilon(1e-11));
    CHECK(eval_partial(inst, x, y, 0, 2) == doctest::Approx(ev.fyy).epsilon(1e-11));
  }
}

TEST_CASE("witness: certified oscillation at the peak of a nearby interval") {
  const Instance inst = assemble_default(3, Rat(1));
  const Rat y0 = inst.set.interval(1).a;
  const Witness w = make_witness(inst, y0, 2, Rat(1, 4));
  CHECK(w.k > 2);
  CHECK(abs(w.y_k - y0) < w.delta);
  CHECK(w.certified);
  CHECK(w.bound == Rat(1, 64));
  CHECK(w.osc >= 1.0 / 64 * (1 - 1e-9));
  // the oscillation equals |phi_k'(x0)| * psi(1/2); cross-check directly
  const ScheduleEntry& e = inst.schedule.entry(w.k);
  const double expect = std::fabs(oracle::phi_direct(e.eps, e.freq, w.x0, 1)) / 64.0;
  CHECK(w.osc == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("witness preconditions and depth exhaustion") {
  const Instance inst = assemble_default(3, Rat(1));
  CHECK_THROWS_AS((void)make_witness(inst, inst.set.interval(1).midpoint(), 2, Rat(1, 4)),
                  domain_error);
  CHECK_THROWS_AS((void)make_witness(inst, inst.set.interval(1).a, 0, Rat(1, 4)), domain_error);
  CHECK_THROWS_AS((void)make_witness(inst, inst.set.interval(1).a, 2, Rat(1, 1000000)),
                  depth_exhausted_error);
}

TEST_CASE("witness ladder: five certified scales on the depth-6 instance") {
  const Instance inst = assemble_default(6, Rat(1));
  const Rat y0 = inst.set.interval(1).a;
  const auto ladder = witness_ladder(inst, y0, 3, Rat(1, 2), 5);
  REQUIRE(ladder.size() == 5);
  Rat prev;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const Witness& w = ladder[i];
    CHECK(w.x0 == ladder.front().x0);  // one x0 across the ladder
    CHECK(w.k > 3);
    CHECK(w.certified);
    CHECK(w.osc >= 1.0 / 64 * (1 - 1e-9));
    const Rat dist = abs(w.y_k - y0);
    CHECK(dist < w.delta);
    if (i > 0) {
      CHECK(dist < prev);
      CHECK(2 * dist <= prev);  // halving rule guarantees at least 2x closer
    }
    prev = dist;
  }
}

TEST_CASE("mixed quotient probe: magnitudes dominated by max psi / step") {
  const Instance inst = assemble_default(6, Rat(1));
  const Rat y0 = inst.set.interval(1).a;
  const auto ladder = witness_ladder(inst, y0, 3, Rat(1, 2), 5);
  const auto rows = mixed_quotient_probe(inst, ladder);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::fabs(rows[i].quotient) >= rows[i].lower_bound * (1 - 1e-9));
    if (i > 0) CHECK(rows[i].lower_bound >= 2 * rows[i - 1].lower_bound * (1 - 1e-12));
  }

  const auto single = mixed_quotient_probe(inst, ladder.front());
  REQUIRE(single.size() == 1);
  CHECK(single.front().step == rows.front().step);
  CHECK(single.front().quotient == rows.front().quotient);
}

TEST_CASE("expbump profile also assembles and witnesses with its own peak bound") {
  CantorSet c = build_cantor(3, Rat(1));
  KernelSchedule s = make_schedule(c);
  const Instance inst = assemble(std::move(c), BumpProfile::exp_bump(), std::move(s));
  const Witness w = make_witness(inst, inst.set.interval(1).a, 2, Rat(1, 4));
  CHECK(w.certified);
  CHECK(w.osc >= to_double(w.bound) * (1 - 1e-9));
  CHECK(w.bound == BumpProfile::exp_bump().max_value().lo);
}

}  // TEST_SUITE
