#include <cmath>
#include <random>

#include "doctest.h"
#include "mixcex/errors.hpp"
#include "mixcex/kernels.hpp"
#include "oracle.hpp"

using namespace mixcex;

namespace {
KernelSchedule default_schedule(int depth) {
  return make_schedule(build_cantor(depth, Rat(1)));
}
}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("default schedule at depth 1: eps 1/64, delta 1/2, frequency 29") {
  const KernelSchedule s = default_schedule(1);
  REQUIRE(s.count() == 1);
  CHECK(s.entry(1).eps == Rat(1, 64));
  CHECK(s.entry(1).delta == Rat(1, 2));
  CHECK(s.entry(1).freq == 29);
}

TEST_CASE("shrink condition: ratio sequence equals the interval lengths") {
  const CantorSet c = build_cantor(4, Rat(1));
  const KernelSchedule s = make_schedule(c);
  Rat prev;
  for (int n = 1; n <= s.count(); ++n) {
    CHECK(s.shrink_ratio(n) == c.interval(n).length());
    if (n > 1) CHECK(s.shrink_ratio(n) <= prev);
    prev = s.shrink_ratio(n);
  }
  CHECK(s.shrink_ratio(1) <= c.interval(1).length());
}

TEST_CASE("summability: exact telescoping of the triangular rule") {
  const KernelSchedule s = default_schedule(4);
  const int n_terms = s.count();
  CHECK(s.delta_total() == Rat(1) - Rat(1, n_terms + 1));
  for (int m : {1, 2, 3, 5, 8, 15}) {
    CHECK(s.delta_tail(m) == Rat(1, m) - Rat(1, n_terms + 1));
    CHECK(s.delta_tail_infinite(m) == Rat(1, m));
  }
}

TEST_CASE("supplied tables: violations are rejected, a valid table is accepted") {
  const CantorSet c = build_cantor(2, Rat(1));
  std::vector<Rat> eps, delta, ones;
  for (int n = 1; n <= c.count(); ++n) {
    const Rat len = c.interval(n).length();
    eps.push_back(len * len * len / 2);
    delta.push_back(Rat(1, 2 * n * (n + 1)));
    ones.push_back(Rat(1));
  }

  SUBCASE("divergent delta (all ones) is rejected") {
    CHECK_THROWS_AS((void)make_schedule(c, eps, ones), schedule_violation_error);
  }
  SUBCASE("eps too large at n = 1 is rejected") {
    auto bad = eps;
    bad[0] = Rat(1, 2);  // ratio 8 > |I_1|
    CHECK_THROWS_AS((void)make_schedule(c, bad, delta), schedule_violation_error);
  }
  SUBCASE("increasing shrink ratio is rejected") {
    auto bad = eps;
    bad[2] *= 2;  // entries 2 and 3 share a length; the ratio then rises at n = 3
    CHECK_THROWS_AS((void)make_schedule(c, bad, delta), schedule_violation_error);
  }
  SUBCASE("nonpositive entries are rejected") {
    auto bad = eps;
    bad[1] = Rat(0);
    CHECK_THROWS_AS((void)make_schedule(c, bad, delta), schedule_violation_error);
  }
  SUBCASE("wrong table length is a parameter error") {
    auto bad = eps;
    bad.pop_back();
    CHECK_THROWS_AS((void)make_schedule(c, bad, delta), domain_error);
  }
  SUBCASE("valid custom table builds and certifies") {
    const KernelSchedule s = make_schedule(c, eps, delta);
    CHECK(s.eps_rule() == "table");
    CHECK_FALSE(s.has_closed_form_tail());
    for (int n = 1; n <= s.count(); ++n) CHECK(measure_condition_certified(s, n));
    // half the eps of the default rule demands a higher frequency
    const KernelSchedule d = make_schedule(c);
    CHECK(s.entry(1).freq > d.entry(1).freq);
  }
}

TEST_CASE("measure condition certified for every index of the default schedule") {
  const KernelSchedule s = default_schedule(5);
  for (int n = 1; n <= s.count(); ++n) {
    CHECK(measure_condition_certified(s, n));
    // loose float cross-check: analytic measure exceeds 1 - delta
    CHECK(measure_A_analytic(s.entry(n)) > 1.0 - to_double(s.entry(n).delta));
  }
}

TEST_CASE("phi_eval: exact zeros at x = 0 and x = 1") {
  const KernelSchedule s = default_schedule(2);
  for (int n = 1; n <= s.count(); ++n) {
    const OscillatorEval at0 = phi_eval(s, n, Rat(0));
    CHECK(at0.value == 0.0);
    CHECK(at0.d1 == 0.0);
    const OscillatorEval at1 = phi_eval(s, n, Rat(1));
    CHECK(at1.value == 0.0);
    CHECK(at1.d1 == 0.0);
  }
}

TEST_CASE("phi_eval: quarter-period point realizes the full derivative amplitude") {
  const KernelSchedule s = default_schedule(1);
  const Int q = s.entry(1).freq;
  const Rat x = Rat(1) / (4 * Rat(q));
  const OscillatorEval ev = phi_eval(s, 1, x);
  // phi' = eps * pi * q at sin = 1
  const double expect = oracle::phi_direct(s.entry(1).eps, q, x, 1);
  CHECK(std::fabs(ev.d1 - expect) <= ev.d1_err);
  CHECK(ev.d1 == doctest::Approx(s.entry(1).amp1_d).epsilon(1e-15));
}

TEST_CASE("phase reduction matches a 320-bit direct evaluation within stated bounds") {
  const KernelSchedule s = default_schedule(5);
  std::mt19937_64 rng(20260809);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(s.count()));
    const unsigned long den = 2 + static_cast<unsigned long>(rng() % 1000000007ULL);
    Rat x(static_cast<unsigned long>(rng() % (den + 1)), den);
    x.canonicalize();
    const ScheduleEntry& e = s.entry(n);
    const OscillatorEval ev = phi_eval(s, n, x);
    CHECK(std::fabs(ev.value - oracle::phi_direct(e.eps, e.freq, x, 0)) <= ev.value_err);
    CHECK(std::fabs(ev.d1 - oracle::phi_direct(e.eps, e.freq, x, 1)) <= ev.d1_err);
    CHECK(std::fabs(ev.d2 - oracle::phi_direct(e.eps, e.freq, x, 2)) <= ev.d2_err);
  }
}

TEST_CASE("phi_fast agrees with phi_eval at dyadic points, including huge frequencies") {
  const KernelSchedule s = default_schedule(6);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(s.count()));
    const double x = std::ldexp(static_cast<double>(rng() >> 11), -53);
    const Rat xr = rat_from_double(x);
    const OscillatorEval ev = phi_eval(s, n, xr);
    const ScheduleEntry& e = s.entry(n);
    CHECK(phi_fast(e, x, 0) == doctest::Approx(ev.value).epsilon(1e-12));
    CHECK(phi_fast(e, x, 1) == doctest::Approx(ev.d1).epsilon(1e-12));
    CHECK(phi_fast(e, x, 2) == doctest::Approx(ev.d2).epsilon(1e-12));
  }
}

TEST_CASE("phi_fast parity: the value is even in x, the derivative odd") {
  const KernelSchedule s = default_schedule(3);
  for (int n : {1, 3, 7}) {
    const ScheduleEntry& e = s.entry(n);
    for (double x : {0.03125, 0.3173828125, 0.77294921875}) {
      CHECK(phi_fast(e, -x, 0) == phi_fast(e, x, 0));
      CHECK(phi_fast(e, -x, 1) == -phi_fast(e, x, 1));
      CHECK(phi_fast(e, -x, 2) == phi_fast(e, x, 2));
    }
  }
}

TEST_CASE("phase reduction beyond 64-bit frequencies and below-normal x") {
  // Tiny amplitudes force q past the word-size fast path.
  const CantorSet c = build_cantor(2, Rat(1));
  std::vector<Rat> eps, delta;
  const Rat shrink = Rat(1) / Rat(Int("100000000000000000000"));  // 1e-20
  for (int n = 1; n <= c.count(); ++n) {
    const Rat len = c.interval(n).length();
    eps.push_back(len * len * len * shrink);
    delta.push_back(Rat(1, static_cast<long>(n) * (n + 1)));
  }
  const KernelSchedule s = make_schedule(c, eps, delta);
  CHECK_FALSE(s.entry(1).freq.fits_ulong_p());

  std::mt19937_64 rng(314159);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const double x = std::ldexp(static_cast<double>(rng() >> 11), -53);
    const OscillatorEval ev = phi_eval(s, n, rat_from_double(x));
    const ScheduleEntry& e = s.entry(n);
    CHECK(phi_fast(e, x, 0) == doctest::Approx(ev.value).epsilon(1e-12));
    CHECK(phi_fast(e, x, 1) == doctest::Approx(ev.d1).epsilon(1e-12));
  }

  // x so small that the dyadic shift leaves the word-size path as well
  const double tiny = std::ldexp(1.0, -100);
  const ScheduleEntry& e1 = s.entry(1);
  const OscillatorEval ev = phi_eval(s, 1, rat_from_double(tiny));
  CHECK(phi_fast(e1, tiny, 0) == doctest::Approx(ev.value).epsilon(1e-12));
  const KernelSchedule small = default_schedule(1);
  CHECK(phi_fast(small.entry(1), tiny, 0) ==
        doctest::Approx(phi_eval(small, 1, rat_from_double(tiny)).value).epsilon(1e-12));
}

TEST_CASE("range: phi stays within [0, eps] across a dense sample") {
  const KernelSchedule s = default_schedule(3);
  for (int n = 1; n <= s.count(); ++n) {
    const Rat eps = s.entry(n).eps;
    for (int i = 0; i <= 10000; ++i) {
      const Rat x(i, 10000);
      const OscillatorEval ev = phi_eval(s, n, x);
      CHECK(ev.value >= 0.0);
      CHECK(rat_from_double(ev.value) <= eps);
    }
  }
}

TEST_CASE("A_n membership: exact decisions at crafted points") {
  const KernelSchedule s = default_schedule(1);
  const Int q = s.entry(1).freq;  // 29, odd
  CHECK(in_A_n(s, 1, Rat(1) / (4 * Rat(q))));  // |sin| = 1 >= c
  CHECK_FALSE(in_A_n(s, 1, Rat(0)));           // sin = 0
  CHECK_FALSE(in_A_n(s, 1, Rat(1, 2)));        // odd q: frac = 1/2, sin = 0
  CHECK_THROWS_AS((void)in_A_n(s, 1, Rat(3, 2)), domain_error);
}

TEST_CASE("Monte Carlo measure of A_n within 3 sigma of the analytic value") {
  const KernelSchedule s = default_schedule(2);
  for (int n = 1; n <= s.count(); ++n) {
    const ScheduleEntry& e = s.entry(n);
    const double analytic = measure_A_analytic(e);
    const double mc = measure_A_mc(e, 100000, 0xC0FFEE + n);
    const double sigma = std::sqrt(analytic * (1 - analytic) / 100000.0);
    CHECK(std::fabs(mc - analytic) <= 3 * sigma);
  }
}

TEST_CASE("Monte Carlo sharding is deterministic across thread counts") {
  const KernelSchedule s = default_schedule(2);
  const double one = measure_A_mc(s.entry(2), 20000, 42, 1);
  const double four = measure_A_mc(s.entry(2), 20000, 42, 4);
  CHECK(one == four);
}

TEST_CASE("find_point_in_tail: joint membership holds for the returned point") {
  const KernelSchedule s = default_schedule(4);
  const Rat x0 = find_point_in_tail(s, 3, s.count());
  for (int n = 3; n <= s.count(); ++n) {
    CHECK(in_A_n(s, n, x0));
    // second route: the evaluated derivative itself clears 1
    const OscillatorEval ev = phi_eval(s, n, x0);
    CHECK(std::fabs(ev.d1) >= 1.0 - ev.d1_err);
  }
}

TEST_CASE("find_point_in_tail: spent budget raises search_exhausted") {
  const KernelSchedule s = default_schedule(2);
  // budget 1 tries only x = 1/2, where every odd-frequency sin vanishes
  CHECK_THROWS_AS((void)find_point_in_tail(s, 1, s.count(), 1), search_exhausted_error);
  CHECK_THROWS_AS((void)find_point_in_tail(s, 0, 1), domain_error);
  CHECK_THROWS_AS((void)find_point_in_tail(s, 2, 1), domain_error);
}

}  // TEST_SUITE
