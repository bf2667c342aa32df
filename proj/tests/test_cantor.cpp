#include <random>

#include "doctest.h"
#include "mixcex/cantor.hpp"
#include "mixcex/errors.hpp"

using namespace mixcex;

TEST_SUITE("cantor") {

TEST_CASE("depth 1, ratio 1: one centered interval of length 1/4") {
  const CantorSet c = build_cantor(1, Rat(1));
  REQUIRE(c.count() == 1);
  CHECK(c.interval(1).a == Rat(3, 8));
  CHECK(c.interval(1).b == Rat(5, 8));
  CHECK(c.interval(1).generation == 1);
  CHECK(c.removed_measure == Rat(1, 4));
}

TEST_CASE("removed measure: term-by-term geometric oracle and closed form, K = 1..8") {
  for (int k = 1; k <= 8; ++k) {
    const CantorSet c = build_cantor(k, Rat(1));
    Rat oracle(0);
    Rat term_len(1);
    long count = 1;
    for (int g = 1; g <= k; ++g) {
      term_len /= 4;                      // 4^-g
      oracle += Rat(count) * term_len;    // 2^{g-1} removals per stage
      count *= 2;
    }
    CHECK(c.removed_measure == oracle);
    CHECK(c.removed_measure == (Rat(1) - pow2(-k)) / 2);
    CHECK(c.count() == (1 << k) - 1);
  }
}

TEST_CASE("ratio scales the measure linearly") {
  for (int k = 1; k <= 5; ++k) {
    const CantorSet c = build_cantor(k, Rat(1, 3));
    CHECK(c.removed_measure == Rat(1, 3) * (Rat(1) - pow2(-k)) / 2);
  }
}

TEST_CASE("depth 2: three disjoint intervals of lengths 1/4, 1/16, 1/16") {
  const CantorSet c = build_cantor(2, Rat(1));
  REQUIRE(c.count() == 3);
  CHECK(c.interval(1).length() == Rat(1, 4));
  CHECK(c.interval(2).length() == Rat(1, 16));
  CHECK(c.interval(3).length() == Rat(1, 16));
  CHECK(c.interval(2).a == Rat(5, 32));
  CHECK(c.interval(2).b == Rat(7, 32));
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      const bool disjoint = c.interval(i).b <= c.interval(j).a || c.interval(j).b <= c.interval(i).a;
      CHECK(disjoint);
    }
}

TEST_CASE("enumeration: generation-major order with nonincreasing lengths") {
  const CantorSet c = build_cantor(6, Rat(2, 3));
  for (int n = 1; n <= c.count(); ++n) {
    const Interval& iv = c.interval(n);
    CHECK(iv.index == n);
    CHECK(iv.length() == Rat(2, 3) * rat_pow(Rat(1, 4), static_cast<unsigned long>(iv.generation)));
    CHECK(sgn(iv.a) > 0);
    CHECK(iv.b < 1);
    if (n > 1) {
      const Interval& prev = c.interval(n - 1);
      CHECK(iv.length() <= prev.length());
      const bool ordered = iv.generation > prev.generation ||
                           (iv.generation == prev.generation && prev.a < iv.a);
      CHECK(ordered);
    }
  }
}

TEST_CASE("measure ledger: removed plus remaining runs is exactly 1") {
  const CantorSet c = build_cantor(5, Rat(3, 7));
  Rat removed(0);
  for (const Interval& iv : c.intervals) removed += iv.length();
  CHECK(removed == c.removed_measure);

  // Remaining approximant of B: walk position-sorted gaps.
  Rat remaining = c.intervals[c.by_position.front() - 1].a;
  for (std::size_t i = 1; i < c.by_position.size(); ++i)
    remaining += c.intervals[c.by_position[i] - 1].a - c.intervals[c.by_position[i - 1] - 1].b;
  remaining += Rat(1) - c.intervals[c.by_position.back() - 1].b;
  CHECK(removed + remaining == Rat(1));
}

TEST_CASE("membership: endpoints and 0/1 belong to B, interiors do not") {
  const CantorSet c = build_cantor(4, Rat(1));
  CHECK(in_B(c, Rat(0)));
  CHECK(in_B(c, Rat(1)));
  for (int n = 1; n <= c.count(); ++n) {
    CHECK(in_B(c, c.interval(n).a));
    CHECK(in_B(c, c.interval(n).b));
    CHECK_FALSE(in_B(c, c.interval(n).midpoint()));
  }
  CHECK_THROWS_AS((void)in_B(c, Rat(-1, 10)), domain_error);
  CHECK_THROWS_AS((void)in_B(c, Rat(11, 10)), domain_error);
}

TEST_CASE("locate_removed agrees with a linear scan on random rationals") {
  const CantorSet c = build_cantor(5, Rat(1));
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    const long den = 1 + rng() % 100000;
    const long num = rng() % (den + 1);
    Rat y(num, den);
    y.canonicalize();
    std::optional<int> expect;
    for (const Interval& iv : c.intervals)
      if (iv.contains(y)) {
        expect = iv.index;
        break;
      }
    CHECK(locate_removed(c, y) == expect);
  }
}

TEST_CASE("fast locate agrees with the exact locate away from endpoints") {
  const CantorSet c = build_cantor(5, Rat(1));
  std::mt19937 rng(777);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double y = std::uniform_real_distribution<double>(0, 1)(rng);
    bool near_edge = false;
    for (const Interval& iv : c.intervals)
      if (std::abs(y - to_double(iv.a)) < 1e-9 || std::abs(y - to_double(iv.b)) < 1e-9)
        near_edge = true;
    if (near_edge) continue;
    ++checked;
    const auto exact = locate_removed(c, rat_from_double(y));
    CHECK(locate_removed_fast(c, y) == (exact ? *exact : 0));
  }
  CHECK(checked > 400);
}

TEST_CASE("find_interval_near: exhaustive-scan oracle agreement") {
  const CantorSet c = build_cantor(4, Rat(1));
  const Rat y0 = c.interval(1).a;  // 3/8
  const Rat delta(1, 4);
  const Interval& got = find_interval_near(c, y0, delta, 1);

  int expect = 0;
  for (int n = 2; n <= c.count(); ++n) {
    const Interval& iv = c.interval(n);
    if (y0 - delta <= iv.a && iv.b <= y0 + delta) {
      expect = n;
      break;
    }
  }
  CHECK(got.index == expect);
  CHECK(got.index == 2);            // (5/32, 7/32), generation 2, left of a_1
  CHECK(got.generation >= 2);
  CHECK(got.b < y0);
}

TEST_CASE("find_interval_near: widest window returns the first admissible index") {
  const CantorSet c = build_cantor(3, Rat(1));
  const Interval& got = find_interval_near(c, Rat(0), Rat(1), 1);
  CHECK(got.index == 2);
}

TEST_CASE("find_interval_near: exhausted depth raises depth_exhausted") {
  const CantorSet c = build_cantor(3, Rat(1));
  CHECK_THROWS_AS((void)find_interval_near(c, c.interval(1).a, Rat(1, 1000000), 1),
                  depth_exhausted_error);
}

TEST_CASE("find_interval_near: precondition violations") {
  const CantorSet c = build_cantor(3, Rat(1));
  CHECK_THROWS_AS((void)find_interval_near(c, c.interval(1).midpoint(), Rat(1, 4), 1),
                  domain_error);
  CHECK_THROWS_AS((void)find_interval_near(c, c.interval(1).a, Rat(0), 1), domain_error);
  CHECK_THROWS_AS((void)find_interval_near(c, c.interval(1).a, Rat(1, 4), 0), domain_error);
}

TEST_CASE("build rejects bad parameters") {
  CHECK_THROWS_AS((void)build_cantor(0, Rat(1)), domain_error);
  CHECK_THROWS_AS((void)build_cantor(3, Rat(0)), domain_error);
  CHECK_THROWS_AS((void)build_cantor(3, Rat(5, 4)), domain_error);
  CHECK_THROWS_AS((void)build_cantor(3, Rat(-1, 2)), domain_error);
}

TEST_CASE("no isolated endpoints: another interval within 4^-g for g <= K/2") {
  for (int k = 4; k <= 6; ++k) {
    const CantorSet c = build_cantor(k, Rat(1));
    const Rat sharp = Rat((1L << k) + 1) / (2 * rat_pow(Rat(4), static_cast<unsigned long>(k)));
    for (const Interval& iv : c.intervals) {
      if (iv.generation <= k / 2) {
        const Rat bound = rat_pow(Rat(1, 4), static_cast<unsigned long>(iv.generation));
        CHECK(distance_to_other_interval(c, iv.a, iv.index) <= bound);
        CHECK(distance_to_other_interval(c, iv.b, iv.index) <= bound);
      }
      if (iv.generation <= k - 1) {
        // Sharp bound: the nearest other removed interval sits within one
        // deepest-stage remaining piece, of exact length (2^K+1)/(2*4^K).
        CHECK(distance_to_other_interval(c, iv.a, iv.index) <= sharp);
        CHECK(distance_to_other_interval(c, iv.b, iv.index) <= sharp);
      }
    }
  }
}

TEST_CASE("density: longest removed-free run is (2^K+1)/(2*4^K) < 2^{2-K}") {
  for (int k = 1; k <= 8; ++k) {
    const CantorSet c = build_cantor(k, Rat(1));
    const Rat run = max_removed_free_run(c);
    CHECK(run == Rat((1L << k) + 1) / (2 * rat_pow(Rat(4), static_cast<unsigned long>(k))));
    CHECK(run < pow2(2 - k));
  }
}

}  // TEST_SUITE
