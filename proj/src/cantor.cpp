#include "mixcex/cantor.hpp"

#include <algorithm>
#include <limits>

#include "mixcex/errors.hpp"

namespace mixcex {

const Interval& CantorSet::interval(int n) const {
  if (n < 1 || n > count()) throw domain_error("interval index out of range");
  return intervals[static_cast<std::size_t>(n - 1)];
}

CantorSet build_cantor(int depth, const Rat& ratio_in) {
  if (depth < 1) throw domain_error("build_cantor: depth must be >= 1");
  Rat ratio = ratio_in;
  ratio.canonicalize();  // caller-built mpq values need not be canonical
  if (sgn(ratio) <= 0 || ratio > 1) throw domain_error("build_cantor: ratio must lie in (0,1]");

  CantorSet c;
  c.depth = depth;
  c.ratio = ratio;
  c.removed_measure = 0;

  std::vector<std::pair<Rat, Rat>> segments{{Rat(0), Rat(1)}};
  int index = 0;
  Rat removal = ratio;  // stage-g removal length, updated to ratio * 4^-g below
  for (int g = 1; g <= depth; ++g) {
    removal /= 4;
    std::vector<std::pair<Rat, Rat>> next;
    next.reserve(segments.size() * 2);
    for (const auto& [lo, hi] : segments) {
      Rat mid = (lo + hi) / 2;
      Interval iv;
      iv.index = ++index;
      iv.generation = g;
      iv.a = mid - removal / 2;
      iv.b = mid + removal / 2;
      c.removed_measure += removal;
      next.emplace_back(lo, iv.a);
      next.emplace_back(iv.b, hi);
      c.intervals.push_back(std::move(iv));
    }
    segments = std::move(next);
  }

  c.by_position.resize(c.intervals.size());
  for (std::size_t i = 0; i < c.intervals.size(); ++i) c.by_position[i] = static_cast<int>(i + 1);
  std::sort(c.by_position.begin(), c.by_position.end(),
            [&](int l, int r) { return c.intervals[l - 1].a < c.intervals[r - 1].a; });
  c.pos_a.reserve(c.by_position.size());
  c.pos_b.reserve(c.by_position.size());
  for (int n : c.by_position) {
    c.pos_a.push_back(to_double(c.intervals[n - 1].a));
    c.pos_b.push_back(to_double(c.intervals[n - 1].b));
  }
  return c;
}

std::optional<int> locate_removed(const CantorSet& c, const Rat& y) {
  // Last interval (in position order) with a < y, then an exact b-check.
  int lo = 0, hi = static_cast<int>(c.by_position.size()) - 1, best = -1;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    if (c.intervals[c.by_position[mid] - 1].a < y) {
      best = mid;
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  if (best < 0) return std::nullopt;
  const Interval& iv = c.intervals[c.by_position[best] - 1];
  if (y < iv.b) return iv.index;
  return std::nullopt;
}

int locate_removed_fast(const CantorSet& c, double y) {
  // last interval with a strictly below y, then an open-endpoint check
  auto it = std::lower_bound(c.pos_a.begin(), c.pos_a.end(), y);
  if (it == c.pos_a.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - c.pos_a.begin()) - 1;
  if (y < c.pos_b[i]) return c.by_position[i];
  return 0;
}

bool in_B(const CantorSet& c, const Rat& y) {
  if (sgn(y) < 0 || y > 1) throw domain_error("in_B: y must lie in [0,1]");
  return !locate_removed(c, y).has_value();
}

const Interval& find_interval_near(const CantorSet& c, const Rat& y0, const Rat& delta, int m) {
  if (!in_B(c, y0)) throw domain_error("find_interval_near: y0 must lie in B");
  if (sgn(delta) <= 0) throw domain_error("find_interval_near: delta must be positive");
  if (m < 1) throw domain_error("find_interval_near: m must be >= 1");
  const Rat lo = y0 - delta, hi = y0 + delta;
  for (int n = m + 1; n <= c.count(); ++n) {
    const Interval& iv = c.intervals[static_cast<std::size_t>(n - 1)];
    if (lo <= iv.a && iv.b <= hi) return iv;
  }
  throw depth_exhausted_error("find_interval_near: no interval with index > " + std::to_string(m) +
                              " inside the window at depth " + std::to_string(c.depth));
}

Rat distance_to_other_interval(const CantorSet& c, const Rat& point, int self_index) {
  bool found = false;
  Rat best;
  for (const Interval& iv : c.intervals) {
    if (iv.index == self_index) continue;
    Rat d;
    if (point < iv.a)
      d = iv.a - point;
    else if (point > iv.b)
      d = point - iv.b;
    else
      d = 0;
    if (!found || d < best) {
      best = d;
      found = true;
    }
  }
  if (!found) throw domain_error("distance_to_other_interval: no other interval exists");
  return best;
}

Rat max_removed_free_run(const CantorSet& c) {
  Rat best = c.intervals[c.by_position.front() - 1].a;  // run [0, a_first]
  Rat prev_b = c.intervals[c.by_position.front() - 1].b;
  for (std::size_t i = 1; i < c.by_position.size(); ++i) {
    const Interval& iv = c.intervals[c.by_position[i] - 1];
    Rat gap = iv.a - prev_b;
    if (gap > best) best = gap;
    prev_b = iv.b;
  }
  Rat tail = Rat(1) - prev_b;
  if (tail > best) best = tail;
  return best;
}

}  // namespace mixcex
