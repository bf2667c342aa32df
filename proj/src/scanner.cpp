#include "mixcex/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mixcex/errors.hpp"

namespace mixcex {

namespace {

// Van der Corput radical inverse in base 2; vdc(1) = 1/2, vdc(2) = 1/4,
// vdc(3) = 3/4, ...  Always in (0,1), and the first S values are a prefix of
// the first S' >= S values.
double vdc(unsigned i) {
  double r = 0, b = 0.5;
  while (i) {
    if (i & 1u) r += b;
    b *= 0.5;
    i >>= 1;
  }
  return r;
}

void check_window(const FunctionHandle& f, double x, double y, int n) {
  if (n < 1) throw domain_error("window index n must be >= 1");
  const double w = 1.0 / n;
  if (x - w < f.rect.x0 || x + w > f.rect.x1 || y < f.rect.y0 || y > f.rect.y1)
    throw step_geometry_error("window (x - 1/n, x + 1/n) leaves the rectangle of '" + f.tag + "'");
}

}  // namespace

bool test_A_mn(const FunctionHandle& f, double x, double y, int m, int n, int subsample) {
  if (m < 1 || subsample < 4) throw domain_error("test_A_mn: need m >= 1 and subsample >= 4");
  check_window(f, x, y, n);
  const double w = 1.0 / n;
  double lo = 0, hi = 0;
  for (int i = 1; i <= subsample; ++i) {
    const double v = f(x + (2.0 * vdc(static_cast<unsigned>(i)) - 1.0) * w, y);
    if (i == 1) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return hi - lo <= 1.0 / m;
}

bool test_B_mn(const FunctionHandle& f, double x, double y, int m, int n, int subsample) {
  if (m < 1 || subsample < 4) throw domain_error("test_B_mn: need m >= 1 and subsample >= 4");
  check_window(f, x, y, n);
  const double w = 1.0 / n;
  double lo = 0, hi = 0;
  bool first = true;
  for (int i = 1; i <= subsample; ++i) {
    const double u = x + vdc(static_cast<unsigned>(i)) * w;
    const double fu = f(u, y);
    for (int j = 1; j <= subsample; ++j) {
      const double v = x - vdc(static_cast<unsigned>(j)) * w;
      const double q = (fu - f(v, y)) / (u - v);
      if (first) {
        lo = hi = q;
        first = false;
      } else {
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
    }
  }
  return hi - lo <= 1.0 / m;
}

int ExistenceMap::count_in_E() const {
  int c = 0;
  for (std::uint8_t v : in_E) c += v != 0;
  return c;
}

std::vector<int> ExistenceMap::fully_excluded_columns() const {
  std::vector<int> out;
  for (int ix = 0; ix < nx(); ++ix) {
    bool all_out = true;
    for (int iy = 0; iy < ny() && all_out; ++iy) all_out = !e_at(ix, iy);
    if (all_out) out.push_back(ix);
  }
  return out;
}

ExistenceMap scan(const FunctionHandle& f, const ScanConfig& cfg, int threads) {
  if (cfg.grid_nx < 2 || cfg.grid_ny < 2 || cfg.m_max < 1 || cfg.n_max < 1 || cfg.subsample < 4)
    throw domain_error("scan: invalid config");
  ExistenceMap map;
  map.cfg = cfg;
  map.xs.resize(static_cast<std::size_t>(cfg.grid_nx));
  map.ys.resize(static_cast<std::size_t>(cfg.grid_ny));
  for (int i = 0; i < cfg.grid_nx; ++i)
    map.xs[static_cast<std::size_t>(i)] =
        cfg.rect.x0 + (cfg.rect.x1 - cfg.rect.x0) * i / (cfg.grid_nx - 1);
  for (int j = 0; j < cfg.grid_ny; ++j)
    map.ys[static_cast<std::size_t>(j)] =
        cfg.rect.y0 + (cfg.rect.y1 - cfg.rect.y0) * j / (cfg.grid_ny - 1);
  const std::size_t total = map.xs.size() * map.ys.size();
  map.in_A.assign(total, 0);
  map.in_B.assign(total, 0);
  map.in_E.assign(total, 0);

  auto scan_row = [&](int iy) {
    const double y = map.ys[static_cast<std::size_t>(iy)];
    for (int ix = 0; ix < cfg.grid_nx; ++ix) {
      const double x = map.xs[static_cast<std::size_t>(ix)];
      bool a = false, b = false;
      for (int n = 1; n <= cfg.n_max && !a; ++n) {
        const double w = 1.0 / n;
        if (x - w < f.rect.x0 || x + w > f.rect.x1) continue;
        a = test_A_mn(f, x, y, cfg.m_max, n, cfg.subsample);
      }
      for (int n = 1; n <= cfg.n_max && !b; ++n) {
        const double w = 1.0 / n;
        if (x - w < f.rect.x0 || x + w > f.rect.x1) continue;
        b = test_B_mn(f, x, y, cfg.m_max, n, cfg.subsample);
      }
      const std::size_t at =
          static_cast<std::size_t>(iy) * map.xs.size() + static_cast<std::size_t>(ix);
      map.in_A[at] = a ? 1 : 0;
      map.in_B[at] = b ? 1 : 0;
      map.in_E[at] = (a && b) ? 1 : 0;
    }
  };

  if (threads <= 1) {
    for (int iy = 0; iy < cfg.grid_ny; ++iy) scan_row(iy);
  } else {
    const int workers = std::min(threads, cfg.grid_ny);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int iy = w; iy < cfg.grid_ny; iy += workers) scan_row(iy);
      });
    for (auto& th : pool) th.join();
  }
  return map;
}

}  // namespace mixcex
