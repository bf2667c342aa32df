#include "mixcex/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "mixcex/certified.hpp"
#include "mixcex/errors.hpp"

namespace mixcex {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// frac(q * x) for a nonnegative double x, exact: x is the dyadic rational
// mant / 2^shift, so the fraction is ((q mod 2^shift) * (mant mod 2^shift))
// mod 2^shift over 2^shift.  Falls back to GMP for extreme exponents.
double frac_int_times_double(const Int& q, double x) {
  if (x == 0.0) return 0.0;
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));  // 53-bit integer
  const int shift = 53 - e;
  if (shift <= 0) return 0.0;  // q * x is an integer
  if (shift < 64 && q.fits_ulong_p()) {
    const std::uint64_t mask = (std::uint64_t{1} << shift) - 1;
    const unsigned __int128 prod =
        static_cast<unsigned __int128>(q.get_ui() & mask) * (mant & mask);
    const auto rem = static_cast<std::uint64_t>(prod & mask);
    return std::ldexp(static_cast<double>(rem), -shift);
  }
  Int two_shift;
  mpz_ui_pow_ui(two_shift.get_mpz_t(), 2, static_cast<unsigned long>(shift));
  Int rem;
  {
    Int prod = q * Int(static_cast<unsigned long>(mant));
    mpz_mod(rem.get_mpz_t(), prod.get_mpz_t(), two_shift.get_mpz_t());
  }
  return to_double(Rat(rem, two_shift));
}

ScheduleEntry build_entry(const Interval& iv, Rat eps, Rat delta) {
  ScheduleEntry e;
  e.index = iv.index;
  e.generation = iv.generation;
  e.len = iv.length();
  e.eps = std::move(eps);
  e.delta = std::move(delta);
  e.freq = smallest_int_above_inv_pi_eps_sin(e.eps, e.delta);
  e.eps_d = to_double(e.eps);
  e.amp1_d = to_double(Rat(e.eps * e.freq)) * kPi;
  e.amp2_d = 2.0 * kPi * kPi * to_double(Rat(e.eps * e.freq * e.freq));
  e.thresh_d = 1.0 / (kPi * to_double(Rat(e.eps * e.freq)));
  return e;
}

}  // namespace

const ScheduleEntry& KernelSchedule::entry(int n) const {
  if (n < 1 || n > count()) throw domain_error("schedule index out of range");
  return entries_[static_cast<std::size_t>(n - 1)];
}

Rat KernelSchedule::delta_tail(int m) const {
  if (m < 1 || m > count()) throw domain_error("delta_tail: index out of range");
  return delta_prefix_.back() - (m >= 2 ? delta_prefix_[static_cast<std::size_t>(m - 2)] : Rat(0));
}

Rat KernelSchedule::delta_tail_infinite(int m) const {
  if (!has_closed_form_tail())
    throw domain_error("closed-form delta tail requires the triangular rule");
  if (m < 1) throw domain_error("delta_tail_infinite: m must be >= 1");
  return Rat(1, m);
}

Rat KernelSchedule::shrink_ratio(int n) const {
  const ScheduleEntry& e = entry(n);
  return e.eps / (e.len * e.len);
}

KernelSchedule make_schedule_impl(const CantorSet& c, std::vector<Rat> eps_table,
                                  std::vector<Rat> delta_table, std::string eps_rule,
                                  std::string delta_rule) {
  const int n_terms = c.count();
  KernelSchedule s;
  s.eps_rule_ = std::move(eps_rule);
  s.delta_rule_ = std::move(delta_rule);
  s.entries_.reserve(static_cast<std::size_t>(n_terms));
  s.delta_prefix_.reserve(static_cast<std::size_t>(n_terms));

  // Validate everything cheap before paying for any certified frequency
  // selection: positivity, the shrink condition (eps_n / |I_n|^2
  // nonincreasing and no larger than |I_1|), and summability.
  Rat running(0), prev_ratio;
  for (int n = 1; n <= n_terms; ++n) {
    const Rat& eps = eps_table[static_cast<std::size_t>(n - 1)];
    const Rat& delta = delta_table[static_cast<std::size_t>(n - 1)];
    if (sgn(eps) <= 0)
      throw schedule_violation_error("eps_" + std::to_string(n) + " must be positive");
    if (sgn(delta) <= 0)
      throw schedule_violation_error("delta_" + std::to_string(n) + " must be positive");
    const Rat len = c.interval(n).length();
    Rat ratio = eps / (len * len);
    if (n == 1 && ratio > len)
      throw schedule_violation_error("eps_1 / |I_1|^2 exceeds |I_1|");
    if (n > 1 && ratio > prev_ratio)
      throw schedule_violation_error("eps_n / |I_n|^2 increases at n = " + std::to_string(n));
    prev_ratio = std::move(ratio);
    running += delta;
    s.delta_prefix_.push_back(running);
  }
  // The triangular rule telescopes to 1 - 1/(N+1) exactly; a supplied table
  // must fit within unit mass (the finite stand-in for a summable series).
  if (s.delta_rule_ == "triangular") {
    if (running + Rat(1, n_terms + 1) != 1)
      throw schedule_violation_error("triangular delta sums are inconsistent");
  } else if (running > 1) {
    throw schedule_violation_error("delta table mass exceeds 1: series not summable");
  }

  for (int n = 1; n <= n_terms; ++n)
    s.entries_.push_back(build_entry(c.interval(n), eps_table[static_cast<std::size_t>(n - 1)],
                                     delta_table[static_cast<std::size_t>(n - 1)]));
  return s;
}

KernelSchedule make_schedule(const CantorSet& c) {
  std::vector<Rat> eps, delta;
  eps.reserve(static_cast<std::size_t>(c.count()));
  delta.reserve(static_cast<std::size_t>(c.count()));
  for (int n = 1; n <= c.count(); ++n) {
    Rat len = c.interval(n).length();
    eps.push_back(len * len * len);
    delta.push_back(Rat(1, static_cast<long>(n) * (n + 1)));
  }
  return make_schedule_impl(c, std::move(eps), std::move(delta), "cube", "triangular");
}

KernelSchedule make_schedule(const CantorSet& c, const std::vector<Rat>& eps_table,
                             const std::vector<Rat>& delta_table) {
  if (static_cast<int>(eps_table.size()) != c.count() ||
      static_cast<int>(delta_table.size()) != c.count())
    throw domain_error("schedule tables must have one entry per interval");
  // caller-built mpq values need not be canonical
  std::vector<Rat> eps = eps_table, delta = delta_table;
  for (Rat& r : eps) r.canonicalize();
  for (Rat& r : delta) r.canonicalize();
  return make_schedule_impl(c, std::move(eps), std::move(delta), "table", "table");
}

OscillatorEval phi_eval(const KernelSchedule& s, int n, const Rat& x) {
  if (sgn(x) < 0 || x > 1) throw domain_error("phi_eval: x must lie in [0,1]");
  const ScheduleEntry& e = s.entry(n);
  const double t = to_double(frac_scaled(e.freq, x));
  const double theta = kTwoPi * t;
  OscillatorEval out;
  out.value = 0.5 * e.eps_d * (1.0 - std::cos(theta));
  if (out.value < 0.0) out.value = 0.0;
  if (out.value > e.eps_d) out.value = e.eps_d;  // eps_d <= eps exactly
  out.d1 = e.amp1_d * std::sin(theta);
  out.d2 = e.amp2_d * std::cos(theta);
  out.value_err = 24.0 * kEps * e.eps_d;
  out.d1_err = 32.0 * kEps * e.amp1_d;
  out.d2_err = 32.0 * kEps * e.amp2_d;
  return out;
}

double phi_fast(const ScheduleEntry& e, double x, int order) {
  const double ax = std::fabs(x);
  const double t = frac_int_times_double(e.freq, ax);
  const double theta = kTwoPi * t;
  switch (order) {
    case 0: {
      double v = 0.5 * e.eps_d * (1.0 - std::cos(theta));
      return v < 0.0 ? 0.0 : (v > e.eps_d ? e.eps_d : v);
    }
    case 1: {
      const double sgn_x = x < 0 ? -1.0 : 1.0;
      return sgn_x * e.amp1_d * std::sin(theta);
    }
    case 2:
      return e.amp2_d * std::cos(theta);
    default:
      throw domain_error("phi_fast: order must be 0, 1 or 2");
  }
}

bool in_A_n(const KernelSchedule& s, int n, const Rat& x) {
  if (sgn(x) < 0 || x > 1) throw domain_error("in_A_n: x must lie in [0,1]");
  const ScheduleEntry& e = s.entry(n);
  const Rat t = frac_scaled(e.freq, x);
  if (sgn(t) == 0 || t == Rat(1, 2)) return false;  // sin vanishes exactly
  return cmp_pi_scaled_abs_sin(t, Rat(e.eps * e.freq)) > 0;
}

bool measure_condition_certified(const KernelSchedule& s, int n) {
  const ScheduleEntry& e = s.entry(n);
  return cmp_pi_scaled_abs_sin(e.delta / 4, Rat(e.eps * e.freq)) > 0;
}

double measure_A_analytic(const ScheduleEntry& e) {
  return 1.0 - (2.0 / kPi) * std::asin(e.thresh_d);
}

double measure_A_mc(const ScheduleEntry& e, long samples, std::uint64_t seed, int threads) {
  if (samples <= 0) throw domain_error("measure_A_mc: samples must be positive");
  auto count_range = [&](long lo, long hi) {
    long hits = 0;
    for (long i = lo; i < hi; ++i) {
      const std::uint64_t z = splitmix64(seed + static_cast<std::uint64_t>(i));
      const double x = std::ldexp(static_cast<double>(z >> 11), -53);
      const double t = frac_int_times_double(e.freq, x);
      if (std::fabs(std::sin(kTwoPi * t)) >= e.thresh_d) ++hits;
    }
    return hits;
  };
  if (threads <= 1) return static_cast<double>(count_range(0, samples)) / static_cast<double>(samples);

  const int workers = std::min<long>(threads, samples);
  std::vector<long> partial(static_cast<std::size_t>(workers), 0);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const long lo = samples * w / workers, hi = samples * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] { partial[static_cast<std::size_t>(w)] = count_range(lo, hi); });
  }
  for (auto& th : pool) th.join();
  long hits = 0;
  for (long p : partial) hits += p;
  return static_cast<double>(hits) / static_cast<double>(samples);
}

Rat find_point_in_tail(const KernelSchedule& s, int m, int n_max, int budget) {
  if (m < 1 || n_max < m || n_max > s.count())
    throw domain_error("find_point_in_tail: need 1 <= m <= n_max <= schedule range");
  int tried = 0;
  for (int d = 1; tried < budget; ++d) {
    const long denom = 1L << d;
    for (long j = 1; j < denom && tried < budget; j += 2) {
      ++tried;
      Rat x(j, denom);
      bool ok = true;
      for (int n = m; n <= n_max && ok; ++n) ok = in_A_n(s, n, x);
      if (ok) return x;
    }
    if (d >= 62) break;
  }
  throw search_exhausted_error("find_point_in_tail: no joint point within budget " +
                               std::to_string(budget));
}

}  // namespace mixcex
