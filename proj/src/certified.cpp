#include "mixcex/certified.hpp"

#include <mpfr.h>

#include "mixcex/errors.hpp"

namespace mixcex {

namespace {

// Thin RAII wrapper; everything below rounds to nearest, so each operation
// contributes at most one unit u = 2^(1-p)/2 = 2^-p of relative error.
class Big {
public:
  explicit Big(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Big() { mpfr_clear(v); }
  Big(const Big&) = delete;
  Big& operator=(const Big&) = delete;
  mpfr_t v;
};

void set_rat(Big& out, const Rat& r) { mpfr_set_q(out.v, r.get_mpq_t(), MPFR_RNDN); }

constexpr unsigned kStartBits = 128;

}  // namespace

int cmp_pi_scaled_abs_sin(const Rat& t, const Rat& scale, unsigned max_bits) {
  if (sgn(t) < 0 || t >= 1) throw domain_error("cmp_pi_scaled_abs_sin: t must lie in [0,1)");
  if (sgn(scale) <= 0) throw domain_error("cmp_pi_scaled_abs_sin: scale must be positive");

  for (unsigned bits = kStartBits; bits <= max_bits; bits *= 2) {
    Big pi(bits), th(bits), s(bits), m(bits), e(bits), margin(bits), one(bits);
    mpfr_const_pi(pi.v, MPFR_RNDN);
    set_rat(th, t);
    mpfr_mul(th.v, th.v, pi.v, MPFR_RNDN);
    mpfr_mul_ui(th.v, th.v, 2, MPFR_RNDN);  // th ~ 2*pi*t, abs err <= 22u
    mpfr_sin(s.v, th.v, MPFR_RNDN);         // |s - sin(2 pi t)| <= 23u
    mpfr_abs(s.v, s.v, MPFR_RNDN);
    set_rat(m, scale);
    mpfr_mul(m.v, m.v, pi.v, MPFR_RNDN);  // m ~ pi*scale, rel err <= 3u
    mpfr_mul(e.v, m.v, s.v, MPFR_RNDN);   // e ~ pi*scale*|sin|, abs err <= 28u*(pi*scale)

    // margin = 64 * 2^-bits * (pi*scale + 1): a factor-2 cushion over the
    // worst-case bound derived above.
    mpfr_set_ui(one.v, 1, MPFR_RNDN);
    mpfr_add(margin.v, m.v, one.v, MPFR_RNDN);
    mpfr_mul_ui(margin.v, margin.v, 64, MPFR_RNDN);
    mpfr_mul_2si(margin.v, margin.v, -static_cast<long>(bits), MPFR_RNDN);

    mpfr_sub(e.v, e.v, one.v, MPFR_RNDN);  // e - 1
    Big abs_e(bits);
    mpfr_abs(abs_e.v, e.v, MPFR_RNDN);
    if (mpfr_cmp(abs_e.v, margin.v) > 0) return mpfr_sgn(e.v) > 0 ? 1 : -1;
  }
  throw precision_error("cmp_pi_scaled_abs_sin: undecided at precision cap");
}

Int smallest_int_above_inv_pi_eps_sin(const Rat& eps, const Rat& delta, unsigned max_bits) {
  if (sgn(eps) <= 0) throw domain_error("frequency selection: eps must be positive");
  if (sgn(delta) <= 0 || delta > 1)
    throw domain_error("frequency selection: delta must lie in (0,1]");

  const Rat half_delta = delta / 2;
  for (unsigned bits = kStartBits; bits <= max_bits; bits *= 2) {
    Big pi(bits), th(bits), s(bits), d(bits), r(bits), rel(bits), lo(bits), hi(bits);
    mpfr_const_pi(pi.v, MPFR_RNDN);
    set_rat(th, half_delta);
    mpfr_mul(th.v, th.v, pi.v, MPFR_RNDN);  // ~ pi*delta/2, abs err <= 12u
    mpfr_sin(s.v, th.v, MPFR_RNDN);         // abs err <= 13u; s in (0,1]
    set_rat(d, eps);
    mpfr_mul(d.v, d.v, pi.v, MPFR_RNDN);
    mpfr_mul(d.v, d.v, s.v, MPFR_RNDN);  // ~ pi*eps*sin(pi*delta/2)
    mpfr_ui_div(r.v, 1, d.v, MPFR_RNDN);

    // Relative error of r is below u*(16 + 26/s); double it for the margin.
    Big inv_s(bits);
    mpfr_ui_div(inv_s.v, 26, s.v, MPFR_RNDN);
    mpfr_add_ui(rel.v, inv_s.v, 16, MPFR_RNDN);
    mpfr_mul_2si(rel.v, rel.v, 1 - static_cast<long>(bits), MPFR_RNDN);

    Big pad(bits);
    mpfr_mul(pad.v, r.v, rel.v, MPFR_RNDN);
    mpfr_sub(lo.v, r.v, pad.v, MPFR_RNDN);
    mpfr_add(hi.v, r.v, pad.v, MPFR_RNDN);

    Int fl_lo, fl_hi;
    mpfr_get_z(fl_lo.get_mpz_t(), lo.v, MPFR_RNDD);
    mpfr_get_z(fl_hi.get_mpz_t(), hi.v, MPFR_RNDD);
    if (fl_lo == fl_hi) return fl_lo + 1;
  }
  throw precision_error("frequency selection: undecided at precision cap");
}

}  // namespace mixcex
