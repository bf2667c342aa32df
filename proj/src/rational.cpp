#include "mixcex/rational.hpp"

#include <cctype>

#include "mixcex/errors.hpp"

namespace mixcex {

namespace {

bool looks_like_number(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string num = text, den = "1";
  if (auto slash = text.find('/'); slash != std::string::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  if (!looks_like_number(num) || !looks_like_number(den))
    throw domain_error("not a rational: '" + text + "'");
  Rat r;
  if (r.set_str(num + "/" + den, 10) != 0)
    throw domain_error("not a rational: '" + text + "'");
  if (r.get_den() == 0) throw domain_error("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

std::string rational_string(const Rat& r) {
  // mpq constructors do not canonicalize; emission must.
  Rat c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string integer_string(const Int& n) { return n.get_str(); }

double to_double(const Rat& r) { return r.get_d(); }
double to_double(const Int& n) { return n.get_d(); }

Rat rat_from_double(double d) {
  Rat r;
  mpq_set_d(r.get_mpq_t(), d);
  r.canonicalize();
  return r;
}

Rat pow2(long e) {
  Rat r;
  if (e >= 0) {
    Int n;
    mpz_ui_pow_ui(n.get_mpz_t(), 2, static_cast<unsigned long>(e));
    r = Rat(n);
  } else {
    Int n;
    mpz_ui_pow_ui(n.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    r = Rat(1) / Rat(n);
  }
  return r;
}

Rat rat_pow(const Rat& r, unsigned long e) {
  Rat out(1);
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), r.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), r.get_den().get_mpz_t(), e);
  out = Rat(num) / Rat(den);
  out.canonicalize();
  return out;
}

Rat frac_part(const Rat& x) {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  Rat out = x - Rat(fl);
  out.canonicalize();
  return out;
}

Rat frac_scaled(const Int& q, const Rat& x) {
  if (sgn(x) < 0) throw domain_error("frac_scaled requires x >= 0");
  Int prod = q * x.get_num();
  Int rem;
  mpz_mod(rem.get_mpz_t(), prod.get_mpz_t(), x.get_den().get_mpz_t());
  Rat out(rem, x.get_den());
  out.canonicalize();
  return out;
}

}  // namespace mixcex
