#pragma once

#include <gmpxx.h>

#include <string>

namespace mixcex {

// Exact arithmetic types used throughout: arbitrary-precision integers and
// canonical rationals. Every set endpoint, measure, schedule constant and
// phase is kept exact; doubles appear only at the evaluation surface, always
// with a stated error bound.
using Int = mpz_class;
using Rat = mpq_class;

// Parses "p/q" or "p" (optionally signed). Throws domain_error on malformed
// input or zero denominator. The result is canonicalized.
Rat parse_rational(const std::string& text);

// Canonical emission: always "p/q", including "5/1" for integers, so emitted
// documents are byte-stable.
std::string rational_string(const Rat& r);
std::string integer_string(const Int& n);

// Round-to-nearest is not what mpq_get_d does (it truncates toward zero);
// to_double therefore never overshoots the magnitude of r.
double to_double(const Rat& r);
double to_double(const Int& n);

// Exact dyadic rational equal to the given finite double.
Rat rat_from_double(double d);

// 2^e for any sign of e.
Rat pow2(long e);

// r^e for e >= 0.
Rat rat_pow(const Rat& r, unsigned long e);

// x - floor(x), in [0,1).
Rat frac_part(const Rat& x);

// frac(q*x) computed exactly: (q*num(x) mod den(x)) / den(x).  Requires x >= 0.
Rat frac_scaled(const Int& q, const Rat& x);

}  // namespace mixcex
