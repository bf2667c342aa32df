#pragma once

#include "mixcex/rational.hpp"

namespace mixcex {

// Certified comparisons against transcendental quantities.  Each routine
// carries an explicit rounding-error bound through an MPFR evaluation and
// escalates the working precision until the comparison is decided; it never
// guesses.  For rational t the value sin(2*pi*t) is algebraic while the
// thresholds below are rational multiples of 1/pi (transcendental), so
// equality is impossible and escalation terminates.

// Sign of (pi * scale * |sin(2*pi*t)| - 1), guaranteed -1 or +1.
// Preconditions: 0 <= t < 1, scale > 0.  Throws precision_error if the
// comparison is still ambiguous at max_bits.
int cmp_pi_scaled_abs_sin(const Rat& t, const Rat& scale, unsigned max_bits = 1u << 14);

// Smallest integer strictly greater than 1 / (pi * eps * sin(pi*delta/2)).
// Preconditions: eps > 0, 0 < delta <= 1.
Int smallest_int_above_inv_pi_eps_sin(const Rat& eps, const Rat& delta,
                                      unsigned max_bits = 1u << 14);

}  // namespace mixcex
