#pragma once

#include <string>

#include "mixcex/rational.hpp"

namespace mixcex {

// Rational enclosure [lo, hi] of a profile constant; lo == hi for constants
// that are exact rationals.
struct RatBounds {
  Rat lo, hi;
  bool exact() const { return lo == hi; }
};

// A C^2 bump supported exactly on (0,1), together with the cached constants
// the rest of the construction needs: max value and its location, the
// integral over [0,1], and upper bounds on sup|psi'| and sup|psi''|.
//
// The default profile is the polynomial psi(t) = t^3 (1-t)^3, which evaluates
// exactly in rational arithmetic.  The classical smooth bump
// exp(-1/(t(1-t))) is available as an alternative; its constants are numeric
// enclosures, not exact, so certificates that need exact arithmetic require
// the polynomial profile.
class BumpProfile {
public:
  static BumpProfile poly33();
  static BumpProfile exp_bump();
  static BumpProfile by_name(const std::string& id);  // "poly33" | "expbump"

  const std::string& id() const { return id_; }
  bool exact() const { return exact_; }

  const Rat& argmax() const { return argmax_; }         // 1/2 for both profiles
  const RatBounds& max_value() const { return max_; }   // psi(argmax)
  const RatBounds& integral() const { return integral_; }
  const RatBounds& sup_d1() const { return sup_d1_; }
  const RatBounds& sup_d2() const { return sup_d2_; }

  // psi, psi' or psi'' at t; identically zero outside (0,1).
  double eval(double t, int order) const;

  // Exact evaluation; available only for the polynomial profile.
  Rat eval_exact(const Rat& t, int order) const;

private:
  std::string id_;
  bool exact_ = false;
  Rat argmax_;
  RatBounds max_, integral_, sup_d1_, sup_d2_;
};

inline double bump_eval(const BumpProfile& p, double t, int order) { return p.eval(t, order); }

}  // namespace mixcex
