#include "mixcex/bump.hpp"

#include <cmath>

#include "mixcex/errors.hpp"

namespace mixcex {

namespace {

// psi(t)  = t^3 (1-t)^3          = t^3 - 3t^4 + 3t^5 - t^6
// psi'(t) = 3t^2(1-t)^2(1-2t)    = 3t^2 - 12t^3 + 15t^4 - 6t^5
// psi''(t)= 6t(1-t)(5t^2-5t+1)   = 6t - 36t^2 + 60t^3 - 30t^4
template <typename T>
T poly33_horner(const T& t, int order) {
  switch (order) {
    case 0:
      return t * t * t * (T(1) + t * (T(-3) + t * (T(3) - t)));
    case 1:
      return t * t * (T(3) + t * (T(-12) + t * (T(15) + t * T(-6))));
    case 2:
      return t * (T(6) + t * (T(-36) + t * (T(60) + t * T(-30))));
    default:
      throw domain_error("bump order must be 0, 1 or 2");
  }
}

RatBounds bounds(Rat lo, Rat hi) {
  lo.canonicalize();
  hi.canonicalize();
  return {std::move(lo), std::move(hi)};
}

double exp_bump_eval(double t, int order) {
  if (t <= 0.0 || t >= 1.0) {
    if (order < 0 || order > 2) throw domain_error("bump order must be 0, 1 or 2");
    return 0.0;
  }
  const double u = t * (1.0 - t);
  const double psi = std::exp(-1.0 / u);
  if (order == 0) return psi;
  if (psi == 0.0) return 0.0;  // deep under the support edge; avoid 0 * inf
  const double up = 1.0 - 2.0 * t;
  const double g = up / (u * u);
  if (order == 1) return psi * g;
  if (order == 2) return psi * (g * g - 2.0 * (u + up * up) / (u * u * u));
  throw domain_error("bump order must be 0, 1 or 2");
}

}  // namespace

BumpProfile BumpProfile::poly33() {
  BumpProfile p;
  p.id_ = "poly33";
  p.exact_ = true;
  p.argmax_ = Rat(1, 2);
  p.max_ = bounds(Rat(1, 64), Rat(1, 64));
  p.integral_ = bounds(Rat(1, 140), Rat(1, 140));
  // sup|psi'| = 3*sqrt(5)/125 = 0.0536656..., attained at t = (5 +- sqrt(5))/10.
  p.sup_d1_ = bounds(Rat(53665, 1000000), Rat(5367, 100000));
  p.sup_d2_ = bounds(Rat(3, 8), Rat(3, 8));  // attained at t = 1/2
  return p;
}

BumpProfile BumpProfile::exp_bump() {
  BumpProfile p;
  p.id_ = "expbump";
  p.exact_ = false;
  p.argmax_ = Rat(1, 2);
  // Numeric enclosures (max is e^-4); adequate for diagnostics, not for the
  // exact certificates, which require the polynomial profile.
  p.max_ = bounds(Rat(183156, 10000000), Rat(183157, 10000000));
  p.integral_ = bounds(Rat(70298, 10000000), Rat(70299, 10000000));
  p.sup_d1_ = bounds(Rat(77578, 1000000), Rat(7759, 100000));
  p.sup_d2_ = bounds(Rat(590757, 1000000), Rat(5909, 10000));
  return p;
}

BumpProfile BumpProfile::by_name(const std::string& id) {
  if (id == "poly33") return poly33();
  if (id == "expbump") return exp_bump();
  throw domain_error("unknown bump profile: '" + id + "'");
}

double BumpProfile::eval(double t, int order) const {
  if (id_ == "poly33") {
    if (t <= 0.0 || t >= 1.0) {
      if (order < 0 || order > 2) throw domain_error("bump order must be 0, 1 or 2");
      return 0.0;
    }
    return poly33_horner<double>(t, order);
  }
  return exp_bump_eval(t, order);
}

Rat BumpProfile::eval_exact(const Rat& t, int order) const {
  if (!exact_) throw domain_error("exact bump evaluation requires the poly33 profile");
  if (sgn(t) <= 0 || t >= 1) {
    if (order < 0 || order > 2) throw domain_error("bump order must be 0, 1 or 2");
    return Rat(0);
  }
  return poly33_horner<Rat>(t, order);
}

}  // namespace mixcex
