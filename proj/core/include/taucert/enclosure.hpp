#pragma once

#include <string>

#include "taucert/rational.hpp"

namespace taucert {

/// Working precision for outward-rounded evaluation.  `bits` is the number of
/// fractional bits of the dyadic rounding grid; callers escalate by doubling
/// until their enclosures are tight enough or `cap` aborts with a precision
/// error.
struct Precision {
  unsigned bits = 128;
  unsigned cap = 1024;

  Precision next() const { return {bits * 2, cap}; }
  bool exhausted() const { return bits > cap; }
};

Precision default_precision();

/// An interval [lo, hi] guaranteed to contain the real value it certifies.
/// Endpoints are exact rationals; the arithmetic below rounds them outward to
/// the dyadic grid of the active precision, so serialized endpoints are
/// dyadic.
struct Enclosure {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool is_point() const { return lo == hi; }
};

inline Enclosure exactly(const Rational& v) { return {v, v}; }
Enclosure enclose(const Rational& lo, const Rational& hi);

/// Outward rounding to the dyadic grid with `bits` fractional bits.
Enclosure round_outward(const Enclosure& e, unsigned bits);

Enclosure add(const Enclosure& a, const Enclosure& b, unsigned bits);
Enclosure sub(const Enclosure& a, const Enclosure& b, unsigned bits);
Enclosure mul(const Enclosure& a, const Enclosure& b, unsigned bits);
Enclosure neg(const Enclosure& a);
Enclosure abs_enclose(const Enclosure& a);

/// a / b; requires 0 strictly outside b.
Enclosure div(const Enclosure& a, const Enclosure& b, unsigned bits);

/// Nonnegative integer power (tight for even powers through zero).
Enclosure pow_int(const Enclosure& a, unsigned k, unsigned bits);

/// sqrt over a nonnegative enclosure; errors when a.lo < 0.
Enclosure sqrt_enclose(const Enclosure& a, unsigned bits);

/// k-th root over a nonnegative enclosure.
Enclosure root_enclose(const Enclosure& a, unsigned k, unsigned bits);

/// x^(p) for rational p >= 0 over a nonnegative enclosure (monotone route
/// (x^num)^(1/den)).
Enclosure pow_rational(const Enclosure& a, const Rational& p, unsigned bits);

Enclosure hull(const Enclosure& a, const Enclosure& b);

/// Certified strict order: every point of a lies below every point of b.
inline bool strictly_below(const Enclosure& a, const Enclosure& b) { return a.hi < b.lo; }
inline bool strictly_below(const Enclosure& a, const Rational& v) { return a.hi < v; }
inline bool strictly_above(const Enclosure& a, const Rational& v) { return a.lo > v; }

std::string to_string(const Enclosure& e);

}  // namespace taucert
