#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace taucert {

using BigInt = boost::multiprecision::cpp_int;

/// Exact scalar carrier for every endpoint in the toolkit.  cpp_rational keeps
/// the value canonical (lowest terms, positive denominator) after each
/// operation, which is exactly the invariant the certificates rely on.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline int rat_sign(const Rational& q) { return q < 0 ? -1 : (q > 0 ? 1 : 0); }

inline const Rational& rat_min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

double to_double(const Rational& q);

/// Renders in the spec's exact form: `p/q`, with `/q` omitted when q = 1.
std::string to_string(const Rational& q);

/// Decimal hint for human-facing output, e.g. "~0.630930".
std::string decimal_hint(const Rational& q, int digits = 6);

/// Parses `p`, `p/q` or `-p/q`.  Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

/// pow2(k) = 2^k as an exact rational, k may be negative.
Rational pow2(long k);

/// Largest multiple of 2^-bits that is <= q.
Rational dyadic_floor(const Rational& q, unsigned bits);

/// Smallest multiple of 2^-bits that is >= q.
Rational dyadic_ceil(const Rational& q, unsigned bits);

/// floor(sqrt(n)) for n >= 0.
BigInt isqrt(const BigInt& n);

/// floor(n^(1/k)) for n >= 0, k >= 1.
BigInt iroot(const BigInt& n, unsigned k);

struct RationalPoint {
  Rational x;
  Rational y;

  bool operator==(const RationalPoint& o) const { return x == o.x && y == o.y; }
};

/// Chebyshev (max-coordinate) distance; exact, unlike the Euclidean one.
Rational chebyshev(const RationalPoint& a, const RationalPoint& b);

/// Squared Euclidean distance (exact).
Rational dist_sq(const RationalPoint& a, const RationalPoint& b);

}  // namespace taucert
