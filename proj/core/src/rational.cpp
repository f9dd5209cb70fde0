#include "taucert/rational.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace taucert {

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

std::string decimal_hint(const Rational& q, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << "~" << to_double(q);
  return os.str();
}

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  auto read_digits = [&](BigInt& out) -> bool {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return false;
    out = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      out = out * 10 + (text[pos] - '0');
      ++pos;
    }
    return true;
  };
  BigInt num;
  if (!read_digits(num)) return std::nullopt;
  BigInt den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    if (!read_digits(den)) return std::nullopt;
    if (den == 0) return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;
  Rational q(num, den);
  return negative ? Rational(-q) : q;
}

Rational pow2(long k) {
  BigInt p = BigInt(1) << static_cast<unsigned>(k < 0 ? -k : k);
  return k >= 0 ? Rational(p) : Rational(1, p);
}

Rational dyadic_floor(const Rational& q, unsigned bits) {
  BigInt scaled_num = numerator(q) << bits;
  BigInt d = denominator(q);
  BigInt quot = scaled_num / d;
  if (scaled_num < 0 && quot * d != scaled_num) --quot;  // floor for negatives
  return Rational(quot, BigInt(1) << bits);
}

Rational dyadic_ceil(const Rational& q, unsigned bits) {
  return -dyadic_floor(-q, bits);
}

BigInt isqrt(const BigInt& n) { return boost::multiprecision::sqrt(n); }

BigInt iroot(const BigInt& n, unsigned k) {
  if (n <= 1 || k == 1) return n;
  // Newton iteration on x -> ((k-1)x + n/x^(k-1))/k, seeded above the root.
  BigInt x = BigInt(1) << static_cast<unsigned>(boost::multiprecision::msb(n) / k + 1);
  while (true) {
    BigInt xk1 = 1;
    for (unsigned i = 0; i + 1 < k; ++i) xk1 *= x;
    BigInt next = ((k - 1) * x + n / xk1) / k;
    if (next >= x) break;
    x = next;
  }
  return x;
}

Rational chebyshev(const RationalPoint& a, const RationalPoint& b) {
  return rat_max(rat_abs(a.x - b.x), rat_abs(a.y - b.y));
}

Rational dist_sq(const RationalPoint& a, const RationalPoint& b) {
  Rational dx = a.x - b.x;
  Rational dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace taucert
