#include "taucert/enclosure.hpp"

#include <cstdlib>
#include <sstream>

#include "taucert/errors.hpp"

namespace taucert {

namespace {

unsigned env_default_bits() {
  if (const char* s = std::getenv("TAUCERT_PRECISION_BITS")) {
    long v = std::atol(s);
    if (v >= 16 && v <= 4096) return static_cast<unsigned>(v);
  }
  return 128;
}

}  // namespace

Precision default_precision() {
  static const unsigned bits = env_default_bits();
  return Precision{bits, 1024 > bits ? 1024 : bits};
}

Enclosure enclose(const Rational& lo, const Rational& hi) {
  if (lo > hi) fail(ErrorCode::invalid_argument, "enclosure with lo > hi");
  return {lo, hi};
}

Enclosure round_outward(const Enclosure& e, unsigned bits) {
  return {dyadic_floor(e.lo, bits), dyadic_ceil(e.hi, bits)};
}

Enclosure add(const Enclosure& a, const Enclosure& b, unsigned bits) {
  return round_outward({a.lo + b.lo, a.hi + b.hi}, bits);
}

Enclosure sub(const Enclosure& a, const Enclosure& b, unsigned bits) {
  return round_outward({a.lo - b.hi, a.hi - b.lo}, bits);
}

Enclosure mul(const Enclosure& a, const Enclosure& b, unsigned bits) {
  Rational p1 = a.lo * b.lo;
  Rational p2 = a.lo * b.hi;
  Rational p3 = a.hi * b.lo;
  Rational p4 = a.hi * b.hi;
  Rational lo = rat_min(rat_min(p1, p2), rat_min(p3, p4));
  Rational hi = rat_max(rat_max(p1, p2), rat_max(p3, p4));
  return round_outward({lo, hi}, bits);
}

Enclosure neg(const Enclosure& a) { return {-a.hi, -a.lo}; }

Enclosure abs_enclose(const Enclosure& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return {-a.hi, -a.lo};
  return {Rational(0), rat_max(-a.lo, a.hi)};
}

Enclosure div(const Enclosure& a, const Enclosure& b, unsigned bits) {
  if (b.contains(Rational(0)))
    fail(ErrorCode::invalid_argument, "enclosure division by interval containing 0");
  return mul(a, {1 / b.hi, 1 / b.lo}, bits);
}

Enclosure pow_int(const Enclosure& a, unsigned k, unsigned bits) {
  if (k == 0) return exactly(Rational(1));
  if (k % 2 == 0 && a.contains(Rational(0))) {
    Rational m = rat_max(-a.lo, a.hi);
    Rational p = 1;
    for (unsigned i = 0; i < k; ++i) p *= m;
    return round_outward({Rational(0), p}, bits);
  }
  auto ipow = [](Rational x, unsigned n) {
    Rational r = 1;
    for (unsigned i = 0; i < n; ++i) r *= x;
    return r;
  };
  Rational plo = ipow(a.lo, k);
  Rational phi = ipow(a.hi, k);
  if (plo > phi) std::swap(plo, phi);
  return round_outward({plo, phi}, bits);
}

namespace {

// floor(2^bits * sqrt(p/q)) / 2^bits, sound from below.
Rational sqrt_lower(const Rational& x, unsigned bits) {
  BigInt scaled = (numerator(x) << (2 * bits)) / denominator(x);  // floor
  return Rational(isqrt(scaled), BigInt(1) << bits);
}

Rational sqrt_upper(const Rational& x, unsigned bits) {
  BigInt num = numerator(x) << (2 * bits);
  BigInt den = denominator(x);
  BigInt scaled = num / den;
  if (scaled * den != num) ++scaled;  // ceil
  BigInt r = isqrt(scaled);
  if (r * r < scaled) ++r;
  return Rational(r, BigInt(1) << bits);
}

Rational root_lower(const Rational& x, unsigned k, unsigned bits) {
  BigInt scaled = (numerator(x) << (k * bits)) / denominator(x);
  return Rational(iroot(scaled, k), BigInt(1) << bits);
}

Rational root_upper(const Rational& x, unsigned k, unsigned bits) {
  BigInt num = numerator(x) << (k * bits);
  BigInt den = denominator(x);
  BigInt scaled = num / den;
  if (scaled * den != num) ++scaled;
  BigInt r = iroot(scaled, k);
  BigInt rk = 1;
  for (unsigned i = 0; i < k; ++i) rk *= r;
  if (rk < scaled) ++r;
  return Rational(r, BigInt(1) << bits);
}

}  // namespace

Enclosure sqrt_enclose(const Enclosure& a, unsigned bits) {
  if (a.lo < 0)
    fail(ErrorCode::invalid_argument, "sqrt of enclosure touching negative values");
  return {sqrt_lower(a.lo, bits), sqrt_upper(a.hi, bits)};
}

Enclosure root_enclose(const Enclosure& a, unsigned k, unsigned bits) {
  if (k == 0) fail(ErrorCode::invalid_argument, "0th root");
  if (a.lo < 0) fail(ErrorCode::invalid_argument, "root of enclosure touching negative values");
  if (k == 1) return a;
  return {root_lower(a.lo, k, bits), root_upper(a.hi, k, bits)};
}

Enclosure pow_rational(const Enclosure& a, const Rational& p, unsigned bits) {
  if (p < 0) fail(ErrorCode::invalid_argument, "pow_rational needs p >= 0");
  if (a.lo < 0) fail(ErrorCode::invalid_argument, "pow_rational needs a nonnegative base");
  BigInt num = numerator(p);
  BigInt den = denominator(p);
  if (num > 1024 || den > 1024)
    fail(ErrorCode::invalid_argument, "pow_rational exponent too large");
  unsigned a_exp = num.convert_to<unsigned>();
  unsigned b_exp = den.convert_to<unsigned>();
  Enclosure powered = pow_int(a, a_exp, bits);
  return root_enclose(powered, b_exp, bits);
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  return {rat_min(a.lo, b.lo), rat_max(a.hi, b.hi)};
}

std::string to_string(const Enclosure& e) {
  std::ostringstream os;
  os << "[" << to_string(e.lo) << ", " << to_string(e.hi) << "]";
  return os.str();
}

}  // namespace taucert
