#include "taucert/phi.hpp"

#include <cmath>
#include <sstream>

#include "taucert/errors.hpp"

namespace taucert {

std::optional<Box2> intersect(const Box2& a, const Box2& b) {
  auto x = intersect(a.x, b.x);
  auto y = intersect(a.y, b.y);
  if (!x || !y) return std::nullopt;
  return Box2{*x, *y};
}

std::string to_string(const Box2& b) {
  std::ostringstream os;
  os << "[" << to_string(b.x.lo) << "," << to_string(b.x.hi) << "]x[" << to_string(b.y.lo)
     << "," << to_string(b.y.hi) << "]";
  return os.str();
}

Box2 parse_box(const std::string& text) {
  auto sep = text.find("]x[");
  if (sep == std::string::npos || text.empty() || text.front() != '[' || text.back() != ']')
    fail(ErrorCode::parse_error, "expected box [a,b]x[c,d]: " + text);
  auto parse_iv = [&](const std::string& part) -> ClosedInterval {
    auto comma = part.find(',');
    if (comma == std::string::npos)
      fail(ErrorCode::parse_error, "expected interval [a,b]: " + part);
    auto lo = parse_rational(part.substr(0, comma));
    auto hi = parse_rational(part.substr(comma + 1));
    if (!lo || !hi || *lo > *hi)
      fail(ErrorCode::parse_error, "bad interval endpoints: " + part);
    return {*lo, *hi};
  };
  ClosedInterval xs = parse_iv(text.substr(1, sep - 1));
  ClosedInterval ys = parse_iv(text.substr(sep + 3, text.size() - sep - 4));
  return Box2{xs, ys};
}

PhiSpec parse_phi_spec(const std::string& text) {
  std::string body = text;
  bool implicit = false;
  if (body.rfind("implicit:", 0) == 0) {
    implicit = true;
    body = body.substr(9);
  }
  PhiSpec spec;
  if (body == "dist") {
    spec = PhiSpec::dist();
  } else if (body == "dot") {
    spec = PhiSpec::dot();
  } else if (body.rfind("pnorm:", 0) == 0) {
    auto p = parse_rational(body.substr(6));
    if (!p || *p < 1) fail(ErrorCode::parse_error, "pnorm exponent must be a rational >= 1");
    spec = PhiSpec::pnorm(*p);
  } else {
    fail(ErrorCode::parse_error, "unknown phi spec: " + text);
  }
  spec.implicit = implicit;
  return spec;
}

std::string render(const PhiSpec& spec) {
  std::string body;
  switch (spec.kind) {
    case PhiSpec::Kind::euclidean: body = "dist"; break;
    case PhiSpec::Kind::dot: body = "dot"; break;
    case PhiSpec::Kind::pnorm: body = "pnorm:" + to_string(spec.p); break;
  }
  return spec.implicit ? "implicit:" + body : body;
}

Enclosure phi_value(const PhiSpec& spec, const Box2& X, const Box2& Y, unsigned bits) {
  Enclosure x1 = as_enclosure(X.x), x2 = as_enclosure(X.y);
  Enclosure y1 = as_enclosure(Y.x), y2 = as_enclosure(Y.y);
  switch (spec.kind) {
    case PhiSpec::Kind::euclidean: {
      Enclosure dx = sub(y1, x1, bits);
      Enclosure dy = sub(y2, x2, bits);
      Enclosure s = add(pow_int(dx, 2, bits), pow_int(dy, 2, bits), bits);
      return sqrt_enclose(s, bits);
    }
    case PhiSpec::Kind::dot:
      return add(mul(x1, y1, bits), mul(x2, y2, bits), bits);
    case PhiSpec::Kind::pnorm: {
      Enclosure dx = abs_enclose(sub(y1, x1, bits));
      Enclosure dy = abs_enclose(sub(y2, x2, bits));
      Enclosure s = add(pow_rational(dx, spec.p, bits), pow_rational(dy, spec.p, bits), bits);
      Rational inv_p = 1 / spec.p;
      return pow_rational(s, inv_p, bits);
    }
  }
  fail(ErrorCode::invalid_argument, "corrupt phi spec");
}

double phi_value_double(const PhiSpec& spec, double x1, double x2, double y1, double y2) {
  switch (spec.kind) {
    case PhiSpec::Kind::euclidean:
      return std::hypot(y1 - x1, y2 - x2);
    case PhiSpec::Kind::dot:
      return x1 * y1 + x2 * y2;
    case PhiSpec::Kind::pnorm: {
      double p = to_double(spec.p);
      return std::pow(std::pow(std::abs(y1 - x1), p) + std::pow(std::abs(y2 - x2), p), 1.0 / p);
    }
  }
  return 0.0;
}

std::pair<Enclosure, Enclosure> phi_partials_y(const PhiSpec& spec, const Box2& X,
                                               const Box2& Y, unsigned bits) {
  Enclosure x1 = as_enclosure(X.x), x2 = as_enclosure(X.y);
  Enclosure y1 = as_enclosure(Y.x), y2 = as_enclosure(Y.y);
  switch (spec.kind) {
    case PhiSpec::Kind::dot:
      return {x1, x2};
    case PhiSpec::Kind::euclidean: {
      Enclosure dx = sub(y1, x1, bits);
      Enclosure dy = sub(y2, x2, bits);
      Enclosure norm = sqrt_enclose(add(pow_int(dx, 2, bits), pow_int(dy, 2, bits), bits), bits);
      return {div(dx, norm, bits), div(dy, norm, bits)};
    }
    case PhiSpec::Kind::pnorm: {
      // d phi / d y_i = sign(d_i) * (|d_i| / phi)^(p-1)
      Enclosure dx = sub(y1, x1, bits);
      Enclosure dy = sub(y2, x2, bits);
      Enclosure phi = phi_value(spec, X, Y, bits);
      Rational pm1 = spec.p - 1;
      auto partial = [&](const Enclosure& d) -> Enclosure {
        Enclosure ratio = div(abs_enclose(d), phi, bits);
        Enclosure mag = pm1 == 0 ? exactly(Rational(1)) : pow_rational(ratio, pm1, bits);
        if (d.lo >= 0) return mag;
        if (d.hi <= 0) return neg(mag);
        return {-mag.hi, mag.hi};  // sign not determined on this box
      };
      return {partial(dx), partial(dy)};
    }
  }
  fail(ErrorCode::invalid_argument, "corrupt phi spec");
}

std::optional<int> exact_sign_phi_minus_t(const PhiSpec& spec, const RationalPoint& x,
                                          const RationalPoint& y, const Rational& t) {
  switch (spec.kind) {
    case PhiSpec::Kind::dot:
      return rat_sign(x.x * y.x + x.y * y.y - t);
    case PhiSpec::Kind::euclidean: {
      if (t < 0) return 1;  // phi >= 0 > t
      return rat_sign(dist_sq(x, y) - t * t);
    }
    case PhiSpec::Kind::pnorm: {
      if (denominator(spec.p) != 1) return std::nullopt;
      if (t < 0) return 1;
      unsigned p = numerator(spec.p).convert_to<unsigned>();
      auto ipow = [](Rational v, unsigned n) {
        Rational r = 1;
        for (unsigned i = 0; i < n; ++i) r *= v;
        return r;
      };
      Rational lhs = ipow(rat_abs(y.x - x.x), p) + ipow(rat_abs(y.y - x.y), p);
      return rat_sign(lhs - ipow(t, p));
    }
  }
  return std::nullopt;
}

Rational lipschitz_upper(const PhiSpec& spec, const Box2& X, const Box2& Y, unsigned bits) {
  if (spec.kind == PhiSpec::Kind::euclidean) return 1;  // |grad_y |x-y|| = 1
  auto [p1, p2] = phi_partials_y(spec, X, Y, bits);
  Enclosure norm =
      sqrt_enclose(add(pow_int(abs_enclose(p1), 2, bits), pow_int(abs_enclose(p2), 2, bits), bits),
                   bits);
  return norm.hi;
}

DerivativeVerdict certify_derivative_condition(const PhiSpec& spec, const Box2& boxA,
                                               const Box2& boxB, unsigned bits) {
  DerivativeVerdict verdict;
  auto degenerate = [](const Box2& b) {
    return b.x.lo > b.x.hi || b.y.lo > b.y.hi;
  };
  if (degenerate(boxA) || degenerate(boxB))
    fail(ErrorCode::invalid_argument, "derivative condition needs nondegenerate boxes");

  if (spec.kind == PhiSpec::Kind::dot) {
    // Partials are the pin coordinates; they vanish exactly when a coordinate
    // range of boxA crosses zero.
    if (boxA.x.contains(Rational(0))) {
      verdict.witness_a = Box2{{Rational(0), Rational(0)}, boxA.y};
      verdict.witness_b = boxB;
      return verdict;
    }
    if (boxA.y.contains(Rational(0))) {
      verdict.witness_a = Box2{boxA.x, {Rational(0), Rational(0)}};
      verdict.witness_b = boxB;
      return verdict;
    }
    verdict.certified = true;
    verdict.m1 = rat_min(rat_abs(boxA.x.lo), rat_abs(boxA.x.hi));
    verdict.m2 = rat_min(rat_abs(boxA.y.lo), rat_abs(boxA.y.hi));
    return verdict;
  }

  // euclidean / pnorm: a partial vanishes exactly where the corresponding
  // coordinate ranges meet.
  if (auto overlap = intersect(boxA.x, boxB.x)) {
    verdict.witness_a = Box2{*overlap, boxA.y};
    verdict.witness_b = Box2{*overlap, boxB.y};
    return verdict;
  }
  if (auto overlap = intersect(boxA.y, boxB.y)) {
    verdict.witness_a = Box2{boxA.x, *overlap};
    verdict.witness_b = Box2{boxB.x, *overlap};
    return verdict;
  }
  auto [p1, p2] = phi_partials_y(spec, boxA, boxB, bits);
  Enclosure a1 = abs_enclose(p1);
  Enclosure a2 = abs_enclose(p2);
  if (!(a1.lo > 0) || !(a2.lo > 0)) {
    // Disjoint coordinate ranges make the true bound positive; a zero lower
    // bound can only come from enclosure slack at too coarse a precision.
    verdict.witness_a = boxA;
    verdict.witness_b = boxB;
    return verdict;
  }
  verdict.certified = true;
  verdict.m1 = a1.lo;
  verdict.m2 = a2.lo;
  return verdict;
}

std::optional<Rational> certify_partial2_lower(const PhiSpec& spec, const Box2& boxA,
                                               const Box2& boxB, unsigned bits) {
  if (spec.kind == PhiSpec::Kind::dot) {
    if (boxA.y.contains(Rational(0))) return std::nullopt;
    return rat_min(rat_abs(boxA.y.lo), rat_abs(boxA.y.hi));
  }
  if (intersect(boxA.y, boxB.y)) return std::nullopt;
  auto [p1, p2] = phi_partials_y(spec, boxA, boxB, bits);
  (void)p1;
  Enclosure a2 = abs_enclose(p2);
  if (!(a2.lo > 0)) return std::nullopt;
  return a2.lo;
}

}  // namespace taucert
