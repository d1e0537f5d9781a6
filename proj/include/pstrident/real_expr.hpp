#pragma once

// Real numbers supplied as text, held as certified rational enclosures.
//
// Accepted spellings:
//   1.41421356        decimal literal; denotes the enclosure +-1 unit in the
//                     last written digit (covers truncated and rounded input)
//   7/3, rational:7/3 exact rational
//   -2                integer without point or exponent, exact
//   sqrt:2            the quadratic surd sqrt(2)
//   surd:a,b,n,c      the quadratic surd (a + b*sqrt(n)) / c
// Symbolic values can be re-enclosed at any number of digits; literals cannot.

#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "pstrident/errors.hpp"

namespace pstrident {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Closed rational interval [lo, hi] known to contain the real value.
struct HighPrecisionReal {
  BigRational lo;
  BigRational hi;

  static HighPrecisionReal exact(const BigRational& v) { return {v, v}; }
  bool is_exact() const { return lo == hi; }
  BigRational midpoint() const { return (lo + hi) / 2; }
  BigRational width() const { return hi - lo; }
  bool contains(const BigRational& v) const { return lo <= v && v <= hi; }
};

/// Correctly rounded conversion of a rational to double (via a long decimal
/// string and strtod).
inline double to_double(const BigRational& v) {
  using Dec = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<60>>;
  const Dec num(boost::multiprecision::numerator(v));
  const Dec den(boost::multiprecision::denominator(v));
  const Dec q = num / den;
  const std::string text = q.str(40, std::ios_base::scientific);
  return std::strtod(text.c_str(), nullptr);
}

inline double to_double(const HighPrecisionReal& x) { return to_double(x.midpoint()); }

/// HighPrecisionReal for x / y; y must not contain zero.
inline HighPrecisionReal divide(const HighPrecisionReal& x, const HighPrecisionReal& y) {
  require(y.lo > 0 || y.hi < 0, ErrorKind::Invariant, "divisor enclosure contains zero");
  const BigRational c[] = {x.lo / y.lo, x.lo / y.hi, x.hi / y.lo, x.hi / y.hi};
  HighPrecisionReal out{c[0], c[0]};
  for (const auto& v : c) {
    if (v < out.lo) out.lo = v;
    if (v > out.hi) out.hi = v;
  }
  return out;
}

struct QuadraticSurd {
  BigInt a = 0, b = 1, n = 2, c = 1;  // (a + b*sqrt(n)) / c
};

struct DecimalLiteral {
  std::string text;
};

class RealExpr {
 public:
  using Form = std::variant<DecimalLiteral, BigRational, QuadraticSurd>;

  static RealExpr parse(std::string_view text);

  /// Enclosure with at least `digits` correct decimal digits for symbolic forms.
  HighPrecisionReal enclose(int digits) const;

  bool symbolic() const { return std::holds_alternative<QuadraticSurd>(form_); }
  bool rational() const {
    if (std::holds_alternative<BigRational>(form_)) return true;
    if (const auto* s = std::get_if<QuadraticSurd>(&form_)) {
      const BigInt r = boost::multiprecision::sqrt(s->n);
      return s->b == 0 || r * r == s->n;
    }
    return false;
  }
  double to_double() const;
  const std::string& text() const { return text_; }
  const Form& form() const { return form_; }

 private:
  Form form_;
  std::string text_;
};

namespace detail {

inline BigInt pow10(int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

inline BigInt parse_int(std::string_view s) {
  std::string_view body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body.remove_prefix(1);
  }
  require(!body.empty(), ErrorKind::Config, "empty integer in '" + std::string(s) + "'");
  BigInt v = 0;
  for (char ch : body) {
    require(ch >= '0' && ch <= '9', ErrorKind::Config, "bad integer '" + std::string(s) + "'");
    v = v * 10 + (ch - '0');
  }
  return neg ? BigInt(-v) : v;
}

/// Decimal literal as an exact rational plus the unit of its last digit.
inline std::pair<BigRational, BigRational> parse_decimal(std::string_view s) {
  std::string_view body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    exponent = static_cast<int>(parse_int(body.substr(e + 1)));
    body = body.substr(0, e);
  }
  BigInt mantissa = 0;
  int frac_digits = 0;
  bool seen_point = false, seen_digit = false;
  for (char ch : body) {
    if (ch == '.') {
      require(!seen_point, ErrorKind::Config, "bad decimal '" + std::string(s) + "'");
      seen_point = true;
      continue;
    }
    require(ch >= '0' && ch <= '9', ErrorKind::Config, "bad decimal '" + std::string(s) + "'");
    mantissa = mantissa * 10 + (ch - '0');
    seen_digit = true;
    if (seen_point) ++frac_digits;
  }
  require(seen_digit, ErrorKind::Config, "bad decimal '" + std::string(s) + "'");
  const int scale = exponent - frac_digits;
  BigRational unit = scale >= 0 ? BigRational(pow10(scale)) : BigRational(BigInt(1), pow10(-scale));
  BigRational value = BigRational(neg ? BigInt(-mantissa) : mantissa) * unit;
  return {value, unit};
}

}  // namespace detail

inline RealExpr RealExpr::parse(std::string_view text) {
  RealExpr out;
  out.text_ = std::string(text);
  auto starts = [&](std::string_view p) { return text.substr(0, p.size()) == p; };
  if (starts("sqrt:")) {
    QuadraticSurd s;
    s.a = 0;
    s.b = 1;
    s.n = detail::parse_int(text.substr(5));
    s.c = 1;
    require(s.n >= 0, ErrorKind::Config, "sqrt of a negative number");
    out.form_ = s;
  } else if (starts("surd:")) {
    std::string_view rest = text.substr(5);
    BigInt parts[4];
    for (int i = 0; i < 4; ++i) {
      const auto comma = rest.find(',');
      require((i < 3) == (comma != std::string_view::npos), ErrorKind::Config,
              "surd needs exactly four fields a,b,n,c");
      parts[i] = detail::parse_int(rest.substr(0, comma));
      if (i < 3) rest.remove_prefix(comma + 1);
    }
    require(parts[2] >= 0 && parts[3] != 0, ErrorKind::Config, "surd needs n >= 0 and c != 0");
    out.form_ = QuadraticSurd{parts[0], parts[1], parts[2], parts[3]};
  } else if (starts("rational:") || text.find('/') != std::string_view::npos) {
    std::string_view body = starts("rational:") ? text.substr(9) : text;
    const auto slash = body.find('/');
    require(slash != std::string_view::npos, ErrorKind::Config, "rational needs p/q");
    const BigInt p = detail::parse_int(body.substr(0, slash));
    const BigInt q = detail::parse_int(body.substr(slash + 1));
    require(q != 0, ErrorKind::Config, "rational with zero denominator");
    out.form_ = BigRational(p, q);
  } else if (text.find_first_of(".eE") == std::string_view::npos) {
    out.form_ = BigRational(detail::parse_int(text));
  } else {
    detail::parse_decimal(text);  // validates
    out.form_ = DecimalLiteral{std::string(text)};
  }
  return out;
}

inline HighPrecisionReal RealExpr::enclose(int digits) const {
  if (const auto* lit = std::get_if<DecimalLiteral>(&form_)) {
    const auto [value, unit] = detail::parse_decimal(lit->text);
    return {value - unit, value + unit};
  }
  if (const auto* r = std::get_if<BigRational>(&form_)) return HighPrecisionReal::exact(*r);
  const auto& s = std::get<QuadraticSurd>(form_);
  // |b|*sqrt(n)*10^digits lies in [root, root+1], equality when the square is exact.
  const BigInt scale = detail::pow10(digits);
  const BigInt radicand = s.b * s.b * s.n * scale * scale;
  const BigInt root = boost::multiprecision::sqrt(radicand);
  BigRational lo(root, scale);
  BigRational hi = root * root == radicand ? lo : BigRational(root + 1, scale);
  if (s.b < 0) {
    std::swap(lo, hi);
    lo = -lo;
    hi = -hi;
  }
  lo = (lo + s.a) / s.c;
  hi = (hi + s.a) / s.c;
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

inline double RealExpr::to_double() const {
  if (const auto* lit = std::get_if<DecimalLiteral>(&form_)) {
    return std::strtod(lit->text.c_str(), nullptr);
  }
  return pstrident::to_double(enclose(40).midpoint());
}

}  // namespace pstrident
