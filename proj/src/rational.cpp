#include "cfp/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cfp {

namespace mp = boost::multiprecision;

double to_double(const Rational& r) {
  // mpq_get_d truncates; round to nearest through a decimal with enough digits.
  const double truncated = r.convert_to<double>();
  if (truncated == 0.0 && r == 0) return 0.0;
  const double up = std::nextafter(truncated, HUGE_VAL);
  const double down = std::nextafter(truncated, -HUGE_VAL);
  double best = truncated;
  Rational best_err = abs(Rational(truncated) - r);
  for (double cand : {up, down}) {
    if (!std::isfinite(cand)) continue;
    Rational err = abs(Rational(cand) - r);
    if (err < best_err) {
      best_err = err;
      best = cand;
    }
  }
  return best;
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite value has no rational form");
  return Rational(v);
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

namespace {

mp::mpz_int parse_integer(std::string_view digits) {
  if (digits.empty()) throw std::invalid_argument("empty integer");
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad digit in number");
  // A leading zero would make the mpz constructor read octal.
  const auto nz = digits.find_first_not_of('0');
  return mp::mpz_int(std::string(nz == std::string_view::npos ? "0" : digits.substr(nz)));
}

mp::mpz_int pow10(long e) {
  mp::mpz_int p = 1;
  for (long i = 0; i < e; ++i) p *= 10;
  return p;
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    if (exp_text.empty()) throw std::invalid_argument("missing exponent");
    bool exp_negative = false;
    if (exp_text.front() == '-' || exp_text.front() == '+') {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    long value = 0;
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), value);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size() || value > 4000)
      throw std::invalid_argument("bad exponent");
    exponent = exp_negative ? -value : value;
    text = text.substr(0, e);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    frac_len = static_cast<long>(text.size() - dot - 1);
  } else {
    digits = std::string(text);
  }
  if (digits.empty()) throw std::invalid_argument("empty number");
  mp::mpz_int mantissa = parse_integer(digits);
  long scale = exponent - frac_len;
  Rational r = scale >= 0 ? Rational(mantissa * pow10(scale)) : Rational(mantissa, pow10(-scale));
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return num / den;
  }
  return parse_decimal(text);
}

std::string exact_string(const Rational& r) {
  if (mp::denominator(r) == 1) return mp::numerator(r).str();
  return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

std::string display_string(const Rational& r) {
  if (mp::denominator(r) <= 1000000 && mp::msb(mp::abs(mp::numerator(r)) + 1) < 60) return exact_string(r);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", to_double(r));
  return buf;
}

Rational compact(const Rational& r, unsigned max_bits) {
  const auto& num = mp::numerator(r);
  const auto& den = mp::denominator(r);
  const unsigned num_bits = num == 0 ? 0 : static_cast<unsigned>(mp::msb(mp::abs(num)));
  const unsigned den_bits = static_cast<unsigned>(mp::msb(den));
  if (num_bits <= max_bits && den_bits <= max_bits) return r;
  return from_double(to_double(r));
}

Rational ipow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero raised to a negative power");
    return Rational(1) / ipow(base, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  unsigned e = static_cast<unsigned>(exponent);
  while (e) {
    if (e & 1u) result *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return result;
}

}  // namespace cfp
