#include "hardylab/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace hardylab {

namespace {

bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

int ilog2(std::int64_t v) {
  int e = 0;
  while (v > 1) {
    v >>= 1;
    ++e;
  }
  return e;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("Rational: cannot parse integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("Rational: empty string");
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const bool neg = text.front() == '-';
    std::string_view whole = text.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 17) throw std::invalid_argument("Rational: too many decimal digits");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::int64_t num = (whole.empty() ? 0 : parse_int(whole)) * den + (frac.empty() ? 0 : parse_int(frac));
    return Rational(neg ? -num : num, den);
  }
  return Rational(parse_int(text), 1);
}

bool Rational::is_power_of_two() const { return is_pow2(num_) && is_pow2(den_); }

int Rational::log2() const {
  if (!is_power_of_two()) throw std::domain_error("Rational::log2: not a power of two");
  return ilog2(num_) - ilog2(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<long double>(a.num_) * b.den_ < static_cast<long double>(b.num_) * a.den_;
}

}  // namespace hardylab
