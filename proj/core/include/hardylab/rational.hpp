#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hardylab {

/// Exact rational number num/den with den > 0, always reduced.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Parses "a/b", "a", or a finite binary fraction such as "0.015625".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// True when the value is 2^e for some integer e.
  bool is_power_of_two() const;
  /// log2 of the value; only valid when is_power_of_two().
  int log2() const;

  std::string str() const;

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace hardylab
