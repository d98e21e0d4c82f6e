#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace horolab {

// Exact rational with int64 numerator/denominator, always normalized
// (den > 0, gcd(num, den) = 1). Used for scales and bilipschitz constants
// so that grid searches and fits never depend on floating point.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "p", "p/q" or a decimal literal such as "1.25".
  static Rational parse(std::string_view text);
  std::string to_string() const;

  // Smallest multiple of 1/resolution that is >= *this.
  Rational ceil_to_grid(std::int64_t resolution) const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace horolab
