#include "horolab/rational.hpp"

#include <charconv>
#include <numeric>

#include "horolab/error.hpp"

namespace horolab {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw InputError("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / (g == 0 ? 1 : g);
  den_ = den / (g == 0 ? 1 : g);
}

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 12) throw InputError("too many decimal places in '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::string_view int_part = text.substr(0, dot);
    const bool negative = !int_part.empty() && int_part.front() == '-';
    std::int64_t whole = int_part.empty() || int_part == "-" || int_part == "+" ? 0 : parse_int(int_part, text);
    std::int64_t part = frac.empty() ? 0 : parse_int(frac, text);
    if (!frac.empty() && (frac.front() == '-' || frac.front() == '+')) {
      throw InputError("malformed rational '" + std::string(text) + "'");
    }
    std::int64_t magnitude = (whole < 0 ? -whole : whole) * scale + part;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_int(text, text), 1);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::ceil_to_grid(std::int64_t resolution) const {
  // ceil(num * resolution / den) / resolution, rounding toward +infinity.
  const std::int64_t scaled = num_ * resolution;
  std::int64_t q = scaled / den_;
  if (scaled % den_ != 0 && scaled > 0) ++q;
  return Rational(q, resolution);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw InputError("division by zero rational");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return (a.num_ * b.den_) <=> (b.num_ * a.den_);
}

}  // namespace horolab
