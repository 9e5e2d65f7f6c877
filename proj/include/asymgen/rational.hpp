#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace asymgen {

/// Exact rational with 64-bit parts. Always reduced, den > 0, zero is 0/1.
/// Arithmetic throws std::overflow_error when a result leaves int64 range;
/// callers that fold constants fall back to floating point in that case.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }
  bool is_zero() const noexcept { return num_ == 0; }
  int sign() const noexcept { return (num_ > 0) - (num_ < 0); }
  double to_double() const noexcept { return double(num_) / double(den_); }

  /// Largest integer <= value.
  std::int64_t floor() const noexcept;

  Rational operator-() const;
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  /// Integer power; negative exponents invert.
  Rational pow(std::int64_t e) const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// "p" or "p/q".
  std::string str() const;

  /// Exact value of a finite decimal literal such as "0.8333" or "-12.5".
  static std::optional<Rational> from_decimal(std::string_view text);
  /// Exact value of the shortest round-trip decimal representation of x.
  static std::optional<Rational> from_double(double x);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);
/// Integer power; throws std::overflow_error on overflow.
std::int64_t ipow(std::int64_t base, std::int64_t exp);

}  // namespace asymgen
