#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace gridalloc {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. The denominator is always positive; values are
// reduced on construction so word sizes stay small. Equality and ordering
// are cross-multiplication, so Fraction(8, 2) == Fraction(4, 1).
class Fraction {
 public:
  Fraction() : num_(0), den_(1) {}
  Fraction(BigInt numerator, BigInt denominator);
  Fraction(std::int64_t numerator, std::int64_t denominator)
      : Fraction(BigInt(numerator), BigInt(denominator)) {}
  static Fraction from_int(std::int64_t v) { return Fraction(v, 1); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }
  Fraction abs() const;

  Fraction operator+(const Fraction& o) const;
  Fraction operator-(const Fraction& o) const;
  Fraction operator*(const Fraction& o) const;
  Fraction operator/(const Fraction& o) const;  // throws on division by zero
  Fraction operator-() const;

  bool operator==(const Fraction& o) const { return num_ * o.den_ == o.num_ * den_; }
  bool operator!=(const Fraction& o) const { return !(*this == o); }
  bool operator<(const Fraction& o) const { return num_ * o.den_ < o.num_ * den_; }
  bool operator<=(const Fraction& o) const { return num_ * o.den_ <= o.num_ * den_; }
  bool operator>(const Fraction& o) const { return o < *this; }
  bool operator>=(const Fraction& o) const { return o <= *this; }

  double to_double() const;

  // Canonical "a/b" (reduced, positive denominator).
  std::string str() const;
  // Accepts "a/b" or a bare integer "a".
  static Fraction parse(const std::string& text);

 private:
  BigInt num_;
  BigInt den_;  // > 0
};

}  // namespace gridalloc
