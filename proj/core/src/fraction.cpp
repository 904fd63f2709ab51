#include "gridalloc/fraction.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <stdexcept>
#include <utility>

namespace gridalloc {

Fraction::Fraction(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_ == 0) {
    throw std::invalid_argument("Fraction: zero denominator");
  }
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Fraction Fraction::abs() const { return num_ < 0 ? Fraction(-num_, den_) : *this; }

Fraction Fraction::operator+(const Fraction& o) const {
  return Fraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Fraction Fraction::operator-(const Fraction& o) const {
  return Fraction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Fraction Fraction::operator*(const Fraction& o) const {
  return Fraction(num_ * o.num_, den_ * o.den_);
}

Fraction Fraction::operator/(const Fraction& o) const {
  if (o.num_ == 0) {
    throw std::invalid_argument("Fraction: division by zero");
  }
  return Fraction(num_ * o.den_, den_ * o.num_);
}

Fraction Fraction::operator-() const { return Fraction(-num_, den_); }

double Fraction::to_double() const {
  using Big = boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(Big(num_) / Big(den_));
}

std::string Fraction::str() const { return num_.str() + "/" + den_.str(); }

Fraction Fraction::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Fraction(BigInt(text), BigInt(1));
    }
    return Fraction(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("Fraction: cannot parse \"" + text + "\"");
  }
}

}  // namespace gridalloc
