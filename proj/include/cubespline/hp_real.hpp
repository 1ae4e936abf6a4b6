#pragma once

#include <mpfr.h>

#include <string>
#include <string_view>

namespace cubespline {

/// Owning RAII handle for an MPFR number. Every value carries its own
/// precision and all arithmetic rounds to nearest, ties to even, at the
/// larger of the operand precisions, so there is no process-wide precision
/// state. Implicit conversion from double is exact.
class HpReal {
 public:
  HpReal() : HpReal(0.0) {}
  HpReal(double value);  // NOLINT(google-explicit-constructor)
  HpReal(double value, mpfr_prec_t bits);
  HpReal(const HpReal& other);
  HpReal(HpReal&& other) noexcept;
  HpReal& operator=(const HpReal& other);
  HpReal& operator=(HpReal&& other) noexcept;
  ~HpReal();

  /// Parses a decimal literal, correctly rounded to `bits`.
  static HpReal from_string(std::string_view text, mpfr_prec_t bits);

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }
  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
  std::string to_string(int significant_digits) const;

  HpReal& operator+=(const HpReal& rhs);
  HpReal& operator-=(const HpReal& rhs);
  HpReal& operator*=(const HpReal& rhs);
  HpReal& operator/=(const HpReal& rhs);

  friend HpReal operator+(const HpReal& lhs, const HpReal& rhs);
  friend HpReal operator-(const HpReal& lhs, const HpReal& rhs);
  friend HpReal operator*(const HpReal& lhs, const HpReal& rhs);
  friend HpReal operator/(const HpReal& lhs, const HpReal& rhs);
  friend HpReal operator-(const HpReal& value);

  friend bool operator==(const HpReal& lhs, const HpReal& rhs) {
    return mpfr_equal_p(lhs.value_, rhs.value_) != 0;
  }
  friend bool operator<(const HpReal& lhs, const HpReal& rhs) {
    return mpfr_less_p(lhs.value_, rhs.value_) != 0;
  }
  friend bool operator>(const HpReal& lhs, const HpReal& rhs) { return rhs < lhs; }
  friend bool operator<=(const HpReal& lhs, const HpReal& rhs) {
    return mpfr_lessequal_p(lhs.value_, rhs.value_) != 0;
  }
  friend bool operator>=(const HpReal& lhs, const HpReal& rhs) { return rhs <= lhs; }

  friend HpReal abs(const HpReal& value);

  mpfr_srcptr get() const noexcept { return value_; }

 private:
  struct Uninit {};
  HpReal(mpfr_prec_t bits, Uninit) { mpfr_init2(value_, bits); }

  mpfr_t value_;
};

/// Decimal digits to binary precision, rounding up with one guard digit.
mpfr_prec_t decimal_digits_to_bits(int decimal_digits);

}  // namespace cubespline
