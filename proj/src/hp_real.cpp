#include "cubespline/hp_real.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cubespline/errors.hpp"

namespace cubespline {

namespace {

mpfr_prec_t wider(const HpReal& a, const HpReal& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

// Shrinks to the fewest bits that hold the double exactly, so constants such
// as 6 or 0.5 never widen the precision of an expression they appear in.
HpReal::HpReal(double value) : HpReal(53, Uninit{}) {
  mpfr_set_d(value_, value, MPFR_RNDN);
  const mpfr_prec_t needed = std::max<mpfr_prec_t>(mpfr_min_prec(value_), MPFR_PREC_MIN);
  mpfr_prec_round(value_, needed, MPFR_RNDN);
}

HpReal::HpReal(double value, mpfr_prec_t bits) : HpReal(bits, Uninit{}) {
  mpfr_set_d(value_, value, MPFR_RNDN);
}

HpReal::HpReal(const HpReal& other) : HpReal(other.precision(), Uninit{}) {
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

HpReal::HpReal(HpReal&& other) noexcept : HpReal(MPFR_PREC_MIN, Uninit{}) {
  mpfr_swap(value_, other.value_);
}

HpReal& HpReal::operator=(const HpReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

HpReal& HpReal::operator=(HpReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

HpReal::~HpReal() { mpfr_clear(value_); }

HpReal HpReal::from_string(std::string_view text, mpfr_prec_t bits) {
  HpReal out(bits, Uninit{});
  const std::string owned(text);
  char* end = nullptr;
  mpfr_strtofr(out.value_, owned.c_str(), &end, 10, MPFR_RNDN);
  if (owned.empty() || end == owned.c_str() || *end != '\0') {
    throw DomainError("not a decimal number: '" + owned + "'");
  }
  return out;
}

std::string HpReal::to_string(int significant_digits) const {
  std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 32);
  const std::string fmt = "%." + std::to_string(significant_digits) + "Rg";
  mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), value_);
  return std::string(buf.data());
}

HpReal& HpReal::operator+=(const HpReal& rhs) { return *this = *this + rhs; }
HpReal& HpReal::operator-=(const HpReal& rhs) { return *this = *this - rhs; }
HpReal& HpReal::operator*=(const HpReal& rhs) { return *this = *this * rhs; }
HpReal& HpReal::operator/=(const HpReal& rhs) { return *this = *this / rhs; }

HpReal operator+(const HpReal& lhs, const HpReal& rhs) {
  HpReal out(wider(lhs, rhs), HpReal::Uninit{});
  mpfr_add(out.value_, lhs.value_, rhs.value_, MPFR_RNDN);
  return out;
}

HpReal operator-(const HpReal& lhs, const HpReal& rhs) {
  HpReal out(wider(lhs, rhs), HpReal::Uninit{});
  mpfr_sub(out.value_, lhs.value_, rhs.value_, MPFR_RNDN);
  return out;
}

HpReal operator*(const HpReal& lhs, const HpReal& rhs) {
  HpReal out(wider(lhs, rhs), HpReal::Uninit{});
  mpfr_mul(out.value_, lhs.value_, rhs.value_, MPFR_RNDN);
  return out;
}

HpReal operator/(const HpReal& lhs, const HpReal& rhs) {
  HpReal out(wider(lhs, rhs), HpReal::Uninit{});
  mpfr_div(out.value_, lhs.value_, rhs.value_, MPFR_RNDN);
  return out;
}

HpReal operator-(const HpReal& value) {
  HpReal out(value.precision(), HpReal::Uninit{});
  mpfr_neg(out.value_, value.value_, MPFR_RNDN);
  return out;
}

HpReal abs(const HpReal& value) {
  HpReal out(value.precision(), HpReal::Uninit{});
  mpfr_abs(out.value_, value.value_, MPFR_RNDN);
  return out;
}

mpfr_prec_t decimal_digits_to_bits(int decimal_digits) {
  return static_cast<mpfr_prec_t>(std::lround((decimal_digits + 1) * std::log2(10.0)));
}

}  // namespace cubespline
