#pragma once

// Extended-precision reference implementations and the error metrics used to
// judge the double-precision library against them.

#include <span>
#include <string>
#include <vector>

#include "cubespline/hp_real.hpp"
#include "cubespline/spline.hpp"
#include "cubespline/tridiagonal.hpp"

namespace cubespline {

struct PrecisionConfig {
  int decimal_digits = 30;

  /// Throws DomainError below 10 digits.
  void validate() const;
  mpfr_prec_t bits() const;
};

using HpVector = std::vector<HpReal>;

/// A ControlCurve held at extended precision. Either converted exactly from
/// doubles or parsed from decimal text, which keeps values like 1.01 exact to
/// the working precision instead of inheriting binary64 representation error.
class HpCurve {
 public:
  static HpCurve from_curve(const ControlCurve& curve, const PrecisionConfig& cfg);
  static HpCurve from_decimal(std::span<const std::string> knots,
                              std::span<const std::string> values, const PrecisionConfig& cfg);

  std::span<const HpReal> knots() const noexcept { return knots_; }
  std::span<const HpReal> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return knots_.size(); }
  const PrecisionConfig& config() const noexcept { return cfg_; }

 private:
  HpCurve(HpVector knots, HpVector values, PrecisionConfig cfg);

  HpVector knots_;
  HpVector values_;
  PrecisionConfig cfg_;
};

/// The production (fused Thomas) algorithm run entirely at cfg precision.
HpVector hp_second_derivatives(const ControlCurve& curve, const BoundaryCondition& start,
                               const BoundaryCondition& end, const PrecisionConfig& cfg);
HpVector hp_second_derivatives(const HpCurve& curve, const BoundaryCondition& start,
                               const BoundaryCondition& end);

/// An independent route: explicit assembly followed by the textbook
/// two-list Thomas solve, at the curve's precision.
HpVector hp_second_derivatives_assembled(const HpCurve& curve, const BoundaryCondition& start,
                                         const BoundaryCondition& end);

HpVector hp_second_derivatives_simple(const HpCurve& curve);

/// Reference segment formula at cfg precision.
HpReal hp_interpolate(double x, const Segment& seg, const PrecisionConfig& cfg);

/// Sweep of ascending xs using the reference formula on extended-precision
/// knots, values and second derivatives.
HpVector hp_evaluate_curve(const HpCurve& curve, std::span<const HpReal> ypp,
                           std::span<const double> xs);

/// Brute-force oracle: builds the full n x n matrix and solves it with a
/// rank-revealing LU. Throws SingularityError for a singular matrix.
std::vector<double> dense_tridiag_solve(const TridiagonalSystem& sys);

TridiagonalSystem assemble_system(const ControlCurve& curve, const BoundaryCondition& start,
                                  const BoundaryCondition& end);
TridiagonalSystem assemble_simple(const ControlCurve& curve);

double max_disagreement(std::span<const double> a, std::span<const double> b);
double max_disagreement(std::span<const double> a, std::span<const HpReal> b);
double max_disagreement(std::span<const HpReal> a, std::span<const HpReal> b);

double mse(std::span<const double> a, std::span<const double> b);
double mse(std::span<const double> a, std::span<const HpReal> b);
double mse(std::span<const HpReal> a, std::span<const HpReal> b);

std::vector<double> to_doubles(std::span<const HpReal> values);

}  // namespace cubespline
