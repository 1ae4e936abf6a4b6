#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cubespline {

/// Control points (x_j, y_j) of a curve. Construction enforces the
/// invariants every algorithm relies on: matching lengths, at least three
/// points, finite coordinates and strictly increasing knots.
class ControlCurve {
 public:
  ControlCurve(std::vector<double> knots, std::vector<double> values);

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return knots_.size(); }

  double x_min() const noexcept { return knots_.front(); }
  double x_max() const noexcept { return knots_.back(); }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Either a natural end (y'' = 0) or a clamped end with a prescribed slope.
class BoundaryCondition {
 public:
  static BoundaryCondition natural() noexcept { return BoundaryCondition{}; }
  static BoundaryCondition clamped(double slope);

  bool is_natural() const noexcept { return !slope_.has_value(); }
  bool is_clamped() const noexcept { return slope_.has_value(); }
  const std::optional<double>& slope() const noexcept { return slope_; }

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

 private:
  BoundaryCondition() = default;
  std::optional<double> slope_;
};

/// y''_1 .. y''_n for one ControlCurve.
class SecondDerivatives {
 public:
  SecondDerivatives() = default;
  explicit SecondDerivatives(std::vector<double> values) : values_(std::move(values)) {}

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

 private:
  std::vector<double> values_;
};

/// One bracketing interval: knots a < b, values u, v and second
/// derivatives upp, vpp at those knots.
struct Segment {
  double a = 0.0;
  double b = 0.0;
  double u = 0.0;
  double v = 0.0;
  double upp = 0.0;
  double vpp = 0.0;
};

enum class DivisionStrategy {
  PrecomputedInverse,  ///< 1/(b-a) first, multiply at the end
  DeferredDivision,    ///< divide the final sum by (b-a)
};

/// Which segment formula evaluate_curve uses.
enum class Formula {
  Reference,
  FastPrecomputedInverse,
  FastDeferredDivision,
};

/// 0-based index j of the segment [x_j, x_{j+1}] containing x. A value equal
/// to an interior knot resolves to the segment that starts at that knot.
/// Throws RangeError outside [x_1, x_n].
std::size_t bracket(const ControlCurve& curve, double x);

double interp_segment_reference(double x, const Segment& seg);

double interp_segment_fast(double x, const Segment& seg, DivisionStrategy strategy);

/// Tridiagonal solve for y'' with the given end conditions.
SecondDerivatives second_derivatives(const ControlCurve& curve, const BoundaryCondition& start,
                                     const BoundaryCondition& end);

/// The reduced-continuity variant (not a natural spline).
SecondDerivatives second_derivatives_simple(const ControlCurve& curve);

/// Interpolates at ascending points inside [x_1, x_n], scanning forward
/// through the knots rather than bisecting per point.
std::vector<double> evaluate_curve(const ControlCurve& curve, const SecondDerivatives& ypp,
                                   std::span<const double> xs,
                                   Formula formula = Formula::Reference);

/// n points evenly spaced over [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace cubespline
