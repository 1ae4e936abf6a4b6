#include "cubespline/spline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cubespline/errors.hpp"
#include "cubespline/kernels.hpp"

namespace cubespline {

namespace {

void check_segment(const Segment& seg) {
  if (!(seg.b > seg.a)) {
    std::ostringstream msg;
    msg << "degenerate segment: b (" << seg.b << ") must exceed a (" << seg.a << ")";
    throw DegenerateSegmentError(msg.str());
  }
}

std::string domain_text(const ControlCurve& curve) {
  std::ostringstream msg;
  msg << "[" << curve.x_min() << ", " << curve.x_max() << "]";
  return msg.str();
}

}  // namespace

ControlCurve::ControlCurve(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size()) {
    throw ShapeError("curve has " + std::to_string(knots_.size()) + " knots but " +
                     std::to_string(values_.size()) + " values");
  }
  if (knots_.size() < 3) {
    throw SizeError("a curve needs at least 3 control points, got " +
                    std::to_string(knots_.size()));
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) {
      throw DomainError("control point " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      std::ostringstream msg;
      msg << "knots must be strictly increasing: knot " << i << " (" << knots_[i]
          << ") does not exceed knot " << i - 1 << " (" << knots_[i - 1] << ")";
      throw OrderingError(msg.str());
    }
  }
}

BoundaryCondition BoundaryCondition::clamped(double slope) {
  if (!std::isfinite(slope)) {
    throw DomainError("clamped boundary slope must be finite");
  }
  BoundaryCondition bc;
  bc.slope_ = slope;
  return bc;
}

std::size_t bracket(const ControlCurve& curve, double x) {
  const auto knots = curve.knots();
  if (!(x >= knots.front() && x <= knots.back())) {
    std::ostringstream msg;
    msg << "x = " << x << " lies outside the curve domain " << domain_text(curve);
    throw RangeError(msg.str());
  }
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  const auto j = static_cast<std::size_t>(it - knots.begin()) - 1;
  return std::min(j, knots.size() - 2);
}

double interp_segment_reference(double x, const Segment& seg) {
  check_segment(seg);
  return kernels::interp_reference(x, seg.a, seg.b, seg.u, seg.v, seg.upp, seg.vpp);
}

double interp_segment_fast(double x, const Segment& seg, DivisionStrategy strategy) {
  check_segment(seg);
  switch (strategy) {
    case DivisionStrategy::PrecomputedInverse:
      return kernels::interp_fast_inverse(x, seg.a, seg.b, seg.u, seg.v, seg.upp, seg.vpp);
    case DivisionStrategy::DeferredDivision:
      return kernels::interp_fast_deferred(x, seg.a, seg.b, seg.u, seg.v, seg.upp, seg.vpp);
  }
  return kernels::interp_fast_inverse(x, seg.a, seg.b, seg.u, seg.v, seg.upp, seg.vpp);
}

SecondDerivatives second_derivatives(const ControlCurve& curve, const BoundaryCondition& start,
                                     const BoundaryCondition& end) {
  const std::size_t n = curve.size();
  std::vector<double> ypp(n);
  std::vector<double> c_prime(n);
  kernels::fused_second_derivatives<double>(curve.knots(), curve.values(), start.slope(),
                                            end.slope(), ypp, c_prime);
  return SecondDerivatives(std::move(ypp));
}

SecondDerivatives second_derivatives_simple(const ControlCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> ypp(n);
  std::vector<double> c_prime(n);
  kernels::fused_second_derivatives_simple<double>(curve.knots(), curve.values(), ypp, c_prime);
  return SecondDerivatives(std::move(ypp));
}

std::vector<double> evaluate_curve(const ControlCurve& curve, const SecondDerivatives& ypp,
                                   std::span<const double> xs, Formula formula) {
  const auto knots = curve.knots();
  const auto values = curve.values();
  const std::size_t n = knots.size();
  if (ypp.size() != n) {
    throw ShapeError("second derivatives have " + std::to_string(ypp.size()) +
                     " entries for a curve of " + std::to_string(n) + " points");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= knots.front() && xs[i] <= knots.back())) {
      std::ostringstream msg;
      msg << "evaluation point " << i << " (x = " << xs[i] << ") lies outside the curve domain "
          << domain_text(curve);
      throw RangeError(msg.str());
    }
    if (i > 0 && xs[i] < xs[i - 1]) {
      throw RangeError("evaluation points must be sorted ascending; point " + std::to_string(i) +
                       " is smaller than its predecessor");
    }
  }

  std::vector<double> out;
  out.reserve(xs.size());
  std::size_t j = 0;
  for (const double x : xs) {
    while (j + 2 < n && knots[j + 1] <= x) {
      ++j;
    }
    const double a = knots[j];
    const double b = knots[j + 1];
    const double u = values[j];
    const double v = values[j + 1];
    const double upp = ypp[j];
    const double vpp = ypp[j + 1];
    switch (formula) {
      case Formula::Reference:
        out.push_back(kernels::interp_reference(x, a, b, u, v, upp, vpp));
        break;
      case Formula::FastPrecomputedInverse:
        out.push_back(kernels::interp_fast_inverse(x, a, b, u, v, upp, vpp));
        break;
      case Formula::FastDeferredDivision:
        out.push_back(kernels::interp_fast_deferred(x, a, b, u, v, upp, vpp));
        break;
    }
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 0) {
    return out;
  }
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + static_cast<double>(i) * step;
  }
  out.back() = hi;
  return out;
}

}  // namespace cubespline
