#include "cubespline/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <sstream>

#include "cubespline/errors.hpp"
#include "cubespline/kernels.hpp"

namespace cubespline {

namespace {

std::optional<HpReal> hp_slope(const BoundaryCondition& bc, mpfr_prec_t bits) {
  if (bc.is_natural()) {
    return std::nullopt;
  }
  return HpReal(*bc.slope(), bits);
}

template <class A, class B>
void check_same_length(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size()) {
    throw ShapeError("sequences differ in length: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

template <class A, class B>
double hp_max_abs_diff(std::span<const A> a, std::span<const B> b) {
  check_same_length(a, b);
  HpReal worst(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const HpReal d = abs(HpReal(a[i]) - HpReal(b[i]));
    if (d > worst) {
      worst = d;
    }
  }
  return worst.to_double();
}

template <class A, class B>
double hp_mean_square(std::span<const A> a, std::span<const B> b) {
  check_same_length(a, b);
  if (a.empty()) {
    throw SizeError("mean square error of empty sequences");
  }
  HpReal sum(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const HpReal d = HpReal(a[i]) - HpReal(b[i]);
    sum += d * d;
  }
  return (sum / HpReal(static_cast<double>(a.size()))).to_double();
}

}  // namespace

void PrecisionConfig::validate() const {
  if (decimal_digits < 10) {
    throw DomainError("precision must be at least 10 decimal digits, got " +
                      std::to_string(decimal_digits));
  }
}

mpfr_prec_t PrecisionConfig::bits() const {
  validate();
  return decimal_digits_to_bits(decimal_digits);
}

HpCurve::HpCurve(HpVector knots, HpVector values, PrecisionConfig cfg)
    : knots_(std::move(knots)), values_(std::move(values)), cfg_(cfg) {}

HpCurve HpCurve::from_curve(const ControlCurve& curve, const PrecisionConfig& cfg) {
  const mpfr_prec_t bits = cfg.bits();
  HpVector knots;
  HpVector values;
  knots.reserve(curve.size());
  values.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    knots.emplace_back(curve.knots()[i], bits);
    values.emplace_back(curve.values()[i], bits);
  }
  return HpCurve(std::move(knots), std::move(values), cfg);
}

HpCurve HpCurve::from_decimal(std::span<const std::string> knots,
                              std::span<const std::string> values, const PrecisionConfig& cfg) {
  const mpfr_prec_t bits = cfg.bits();
  if (knots.size() != values.size()) {
    throw ShapeError("curve has " + std::to_string(knots.size()) + " knots but " +
                     std::to_string(values.size()) + " values");
  }
  if (knots.size() < 3) {
    throw SizeError("a curve needs at least 3 control points, got " +
                    std::to_string(knots.size()));
  }
  HpVector hk;
  HpVector hv;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    hk.push_back(HpReal::from_string(knots[i], bits));
    hv.push_back(HpReal::from_string(values[i], bits));
    if (i > 0 && !(hk[i] > hk[i - 1])) {
      throw OrderingError("knots must be strictly increasing: knot " + std::to_string(i) + " (" +
                          knots[i] + ") does not exceed knot " + std::to_string(i - 1) + " (" +
                          knots[i - 1] + ")");
    }
  }
  return HpCurve(std::move(hk), std::move(hv), cfg);
}

HpVector hp_second_derivatives(const ControlCurve& curve, const BoundaryCondition& start,
                               const BoundaryCondition& end, const PrecisionConfig& cfg) {
  return hp_second_derivatives(HpCurve::from_curve(curve, cfg), start, end);
}

HpVector hp_second_derivatives(const HpCurve& curve, const BoundaryCondition& start,
                               const BoundaryCondition& end) {
  const mpfr_prec_t bits = curve.config().bits();
  const std::size_t n = curve.size();
  HpVector ypp(n);
  HpVector c_prime(n);
  kernels::fused_second_derivatives<HpReal>(curve.knots(), curve.values(),
                                            hp_slope(start, bits), hp_slope(end, bits), ypp,
                                            c_prime);
  return ypp;
}

HpVector hp_second_derivatives_assembled(const HpCurve& curve, const BoundaryCondition& start,
                                         const BoundaryCondition& end) {
  const mpfr_prec_t bits = curve.config().bits();
  const auto sys = assemble_spline_system<HpReal>(curve.knots(), curve.values(),
                                                  hp_slope(start, bits), hp_slope(end, bits));
  return thomas_solve(sys);
}

HpVector hp_second_derivatives_simple(const HpCurve& curve) {
  const std::size_t n = curve.size();
  HpVector ypp(n);
  HpVector c_prime(n);
  kernels::fused_second_derivatives_simple<HpReal>(curve.knots(), curve.values(), ypp, c_prime);
  return ypp;
}

HpReal hp_interpolate(double x, const Segment& seg, const PrecisionConfig& cfg) {
  if (!(seg.b > seg.a)) {
    std::ostringstream msg;
    msg << "degenerate segment: b (" << seg.b << ") must exceed a (" << seg.a << ")";
    throw DegenerateSegmentError(msg.str());
  }
  const mpfr_prec_t bits = cfg.bits();
  return kernels::interp_reference(HpReal(x, bits), HpReal(seg.a, bits), HpReal(seg.b, bits),
                                   HpReal(seg.u, bits), HpReal(seg.v, bits),
                                   HpReal(seg.upp, bits), HpReal(seg.vpp, bits));
}

HpVector hp_evaluate_curve(const HpCurve& curve, std::span<const HpReal> ypp,
                           std::span<const double> xs) {
  const auto knots = curve.knots();
  const auto values = curve.values();
  const std::size_t n = knots.size();
  if (ypp.size() != n) {
    throw ShapeError("second derivatives have " + std::to_string(ypp.size()) +
                     " entries for a curve of " + std::to_string(n) + " points");
  }
  const mpfr_prec_t bits = curve.config().bits();
  HpVector out;
  out.reserve(xs.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const HpReal x(xs[i], bits);
    if (x < knots.front() || x > knots.back() || (i > 0 && xs[i] < xs[i - 1])) {
      throw RangeError("evaluation point " + std::to_string(i) +
                       " is out of order or outside the curve domain");
    }
    while (j + 2 < n && knots[j + 1] <= x) {
      ++j;
    }
    out.push_back(kernels::interp_reference(x, knots[j], knots[j + 1], values[j], values[j + 1],
                                            ypp[j], ypp[j + 1]));
  }
  return out;
}

void validate_system(const TridiagonalSystem& sys) {
  const std::size_t n = sys.diag.size();
  if (n == 0) {
    throw SizeError("empty tridiagonal system");
  }
  if (sys.sub.size() != n - 1 || sys.super.size() != n - 1 || sys.rhs.size() != n) {
    throw ShapeError("tridiagonal system of order " + std::to_string(n) +
                     " needs n-1 sub/super entries and n right-hand sides");
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double a = j > 0 ? std::abs(sys.sub[j - 1]) : 0.0;
    const double c = j + 1 < n ? std::abs(sys.super[j]) : 0.0;
    if (!(std::abs(sys.diag[j]) >= a + c)) {
      throw DomainError("row " + std::to_string(j) + " is not diagonally dominant");
    }
  }
}

std::vector<double> dense_tridiag_solve(const TridiagonalSystem& sys) {
  validate_system(sys);
  const auto n = static_cast<Eigen::Index>(sys.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = sys.diag[j];
    if (j > 0) {
      m(j, j - 1) = sys.sub[j - 1];
    }
    if (j + 1 < n) {
      m(j, j + 1) = sys.super[j];
    }
    rhs(j) = sys.rhs[j];
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) {
    throw SingularityError("tridiagonal system of order " + std::to_string(n) + " is singular");
  }
  const Eigen::VectorXd sol = lu.solve(rhs);
  return {sol.data(), sol.data() + n};
}

TridiagonalSystem assemble_system(const ControlCurve& curve, const BoundaryCondition& start,
                                  const BoundaryCondition& end) {
  return assemble_spline_system<double>(curve.knots(), curve.values(), start.slope(),
                                        end.slope());
}

TridiagonalSystem assemble_simple(const ControlCurve& curve) {
  return assemble_simple_system<double>(curve.knots(), curve.values());
}

double max_disagreement(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

double max_disagreement(std::span<const double> a, std::span<const HpReal> b) {
  return hp_max_abs_diff(a, b);
}

double max_disagreement(std::span<const HpReal> a, std::span<const HpReal> b) {
  return hp_max_abs_diff(a, b);
}

double mse(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  if (a.empty()) {
    throw SizeError("mean square error of empty sequences");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double mse(std::span<const double> a, std::span<const HpReal> b) { return hp_mean_square(a, b); }

double mse(std::span<const HpReal> a, std::span<const HpReal> b) { return hp_mean_square(a, b); }

std::vector<double> to_doubles(std::span<const HpReal> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    out.push_back(v.to_double());
  }
  return out;
}

}  // namespace cubespline
