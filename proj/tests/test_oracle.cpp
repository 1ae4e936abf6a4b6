#include <gtest/gtest.h>

#include <random>

#include "cubespline/errors.hpp"
#include "cubespline/oracle.hpp"
#include "test_support.hpp"

using namespace cubespline;
using cubespline::fixtures::hand_curve;
using cubespline::fixtures::random_curve;

namespace {

const BoundaryCondition kNatural = BoundaryCondition::natural();

HpVector hand_oracle(int digits, const BoundaryCondition& s, const BoundaryCondition& e) {
  return hp_second_derivatives(hand_curve(), s, e, PrecisionConfig{digits});
}

}  // namespace

TEST(PrecisionConfig, RejectsFewerThanTenDigits) {
  EXPECT_THROW(PrecisionConfig{9}.validate(), DomainError);
  EXPECT_NO_THROW(PrecisionConfig{10}.validate());
}

TEST(PrecisionConfig, DigitsToBitsMatchesCommonConvention) {
  EXPECT_EQ(PrecisionConfig{30}.bits(), 103);
  EXPECT_EQ(PrecisionConfig{15}.bits(), 53);
}

TEST(HpReal, ConstantsDoNotWidenPrecision) {
  const HpReal x(1.0 / 3.0, 40);
  const HpReal y = 6 * x + 0.5;
  EXPECT_EQ(y.precision(), 40);
}

TEST(HpReal, ParsesDecimalTextAtRequestedPrecision) {
  const HpReal a = HpReal::from_string("1.01", 200);
  const HpReal b(1.01, 200);
  EXPECT_FALSE(a == b);
  EXPECT_LT(abs(a - b).to_double(), 1e-15);
  EXPECT_THROW(HpReal::from_string("1.0x", 100), DomainError);
  EXPECT_THROW(HpReal::from_string("", 100), DomainError);
}

TEST(HpCurve, FromDecimalValidates) {
  const PrecisionConfig cfg{30};
  const std::vector<std::string> two = {"0", "1"};
  EXPECT_THROW(HpCurve::from_decimal(two, two, cfg), SizeError);
  const std::vector<std::string> k = {"0", "1", "1"};
  const std::vector<std::string> v = {"0", "1", "2"};
  EXPECT_THROW(HpCurve::from_decimal(k, v, cfg), OrderingError);
  const std::vector<std::string> short_v = {"0", "1"};
  EXPECT_THROW(HpCurve::from_decimal(v, short_v, cfg), ShapeError);
}

TEST(HpSecondDerivatives, HandCurveAgreesWithDouble) {
  const auto dbl = second_derivatives(hand_curve(), kNatural, kNatural);
  EXPECT_LE(max_disagreement(dbl.values(), hand_oracle(30, kNatural, kNatural)), 1e-12);
}

TEST(HpSecondDerivatives, StraightLineIsExactlyZero) {
  const ControlCurve line({0, 1, 2, 3}, {1, 3, 5, 7});
  for (int digits : {10, 30, 90}) {
    for (const auto& v : hp_second_derivatives(line, kNatural, kNatural, PrecisionConfig{digits})) {
      EXPECT_EQ(v.to_double(), 0.0);
    }
  }
}

TEST(HpSecondDerivatives, OracleConvergesWithPrecision) {
  for (const auto& bc : {kNatural, BoundaryCondition::clamped(-1.0)}) {
    EXPECT_LE(max_disagreement(hand_oracle(30, bc, bc), hand_oracle(50, bc, bc)), 1e-27);
    EXPECT_LE(max_disagreement(hand_oracle(50, bc, bc), hand_oracle(70, bc, bc)), 1e-44);
  }
}

TEST(HpSecondDerivatives, DoubleErrorSaturatesAsPrecisionGrows) {
  const auto dbl = second_derivatives(hand_curve(), kNatural, kNatural);
  const double d10 = max_disagreement(dbl.values(), hand_oracle(10, kNatural, kNatural));
  const double d30 = max_disagreement(dbl.values(), hand_oracle(30, kNatural, kNatural));
  const double d50 = max_disagreement(dbl.values(), hand_oracle(50, kNatural, kNatural));
  EXPECT_GT(d10, d30);
  EXPECT_NEAR(d50, d30, 1e-20);
}

TEST(HpSecondDerivatives, IndependentRoutesAgree) {
  const PrecisionConfig cfg{30};
  const HpCurve hp = HpCurve::from_curve(hand_curve(), cfg);
  for (const auto& s : fixtures::boundary_choices()) {
    for (const auto& e : fixtures::boundary_choices()) {
      EXPECT_LE(max_disagreement(hp_second_derivatives(hp, s, e),
                                 hp_second_derivatives_assembled(hp, s, e)),
                1e-25);
    }
  }
}

TEST(HpSecondDerivatives, DecimalInputRouteMatchesAtItsOwnPrecision) {
  const PrecisionConfig cfg{30};
  const HpCurve hp =
      HpCurve::from_decimal(fixtures::kHandKnotText, fixtures::kHandValueText, cfg);
  const auto ypp = to_doubles(hp_second_derivatives(hp, kNatural, kNatural));
  for (std::size_t i = 0; i < ypp.size(); ++i) {
    EXPECT_NEAR(ypp[i], fixtures::kHandNaturalYpp[i], 5e-6);
  }
}

TEST(HpSecondDerivativesSimple, AgreesWithDouble) {
  const HpCurve hp = HpCurve::from_curve(hand_curve(), PrecisionConfig{30});
  const auto dbl = second_derivatives_simple(hand_curve());
  EXPECT_LE(max_disagreement(dbl.values(), hp_second_derivatives_simple(hp)), 1e-12);
}

TEST(HpInterpolate, Examples) {
  const PrecisionConfig cfg{30};
  const Segment seg{0.25, 1.5, 7.0, 9.0, 3.0, 5.0};
  EXPECT_EQ(hp_interpolate(0.25, seg, cfg).to_double(), 7.0);
  EXPECT_TRUE(hp_interpolate(0.5, {0, 1, 0, 0, 6, 6}, cfg) == HpReal(-0.75));
  EXPECT_THROW(hp_interpolate(0.5, {1, 1, 0, 0, 0, 0}, cfg), DegenerateSegmentError);
}

TEST(HpEvaluateCurve, HandSweepPerPointError) {
  const PrecisionConfig cfg{30};
  const auto c = hand_curve();
  const HpCurve hp = HpCurve::from_curve(c, cfg);
  const auto xs = linspace(c.x_min(), c.x_max(), 2048);
  for (const auto& [s, e] : {std::pair{kNatural, kNatural},
                             std::pair{BoundaryCondition::clamped(-1.0),
                                       BoundaryCondition::clamped(1.0)}}) {
    const auto ys = evaluate_curve(c, second_derivatives(c, s, e), xs);
    const auto truth = hp_evaluate_curve(hp, hp_second_derivatives(hp, s, e), xs);
    EXPECT_LE(max_disagreement(ys, truth), 1e-13);
    EXPECT_LT(mse(ys, truth), 1e-24);
  }
}

TEST(HpEvaluateCurve, Validates) {
  const HpCurve hp = HpCurve::from_curve(hand_curve(), PrecisionConfig{30});
  const auto ypp = hp_second_derivatives(hp, kNatural, kNatural);
  const std::vector<double> outside = {3.0};
  const std::vector<double> unsorted = {1.0, 0.5};
  EXPECT_THROW(hp_evaluate_curve(hp, ypp, outside), RangeError);
  EXPECT_THROW(hp_evaluate_curve(hp, ypp, unsorted), RangeError);
  EXPECT_THROW(hp_evaluate_curve(hp, std::span(ypp).first(3), unsorted), ShapeError);
}

TEST(Mse, HandCurveNaturalSecondDerivatives) {
  const auto dbl = second_derivatives(hand_curve(), kNatural, kNatural);
  EXPECT_LT(mse(dbl.values(), hand_oracle(30, kNatural, kNatural)), 1e-24);
}

TEST(DenseSolve, IdentitySystemReturnsRhs) {
  const TridiagonalSystem sys{{0, 0}, {1, 1, 1}, {0, 0}, {4, 5, 6}};
  EXPECT_EQ(dense_tridiag_solve(sys), (std::vector<double>{4, 5, 6}));
}

TEST(DenseSolve, StraightLineGivesZero) {
  const auto sol = dense_tridiag_solve(assemble_system(ControlCurve({0, 1, 2}, {0, 1, 2}),
                                                       kNatural, kNatural));
  for (double v : sol) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(DenseSolve, SingularAndMalformedSystems) {
  EXPECT_THROW(dense_tridiag_solve(TridiagonalSystem{{0}, {0, 1}, {0}, {1, 1}}), SingularityError);
  EXPECT_THROW(dense_tridiag_solve(TridiagonalSystem{{0}, {1, 1}, {0, 0}, {1, 1}}), ShapeError);
  EXPECT_THROW(dense_tridiag_solve(TridiagonalSystem{{3}, {1, 1}, {0}, {1, 1}}), DomainError);
}

TEST(DenseSolve, AgreesWithThomasOnRandomDominantSystems) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> margin(0.0, 2.0);
  std::uniform_int_distribution<int> size(1, 64);
  for (int rep = 0; rep < 100; ++rep) {
    const auto n = static_cast<std::size_t>(size(rng));
    TridiagonalSystem sys;
    sys.sub.resize(n - 1);
    sys.super.resize(n - 1);
    sys.diag.resize(n);
    sys.rhs.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      sys.sub[i] = off(rng);
      sys.super[i] = off(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double a = i > 0 ? std::abs(sys.sub[i - 1]) : 0.0;
      const double c = i + 1 < n ? std::abs(sys.super[i]) : 0.0;
      sys.diag[i] = (off(rng) < 0 ? -1 : 1) * (a + c + 0.1 + margin(rng));
      sys.rhs[i] = off(rng);
    }
    EXPECT_LE(max_disagreement(dense_tridiag_solve(sys), thomas_solve(sys)), 1e-10);
  }
}

TEST(DenseSolve, MatchesFusedSolverForAllBoundaryCombinations) {
  std::mt19937_64 rng(22);
  for (std::size_t n : {3U, 4U, 8U, 16U, 64U}) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto c = random_curve(n, rng);
      for (const auto& s : fixtures::boundary_choices()) {
        for (const auto& e : fixtures::boundary_choices()) {
          const auto fused = second_derivatives(c, s, e);
          ASSERT_LE(max_disagreement(fused.values(), dense_tridiag_solve(assemble_system(c, s, e))),
                    1e-10)
              << "n=" << n;
        }
      }
      ASSERT_LE(max_disagreement(second_derivatives_simple(c).values(),
                                 dense_tridiag_solve(assemble_simple(c))),
                1e-10);
    }
  }
}

TEST(Metrics, Examples) {
  const std::vector<double> a = {1, 2};
  EXPECT_EQ(max_disagreement(a, a), 0.0);
  EXPECT_EQ(max_disagreement(std::vector<double>{0, 1}, std::vector<double>{0, 0.5}), 0.5);
  EXPECT_EQ(mse(a, a), 0.0);
  EXPECT_EQ(mse(std::vector<double>{0, 0}, std::vector<double>{1, 1}), 1.0);
  EXPECT_THROW(max_disagreement(a, std::vector<double>{1}), ShapeError);
  EXPECT_THROW(mse(a, std::vector<double>{1}), ShapeError);
  EXPECT_THROW(mse(std::vector<double>{}, std::vector<double>{}), SizeError);
  const HpVector h = {HpReal(0.0, 100), HpReal(0.5, 100)};
  EXPECT_EQ(max_disagreement(std::vector<double>{0, 1}, h), 0.5);
  EXPECT_EQ(mse(std::vector<double>{0, 1}, h), 0.125);
}
