#include "sqc/optim/nelder_mead.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sqc;
using namespace sqc::optim;

namespace {

double rosenbrock(const RealVector& x) {
    return 100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2);
}

double shifted_quadratic(const RealVector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += (i + 1) * std::pow(x(i) - 0.1 * i, 2);
    return s;
}

}  // namespace

TEST(NelderMead, Rosenbrock) {
    NelderMeadConfig cfg;
    cfg.max_evaluations = 2000;
    const OptimizeResult r = minimize(rosenbrock, RealVector::Constant(2, -1.0), cfg);
    EXPECT_NEAR(r.x(0), 1.0, 1e-3);
    EXPECT_NEAR(r.x(1), 1.0, 2e-3);
    EXPECT_LT(r.value, 1e-6);
}

TEST(NelderMead, QuadraticInTenDimensions) {
    NelderMeadConfig cfg;
    cfg.max_evaluations = 6000;
    const OptimizeResult r = minimize(shifted_quadratic, RealVector::Zero(10), cfg);
    EXPECT_LT(r.value, 1e-6);
    for (Eigen::Index i = 0; i < 10; ++i) EXPECT_NEAR(r.x(i), 0.1 * i, 1e-3);
}

TEST(NelderMead, BudgetAndTraceInvariants) {
    for (std::size_t budget : {1u, 2u, 7u, 50u, 333u}) {
        NelderMeadConfig cfg;
        cfg.max_evaluations = budget;
        std::size_t calls = 0;
        const OptimizeResult r = minimize(
            [&](const RealVector& x) {
                ++calls;
                return shifted_quadratic(x);
            },
            RealVector::Constant(6, 1.0), cfg);
        EXPECT_EQ(r.evaluations, budget);
        EXPECT_EQ(calls, budget);
        ASSERT_EQ(r.trace.size(), budget);
        for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
        EXPECT_EQ(r.trace.back(), r.value);
        EXPECT_DOUBLE_EQ(shifted_quadratic(r.x), r.value);
    }
}

TEST(NelderMead, ZeroBudgetReturnsStart) {
    NelderMeadConfig cfg;
    cfg.max_evaluations = 0;
    const RealVector x0 = RealVector::LinSpaced(4, -1.0, 1.0);
    const OptimizeResult r = minimize(shifted_quadratic, x0, cfg);
    EXPECT_EQ(r.x, x0);
    EXPECT_EQ(r.evaluations, 0u);
    EXPECT_TRUE(r.trace.empty());
}

TEST(NelderMead, RestartsOnFlatObjective) {
    NelderMeadConfig cfg;
    cfg.max_evaluations = 100;
    const OptimizeResult r = minimize([](const RealVector&) { return 1.0; }, RealVector::Zero(3), cfg);
    EXPECT_EQ(r.evaluations, 100u);
    EXPECT_GT(r.restarts, 10u);
}

TEST(NelderMead, Deterministic) {
    const auto a = minimize(rosenbrock, RealVector::Constant(2, 0.3));
    const auto b = minimize(rosenbrock, RealVector::Constant(2, 0.3));
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.trace, b.trace);
}

TEST(NelderMead, RejectsBadInput) {
    EXPECT_THROW(minimize(rosenbrock, RealVector(0)), InvalidArgument);
    NelderMeadConfig cfg;
    cfg.initial_step = 0.0;
    EXPECT_THROW(minimize(rosenbrock, RealVector::Zero(2), cfg), InvalidArgument);
    EXPECT_THROW(minimize([](const RealVector&) { return std::nan(""); }, RealVector::Zero(2)), NumericalError);
}
