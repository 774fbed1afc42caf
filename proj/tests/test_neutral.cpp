#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "biostab/errors.hpp"
#include "biostab/neutral.hpp"
#include "biostab/root_find.hpp"

namespace {

using namespace biostab;

SuspensionParams benard(TopBoundary top) {
    SuspensionParams p;
    p.swimming_speed = 0.0;
    p.darcy = 1e8;
    p.top = top;
    return p;
}

std::vector<double> linear_grid(double a, double b, std::size_t n) {
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return k;
}

TEST(KGrid, DefaultIsFortyLogSpacedPoints) {
    const auto k = default_k_grid();
    ASSERT_EQ(k.size(), 40u);
    EXPECT_EQ(k.front(), 0.5);
    EXPECT_EQ(k.back(), 10.0);
    for (std::size_t i = 2; i < k.size(); ++i)
        EXPECT_NEAR(k[i] / k[i - 1], k[1] / k[0], 1e-12);
}

TEST(GoldenSection, ParabolaVertex) {
    const double x = golden_section_minimize([](double k) { return 3.0 * (k - 2.37) * (k - 2.37) + 5.0; },
                                             1.0, 4.0, 1e-6);
    EXPECT_NEAR(x, 2.37, 1e-6);
}

TEST(Branch, ClassicalBenardCurveIsConvexWithInteriorMinimum) {
    const auto ks = linear_grid(2.0, 4.5, 26);
    const NeutralCurve c = trace_branch(benard(TopBoundary::rigid), 200, ks, EigenParameter::RT,
                                        {-2500.0, -1000.0});
    ASSERT_EQ(c.points.size(), 26u);
    EXPECT_TRUE(c.gaps.empty());
    std::size_t best = 0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (i > 0) {
            EXPECT_GT(c.points[i].k, c.points[i - 1].k);
        }
        if (std::abs(c.points[i].R) < std::abs(c.points[best].R)) best = i;
    }
    EXPECT_NEAR(c.points[best].k, 3.1, 0.1);
    for (std::size_t i = 1; i + 1 < c.points.size(); ++i) {
        const double second = std::abs(c.points[i - 1].R) - 2 * std::abs(c.points[i].R) + std::abs(c.points[i + 1].R);
        EXPECT_GT(second, 0.0) << "k=" << c.points[i].k;
    }
}

TEST(Branch, ReversedGridGivesSameValues) {
    auto ks = linear_grid(2.0, 4.5, 11);
    const SuspensionParams p = benard(TopBoundary::rigid);
    TraceOptions opts;
    opts.solve.rel_tolerance = 1e-10;
    const NeutralCurve fwd = trace_branch(p, 200, ks, EigenParameter::RT, {-2500.0, -1000.0}, 0.0, opts);
    std::reverse(ks.begin(), ks.end());
    const NeutralCurve rev = trace_branch(p, 200, ks, EigenParameter::RT, {-2500.0, -1000.0}, 0.0, opts);
    ASSERT_EQ(fwd.points.size(), rev.points.size());
    for (std::size_t i = 0; i < fwd.points.size(); ++i) {
        EXPECT_EQ(fwd.points[i].k, rev.points[i].k);
        EXPECT_NEAR(fwd.points[i].R, rev.points[i].R, 1e-6 * std::abs(fwd.points[i].R));
    }
}

TEST(Branch, BaselineHasSingleInteriorMinimum) {
    const auto ks = log_k_grid(0.5, 8.0, 20);
    const NeutralCurve c = trace_branch(SuspensionParams{}, 200, ks, EigenParameter::RB, {0.0, 10000.0});
    EXPECT_TRUE(c.gaps.empty());
    ASSERT_GE(c.points.size(), 15u);
    int turns = 0;
    for (std::size_t i = 1; i + 1 < c.points.size(); ++i) {
        EXPECT_GT(c.points[i].R, 0.0);
        const bool local_min = c.points[i].R < c.points[i - 1].R && c.points[i].R < c.points[i + 1].R;
        const bool local_max = c.points[i].R > c.points[i - 1].R && c.points[i].R > c.points[i + 1].R;
        turns += local_min ? 1 : 0;
        EXPECT_FALSE(local_max) << c.points[i].k;
    }
    EXPECT_EQ(turns, 1);
}

TEST(Branch, RejectsBadGrids) {
    const std::vector<double> bad{1.0, 2.0, 2.0};
    EXPECT_THROW(trace_branch(SuspensionParams{}, 64, bad, EigenParameter::RB, {0.0, 1.0}), ConfigError);
    const std::vector<double> neg{-1.0, 2.0};
    EXPECT_THROW(trace_branch(SuspensionParams{}, 64, neg, EigenParameter::RB, {0.0, 1.0}), ConfigError);
}

TEST(Branch, TooManyGapsFails) {
    SuspensionParams p;
    p.swimming_speed = 0.0;
    p.thermal_rayleigh = 0.0;
    const auto ks = linear_grid(1.0, 3.0, 5);
    EXPECT_THROW(trace_branch(p, 64, ks, EigenParameter::RB, {0.0, 100.0}), ConvergenceError);
}

TEST(Critical, ClassicalBenardRigidRigid) {
    const NeutralCurve c = trace_branch(benard(TopBoundary::rigid), 200, linear_grid(2.0, 4.5, 26),
                                        EigenParameter::RT, {-2500.0, -1000.0});
    const CriticalPoint cp = find_critical(c);
    EXPECT_NEAR(cp.k_c, 3.117, 0.01 * 3.117);
    EXPECT_NEAR(std::abs(cp.R_c), 1707.76, 0.005 * 1707.76);
    EXPECT_FALSE(cp.oscillatory);
    for (const NeutralPoint& p : c.points) EXPECT_LE(std::abs(cp.R_c), std::abs(p.R) + 1e-9);
}

TEST(Critical, ClassicalBenardRigidFree) {
    const NeutralCurve c = trace_branch(benard(TopBoundary::free), 200, linear_grid(1.5, 4.0, 26),
                                        EigenParameter::RT, {-1600.0, -700.0});
    const CriticalPoint cp = find_critical(c);
    EXPECT_NEAR(cp.k_c, 2.682, 0.01 * 2.682);
    EXPECT_NEAR(std::abs(cp.R_c), 1100.65, 0.005 * 1100.65);
}

TEST(Critical, EdgeMinimumNamesTheEdge) {
    const NeutralCurve c = trace_branch(benard(TopBoundary::rigid), 64, linear_grid(3.5, 5.0, 6),
                                        EigenParameter::RT, {-2500.0, -1000.0});
    try {
        find_critical(c);
        FAIL() << "expected an edge error";
    } catch (const ConvergenceError& e) {
        EXPECT_NE(std::string(e.what()).find("k_min"), std::string::npos) << e.what();
    }
    const NeutralCurve d = trace_branch(benard(TopBoundary::rigid), 64, linear_grid(2.0, 2.8, 6),
                                        EigenParameter::RT, {-2500.0, -1000.0});
    try {
        find_critical(d);
        FAIL() << "expected an edge error";
    } catch (const ConvergenceError& e) {
        EXPECT_NE(std::string(e.what()).find("k_max"), std::string::npos) << e.what();
    }
}

TEST(Critical, ReverificationAtCriticalPoint) {
    const SuspensionParams p;
    const NeutralCurve c = trace_branch(p, 200, log_k_grid(2.0, 5.0, 9), EigenParameter::RB, {0.0, 10000.0});
    const CriticalPoint cp = find_critical(c);
    const ModeProblem mp = make_mode_problem(c.state, cp.k_c, cp.R_c);
    EXPECT_LT(std::abs(leading_growth_rate(mp).real()), 1e-4 * std::max(1.0, std::abs(cp.R_c)));
    EXPECT_LT(leading_growth_rate(mp.with_rayleigh(0.98 * cp.R_c)).real(), 0.0);
    EXPECT_GT(leading_growth_rate(mp.with_rayleigh(1.02 * cp.R_c)).real(), 0.0);
}

TEST(Critical, TooFewPoints) {
    const NeutralCurve c = trace_branch(benard(TopBoundary::rigid), 64, linear_grid(2.5, 3.5, 3),
                                        EigenParameter::RT, {-2500.0, -1000.0});
    EXPECT_THROW(find_critical(c), ConvergenceError);
}

TEST(Sweep, ParameterNames) {
    const SuspensionParams p;
    EXPECT_EQ(with_parameter(p, "R_T", 7.0).thermal_rayleigh, 7.0);
    EXPECT_EQ(with_parameter(p, "Le", 0.8).lewis, 0.8);
    EXPECT_EQ(with_parameter(p, "Da", 0.5).darcy, 0.5);
    EXPECT_EQ(with_parameter(p, "tau_H", 1.0).extinction, 1.0);
    EXPECT_EQ(with_parameter(p, "G_c", 0.5).critical_intensity, 0.5);
    EXPECT_EQ(with_parameter(p, "V_c", 15.0).swimming_speed, 15.0);
    EXPECT_EQ(with_parameter(p, "top_boundary", 1.0).top, TopBoundary::rigid);
    EXPECT_EQ(with_parameter(p, "top_boundary", 0.0).top, TopBoundary::free);
    EXPECT_THROW(with_parameter(p, "top_boundary", 0.5), ConfigError);
    EXPECT_THROW(with_parameter(p, "Pr", 1.0), ConfigError);
    EXPECT_THROW(with_parameter(p, "Le", -1.0), ConfigError);
    EXPECT_EQ(sweep_parameters().size(), 7u);
}

TEST(Sweep, SerialAndThreadedRowsMatch) {
    const auto ks = linear_grid(2.0, 4.5, 11);
    const std::vector<double> tops{0.0, 1.0, 0.5};
    SweepOptions serial, threaded;
    threaded.threads = 3;
    EXPECT_THROW(sweep(benard(TopBoundary::rigid), 64, "top_boundary", tops, ks, EigenParameter::RT,
                       {-2500.0, -700.0}, 0.0, serial),
                 ConfigError);
    const std::vector<double> values{1.0, 0.0};
    const SweepResult a = sweep(benard(TopBoundary::rigid), 64, "top_boundary", values, ks,
                                EigenParameter::RT, {-2500.0, -700.0}, 0.0, serial);
    const SweepResult b = sweep(benard(TopBoundary::rigid), 64, "top_boundary", values, ks,
                                EigenParameter::RT, {-2500.0, -700.0}, 0.0, threaded);
    ASSERT_EQ(a.rows.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(a.rows[i].param_value, values[i]);
        ASSERT_TRUE(a.rows[i].critical) << a.rows[i].error;
        ASSERT_TRUE(b.rows[i].critical) << b.rows[i].error;
        EXPECT_EQ(a.rows[i].critical->R_c, b.rows[i].critical->R_c);
        EXPECT_EQ(a.rows[i].critical->k_c, b.rows[i].critical->k_c);
    }
    EXPECT_LT(std::abs(a.rows[1].critical->R_c), std::abs(a.rows[0].critical->R_c));
}

TEST(Sweep, RowFailuresAreRecorded) {
    const std::vector<double> values{0.0, 1.0};
    const SweepResult r = sweep(benard(TopBoundary::rigid), 64, "top_boundary", values,
                                linear_grid(2.0, 3.0, 8), EigenParameter::RT, {-2500.0, -700.0});
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_TRUE(r.rows[0].critical) << r.rows[0].error;
    EXPECT_FALSE(r.rows[1].critical);
    EXPECT_NE(r.rows[1].error.find("k_max"), std::string::npos) << r.rows[1].error;
}

TEST(Sweep, ThermalRayleighCannotBeSweptAsEigenParameter) {
    const std::vector<double> values{0.0};
    EXPECT_THROW(sweep(SuspensionParams{}, 64, "R_T", values, default_k_grid(), EigenParameter::RT,
                       {0.0, 1.0}),
                 ConfigError);
}

}  // namespace
