#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "biostab/errors.hpp"
#include "biostab/finite_difference.hpp"
#include "biostab/stability.hpp"

namespace {

using namespace biostab;
using std::numbers::pi;

std::shared_ptr<const BasicState> state_for(const SuspensionParams& p, std::size_t n = 200) {
    return std::make_shared<const BasicState>(solve_basic_state(p, n));
}

SuspensionParams quiescent() {
    SuspensionParams p;
    p.swimming_speed = 0.0;
    p.thermal_rayleigh = 0.0;
    return p;
}

SuspensionParams benard(TopBoundary top) {
    SuspensionParams p;
    p.swimming_speed = 0.0;
    p.darcy = 1e8;
    p.top = top;
    return p;
}

TEST(Stencils, FornbergWeightsOnClassicalFormulas) {
    const std::vector<double> x{-1, 0, 1};
    const auto w = fd::fornberg_weights(0.0, x, 2);
    EXPECT_NEAR(w[0], 1.0, 1e-14);
    EXPECT_NEAR(w[1], -2.0, 1e-14);
    EXPECT_NEAR(w[2], 1.0, 1e-14);
    const std::vector<double> x5{-2, -1, 0, 1, 2};
    const auto w1 = fd::fornberg_weights(0.0, x5, 1);
    EXPECT_NEAR(w1[0], 1.0 / 12, 1e-14);
    EXPECT_NEAR(w1[1], -8.0 / 12, 1e-14);
    EXPECT_NEAR(w1[3], 8.0 / 12, 1e-14);
}

TEST(Stencils, FourthOrderAccurateEverywhere) {
    // error on sin(2 z) must drop by ~16x when h halves, at every node type
    for (int order = 1; order <= 4; ++order) {
        auto max_error = [&](std::size_t n) {
            const double h = 1.0 / static_cast<double>(n);
            double err = 0.0;
            for (std::size_t node : {std::size_t{0}, std::size_t{1}, std::size_t{2}, n / 2, n - 1, n}) {
                const fd::Stencil s = fd::uniform_stencil(node, n, order, h);
                double approx = 0.0;
                for (std::size_t j = 0; j < s.weights.size(); ++j)
                    approx += s.weights[j] * std::sin(2.0 * static_cast<double>(s.first + j) * h);
                const double z = static_cast<double>(node) * h;
                const double exact = std::pow(2.0, order) *
                                     (order % 4 == 1 ? std::cos(2 * z)
                                      : order % 4 == 2 ? -std::sin(2 * z)
                                      : order % 4 == 3 ? -std::cos(2 * z)
                                                       : std::sin(2 * z));
                err = std::max(err, std::abs(approx - exact));
            }
            return err;
        };
        const double ratio = max_error(40) / max_error(80);
        EXPECT_GT(ratio, 12.0) << "derivative order " << order;
    }
}

TEST(Operators, Bookkeeping) {
    const auto st = state_for(SuspensionParams{}, 64);
    const ModeProblem mp = make_mode_problem(st, 2.5, 1000.0);
    const OperatorPair ops = assemble_operators(mp, 64);
    EXPECT_EQ(ops.A.rows(), 3 * 65);
    EXPECT_EQ(ops.A.cols(), 3 * 65);
    EXPECT_EQ(ops.boundary_rows.size(), 9u);
    const Eigen::MatrixXd b(ops.B);
    for (std::size_t r : ops.boundary_rows)
        EXPECT_EQ(b.row(static_cast<Eigen::Index>(r)).norm(), 0.0) << r;
    EXPECT_THROW(assemble_operators(mp, 128), std::invalid_argument);
}

TEST(Operators, CellEquationDecouplesWithoutSwimming) {
    const auto st = state_for(quiescent(), 64);
    const OperatorPair ops = assemble_operators(make_mode_problem(st, 2.0, 500.0), 64);
    const Eigen::MatrixXd a(ops.A);
    for (std::size_t i = 1; i + 2 <= 64; ++i) {
        const auto r = static_cast<Eigen::Index>(OperatorPair::index(Field::Phi, i));
        for (std::size_t j = 0; j <= 64; ++j)
            EXPECT_EQ(a(r, static_cast<Eigen::Index>(OperatorPair::index(Field::W, j))), 0.0);
    }
}

TEST(Spectrum, ConductionDecayRates) {
    const double k = 2.0;
    const auto st = state_for(quiescent());
    SpectrumOptions opts;
    opts.method = SpectrumMethod::dense;
    const Spectrum s = growth_spectrum(make_mode_problem(st, k, 0.0), opts);
    for (int j = 1; j <= 3; ++j) {
        const double exact = -(k * k + j * j * pi * pi);
        double best = INFINITY;
        for (auto g : s.gammas) best = std::min(best, std::abs(g - exact));
        EXPECT_LT(best, 1e-3 * std::abs(exact)) << "j=" << j;
    }
    EXPECT_LT(s.gammas.front().real(), 0.0);
}

TEST(Spectrum, UndrivenLayerIsStableForAllWavenumbers) {
    const auto st = state_for(quiescent());
    for (double k = 0.1; k <= 10.0; k *= 1.5)
        EXPECT_LT(leading_growth_rate(make_mode_problem(st, k, 0.0)).real(), 0.0) << k;
}

TEST(Spectrum, ShiftInvertAgreesWithDenseQz) {
    const auto st = state_for(SuspensionParams{}, 100);
    for (double rb : {1000.0, 3600.0, 6000.0}) {
        const ModeProblem mp = make_mode_problem(st, 3.0, rb);
        SpectrumOptions dense;
        dense.method = SpectrumMethod::dense;
        const Spectrum a = growth_spectrum(mp, dense);
        const Spectrum b = growth_spectrum(mp);
        ASSERT_FALSE(b.gammas.empty());
        EXPECT_NEAR(a.gammas.front().real(), b.gammas.front().real(),
                    1e-6 * std::max(1.0, std::abs(a.gammas.front())));
        EXPECT_NEAR(std::abs(a.gammas.front().imag()), std::abs(b.gammas.front().imag()), 1e-6);
        for (auto g : a.gammas) EXPECT_LE(std::abs(g), 1e8);
    }
}

TEST(Spectrum, BitwiseDeterministic) {
    const auto st = state_for(SuspensionParams{});
    const ModeProblem mp = make_mode_problem(st, 3.0, 3000.0);
    const Spectrum a = growth_spectrum(mp), b = growth_spectrum(mp);
    ASSERT_EQ(a.gammas.size(), b.gammas.size());
    for (std::size_t i = 0; i < a.gammas.size(); ++i) EXPECT_EQ(a.gammas[i], b.gammas[i]);
}

TEST(Spectrum, ClassicalBenardIsMarginal) {
    SuspensionParams p = benard(TopBoundary::rigid);
    p.thermal_rayleigh = -1707.76;
    const auto st = state_for(p);
    const ModeProblem mp = make_mode_problem(st, 3.116, 0.0, EigenParameter::RT);
    EXPECT_LT(std::abs(leading_growth_rate(mp).real()), 0.5);
}

TEST(NeutralSolve, ClassicalBenardRigidRigid) {
    const auto st = state_for(benard(TopBoundary::rigid));
    const ModeProblem mp = make_mode_problem(st, 3.116, 0.0, EigenParameter::RT);
    const NeutralPoint pt = solve_neutral_R(mp, {-2000.0, -1500.0});
    EXPECT_NEAR(pt.R, -1707.76, 0.005 * 1707.76);
    EXPECT_FALSE(pt.oscillatory);
    EXPECT_NEAR(pt.sigma, 0.0, 1e-6);
}

TEST(NeutralSolve, ClassicalBenardRigidFree) {
    const auto st = state_for(benard(TopBoundary::free));
    const ModeProblem mp = make_mode_problem(st, 2.682, 0.0, EigenParameter::RT);
    const NeutralPoint pt = solve_neutral_R(mp, {-1300.0, -900.0});
    EXPECT_NEAR(pt.R, -1100.65, 0.005 * 1100.65);
}

TEST(NeutralSolve, PointIsMarginalAndBracketExpands) {
    const auto st = state_for(SuspensionParams{});
    const ModeProblem mp = make_mode_problem(st, 3.0, 0.0);
    const NeutralPoint pt = solve_neutral_R(mp, {100.0, 1000.0});
    EXPECT_GT(pt.R, 0.0);
    const double g = leading_growth_rate(mp.with_rayleigh(pt.R)).real();
    EXPECT_LT(std::abs(g), 1e-6 * std::max(1.0, std::abs(pt.R)));
}

TEST(NeutralSolve, NoSignChangeIsReported) {
    const auto st = state_for(quiescent());
    const ModeProblem mp = make_mode_problem(st, 3.0, 0.0);
    EXPECT_THROW(solve_neutral_R(mp, {0.0, 1000.0}), NoNeutralPointError);
}

TEST(NeutralSolve, StationaryPointsIgnorePrandtlAndPorosity) {
    const SuspensionParams base;
    const auto st = state_for(base);
    NeutralSolveOptions tight;
    tight.rel_tolerance = 1e-11;
    const NeutralPoint ref = solve_neutral_R(make_mode_problem(st, base, 3.2, 0.0), {3000, 4000}, tight);
    ASSERT_FALSE(ref.oscillatory);
    for (double pr : {1.0, 5.0, 50.0}) {
        for (double phi : {0.4, 0.76, 1.0}) {
            SuspensionParams p = base;
            p.prandtl = pr;
            p.porosity = phi;
            const NeutralPoint pt = solve_neutral_R(make_mode_problem(st, p, 3.2, 0.0), {3000, 4000}, tight);
            EXPECT_NEAR(pt.R, ref.R, 1e-6 * ref.R) << pr << " " << phi;
        }
    }
}

TEST(ModeProblems, Validation) {
    const auto st = state_for(SuspensionParams{});
    EXPECT_THROW(make_mode_problem(st, 0.0, 0.0), ConfigError);
    EXPECT_THROW(make_mode_problem(st, -1.0, 0.0), ConfigError);
    EXPECT_THROW(make_mode_problem(st, 1.0, -5.0, EigenParameter::RT), ConfigError);
    SuspensionParams other;
    other.swimming_speed = 5.0;
    EXPECT_THROW(make_mode_problem(st, other, 1.0, 0.0), ConfigError);
    SuspensionParams medium;
    medium.darcy = 1.0;
    EXPECT_NO_THROW(make_mode_problem(st, medium, 1.0, 0.0));
}

TEST(ModeProblems, RayleighSelection) {
    const auto st = state_for(SuspensionParams{});
    const ModeProblem rb = make_mode_problem(st, 1.0, 10.0);
    EXPECT_EQ(rb.rayleigh(), 10.0);
    EXPECT_EQ(rb.with_rayleigh(20.0).bio_rayleigh, 20.0);
    const ModeProblem rt = make_mode_problem(st, 1.0, 10.0, EigenParameter::RT);
    EXPECT_EQ(rt.rayleigh(), 50.0);
    EXPECT_EQ(rt.with_rayleigh(-3.0).params.thermal_rayleigh, -3.0);
    EXPECT_EQ(rt.with_rayleigh(-3.0).bio_rayleigh, 10.0);
}

}  // namespace
