#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "biostab/errors.hpp"
#include "biostab/nrk.hpp"

namespace {

using namespace biostab;

std::shared_ptr<const BasicState> state_for(const SuspensionParams& p, std::size_t n) {
    return std::make_shared<const BasicState>(solve_basic_state(p, n));
}

TEST(Nrk, AgreesWithMatrixBackendOnBaseline) {
    const auto st = state_for(SuspensionParams{}, 200);
    for (double k : {1.0, 3.0, 5.0}) {
        const ModeProblem mp = make_mode_problem(st, k, 0.0);
        const NeutralPoint guess = solve_neutral_R(mp, {2000.0, 12000.0});
        const NrkResult r = refine_nrk(guess, mp);
        EXPECT_NEAR(r.point.R, guess.R, 0.005 * guess.R) << k;
        EXPECT_LE(r.iterations, 25);
        EXPECT_LT(r.max_update, 1e-10);
        EXPECT_EQ(r.point.k, k);
    }
}

TEST(Nrk, RefinementIsIdempotent) {
    const auto st = state_for(SuspensionParams{}, 200);
    const ModeProblem mp = make_mode_problem(st, 3.0, 0.0);
    const NrkResult first = refine_nrk(solve_neutral_R(mp, {3000.0, 4000.0}), mp);
    const NrkResult second = refine_nrk(first.point, mp);
    EXPECT_NEAR(second.point.R, first.point.R, 1e-8 * first.point.R);
}

TEST(Nrk, ClassicalBenardOnFineGrid) {
    SuspensionParams p;
    p.swimming_speed = 0.0;
    p.darcy = 1e8;
    p.top = TopBoundary::rigid;
    const auto st = state_for(p, 400);
    const ModeProblem mp = make_mode_problem(st, 3.117, 0.0, EigenParameter::RT);
    NeutralPoint guess{3.117, -1650.0, 0.0, 1, false};
    const NrkResult r = refine_nrk(guess, mp);
    EXPECT_NEAR(r.point.R, -1707.76, 0.0005 * 1707.76);
}

TEST(Nrk, OscillatoryGuessKeepsFrequencyUnknown) {
    const auto st = state_for(SuspensionParams{}, 200);
    const ModeProblem mp = make_mode_problem(st, 3.0, 0.0);
    const NeutralPoint stationary = solve_neutral_R(mp, {3000.0, 4000.0});
    NeutralPoint guess = stationary;
    guess.oscillatory = true;
    guess.sigma = 1e-3;
    const NrkResult r = refine_nrk(guess, mp);
    EXPECT_NEAR(r.point.R, stationary.R, 1e-5 * stationary.R);
    EXPECT_LT(r.point.sigma, 1e-6);
}

TEST(Nrk, RejectsOddGrid) {
    const auto st = state_for(SuspensionParams{}, 201);
    const ModeProblem mp = make_mode_problem(st, 3.0, 0.0);
    EXPECT_THROW(refine_nrk(NeutralPoint{3.0, 3600.0}, mp), ConfigError);
}

TEST(Nrk, IterationLimitIsAConvergenceError) {
    const auto st = state_for(SuspensionParams{}, 200);
    const ModeProblem mp = make_mode_problem(st, 3.0, 0.0);
    NrkOptions opts;
    opts.max_iterations = 1;
    EXPECT_THROW(refine_nrk(NeutralPoint{3.0, 3000.0}, mp, opts), ConvergenceError);
}

}  // namespace
