#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "biostab/errors.hpp"
#include "biostab/model.hpp"

namespace {

using namespace biostab;

double bracket_curve(double x) {
    return 0.8 * std::sin(1.5 * std::numbers::pi * x) - 0.1 * std::sin(0.5 * std::numbers::pi * x);
}

// Plain bisection, independent of the library's root finder.
double bisect_xi_c() {
    double lo = 0.1, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (bracket_curve(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

TEST(Xi, ExactValues) {
    for (double beta : {-2.0, -0.0628, 0.0, 0.7}) {
        EXPECT_EQ(xi(1.0, beta), 1.0);
        EXPECT_EQ(xi(0.0, beta), 0.0);
    }
    EXPECT_NEAR(xi(0.63, -0.0628), 0.6448, 1e-4);
}

TEST(Taxis, ExactValues) {
    for (double beta : {-1.0, -0.0628, 0.0, 0.5}) {
        EXPECT_EQ(taxis(0.0, beta), 0.0);
        EXPECT_NEAR(taxis(1.0, beta), -0.9, 1e-15);
    }
}

TEST(Taxis, RangeWithinBounds) {
    for (double g = 0.0; g <= 1.5; g += 0.01) EXPECT_LE(std::abs(taxis(g, -0.0628)), 0.9 + 1e-12);
}

TEST(Taxis, DerivativesMatchCentralDifferences) {
    for (double beta : {-0.0628, 0.0, 0.4}) {
        for (double g = 0.01; g <= 1.5; g += 0.0137) {
            const double h = 1e-5;
            const double d1 = (taxis(g + h, beta) - taxis(g - h, beta)) / (2 * h);
            const double d2 = (dtaxis_dG(g + h, beta) - dtaxis_dG(g - h, beta)) / (2 * h);
            EXPECT_NEAR(dtaxis_dG(g, beta), d1, 1e-6 * std::max(1.0, std::abs(d1))) << g;
            EXPECT_NEAR(d2taxis_dG2(g, beta), d2, 1e-6 * std::max(1.0, std::abs(d2))) << g;
        }
    }
    const double h = 1e-6, g = 0.5, beta = -0.0628;
    const double fd = (taxis(g + h, beta) - taxis(g - h, beta)) / (2 * h);
    EXPECT_NEAR(dtaxis_dG(g, beta), fd, 1e-7 * std::abs(fd));
}

TEST(Taxis, SlopeAtZeroByChainRule) {
    const double beta = -0.3;
    const double expected =
        (0.8 * 1.5 * std::numbers::pi - 0.1 * 0.5 * std::numbers::pi) * std::exp(-beta);
    EXPECT_NEAR(dtaxis_dG(0.0, beta), expected, 1e-12);
    EXPECT_NEAR(dtaxis_dG(1.0, 0.0), 0.0, 1e-12);
}

TEST(Calibration, ZeroMatchesBisectionOracle) {
    const double oracle = bisect_xi_c();
    EXPECT_NEAR(taxis_zero_xi(), oracle, 1e-12);
    EXPECT_NEAR(oracle, 0.6448, 1e-3);
}

TEST(Calibration, BetaForDefaultCriticalIntensity) {
    const double oracle_xi = bisect_xi_c();
    const double oracle_beta = std::log(oracle_xi / 0.63) / (0.63 - 1.0);
    const PhototaxisModel m = calibrate_beta(0.63);
    EXPECT_NEAR(m.beta, oracle_beta, 1e-10);
    EXPECT_NEAR(m.beta, -0.063, 5e-3);
    EXPECT_NEAR(m.value(0.63), 0.0, 1e-12);
}

TEST(Calibration, BetaVanishesWhenCriticalIntensityIsTheZero) {
    EXPECT_NEAR(calibrate_beta(taxis_zero_xi()).beta, 0.0, 1e-12);
}

TEST(Calibration, SignChangesDownwardThroughCriticalIntensity) {
    for (double gc : {0.3, 0.5, 0.63, 0.8, 0.95}) {
        const PhototaxisModel m = calibrate_beta(gc);
        EXPECT_NEAR(m.value(gc), 0.0, 1e-12);
        for (double d = 0.001; d <= 0.05; d += 0.001) {
            EXPECT_GT(m.value(gc - d), 0.0) << gc << " " << d;
            EXPECT_LT(m.value(gc + d), 0.0) << gc << " " << d;
        }
    }
}

TEST(Calibration, RejectsOutOfRangeIntensity) {
    EXPECT_THROW(calibrate_beta(0.0), ConfigError);
    EXPECT_THROW(calibrate_beta(1.0), ConfigError);
}

TEST(LightField, ClosedForms) {
    std::vector<double> psi;
    for (int i = 0; i <= 10; ++i) psi.push_back(0.1 * i - 1.0);
    const auto g = light_field(psi, 0.5, 0.8);
    EXPECT_NEAR(g.front(), 0.8 * std::exp(-0.5), 1e-15);
    EXPECT_NEAR(g.front(), 0.4852, 1e-4);
    EXPECT_EQ(g.back(), 0.8);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
    for (double v : light_field(psi, 0.0, 0.8)) EXPECT_EQ(v, 0.8);
}

TEST(Params, ValidationNamesTheField) {
    SuspensionParams p;
    EXPECT_NO_THROW(validate(p));
    auto message = [](SuspensionParams q) {
        try {
            validate(q);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    p.porosity = 1.2;
    EXPECT_NE(message(p).find("phi"), std::string::npos);
    p = {};
    p.darcy = 0.0;
    EXPECT_NE(message(p).find("Da"), std::string::npos);
    p = {};
    p.critical_intensity = 1.0;
    EXPECT_NE(message(p).find("G_c"), std::string::npos);
    p = {};
    p.swimming_speed = -1.0;
    EXPECT_NE(message(p).find("V_c"), std::string::npos);
    p = {};
    p.thermal_rayleigh = -5000.0;
    EXPECT_NO_THROW(validate(p));
}

}  // namespace
