#include "biostab/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "biostab/errors.hpp"
#include "biostab/root_find.hpp"

namespace biostab {
namespace {

constexpr double kFast = 1.5 * std::numbers::pi;  // 3 pi / 2
constexpr double kSlow = 0.5 * std::numbers::pi;  // pi / 2
constexpr double kFastAmp = 0.8;
constexpr double kSlowAmp = 0.1;

double curve(double x) { return kFastAmp * std::sin(kFast * x) - kSlowAmp * std::sin(kSlow * x); }

double curve_d1(double x) {
    return kFastAmp * kFast * std::cos(kFast * x) - kSlowAmp * kSlow * std::cos(kSlow * x);
}

double curve_d2(double x) {
    return -kFastAmp * kFast * kFast * std::sin(kFast * x) +
           kSlowAmp * kSlow * kSlow * std::sin(kSlow * x);
}

double xi_d1(double g, double beta) { return std::exp(beta * (g - 1.0)) * (1.0 + beta * g); }

double xi_d2(double g, double beta) {
    return beta * std::exp(beta * (g - 1.0)) * (2.0 + beta * g);
}

void require(bool ok, const char* field, const std::string& rule) {
    if (!ok) throw ConfigError(std::string(field) + ": must be " + rule);
}

}  // namespace

std::string_view to_string(TopBoundary top) {
    return top == TopBoundary::free ? "free" : "rigid";
}

void validate(const SuspensionParams& p) {
    require(std::isfinite(p.swimming_speed) && p.swimming_speed >= 0.0, "V_c", ">= 0");
    require(std::isfinite(p.extinction) && p.extinction >= 0.0, "tau_H", ">= 0");
    require(std::isfinite(p.top_intensity) && p.top_intensity > 0.0, "I_t", "> 0");
    require(p.critical_intensity > 0.0 && p.critical_intensity < 1.0, "G_c", "in (0, 1)");
    require(std::isfinite(p.prandtl) && p.prandtl > 0.0, "Pr", "> 0");
    require(p.porosity > 0.0 && p.porosity <= 1.0, "phi", "in (0, 1]");
    require(std::isfinite(p.darcy) && p.darcy > 0.0, "Da", "> 0");
    require(std::isfinite(p.lewis) && p.lewis > 0.0, "Le", "> 0");
    require(std::isfinite(p.thermal_rayleigh), "R_T", "finite");
}

double xi(double intensity, double beta) {
    return intensity * std::exp(beta * (intensity - 1.0));
}

double taxis(double intensity, double beta) { return curve(xi(intensity, beta)); }

double dtaxis_dG(double intensity, double beta) {
    return curve_d1(xi(intensity, beta)) * xi_d1(intensity, beta);
}

double d2taxis_dG2(double intensity, double beta) {
    const double x = xi(intensity, beta);
    const double dx = xi_d1(intensity, beta);
    return curve_d2(x) * dx * dx + curve_d1(x) * xi_d2(intensity, beta);
}

double PhototaxisModel::value(double intensity) const { return taxis(intensity, beta); }
double PhototaxisModel::slope(double intensity) const { return dtaxis_dG(intensity, beta); }
double PhototaxisModel::curvature(double intensity) const {
    return d2taxis_dG2(intensity, beta);
}

double taxis_zero_xi() {
    constexpr double lo = 0.1, hi = 1.0;
    RootTolerance tol;
    tol.abs_x = 1e-12;
    tol.rel_x = 0.0;
    tol.max_iterations = 200;
    const RootResult r = find_root_bracketed(curve, lo, hi, curve(lo), curve(hi), tol);
    if (!r.converged) throw NumericError("taxis zero: bisection on (0.1, 1.0) failed");
    return r.x;
}

PhototaxisModel calibrate_beta(double critical_intensity) {
    if (!(critical_intensity > 0.0 && critical_intensity < 1.0))
        throw ConfigError("G_c: must be in (0, 1)");
    PhototaxisModel model;
    model.xi_c = taxis_zero_xi();
    model.beta = std::log(model.xi_c / critical_intensity) / (critical_intensity - 1.0);
    return model;
}

std::vector<double> light_field(std::span<const double> psi, double extinction,
                                double top_intensity) {
    std::vector<double> g(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        g[i] = top_intensity * std::exp(extinction * psi[i]);
    return g;
}

}  // namespace biostab
