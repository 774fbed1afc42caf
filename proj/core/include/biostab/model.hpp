#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace biostab {

enum class TopBoundary { free, rigid };

std::string_view to_string(TopBoundary top);

/// Dimensionless description of one suspension/porous-layer configuration.
///
/// Defaults are the stress-free baseline used for the thermal Rayleigh
/// number study (V_c = 10, tau_H = 0.5, G_c = 0.63, I_t = 0.8, phi = 0.76,
/// Da = 0.1, Le = 0.4, Pr = 5, R_T = 50).
struct SuspensionParams {
    double swimming_speed = 10.0;       ///< V_c >= 0
    double extinction = 0.5;            ///< tau_H >= 0
    double top_intensity = 0.8;         ///< I_t > 0
    double critical_intensity = 0.63;   ///< G_c in (0, 1)
    double prandtl = 5.0;               ///< Pr > 0
    double porosity = 0.76;             ///< phi in (0, 1]
    double darcy = 0.1;                 ///< Da > 0
    double lewis = 0.4;                 ///< Le > 0
    double thermal_rayleigh = 50.0;     ///< R_T, any sign
    TopBoundary top = TopBoundary::free;

    friend bool operator==(const SuspensionParams&, const SuspensionParams&) = default;
};

/// Throws ConfigError naming the first out-of-range field.
void validate(const SuspensionParams& params);

/// Light-response curve M(G) with its calibrated shape parameter.
struct PhototaxisModel {
    double beta = 0.0;
    double xi_c = 0.0;  ///< value of Xi at which M vanishes

    [[nodiscard]] double value(double intensity) const;
    [[nodiscard]] double slope(double intensity) const;
    [[nodiscard]] double curvature(double intensity) const;
};

/// Xi(G) = G exp(beta (G - 1)).
double xi(double intensity, double beta);

/// M(G) = 0.8 sin(3 pi Xi / 2) - 0.1 sin(pi Xi / 2).
double taxis(double intensity, double beta);
double dtaxis_dG(double intensity, double beta);
double d2taxis_dG2(double intensity, double beta);

/// Smallest positive zero of 0.8 sin(3 pi x / 2) - 0.1 sin(pi x / 2).
double taxis_zero_xi();

/// Chooses beta so that M(G_c) = 0 with M > 0 below G_c and M < 0 above.
PhototaxisModel calibrate_beta(double critical_intensity);

/// Lambert-Beer intensity G = I_t exp(tau_H psi), psi(z) = int_1^z n dz'.
std::vector<double> light_field(std::span<const double> psi, double extinction,
                                double top_intensity);

}  // namespace biostab
