#pragma once

#include <cstddef>
#include <vector>

#include "biostab/model.hpp"

namespace biostab {

/// Quiescent steady state on the uniform grid z_i = i / N, i = 0..N.
///
/// The temperature profile is T_p(z) = z and is never stored. All arrays have
/// N + 1 entries and the struct is immutable once returned by
/// solve_basic_state(), so one instance may back many concurrent mode solves.
struct BasicState {
    SuspensionParams params;
    PhototaxisModel taxis;
    std::size_t n_intervals = 0;  ///< N
    double shooting_slope = 0.0;   ///< n_p(0)
    double shooting_residual = 0.0;  ///< psi(1) after the final shot
    int shooting_iterations = 0;

    std::vector<double> z;
    std::vector<double> psi;
    std::vector<double> n_p;
    std::vector<double> dn_p;  ///< dn_p/dz = V_c M_p n_p
    std::vector<double> G_p;
    std::vector<double> M_p;
    std::vector<double> dMdG;
    std::vector<double> d2MdG2;
    std::vector<double> aleph1;
    std::vector<double> aleph2;
    std::vector<double> aleph3;

    [[nodiscard]] double spacing() const { return 1.0 / static_cast<double>(n_intervals); }
};

struct ShootingOptions {
    double ode_tolerance = 1e-10;  ///< abs and rel tolerance of the RK integrator
    double residual_tolerance = 1e-10;
    double slope_lo = 1e-6;
    double slope_hi = 50.0;
    int max_iterations = 100;
    int max_expansions = 30;
};

inline constexpr std::size_t kDefaultGridIntervals = 200;
inline constexpr std::size_t kMinGridIntervals = 32;

/// Shoots psi'' = V_c M(I_t e^{tau_H psi}) psi' from z = 0 with psi(0) = -1 and
/// adjusts psi'(0) until psi(1) = 0. Throws ConvergenceError when the slope
/// bracket cannot be established or the iteration stalls.
BasicState solve_basic_state(const SuspensionParams& params,
                             std::size_t n_intervals = kDefaultGridIntervals,
                             const ShootingOptions& options = {});

/// Fills aleph1..3 from n_p, G_p, M_p, dMdG and d2MdG2.
/// aleph1 = tau_H V_c d/dz(n_p G_p M'), expanded with the chain rule.
void aleph_coefficients(BasicState& state);

}  // namespace biostab
