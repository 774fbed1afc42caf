#include "biostab/steady.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "biostab/errors.hpp"
#include "biostab/root_find.hpp"

namespace biostab {
namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<double, 2>;  // (psi, n)

struct CellTransport {
    double swimming_speed;
    double extinction;
    double top_intensity;
    double beta;

    void operator()(const OdeState& y, OdeState& dydz, double /*z*/) const {
        const double g = top_intensity * std::exp(extinction * std::min(y[0], 0.0));
        dydz[0] = y[1];
        dydz[1] = swimming_speed * taxis(g, beta) * y[1];
    }
};

auto make_stepper(double tol) {
    return odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<OdeState>());
}

template <typename Observer>
double shoot(const CellTransport& rhs, double slope, double tol, const std::vector<double>& z,
             Observer&& observe) {
    OdeState y{-1.0, slope};
    odeint::integrate_times(make_stepper(tol), rhs, y, z.begin(), z.end(), 1e-3, observe);
    return y[0];
}

}  // namespace

BasicState solve_basic_state(const SuspensionParams& params, std::size_t n_intervals,
                             const ShootingOptions& options) {
    validate(params);
    if (n_intervals < kMinGridIntervals)
        throw ConfigError("n_grid: must be >= " + std::to_string(kMinGridIntervals));

    BasicState state;
    state.params = params;
    state.taxis = calibrate_beta(params.critical_intensity);
    state.n_intervals = n_intervals;

    const CellTransport rhs{params.swimming_speed, params.extinction, params.top_intensity,
                            state.taxis.beta};
    const std::size_t n_nodes = n_intervals + 1;
    state.z.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i)
        state.z[i] = static_cast<double>(i) / static_cast<double>(n_intervals);
    state.z.back() = 1.0;

    const double tol = options.ode_tolerance;
    auto residual = [&](double s) {
        return shoot(rhs, s, tol, state.z, [](const OdeState&, double) {});
    };

    double lo = options.slope_lo, hi = options.slope_hi;
    double f_lo = residual(lo), f_hi = residual(hi);
    for (int e = 0; f_lo > 0.0 && e < options.max_expansions; ++e) {
        lo *= 0.1;
        f_lo = residual(lo);
    }
    for (int e = 0; f_hi < 0.0 && e < options.max_expansions; ++e) {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = residual(hi);
    }
    if (f_lo > 0.0 || f_hi < 0.0)
        throw ConvergenceError("steady shooting: could not bracket n_p(0) (last bracket [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "])");

    RootTolerance rt;
    rt.abs_f = 0.1 * options.residual_tolerance;
    rt.rel_x = 1e-15;
    rt.max_iterations = options.max_iterations;
    const RootResult root = find_root_bracketed(residual, lo, hi, f_lo, f_hi, rt);
    if (!root.converged || std::abs(root.fx) >= options.residual_tolerance)
        throw ConvergenceError("steady shooting: psi(1) residual " + std::to_string(root.fx) +
                               " after " + std::to_string(root.iterations) + " iterations");

    state.shooting_slope = root.x;
    state.shooting_residual = root.fx;
    state.shooting_iterations = root.iterations;

    state.psi.reserve(n_nodes);
    state.n_p.reserve(n_nodes);
    shoot(rhs, root.x, tol, state.z, [&](const OdeState& s, double) {
        state.psi.push_back(s[0]);
        state.n_p.push_back(s[1]);
    });

    state.G_p = light_field(state.psi, params.extinction, params.top_intensity);
    state.M_p.resize(n_nodes);
    state.dMdG.resize(n_nodes);
    state.d2MdG2.resize(n_nodes);
    state.dn_p.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        state.M_p[i] = state.taxis.value(state.G_p[i]);
        state.dMdG[i] = state.taxis.slope(state.G_p[i]);
        state.d2MdG2[i] = state.taxis.curvature(state.G_p[i]);
        state.dn_p[i] = params.swimming_speed * state.M_p[i] * state.n_p[i];
    }
    aleph_coefficients(state);
    return state;
}

void aleph_coefficients(BasicState& s) {
    const double vc = s.params.swimming_speed;
    const double tau = s.params.extinction;
    const std::size_t n = s.n_p.size();
    s.aleph1.assign(n, 0.0);
    s.aleph2.assign(n, 0.0);
    s.aleph3.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double np = s.n_p[i], g = s.G_p[i], m1 = s.dMdG[i];
        const double dn = vc * s.M_p[i] * np;  // dn_p/dz
        const double dg = tau * np * g;        // dG_p/dz
        const double d_product = dn * g * m1 + np * dg * m1 + np * g * s.d2MdG2[i] * dg;
        s.aleph1[i] = tau * vc * d_product;
        s.aleph2[i] = 2.0 * tau * vc * np * g * m1;
        s.aleph3[i] = vc * s.M_p[i];
    }
}

}  // namespace biostab
