#pragma once

#include <functional>

namespace biostab {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct RootTolerance {
    double abs_x = 0.0;
    double rel_x = 1e-12;
    double abs_f = 0.0;  ///< accept as soon as |f| <= abs_f
    int max_iterations = 100;
};

/// Safeguarded secant/bisection on a bracket with f(lo) f(hi) <= 0.
///
/// Secant (Illinois-weighted false position) steps are taken while they keep
/// shrinking the bracket; a plain bisection is forced whenever two
/// consecutive steps fail to halve it. Never throws; check `converged`.
RootResult find_root_bracketed(const std::function<double(double)>& f, double lo,
                               double hi, double f_lo, double f_hi,
                               const RootTolerance& tol);

/// Golden-section search for the minimizer of a unimodal f on [a, b]; stops
/// once the bracket is narrower than `tol`. Returns the midpoint of the final
/// bracket.
double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol);

}  // namespace biostab
