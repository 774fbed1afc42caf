#include "biostab/root_find.hpp"

#include <cmath>
#include <utility>

namespace biostab {

RootResult find_root_bracketed(const std::function<double(double)>& f, double lo,
                               double hi, double f_lo, double f_hi,
                               const RootTolerance& tol) {
    RootResult result;
    if (f_lo == 0.0) {
        result = {lo, 0.0, 0, true};
        return result;
    }
    if (f_hi == 0.0) {
        result = {hi, 0.0, 0, true};
        return result;
    }
    if (std::signbit(f_lo) == std::signbit(f_hi)) return result;

    double a = lo, fa = f_lo;
    double b = hi, fb = f_hi;
    double true_fa = fa, true_fb = fb;  // fa/fb get scaled by the Illinois rule
    int side = 0;  // which end was retained last (for the Illinois weighting)
    int slow_steps = 0;

    for (int it = 1; it <= tol.max_iterations; ++it) {
        const double width = std::abs(b - a);
        double x;
        if (slow_steps >= 2) {
            x = 0.5 * (a + b);
            slow_steps = 0;
        } else {
            x = (a * fb - b * fa) / (fb - fa);
            if (!(x > std::min(a, b) && x < std::max(a, b))) x = 0.5 * (a + b);
        }
        const double fx = f(x);
        result = {x, fx, it, false};

        if (fx == 0.0 || std::abs(fx) <= tol.abs_f) {
            result.converged = true;
            return result;
        }
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
            true_fa = fx;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = x;
            fb = fx;
            true_fb = fx;
            if (side == +1) fa *= 0.5;
            side = +1;
        }
        const double new_width = std::abs(b - a);
        slow_steps = new_width > 0.5 * width ? slow_steps + 1 : 0;

        const double scale = std::max(std::abs(a), std::abs(b));
        if (new_width <= tol.abs_x + tol.rel_x * scale) {
            // report the end with the smaller residual magnitude
            if (std::abs(true_fa) < std::abs(result.fx)) result = {a, true_fa, it, true};
            if (std::abs(true_fb) < std::abs(result.fx)) result = {b, true_fb, it, true};
            result.converged = true;
            return result;
        }
    }
    return result;
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    if (b < a) std::swap(a, b);
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace biostab
