#include "biostab/nrk.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "biostab/errors.hpp"

namespace biostab {
namespace {

constexpr int kDim = 9;  // W, W', W'', W''', Phi, Phi', Phi'', T, T'
constexpr int kWpp = 2;

using Coeff = Eigen::Matrix<double, kDim, kDim>;
using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

/// y' = (F0 + R FR + gamma Fg) y at one grid node.
struct NodeCoefficients {
    Coeff f0 = Coeff::Zero();
    Coeff fr = Coeff::Zero();
    Coeff fg = Coeff::Zero();
};

NodeCoefficients node_coefficients(const ModeProblem& mp, std::size_t i) {
    const BasicState& st = *mp.state;
    const SuspensionParams& p = mp.params;
    const double k2 = mp.k * mp.k;
    const double q0 = 1.0 / p.darcy + k2;
    const double inertia = 1.0 / (p.prandtl * p.porosity);

    NodeCoefficients c;
    Coeff& f = c.f0;
    f(0, 1) = f(1, 2) = f(2, 3) = 1.0;
    f(3, 2) = q0 + k2;
    f(3, 0) = -k2 * q0;
    f(4, 5) = f(5, 6) = 1.0;
    f(6, 6) = st.aleph3[i];
    f(6, 5) = k2 + st.aleph2[i];
    f(6, 4) = st.aleph1[i];
    f(6, 0) = p.lewis * st.dn_p[i];
    f(7, 8) = 1.0;
    f(8, 7) = k2;
    f(8, 0) = 1.0;

    if (mp.eigen_param == EigenParameter::RB) {
        c.fr(3, 5) = -k2;
        f(3, 7) = p.thermal_rayleigh * k2;
    } else {
        c.fr(3, 7) = k2;
        f(3, 5) = -mp.bio_rayleigh * k2;
    }

    c.fg(3, 2) = inertia;
    c.fg(3, 0) = -k2 * inertia;
    c.fg(6, 5) = p.lewis;
    c.fg(8, 7) = 1.0;
    return c;
}

/// K(R, gamma) = K0 + R KR + gamma Kg acting on y stacked node by node.
struct Discretization {
    SpMat k0, kr, kg;
    Eigen::Index size = 0;
    Eigen::Index last_bc_row = 0;
    Eigen::Index norm_col = 0;
};

Discretization discretize(const ModeProblem& mp) {
    const BasicState& st = *mp.state;
    const std::size_t n = st.n_intervals;
    const double big_h = 2.0 * st.spacing();
    auto col = [](std::size_t node, int comp) {
        return static_cast<Eigen::Index>(kDim * node + static_cast<std::size_t>(comp));
    };

    std::vector<NodeCoefficients> coeffs;
    coeffs.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) coeffs.push_back(node_coefficients(mp, i));

    Triplets t0, tr, tg;
    Eigen::Index row = 0;

    auto flux = [&](std::size_t node) {
        t0.emplace_back(row, col(node, 4), st.aleph2[node]);
        t0.emplace_back(row, col(node, 5), 2.0 * st.aleph3[node]);
        t0.emplace_back(row, col(node, 6), -2.0);
        ++row;
    };
    auto pin = [&](std::size_t node, int comp) { t0.emplace_back(row++, col(node, comp), 1.0); };

    pin(0, 0);
    pin(0, 1);
    flux(0);
    pin(0, 7);

    // row += s * F(node) y(node), split by parameter dependence
    auto add_f = [&](Eigen::Index r, int comp, std::size_t node, double s) {
        const NodeCoefficients& c = coeffs[node];
        for (int j = 0; j < kDim; ++j) {
            if (c.f0(comp, j) != 0.0) t0.emplace_back(r, col(node, j), s * c.f0(comp, j));
            if (c.fr(comp, j) != 0.0) tr.emplace_back(r, col(node, j), s * c.fr(comp, j));
            if (c.fg(comp, j) != 0.0) tg.emplace_back(r, col(node, j), s * c.fg(comp, j));
        }
    };

    for (std::size_t a = 0; a + 2 <= n; a += 2) {
        const std::size_t m = a + 1, b = a + 2;
        for (int c = 0; c < kDim; ++c) {
            // y_m - (y_a + y_b)/2 - H/8 (f_a - f_b) = 0
            t0.emplace_back(row, col(m, c), 1.0);
            t0.emplace_back(row, col(a, c), -0.5);
            t0.emplace_back(row, col(b, c), -0.5);
            add_f(row, c, a, -big_h / 8.0);
            add_f(row, c, b, big_h / 8.0);
            ++row;
            // y_b - y_a - H/6 (f_a + 4 f_m + f_b) = 0
            t0.emplace_back(row, col(b, c), 1.0);
            t0.emplace_back(row, col(a, c), -1.0);
            add_f(row, c, a, -big_h / 6.0);
            add_f(row, c, m, -4.0 * big_h / 6.0);
            add_f(row, c, b, -big_h / 6.0);
            ++row;
        }
    }

    pin(n, 0);
    pin(n, 7);
    pin(n, 4);
    flux(n);
    pin(n, mp.params.top == TopBoundary::free ? 2 : 1);

    Discretization d;
    d.size = static_cast<Eigen::Index>(kDim * (n + 1));
    d.last_bc_row = row - 1;
    d.norm_col = col(0, kWpp);
    for (auto [m, t] : {std::pair{&d.k0, &t0}, std::pair{&d.kr, &tr}, std::pair{&d.kg, &tg}}) {
        m->resize(d.size, d.size);
        m->setFromTriplets(t->begin(), t->end());
        m->makeCompressed();
    }
    return d;
}

// Appends the entries of `m` shifted by (r0, c0) and scaled by `s`.
void append_block(Triplets& t, const SpMat& m, Eigen::Index r0, Eigen::Index c0, double s) {
    for (Eigen::Index j = 0; j < m.outerSize(); ++j)
        for (SpMat::InnerIterator it(m, j); it; ++it)
            if (s * it.value() != 0.0) t.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
}

void append_column(Triplets& t, const Eigen::VectorXd& v, Eigen::Index r0, Eigen::Index c) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != 0.0) t.emplace_back(r0 + i, c, v(i));
}

Eigen::VectorXcd initial_eigenfunction(const Discretization& d, double r, double sigma) {
    using CSpMat = Eigen::SparseMatrix<std::complex<double>>;
    const std::complex<double> gamma(0.0, sigma);
    CSpMat k = (d.k0 + r * d.kr).cast<std::complex<double>>() +
               gamma * d.kg.cast<std::complex<double>>();
    k.prune([&](Eigen::Index row, Eigen::Index, const std::complex<double>&) {
        return row != d.last_bc_row;
    });
    k.coeffRef(d.last_bc_row, d.norm_col) = 1.0;
    k.makeCompressed();

    Eigen::SparseLU<CSpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(k);
    if (lu.info() != Eigen::Success)
        throw ConvergenceError("NRK: singular system for the initial eigenfunction");
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(d.size);
    rhs(d.last_bc_row) = 1.0;
    Eigen::VectorXcd y = lu.solve(rhs);
    if (!y.allFinite() || std::abs(y(d.norm_col)) == 0.0)
        throw ConvergenceError("NRK: degenerate initial eigenfunction");
    return y / y(d.norm_col);
}

double scaled(double delta, double value) { return std::abs(delta) / std::max(1.0, std::abs(value)); }

}  // namespace

NrkResult refine_nrk(const NeutralPoint& guess, const ModeProblem& mp, const NrkOptions& options) {
    const std::size_t n = mp.state->n_intervals;
    if (n % 2 != 0) throw ConfigError("n_grid: must be even for NRK refinement");
    if (!std::isfinite(guess.R)) throw ConvergenceError("NRK: non-finite initial R");

    const Discretization d = discretize(mp);
    const Eigen::Index sz = d.size;
    const bool oscillatory = guess.oscillatory;
    const Eigen::Index n_unknowns = oscillatory ? 2 * sz + 2 : sz + 1;

    double r = guess.R;
    double sigma = oscillatory ? std::abs(guess.sigma) : 0.0;
    const Eigen::VectorXcd y0 = initial_eigenfunction(d, r, sigma);
    Eigen::VectorXd yr = y0.real();
    Eigen::VectorXd yi = y0.imag();

    NrkResult result;
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    for (int it = 1; it <= options.max_iterations; ++it) {
        SpMat kre = d.k0 + r * d.kr;
        Triplets t;
        t.reserve(static_cast<std::size_t>(4 * kre.nonZeros() + 4 * sz));
        Eigen::VectorXd rhs(n_unknowns);

        if (oscillatory) {
            const SpMat kim = sigma * d.kg;
            append_block(t, kre, 0, 0, 1.0);
            append_block(t, kim, 0, sz, -1.0);
            append_block(t, kim, sz, 0, 1.0);
            append_block(t, kre, sz, sz, 1.0);
            append_column(t, d.kr * yr, 0, 2 * sz);
            append_column(t, d.kr * yi, sz, 2 * sz);
            append_column(t, -(d.kg * yi), 0, 2 * sz + 1);
            append_column(t, d.kg * yr, sz, 2 * sz + 1);
            t.emplace_back(2 * sz, d.norm_col, 1.0);
            t.emplace_back(2 * sz + 1, sz + d.norm_col, 1.0);
            rhs.head(sz) = -(kre * yr - kim * yi);
            rhs.segment(sz, sz) = -(kim * yr + kre * yi);
            rhs(2 * sz) = 1.0 - yr(d.norm_col);
            rhs(2 * sz + 1) = -yi(d.norm_col);
        } else {
            append_block(t, kre, 0, 0, 1.0);
            append_column(t, d.kr * yr, 0, sz);
            t.emplace_back(sz, d.norm_col, 1.0);
            rhs.head(sz) = -(kre * yr);
            rhs(sz) = 1.0 - yr(d.norm_col);
        }

        SpMat jac(n_unknowns, n_unknowns);
        jac.setFromTriplets(t.begin(), t.end());
        jac.makeCompressed();
        lu.compute(jac);
        if (lu.info() != Eigen::Success)
            throw ConvergenceError("NRK: singular Jacobian at iteration " + std::to_string(it) +
                                   " (k=" + std::to_string(mp.k) + ")");
        const Eigen::VectorXd delta = lu.solve(rhs);
        if (!delta.allFinite())
            throw ConvergenceError("NRK: non-finite update at iteration " + std::to_string(it));

        const double y_scale = std::max(yr.lpNorm<Eigen::Infinity>(),
                                        oscillatory ? yi.lpNorm<Eigen::Infinity>() : 0.0);
        double update = delta.head(sz).lpNorm<Eigen::Infinity>() / std::max(1.0, y_scale);
        yr += delta.head(sz);
        if (oscillatory) {
            update = std::max(update, delta.segment(sz, sz).lpNorm<Eigen::Infinity>() /
                                          std::max(1.0, y_scale));
            yi += delta.segment(sz, sz);
            update = std::max(update, scaled(delta(2 * sz), r));
            update = std::max(update, scaled(delta(2 * sz + 1), sigma));
            r += delta(2 * sz);
            sigma += delta(2 * sz + 1);
        } else {
            update = std::max(update, scaled(delta(sz), r));
            r += delta(sz);
        }

        result.iterations = it;
        result.max_update = update;
        if (update < options.tolerance) {
            result.point = guess;
            result.point.R = r;
            result.point.sigma = std::abs(sigma);
            result.point.oscillatory = result.point.sigma > kOscillatoryThreshold;
            return result;
        }
    }
    throw ConvergenceError("NRK: no convergence in " + std::to_string(options.max_iterations) +
                           " iterations (last update " + std::to_string(result.max_update) +
                           ", k=" + std::to_string(mp.k) + ")");
}

}  // namespace biostab
