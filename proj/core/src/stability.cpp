#include "biostab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "biostab/errors.hpp"
#include "biostab/finite_difference.hpp"
#include "biostab/root_find.hpp"

namespace biostab {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Parameters that the steady profile depends on.
bool same_basic_state_inputs(const SuspensionParams& a, const SuspensionParams& b) {
    return a.swimming_speed == b.swimming_speed && a.extinction == b.extinction &&
           a.top_intensity == b.top_intensity && a.critical_intensity == b.critical_intensity;
}

class Assembler {
public:
    Assembler(std::size_t n, double h, Triplets& a, Triplets& b) : n_(n), h_(h), a_(a), b_(b) {}

    /// row += scale * d^order/dz^order of `f` at `node`
    void derivative(Triplets& t, std::size_t row, Field f, std::size_t node, int order,
                    double scale) const {
        if (scale == 0.0) return;
        const fd::Stencil s = fd::uniform_stencil(node, n_, order, h_);
        for (std::size_t j = 0; j < s.weights.size(); ++j)
            t.emplace_back(row, OperatorPair::index(f, s.first + j), scale * s.weights[j]);
    }
    void value(Triplets& t, std::size_t row, Field f, std::size_t node, double scale) const {
        if (scale != 0.0) t.emplace_back(row, OperatorPair::index(f, node), scale);
    }
    Triplets& a() { return a_; }
    Triplets& b() { return b_; }

private:
    std::size_t n_;
    double h_;
    Triplets& a_;
    Triplets& b_;
};

std::vector<std::size_t> boundary_unknowns(std::size_t n) {
    using P = OperatorPair;
    return {P::index(Field::W, 0),     P::index(Field::W, 1),     P::index(Field::Phi, 0),
            P::index(Field::T, 0),     P::index(Field::W, n),     P::index(Field::W, n - 1),
            P::index(Field::Phi, n),   P::index(Field::Phi, n - 1), P::index(Field::T, n)};
}

double boundary_fraction(const Eigen::VectorXcd& v, const std::vector<std::size_t>& rows) {
    const double total = v.squaredNorm();
    if (total == 0.0) return 1.0;
    double on_boundary = 0.0;
    for (std::size_t r : rows) on_boundary += std::norm(v(static_cast<Eigen::Index>(r)));
    return on_boundary / total;
}

void sort_descending(std::vector<std::complex<double>>& g) {
    std::sort(g.begin(), g.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
}

Spectrum dense_spectrum(const OperatorPair& ops, const SpectrumOptions& opt) {
    Eigen::MatrixXd a(ops.A);
    Eigen::MatrixXd b(ops.B);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double scale =
            std::max(a.row(i).cwiseAbs().maxCoeff(), b.row(i).cwiseAbs().maxCoeff());
        if (scale > 0.0) {
            a.row(i) /= scale;
            b.row(i) /= scale;
        }
    }
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(a, b, true);
    if (ges.info() != Eigen::Success) throw NumericError("growth_spectrum: QZ did not converge");

    Spectrum out;
    const auto& alphas = ges.alphas();
    const auto& betas = ges.betas();
    const auto& vecs = ges.eigenvectors();
    for (Eigen::Index i = 0; i < alphas.size(); ++i) {
        const double beta = betas(i);
        if (std::abs(beta) * opt.magnitude_cutoff <= std::abs(alphas(i))) continue;
        const std::complex<double> gamma = alphas(i) / beta;
        if (boundary_fraction(vecs.col(i), ops.boundary_rows) > opt.boundary_fraction_cutoff)
            continue;
        out.gammas.push_back(gamma);
    }
    sort_descending(out.gammas);
    out.n_modes = out.gammas.size();
    return out;
}

struct ShiftInvertAttempt {
    std::vector<std::complex<double>> accepted;
    bool nearest_ok = false;  ///< the Ritz pair closest to the shift passed the pencil check
};

ShiftInvertAttempt shift_invert_attempt(const OperatorPair& ops, const SpectrumOptions& opt,
                                        double shift) {
    using SpMat = Eigen::SparseMatrix<double>;
    const Eigen::Index n = static_cast<Eigen::Index>(ops.size());
    ShiftInvertAttempt out;

    SpMat m = ops.A - shift * ops.B;
    Eigen::VectorXd row_scale = Eigen::VectorXd::Zero(n);
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it)
            row_scale(it.row()) = std::max(row_scale(it.row()), std::abs(it.value()));
    for (Eigen::Index i = 0; i < n; ++i)
        row_scale(i) = row_scale(i) > 0.0 ? 1.0 / row_scale(i) : 1.0;
    m = row_scale.asDiagonal() * m;
    const SpMat b = row_scale.asDiagonal() * ops.B;
    m.makeCompressed();
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) return out;

    const Eigen::Index dim = std::min<Eigen::Index>(static_cast<Eigen::Index>(opt.krylov_dim), n - 1);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, dim + 1);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim + 1, dim);

    // deterministic start vector, applied to the operator twice
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = 1.0 + 0.5 * std::sin(0.37 * static_cast<double>(i));
    for (int p = 0; p < 2; ++p) {
        w = lu.solve(b * w);
        w /= w.norm();
    }
    if (!w.allFinite()) return out;
    v.col(0) = w;

    Eigen::Index used = dim;
    double beta_last = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
        w = lu.solve(b * v.col(j));
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd c = v.leftCols(j + 1).transpose() * w;
            w -= v.leftCols(j + 1) * c;
            hess.col(j).head(j + 1) += c;
        }
        const double nrm = w.norm();
        hess(j + 1, j) = nrm;
        beta_last = nrm;
        if (nrm <= 1e-13 * hess.col(j).head(j + 1).norm()) {
            used = j + 1;
            beta_last = 0.0;
            break;
        }
        v.col(j + 1) = w / nrm;
    }
    if (!hess.allFinite()) return out;

    Eigen::EigenSolver<Eigen::MatrixXd> es(hess.topLeftCorner(used, used), true);
    if (es.info() != Eigen::Success) return out;

    const Eigen::VectorXcd theta = es.eigenvalues();
    const Eigen::MatrixXcd s = es.eigenvectors();
    const Eigen::MatrixXcd basis = v.leftCols(used).cast<std::complex<double>>();
    double nearest = 0.0;
    for (Eigen::Index i = 0; i < used; ++i) {
        const double mag = std::abs(theta(i));
        if (mag * opt.magnitude_cutoff <= 1.0) continue;  // |gamma - shift| too large
        const double residual = beta_last * std::abs(s(used - 1, i));
        if (residual > opt.ritz_tolerance * mag) continue;
        const std::complex<double> gamma = shift + 1.0 / theta(i);
        if (std::abs(gamma) > opt.magnitude_cutoff) continue;
        const Eigen::VectorXcd x = basis * s.col(i);
        if (boundary_fraction(x, ops.boundary_rows) > opt.boundary_fraction_cutoff) continue;

        const Eigen::VectorXd bx_re = b * x.real();
        const Eigen::VectorXd bx_im = b * x.imag();
        const Eigen::VectorXd op_re = lu.solve(bx_re);
        const Eigen::VectorXd op_im = lu.solve(bx_im);
        Eigen::VectorXcd op_x(n);
        op_x.real() = op_re;
        op_x.imag() = op_im;
        const bool ok = (op_x - theta(i) * x).norm() <= opt.pencil_tolerance * mag * x.norm();
        if (mag > nearest) {
            nearest = mag;
            out.nearest_ok = ok && mag * 1e-3 * (1.0 + std::abs(shift)) < 1.0;
        }
        if (ok) out.accepted.push_back(gamma);
    }
    return out;
}

Spectrum shift_invert_spectrum(const OperatorPair& ops, const SpectrumOptions& opt) {
    double shift = opt.shift;
    for (int attempt = 0; attempt < 4; ++attempt) {
        ShiftInvertAttempt a = shift_invert_attempt(ops, opt, shift);
        if (a.nearest_ok && !a.accepted.empty()) {
            Spectrum out;
            out.gammas = std::move(a.accepted);
            sort_descending(out.gammas);
            out.n_modes = out.gammas.size();
            return out;
        }
        shift += 0.618 * (1.0 + std::abs(shift));
    }
    throw NumericError("growth_spectrum: shift-invert Arnoldi failed for every shift tried");
}

}  // namespace

std::string_view to_string(EigenParameter p) { return p == EigenParameter::RB ? "RB" : "RT"; }

double ModeProblem::rayleigh() const {
    return eigen_param == EigenParameter::RB ? bio_rayleigh : params.thermal_rayleigh;
}

ModeProblem ModeProblem::with_rayleigh(double value) const {
    ModeProblem copy = *this;
    if (eigen_param == EigenParameter::RB)
        copy.bio_rayleigh = value;
    else
        copy.params.thermal_rayleigh = value;
    return copy;
}

ModeProblem make_mode_problem(std::shared_ptr<const BasicState> state, double k,
                              double bio_rayleigh, EigenParameter eigen_param) {
    if (!state) throw std::invalid_argument("make_mode_problem: null basic state");
    const SuspensionParams params = state->params;
    return make_mode_problem(std::move(state), params, k, bio_rayleigh, eigen_param);
}

ModeProblem make_mode_problem(std::shared_ptr<const BasicState> state,
                              const SuspensionParams& params, double k, double bio_rayleigh,
                              EigenParameter eigen_param) {
    if (!state) throw std::invalid_argument("make_mode_problem: null basic state");
    validate(params);
    if (!same_basic_state_inputs(params, state->params))
        throw ConfigError("mode problem: V_c, tau_H, I_t and G_c must match the basic state");
    if (!(std::isfinite(k) && k > 0.0)) throw ConfigError("k: must be > 0");
    if (!std::isfinite(bio_rayleigh) || (eigen_param == EigenParameter::RT && bio_rayleigh < 0.0))
        throw ConfigError("R_B: must be finite and >= 0 when prescribed");
    return ModeProblem{std::move(state), params, k, bio_rayleigh, eigen_param};
}

OperatorPair assemble_operators(const ModeProblem& mp, std::size_t n) {
    const BasicState& st = *mp.state;
    if (st.n_intervals != n)
        throw std::invalid_argument("assemble_operators: basic state grid is N=" +
                                    std::to_string(st.n_intervals) + ", requested " +
                                    std::to_string(n));
    const SuspensionParams& p = mp.params;
    const double h = st.spacing();
    const double k2 = mp.k * mp.k;
    const double drag = 1.0 / p.darcy + k2;                    // Da^-1 + k^2
    const double inertia = 1.0 / (p.prandtl * p.porosity);    // Pr^-1 / phi
    const double rb = mp.bio_rayleigh;
    const double rt = p.thermal_rayleigh;
    const double le = p.lewis;

    Triplets ta, tb;
    ta.reserve(40 * (n + 1));
    tb.reserve(12 * (n + 1));
    Assembler as(n, h, ta, tb);
    using F = Field;
    auto row = [](F f, std::size_t i) { return OperatorPair::index(f, i); };

    // Cell-flux condition a2 Phi + 2 a3 DPhi - 2 D^2 Phi = 0 at `node`.
    auto flux_row = [&](std::size_t r, std::size_t node) {
        as.value(ta, r, F::Phi, node, st.aleph2[node]);
        as.derivative(ta, r, F::Phi, node, 1, 2.0 * st.aleph3[node]);
        as.derivative(ta, r, F::Phi, node, 2, -2.0);
    };

    // W: (D^2 - k^2)(gamma/(Pr phi) + Da^-1 + k^2 - D^2) W = R_B k^2 DPhi - R_T k^2 T
    as.value(ta, row(F::W, 0), F::W, 0, 1.0);
    as.derivative(ta, row(F::W, 1), F::W, 0, 1, 1.0);
    as.value(ta, row(F::W, n), F::W, n, 1.0);
    as.derivative(ta, row(F::W, n - 1), F::W, n, mp.params.top == TopBoundary::free ? 2 : 1, 1.0);
    for (std::size_t i = 2; i + 2 <= n; ++i) {
        const std::size_t r = row(F::W, i);
        as.derivative(ta, r, F::W, i, 4, -1.0);
        as.derivative(ta, r, F::W, i, 2, drag + k2);
        as.value(ta, r, F::W, i, -k2 * drag);
        as.derivative(ta, r, F::Phi, i, 1, -rb * k2);
        as.value(ta, r, F::T, i, rt * k2);
        as.derivative(tb, r, F::W, i, 2, -inertia);
        as.value(tb, r, F::W, i, inertia * k2);
    }

    // Phi: D^3 Phi - a3 D^2 Phi - (gamma Le + k^2 + a2) DPhi - a1 Phi = Le Dn_p W
    flux_row(row(F::Phi, 0), 0);
    flux_row(row(F::Phi, n - 1), n);
    as.value(ta, row(F::Phi, n), F::Phi, n, 1.0);
    for (std::size_t i = 1; i + 2 <= n; ++i) {
        const std::size_t r = row(F::Phi, i);
        as.derivative(ta, r, F::Phi, i, 3, 1.0);
        as.derivative(ta, r, F::Phi, i, 2, -st.aleph3[i]);
        as.derivative(ta, r, F::Phi, i, 1, -(k2 + st.aleph2[i]));
        as.value(ta, r, F::Phi, i, -st.aleph1[i]);
        as.value(ta, r, F::W, i, -le * st.dn_p[i]);
        as.derivative(tb, r, F::Phi, i, 1, le);
    }

    // T: (D^2 - k^2 - gamma) T = W
    as.value(ta, row(F::T, 0), F::T, 0, 1.0);
    as.value(ta, row(F::T, n), F::T, n, 1.0);
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t r = row(F::T, i);
        as.derivative(ta, r, F::T, i, 2, 1.0);
        as.value(ta, r, F::T, i, -k2);
        as.value(ta, r, F::W, i, -1.0);
        as.value(tb, r, F::T, i, 1.0);
    }

    OperatorPair ops;
    ops.n_intervals = n;
    const auto dim = static_cast<Eigen::Index>(ops.size());
    ops.A.resize(dim, dim);
    ops.B.resize(dim, dim);
    ops.A.setFromTriplets(ta.begin(), ta.end());
    ops.B.setFromTriplets(tb.begin(), tb.end());
    ops.A.makeCompressed();
    ops.B.makeCompressed();
    ops.boundary_rows = boundary_unknowns(n);
    std::sort(ops.boundary_rows.begin(), ops.boundary_rows.end());
    return ops;
}

Spectrum growth_spectrum(const OperatorPair& ops, const SpectrumOptions& options) {
    return options.method == SpectrumMethod::dense ? dense_spectrum(ops, options)
                                                   : shift_invert_spectrum(ops, options);
}

Spectrum growth_spectrum(const ModeProblem& mp, const SpectrumOptions& options) {
    return growth_spectrum(assemble_operators(mp, mp.state->n_intervals), options);
}

std::complex<double> leading_growth_rate(const ModeProblem& mp, const SpectrumOptions& options) {
    const Spectrum s = growth_spectrum(mp, options);
    if (s.gammas.empty())
        throw NumericError("growth_spectrum: no converged finite eigenvalue at k=" +
                           std::to_string(mp.k));
    return s.gammas.front();
}

NeutralPoint solve_neutral_R(const ModeProblem& mp, std::pair<double, double> bracket,
                             const NeutralSolveOptions& options) {
    auto growth = [&](double r) {
        return leading_growth_rate(mp.with_rayleigh(r), options.spectrum).real();
    };
    double lo = std::min(bracket.first, bracket.second);
    double hi = std::max(bracket.first, bracket.second);
    const bool nonnegative = mp.eigen_param == EigenParameter::RB && lo >= 0.0;
    const double center = 0.5 * (lo + hi);
    const double half0 = std::max(0.5 * (hi - lo), 1e-12 * std::max(1.0, std::abs(center)));

    double f_lo = growth(lo), f_hi = growth(hi);
    auto same_sign = [&] { return f_lo * f_hi > 0.0; };
    for (double factor = 2.0; same_sign() && factor < 2.0 * options.max_expansion; factor *= 2.0) {
        const double half = half0 * std::min(factor, options.max_expansion);
        lo = center - half;
        hi = center + half;
        if (nonnegative) lo = std::max(lo, 0.0);
        f_lo = growth(lo);
        f_hi = growth(hi);
    }
    if (same_sign())
        throw NoNeutralPointError("no neutral point in range: max Re(gamma) keeps sign on [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) +
                                  "] at k=" + std::to_string(mp.k));

    RootTolerance tol;
    tol.rel_x = options.rel_tolerance;
    tol.abs_x = 1e-10;
    tol.max_iterations = options.max_iterations;
    const RootResult root = find_root_bracketed(growth, lo, hi, f_lo, f_hi, tol);
    if (!root.converged)
        throw ConvergenceError("neutral R: bracketing did not converge at k=" +
                               std::to_string(mp.k));

    const std::complex<double> g = leading_growth_rate(mp.with_rayleigh(root.x), options.spectrum);
    NeutralPoint pt;
    pt.k = mp.k;
    pt.R = root.x;
    pt.sigma = std::abs(g.imag());
    pt.oscillatory = pt.sigma > kOscillatoryThreshold;
    return pt;
}

}  // namespace biostab
