#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "biostab/steady.hpp"

namespace biostab {

/// Which Rayleigh number is the unknown of a neutral-stability solve.
enum class EigenParameter { RB, RT };

std::string_view to_string(EigenParameter p);

/// Linearized normal-mode problem at one horizontal wavenumber.
///
/// `params` may differ from `state->params` only in groups that do not enter
/// the basic state (Pr, phi, Da, Le, R_T, top boundary); make_mode_problem()
/// enforces this.
struct ModeProblem {
    std::shared_ptr<const BasicState> state;
    SuspensionParams params;
    double k = 1.0;
    double bio_rayleigh = 0.0;  ///< R_B
    EigenParameter eigen_param = EigenParameter::RB;

    /// Current value of the eigen-parameter (R_B or R_T).
    [[nodiscard]] double rayleigh() const;
    /// Copy with the eigen-parameter set to `value`.
    [[nodiscard]] ModeProblem with_rayleigh(double value) const;
};

ModeProblem make_mode_problem(std::shared_ptr<const BasicState> state, double k,
                              double bio_rayleigh,
                              EigenParameter eigen_param = EigenParameter::RB);
ModeProblem make_mode_problem(std::shared_ptr<const BasicState> state,
                              const SuspensionParams& params, double k, double bio_rayleigh,
                              EigenParameter eigen_param = EigenParameter::RB);

enum class Field : std::size_t { W = 0, Phi = 1, T = 2 };

/// Real pencil A x = gamma B x over x = (W_i, Phi_i, T_i) interleaved by node.
struct OperatorPair {
    Eigen::SparseMatrix<double> A;
    Eigen::SparseMatrix<double> B;
    std::size_t n_intervals = 0;
    std::vector<std::size_t> boundary_rows;  ///< rows holding boundary conditions

    [[nodiscard]] static std::size_t index(Field f, std::size_t node) {
        return 3 * node + static_cast<std::size_t>(f);
    }
    [[nodiscard]] std::size_t size() const { return 3 * (n_intervals + 1); }
};

/// Fourth-order finite-difference discretization of the perturbation system
/// for (W, Phi, T), Phi(z) = int_1^z Theta dz'. Boundary rows carry a zero
/// B-row. Throws std::invalid_argument if the state grid is not `n_intervals`.
OperatorPair assemble_operators(const ModeProblem& mp, std::size_t n_intervals);

struct Spectrum {
    std::vector<std::complex<double>> gammas;  ///< descending real part
    std::size_t n_modes = 0;
};

enum class SpectrumMethod {
    dense,          ///< full QZ on the dense pencil
    shift_invert,   ///< Arnoldi on (A - s B)^{-1} B: modes nearest the shift
};

struct SpectrumOptions {
    SpectrumMethod method = SpectrumMethod::shift_invert;
    double shift = 0.25;
    std::size_t krylov_dim = 80;
    double ritz_tolerance = 1e-9;
    /// recomputed ||(A - sB)^{-1} B x - theta x|| / (|theta| ||x||)
    double pencil_tolerance = 1e-6;
    double magnitude_cutoff = 1e8;       ///< |gamma| above this is discarded
    double boundary_fraction_cutoff = 0.99;
};

/// Finite growth rates of the discretized operator at the state's grid size.
/// Throws NumericError if the factorization or eigensolver breaks down.
Spectrum growth_spectrum(const ModeProblem& mp, const SpectrumOptions& options = {});
Spectrum growth_spectrum(const OperatorPair& ops, const SpectrumOptions& options = {});

struct NeutralPoint {
    double k = 0.0;
    double R = 0.0;
    double sigma = 0.0;  ///< |Im gamma| of the marginal mode
    int branch = 1;
    bool oscillatory = false;
};

inline constexpr double kOscillatoryThreshold = 1e-6;

struct NeutralSolveOptions {
    double rel_tolerance = 1e-6;
    double max_expansion = 10.0;  ///< bracket half-width grows by 2x up to this factor
    int max_iterations = 100;
    SpectrumOptions spectrum{};
};

/// Leading (max real part) growth rate; NaN-free, throws NumericError.
std::complex<double> leading_growth_rate(const ModeProblem& mp,
                                         const SpectrumOptions& options = {});

/// Eigen-parameter value at which max Re(gamma) crosses zero inside `bracket`.
/// Throws NoNeutralPointError when no sign change exists after expansion.
NeutralPoint solve_neutral_R(const ModeProblem& mp, std::pair<double, double> bracket,
                             const NeutralSolveOptions& options = {});

}  // namespace biostab
