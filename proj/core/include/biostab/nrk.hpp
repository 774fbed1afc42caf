#pragma once

#include "biostab/stability.hpp"

namespace biostab {

struct NrkOptions {
    double tolerance = 1e-10;  ///< max scaled Newton update
    int max_iterations = 25;
};

struct NrkResult {
    NeutralPoint point;
    int iterations = 0;
    double max_update = 0.0;  ///< last scaled update
};

/// Newton-Raphson-Kantorovich refinement of a marginal point.
///
/// The perturbation system is written as nine first-order equations for
/// (W, W', W'', W''', Phi, Phi', Phi'', T, T') and discretized with the
/// fourth-order Hermite-Simpson scheme on the basic-state grid, whose even
/// nodes form the mesh and odd nodes the midpoints (N must be even). The
/// eigen-parameter R and the frequency sigma (gamma = i sigma) are extra
/// unknowns, closed by Re W''(0) = 1 and Im W''(0) = 0. A stationary guess
/// pins sigma = 0 and keeps the real normalization only.
///
/// Throws ConvergenceError on a singular Jacobian or when the update does not
/// fall below the tolerance within max_iterations.
NrkResult refine_nrk(const NeutralPoint& guess, const ModeProblem& mp,
                     const NrkOptions& options = {});

}  // namespace biostab
