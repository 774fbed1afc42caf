#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biostab/stability.hpp"

namespace biostab {

/// One traced branch R(k) of the neutral curve.
struct NeutralCurve {
    std::vector<NeutralPoint> points;  ///< valid points, strictly increasing k
    std::vector<double> gaps;          ///< k values where no neutral point was found
    EigenParameter eigen_param = EigenParameter::RB;
    SuspensionParams params;
    double bio_rayleigh = 0.0;  ///< fixed R_B when the eigen-parameter is R_T
    std::shared_ptr<const BasicState> state;
};

struct CriticalPoint {
    double k_c = 0.0;
    double R_c = 0.0;
    double sigma_c = 0.0;
    bool oscillatory = false;
};

struct TraceOptions {
    NeutralSolveOptions solve{};
    double continuation_width = 0.05;  ///< bracket half-width relative to the previous |R|
    double max_gap_fraction = 0.5;
};

struct CriticalOptions {
    NeutralSolveOptions solve{.rel_tolerance = 1e-10};
    double k_tolerance = 1e-4;
    std::size_t min_points = 5;
};

/// 40 points spaced logarithmically on [0.5, 10].
std::vector<double> default_k_grid();
std::vector<double> log_k_grid(double k_min, double k_max, std::size_t count);

/// Traces branch 1 over `k_grid` (strictly monotone, all k > 0). `base`
/// supplies the basic state, parameters, fixed R_B and eigen-parameter; its k
/// is ignored. Each point is bracketed around the previous R; the seed bracket
/// is used for the first point and as a fallback. Throws ConvergenceError when
/// more than max_gap_fraction of the grid fails.
NeutralCurve trace_branch(const ModeProblem& base, std::span<const double> k_grid,
                          std::pair<double, double> seed_bracket,
                          const TraceOptions& options = {});

NeutralCurve trace_branch(const SuspensionParams& params, std::size_t n_intervals,
                          std::span<const double> k_grid, EigenParameter eigen_param,
                          std::pair<double, double> seed_bracket, double bio_rayleigh = 0.0,
                          const TraceOptions& options = {});

/// Point of smallest |R| on the curve, refined by golden-section search in k. Throws
/// ConvergenceError naming the edge when the coarse minimum sits on k_min or
/// k_max, or when fewer than min_points valid points exist.
CriticalPoint find_critical(const NeutralCurve& curve, const CriticalOptions& options = {});

/// Parameters accepted by sweep(): R_T, Le, Da, tau_H, G_c, V_c, top_boundary
/// (0 = free, 1 = rigid).
std::span<const std::string_view> sweep_parameters();

/// Copy of `params` with `name` set to `value`; throws ConfigError.
SuspensionParams with_parameter(const SuspensionParams& params, std::string_view name,
                                double value);

struct SweepRow {
    double param_value = 0.0;
    std::optional<CriticalPoint> critical;
    std::optional<NeutralCurve> curve;
    std::string error;  ///< non-empty when the row failed
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepRow> rows;  ///< in the order of the requested values
};

struct SweepOptions {
    TraceOptions trace{};
    CriticalOptions critical{};
    unsigned threads = 1;  ///< 0 picks the hardware concurrency
};

/// One trace_branch + find_critical per value. Row failures are stored in the
/// row; results do not depend on the thread count.
SweepResult sweep(const SuspensionParams& params, std::size_t n_intervals, std::string_view vary,
                  std::span<const double> values, std::span<const double> k_grid,
                  EigenParameter eigen_param, std::pair<double, double> seed_bracket,
                  double bio_rayleigh = 0.0, const SweepOptions& options = {});

}  // namespace biostab
