#include "biostab/neutral.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "biostab/errors.hpp"
#include "biostab/root_find.hpp"

namespace biostab {
namespace {

std::pair<double, double> around(double r, double width) {
    const double half = std::max(width * std::abs(r), 1e-3);
    return {r - half, r + half};
}

NeutralPoint probe(const ModeProblem& base, double k, std::pair<double, double> bracket,
                   const NeutralSolveOptions& opts) {
    ModeProblem mp = base;
    mp.k = k;
    return solve_neutral_R(mp, bracket, opts);
}

std::string format_k(double k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", k);
    return buf;
}

}  // namespace

std::vector<double> log_k_grid(double k_min, double k_max, std::size_t count) {
    if (!(k_min > 0.0) || !(k_max > k_min)) throw ConfigError("k_min/k_max: need 0 < k_min < k_max");
    if (count < 2) throw ConfigError("n_k: must be >= 2");
    std::vector<double> k(count);
    const double step = std::log(k_max / k_min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) k[i] = k_min * std::exp(step * static_cast<double>(i));
    k.front() = k_min;
    k.back() = k_max;
    return k;
}

std::vector<double> default_k_grid() { return log_k_grid(0.5, 10.0, 40); }

NeutralCurve trace_branch(const ModeProblem& base, std::span<const double> k_grid,
                          std::pair<double, double> seed_bracket, const TraceOptions& options) {
    if (k_grid.empty()) throw ConfigError("k grid: empty");
    const bool increasing = k_grid.size() < 2 || k_grid[1] > k_grid[0];
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > 0.0)) throw ConfigError("k grid: every k must be > 0");
        if (i > 0 && (increasing ? k_grid[i] <= k_grid[i - 1] : k_grid[i] >= k_grid[i - 1]))
            throw ConfigError("k grid: must be strictly monotone");
    }

    NeutralCurve curve;
    curve.eigen_param = base.eigen_param;
    curve.params = base.params;
    curve.bio_rayleigh = base.bio_rayleigh;
    curve.state = base.state;

    auto solve_at = [&](double k, std::pair<double, double> bracket) -> std::optional<NeutralPoint> {
        try {
            return probe(base, k, bracket, options.solve);
        } catch (const ConvergenceError&) {
        } catch (const NumericError&) {
        }
        return std::nullopt;
    };

    const std::size_t n = k_grid.size();
    std::vector<std::optional<NeutralPoint>> found(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && found[i - 1])
            found[i] = solve_at(k_grid[i], around(found[i - 1]->R, options.continuation_width));
        if (!found[i]) found[i] = solve_at(k_grid[i], seed_bracket);
    }
    // Points before the first success are retried by continuing backwards.
    for (std::size_t i = n - 1; i-- > 0;)
        if (!found[i] && found[i + 1])
            found[i] = solve_at(k_grid[i], around(found[i + 1]->R, options.continuation_width));

    for (std::size_t i = 0; i < n; ++i) {
        if (found[i])
            curve.points.push_back(*found[i]);
        else
            curve.gaps.push_back(k_grid[i]);
    }
    std::sort(curve.points.begin(), curve.points.end(),
              [](const NeutralPoint& a, const NeutralPoint& b) { return a.k < b.k; });
    std::sort(curve.gaps.begin(), curve.gaps.end());

    const double gap_fraction =
        static_cast<double>(curve.gaps.size()) / static_cast<double>(k_grid.size());
    if (gap_fraction > options.max_gap_fraction) {
        std::string ks;
        for (double k : curve.gaps) ks += (ks.empty() ? "" : ", ") + format_k(k);
        throw ConvergenceError("branch tracing: no neutral point at " +
                               std::to_string(curve.gaps.size()) + " of " +
                               std::to_string(k_grid.size()) + " wavenumbers (k = " + ks + ")");
    }
    return curve;
}

NeutralCurve trace_branch(const SuspensionParams& params, std::size_t n_intervals,
                          std::span<const double> k_grid, EigenParameter eigen_param,
                          std::pair<double, double> seed_bracket, double bio_rayleigh,
                          const TraceOptions& options) {
    auto state = std::make_shared<const BasicState>(solve_basic_state(params, n_intervals));
    const ModeProblem base = make_mode_problem(state, params, 1.0, bio_rayleigh, eigen_param);
    return trace_branch(base, k_grid, seed_bracket, options);
}

CriticalPoint find_critical(const NeutralCurve& curve, const CriticalOptions& options) {
    const auto& pts = curve.points;
    if (pts.size() < options.min_points)
        throw ConvergenceError("critical point: only " + std::to_string(pts.size()) +
                               " valid neutral points (need " +
                               std::to_string(options.min_points) + ")");
    if (!curve.state) throw std::invalid_argument("find_critical: curve has no basic state");

    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (std::abs(pts[i].R) < std::abs(pts[best].R)) best = i;
    if (best == 0)
        throw ConvergenceError("k-range too narrow: minimum at the k_min edge (k = " +
                               format_k(pts.front().k) + ")");
    if (best + 1 == pts.size())
        throw ConvergenceError("k-range too narrow: minimum at the k_max edge (k = " +
                               format_k(pts.back().k) + ")");

    const ModeProblem base =
        make_mode_problem(curve.state, curve.params, pts[best].k, curve.bio_rayleigh,
                          curve.eigen_param);
    NeutralPoint incumbent = probe(base, pts[best].k, around(pts[best].R, 0.05), options.solve);
    auto eval = [&](double k) {
        NeutralPoint p = probe(base, k, around(incumbent.R, 0.05), options.solve);
        if (std::abs(p.R) < std::abs(incumbent.R)) incumbent = p;
        return std::abs(p.R);
    };

    golden_section_minimize(eval, pts[best - 1].k, pts[best + 1].k, options.k_tolerance);

    return {incumbent.k, incumbent.R, incumbent.sigma, incumbent.oscillatory};
}

std::span<const std::string_view> sweep_parameters() {
    static constexpr std::array<std::string_view, 7> names{"R_T", "Le",  "Da",          "tau_H",
                                                           "G_c", "V_c", "top_boundary"};
    return names;
}

SuspensionParams with_parameter(const SuspensionParams& params, std::string_view name,
                                double value) {
    SuspensionParams p = params;
    if (name == "R_T")
        p.thermal_rayleigh = value;
    else if (name == "Le")
        p.lewis = value;
    else if (name == "Da")
        p.darcy = value;
    else if (name == "tau_H")
        p.extinction = value;
    else if (name == "G_c")
        p.critical_intensity = value;
    else if (name == "V_c")
        p.swimming_speed = value;
    else if (name == "top_boundary") {
        if (value == 0.0)
            p.top = TopBoundary::free;
        else if (value == 1.0)
            p.top = TopBoundary::rigid;
        else
            throw ConfigError("values: top_boundary takes 0 (free) or 1 (rigid)");
    } else {
        throw ConfigError("vary: unknown sweep parameter '" + std::string(name) + "'");
    }
    validate(p);
    return p;
}

SweepResult sweep(const SuspensionParams& params, std::size_t n_intervals, std::string_view vary,
                  std::span<const double> values, std::span<const double> k_grid,
                  EigenParameter eigen_param, std::pair<double, double> seed_bracket,
                  double bio_rayleigh, const SweepOptions& options) {
    if (eigen_param == EigenParameter::RT && vary == "R_T")
        throw ConfigError("vary: R_T cannot be swept while it is the eigen-parameter");
    std::vector<SuspensionParams> row_params;
    row_params.reserve(values.size());
    for (double v : values) row_params.push_back(with_parameter(params, vary, v));

    SweepResult result;
    result.parameter = std::string(vary);
    result.rows.resize(values.size());

    auto run_row = [&](std::size_t i) {
        SweepRow& row = result.rows[i];
        row.param_value = values[i];
        try {
            row.curve = trace_branch(row_params[i], n_intervals, k_grid, eigen_param,
                                     seed_bracket, bio_rayleigh, options.trace);
            row.critical = find_critical(*row.curve, options.critical);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                            : options.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(values.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) run_row(i);
        return result;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++) run_row(i);
        });
    pool.clear();
    return result;
}

}  // namespace biostab
