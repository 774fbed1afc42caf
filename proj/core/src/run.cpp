#include "biostab/run.hpp"

#include <charconv>
#include <chrono>
#include <ostream>
#include <system_error>

#include "biostab/errors.hpp"
#include "biostab/neutral.hpp"
#include "biostab/nrk.hpp"
#include "biostab/output.hpp"

namespace biostab {
namespace {

std::string short_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 7);
    return std::string(buf, res.ptr);
}

std::string rayleigh_name(EigenParameter p) { return p == EigenParameter::RB ? "R_B" : "R_T"; }

NeutralSolveOptions solve_options(const RunConfig& c) {
    NeutralSolveOptions o;
    o.rel_tolerance = c.rel_tolerance;
    return o;
}

CriticalOptions critical_options(const RunConfig& c) {
    CriticalOptions o;
    o.k_tolerance = c.k_tolerance;
    return o;
}

std::shared_ptr<const BasicState> basic_state(const RunConfig& c) {
    return std::make_shared<const BasicState>(solve_basic_state(c.params, c.n_grid));
}

NeutralCurve trace(const RunConfig& c) {
    const auto state = basic_state(c);
    const ModeProblem base = make_mode_problem(state, c.params, 1.0, c.bio_rayleigh, c.eigen_param);
    const std::vector<double> ks = log_k_grid(c.k_min, c.k_max, c.n_k);
    TraceOptions opts;
    opts.solve = solve_options(c);
    return trace_branch(base, ks, {c.R_lo, c.R_hi}, opts);
}

void warn_gaps(const NeutralCurve& curve, const std::string& label, RunReport& report) {
    if (curve.gaps.empty()) return;
    std::string ks;
    for (double k : curve.gaps) ks += (ks.empty() ? "" : ", ") + short_number(k);
    report.warnings.push_back(label + "no neutral point at k = " + ks);
}

std::filesystem::path output(const RunConfig& c, const char* name, RunReport& report) {
    report.files.push_back(c.out_dir / name);
    return report.files.back();
}

std::string critical_text(const CriticalPoint& cp) {
    return "k_c=" + short_number(cp.k_c) + " R_c=" + short_number(cp.R_c) +
           " sigma_c=" + short_number(cp.sigma_c) +
           (cp.oscillatory ? " (oscillatory)" : " (stationary)");
}

void run_steady(const RunConfig& c, RunReport& r) {
    const BasicState s = solve_basic_state(c.params, c.n_grid);
    write_steady_csv(s, output(c, "steady.csv", r));
    r.summary = "steady: n_p(0)=" + short_number(s.shooting_slope) +
                " psi(1) residual=" + short_number(s.shooting_residual) +
                " nodes=" + std::to_string(s.z.size());
}

void run_spectrum(const RunConfig& c, RunReport& r) {
    const auto state = basic_state(c);
    const ModeProblem mp = make_mode_problem(state, c.params, c.k, c.bio_rayleigh);
    const Spectrum sp = growth_spectrum(mp);
    write_spectrum_csv(sp, output(c, "spectrum.csv", r));
    r.summary = "spectrum: k=" + short_number(c.k) + " modes=" + std::to_string(sp.n_modes);
    if (!sp.gammas.empty())
        r.summary += " leading gamma=" + short_number(sp.gammas.front().real()) +
                     (sp.gammas.front().imag() < 0 ? "" : "+") +
                     short_number(sp.gammas.front().imag()) + "i";
}

void run_neutral(const RunConfig& c, RunReport& r) {
    const NeutralCurve curve = trace(c);
    warn_gaps(curve, "", r);
    write_neutral_csv(curve, output(c, "neutral_curve.csv", r));
    const std::vector<PlotCurve> plot{plot_curve(rayleigh_name(c.eigen_param) + " branch 1", curve)};
    write_neutral_svg(plot, {"Neutral curve", "k", rayleigh_name(c.eigen_param)},
                      output(c, "neutral_curve.svg", r));
    const NeutralPoint* lowest = nullptr;
    for (const NeutralPoint& p : curve.points)
        if (!lowest || std::abs(p.R) < std::abs(lowest->R)) lowest = &p;
    r.summary = "neutral: points=" + std::to_string(curve.points.size()) +
                " gaps=" + std::to_string(curve.gaps.size());
    if (lowest)
        r.summary += " lowest |R| at k=" + short_number(lowest->k) + " R=" + short_number(lowest->R);
}

void run_critical(const RunConfig& c, RunReport& r) {
    const NeutralCurve curve = trace(c);
    warn_gaps(curve, "", r);
    write_neutral_csv(curve, output(c, "neutral_curve.csv", r));
    const CriticalPoint cp = find_critical(curve, critical_options(c));

    SweepRow row;
    row.param_value =
        c.eigen_param == EigenParameter::RB ? c.params.thermal_rayleigh : c.bio_rayleigh;
    row.critical = cp;
    write_critical_csv(std::span<const SweepRow>(&row, 1), output(c, "critical.csv", r));

    const std::vector<PlotCurve> plot{plot_curve(rayleigh_name(c.eigen_param) + " branch 1", curve, cp)};
    write_neutral_svg(plot, {"Neutral curve", "k", rayleigh_name(c.eigen_param)},
                      output(c, "neutral_curve.svg", r));
    r.summary = "critical: " + critical_text(cp);

    if (c.nrk) {
        const ModeProblem mp =
            make_mode_problem(curve.state, c.params, cp.k_c, c.bio_rayleigh, c.eigen_param);
        try {
            const NrkResult nrk =
                refine_nrk(NeutralPoint{cp.k_c, cp.R_c, cp.sigma_c, 1, cp.oscillatory}, mp);
            r.summary += " R_c(NRK)=" + short_number(nrk.point.R) +
                         " in " + std::to_string(nrk.iterations) + " iterations";
        } catch (const ConvergenceError& e) {
            r.warnings.push_back(std::string("NRK refinement rejected, keeping matrix value: ") +
                                 e.what());
        }
    }
}

void run_sweep(const RunConfig& c, RunReport& r) {
    SweepOptions opts;
    opts.trace.solve = solve_options(c);
    opts.critical = critical_options(c);
    opts.threads = c.threads;
    const std::vector<double> ks = log_k_grid(c.k_min, c.k_max, c.n_k);
    const SweepResult res = sweep(c.params, c.n_grid, c.vary, c.values, ks, c.eigen_param,
                                  {c.R_lo, c.R_hi}, c.bio_rayleigh, opts);
    write_critical_csv(res.rows, output(c, "sweep.csv", r));

    std::vector<PlotCurve> plot;
    std::string values;
    std::size_t ok = 0;
    for (const SweepRow& row : res.rows) {
        const std::string label = c.vary + " = " + short_number(row.param_value);
        if (row.curve) warn_gaps(*row.curve, label + ": ", r);
        if (row.curve && row.curve->points.size() >= 2)
            plot.push_back(plot_curve(label, *row.curve, row.critical));
        if (!row.error.empty()) r.warnings.push_back(label + ": " + row.error);
        if (row.critical) ++ok;
        values += (values.empty() ? "" : ", ") +
                  (row.critical ? short_number(row.critical->R_c) : std::string("failed"));
    }
    if (!plot.empty())
        write_neutral_svg(plot, {"Neutral curves, varying " + c.vary, "k",
                                 rayleigh_name(c.eigen_param)},
                          output(c, "sweep.svg", r));
    r.summary = "sweep " + c.vary + ": rows=" + std::to_string(ok) + "/" +
                std::to_string(res.rows.size()) + " R_c=[" + values + "]";
    if (ok != res.rows.size()) r.exit_code = kExitConvergence;
}

}  // namespace

RunReport execute(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec || !std::filesystem::is_directory(config.out_dir))
        throw IoError("cannot create output directory '" + config.out_dir.string() + "'");

    RunReport report;
    switch (config.mode) {
        case RunMode::steady: run_steady(config, report); break;
        case RunMode::spectrum: run_spectrum(config, report); break;
        case RunMode::neutral: run_neutral(config, report); break;
        case RunMode::critical: run_critical(config, report); break;
        case RunMode::sweep: run_sweep(config, report); break;
    }
    return report;
}

int run(RunMode mode, const std::filesystem::path& config_path,
        const std::vector<Override>& overrides, const std::optional<std::filesystem::path>& out_dir,
        std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    try {
        RunConfig cfg = load_config(config_path, overrides, mode);
        if (out_dir) cfg.out_dir = *out_dir;
        const RunReport report = execute(cfg);
        for (const std::string& w : report.warnings) err << "biostab: warning: " << w << '\n';
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, wall, std::chars_format::fixed, 2);
        out << report.summary << " wall=" << std::string(buf, res.ptr) << "s\n";
        return report.exit_code;
    } catch (const ConfigError& e) {
        err << "biostab: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "biostab: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConvergenceError& e) {
        err << "biostab: convergence failure: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const NumericError& e) {
        err << "biostab: numerical failure: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "biostab: I/O error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace biostab
