#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biostab/neutral.hpp"
#include "biostab/stability.hpp"
#include "biostab/steady.hpp"

namespace biostab {

/// 12 significant digits, independent of the global locale.
std::string format_number(double value);

// All writers throw IoError when the file cannot be written.

/// Header `z,psi,n_p,G_p,M_p`, one row per grid node.
void write_steady_csv(const BasicState& state, const std::filesystem::path& path);
/// Header `index,re_gamma,im_gamma`.
void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);
/// Header `k,R,sigma,branch`, valid points only.
void write_neutral_csv(const NeutralCurve& curve, const std::filesystem::path& path);
/// Header `param_value,k_c,R_c,sigma_c`; failed rows carry nan.
void write_critical_csv(std::span<const SweepRow> rows, const std::filesystem::path& path);

struct PlotCurve {
    std::string label;
    std::vector<NeutralPoint> points;
    std::vector<double> gaps;
    std::optional<CriticalPoint> critical;
};

PlotCurve plot_curve(std::string label, const NeutralCurve& curve,
                     std::optional<CriticalPoint> critical = std::nullopt);

struct PlotLabels {
    std::string title;
    std::string x = "k";
    std::string y = "R";
};

/// Self-contained SVG: one polyline per curve, axis ticks, a legend entry per
/// curve and a circle at each critical point. Throws ConfigError when a curve
/// has fewer than two valid points, listing its failed k values.
std::string render_neutral_svg(std::span<const PlotCurve> curves, const PlotLabels& labels);
void write_neutral_svg(std::span<const PlotCurve> curves, const PlotLabels& labels,
                       const std::filesystem::path& path);

}  // namespace biostab
