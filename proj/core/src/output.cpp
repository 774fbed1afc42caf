#include "biostab/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

#include "biostab/errors.hpp"

namespace biostab {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::string fixed2(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

struct Axis {
    double lo, hi;
    double step;

    Axis(double min, double max) {
        if (max <= min) {
            const double pad = std::max(1.0, std::abs(min)) * 0.05;
            min -= pad;
            max += pad;
        }
        step = nice_step(max - min, 6);
        lo = std::floor(min / step) * step;
        hi = std::ceil(max / step) * step;
    }

    [[nodiscard]] std::vector<double> ticks() const {
        std::vector<double> t;
        const int n = static_cast<int>(std::lround((hi - lo) / step));
        for (int i = 0; i <= n; ++i) {
            const double v = lo + i * step;
            t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
        }
        return t;
    }
};

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

void write_steady_csv(const BasicState& s, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << "z,psi,n_p,G_p,M_p\n";
    for (std::size_t i = 0; i < s.z.size(); ++i)
        out << format_number(s.z[i]) << ',' << format_number(s.psi[i]) << ','
            << format_number(s.n_p[i]) << ',' << format_number(s.G_p[i]) << ','
            << format_number(s.M_p[i]) << '\n';
    finish(out, path);
}

void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << "index,re_gamma,im_gamma\n";
    for (std::size_t i = 0; i < spectrum.gammas.size(); ++i)
        out << i << ',' << format_number(spectrum.gammas[i].real()) << ','
            << format_number(spectrum.gammas[i].imag()) << '\n';
    finish(out, path);
}

void write_neutral_csv(const NeutralCurve& curve, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << "k,R,sigma,branch\n";
    for (const NeutralPoint& p : curve.points)
        out << format_number(p.k) << ',' << format_number(p.R) << ',' << format_number(p.sigma)
            << ',' << p.branch << '\n';
    finish(out, path);
}

void write_critical_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::ofstream out = open_for_write(path);
    out << "param_value,k_c,R_c,sigma_c\n";
    for (const SweepRow& r : rows) {
        const CriticalPoint c = r.critical.value_or(CriticalPoint{nan, nan, nan, false});
        out << format_number(r.param_value) << ',' << format_number(c.k_c) << ','
            << format_number(c.R_c) << ',' << format_number(c.sigma_c) << '\n';
    }
    finish(out, path);
}

PlotCurve plot_curve(std::string label, const NeutralCurve& curve,
                     std::optional<CriticalPoint> critical) {
    return {std::move(label), curve.points, curve.gaps, critical};
}

std::string render_neutral_svg(std::span<const PlotCurve> curves, const PlotLabels& labels) {
    if (curves.empty()) throw ConfigError("svg: no curves to plot");
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    auto extend = [&](double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (const PlotCurve& c : curves) {
        if (c.points.size() < 2) {
            std::string ks;
            for (double k : c.gaps) ks += (ks.empty() ? "" : ", ") + format_number(k);
            throw ConfigError("svg: curve '" + c.label + "' has fewer than two valid points" +
                              (ks.empty() ? std::string() : " (failed k = " + ks + ")"));
        }
        for (const NeutralPoint& p : c.points) extend(p.k, p.R);
        if (c.critical) extend(c.critical->k_c, c.critical->R_c);
    }

    constexpr double width = 760, height = 480;
    constexpr double left = 90, right = 190, top = 50, bottom = 60;
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    const Axis ax(xmin, xmax), ay(ymin, ymax);
    auto px = [&](double x) { return left + (x - ax.lo) / (ax.hi - ax.lo) * plot_w; };
    auto py = [&](double y) { return top + (ay.hi - y) / (ay.hi - ay.lo) * plot_h; };

    std::ostringstream svg;
    svg.imbue(std::locale::classic());
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    if (!labels.title.empty())
        svg << "<text x=\"" << fixed2(left + plot_w / 2) << "\" y=\"28\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(labels.title)
            << "</text>\n";

    svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\"/>\n";
    for (double t : ax.ticks())
        svg << "<line x1=\"" << fixed2(px(t)) << "\" y1=\"" << top + plot_h << "\" x2=\""
            << fixed2(px(t)) << "\" y2=\"" << top + plot_h + 5 << "\"/>\n";
    for (double t : ay.ticks())
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed2(py(t)) << "\" x2=\"" << left
            << "\" y2=\"" << fixed2(py(t)) << "\"/>\n";
    svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (double t : ax.ticks())
        svg << "<text x=\"" << fixed2(px(t)) << "\" y=\"" << top + plot_h + 20
            << "\" text-anchor=\"middle\">" << format_number(t) << "</text>\n";
    for (double t : ay.ticks())
        svg << "<text x=\"" << left - 8 << "\" y=\"" << fixed2(py(t) + 4)
            << "\" text-anchor=\"end\">" << format_number(t) << "</text>\n";
    svg << "<text x=\"" << fixed2(left + plot_w / 2) << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(labels.x) << "</text>\n"
        << "<text x=\"20\" y=\"" << fixed2(top + plot_h / 2)
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
        << fixed2(top + plot_h / 2) << ")\">" << escape_xml(labels.y) << "</text>\n</g>\n";

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const PlotCurve& c = curves[i];
        const char* color = kPalette[i % kPalette.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t j = 0; j < c.points.size(); ++j)
            svg << (j ? " " : "") << fixed2(px(c.points[j].k)) << ',' << fixed2(py(c.points[j].R));
        svg << "\"/>\n";
        if (c.critical)
            svg << "<circle cx=\"" << fixed2(px(c.critical->k_c)) << "\" cy=\""
                << fixed2(py(c.critical->R_c)) << "\" r=\"4\" fill=\"" << color
                << "\" stroke=\"black\"/>\n";
    }

    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    const double lx = left + plot_w + 20;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const double ly = top + 10 + 20.0 * static_cast<double>(i);
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\""
            << ly << "\" stroke=\"" << kPalette[i % kPalette.size()]
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">"
            << escape_xml(curves[i].label) << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

void write_neutral_svg(std::span<const PlotCurve> curves, const PlotLabels& labels,
                       const std::filesystem::path& path) {
    const std::string text = render_neutral_svg(curves, labels);
    std::ofstream out = open_for_write(path);
    out << text;
    finish(out, path);
}

}  // namespace biostab
