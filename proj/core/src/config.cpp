#include "biostab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <system_error>
#include <type_traits>

#include "biostab/errors.hpp"
#include "biostab/neutral.hpp"

namespace biostab {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* expected) {
    throw ConfigError(key + ": expected " + expected + ", got '" + std::string(value) + "'");
}

double to_double(const std::string& key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        bad_value(key, v, "a finite number");
    return out;
}

std::size_t to_size(const std::string& key, std::string_view v) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
        bad_value(key, v, "a non-negative integer");
    return out;
}

bool to_bool(const std::string& key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, v, "true or false");
}

std::vector<double> to_list(const std::string& key, std::string_view v) {
    std::vector<double> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        out.push_back(to_double(key, trim(v.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
        if (trim(v).empty()) bad_value(key, v, "a value after ','");
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view)>;

struct KeySpec {
    std::string_view section;
    std::string_view name;
    Setter set;
};

template <typename T>
Setter number(T RunConfig::*field) {
    return [field](RunConfig& c, const std::string& key, std::string_view v) {
        if constexpr (std::is_same_v<T, double>)
            c.*field = to_double(key, v);
        else
            c.*field = static_cast<T>(to_size(key, v));
    };
}

Setter param(double SuspensionParams::*field) {
    return [field](RunConfig& c, const std::string& key, std::string_view v) {
        c.params.*field = to_double(key, v);
    };
}

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table{
        {"suspension", "V_c", param(&SuspensionParams::swimming_speed)},
        {"suspension", "tau_H", param(&SuspensionParams::extinction)},
        {"suspension", "I_t", param(&SuspensionParams::top_intensity)},
        {"suspension", "G_c", param(&SuspensionParams::critical_intensity)},
        {"medium", "phi", param(&SuspensionParams::porosity)},
        {"medium", "Da", param(&SuspensionParams::darcy)},
        {"medium", "Pr", param(&SuspensionParams::prandtl)},
        {"thermal", "R_T", param(&SuspensionParams::thermal_rayleigh)},
        {"thermal", "Le", param(&SuspensionParams::lewis)},
        {"geometry", "top_boundary",
         [](RunConfig& c, const std::string& key, std::string_view v) {
             if (v == "free")
                 c.params.top = TopBoundary::free;
             else if (v == "rigid")
                 c.params.top = TopBoundary::rigid;
             else
                 bad_value(key, v, "free or rigid");
         }},
        {"numerics", "n_grid", number(&RunConfig::n_grid)},
        {"numerics", "k_min", number(&RunConfig::k_min)},
        {"numerics", "k_max", number(&RunConfig::k_max)},
        {"numerics", "n_k", number(&RunConfig::n_k)},
        {"numerics", "R_lo", number(&RunConfig::R_lo)},
        {"numerics", "R_hi", number(&RunConfig::R_hi)},
        {"numerics", "rel_tolerance", number(&RunConfig::rel_tolerance)},
        {"numerics", "k_tolerance", number(&RunConfig::k_tolerance)},
        {"numerics", "threads", number(&RunConfig::threads)},
        {"numerics", "nrk",
         [](RunConfig& c, const std::string& key, std::string_view v) { c.nrk = to_bool(key, v); }},
        {"mode", "eigen_parameter",
         [](RunConfig& c, const std::string& key, std::string_view v) {
             if (v == "RB" || v == "R_B")
                 c.eigen_param = EigenParameter::RB;
             else if (v == "RT" || v == "R_T")
                 c.eigen_param = EigenParameter::RT;
             else
                 bad_value(key, v, "RB or RT");
         }},
        {"mode", "R_B", number(&RunConfig::bio_rayleigh)},
        {"mode", "k", number(&RunConfig::k)},
        {"mode", "vary",
         [](RunConfig& c, const std::string&, std::string_view v) { c.vary = std::string(v); }},
        {"mode", "values",
         [](RunConfig& c, const std::string& key, std::string_view v) {
             c.values = to_list(key, v);
         }},
    };
    return table;
}

const KeySpec* find_key(std::string_view section, std::string_view name) {
    for (const KeySpec& k : key_table())
        if (k.name == name && (section.empty() || k.section == section)) return &k;
    return nullptr;
}

bool known_section(std::string_view s) {
    return std::any_of(key_table().begin(), key_table().end(),
                       [&](const KeySpec& k) { return k.section == s; });
}

std::string qualified(const KeySpec& k) {
    return std::string(k.section) + "." + std::string(k.name);
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void validate_config(const RunConfig& c) {
    validate(c.params);
    check(c.n_grid >= kMinGridIntervals,
          "numerics.n_grid: must be >= " + std::to_string(kMinGridIntervals));
    check(!c.nrk || c.n_grid % 2 == 0, "numerics.n_grid: must be even when nrk = true");
    check(c.k_min > 0.0, "numerics.k_min: must be > 0");
    check(c.k_max > c.k_min, "numerics.k_max: must be > k_min");
    check(c.n_k >= 5, "numerics.n_k: must be >= 5");
    check(c.R_hi > c.R_lo, "numerics.R_hi: must be > R_lo");
    check(c.rel_tolerance > 0.0 && c.rel_tolerance < 0.1,
          "numerics.rel_tolerance: must lie in (0, 0.1)");
    check(c.k_tolerance > 0.0 && c.k_tolerance <= 1e-3,
          "numerics.k_tolerance: must lie in (0, 1e-3]");
    check(c.bio_rayleigh >= 0.0, "mode.R_B: must be >= 0");
    if (c.mode == RunMode::spectrum) check(c.k > 0.0, "mode.k: must be > 0");
    if (c.mode == RunMode::sweep) {
        const auto names = sweep_parameters();
        check(std::find(names.begin(), names.end(), c.vary) != names.end(),
              "mode.vary: must name one of R_T, Le, Da, tau_H, G_c, V_c, top_boundary (got '" +
                  c.vary + "')");
        check(!c.values.empty(), "mode.values: sweep needs at least one value");
        check(!(c.vary == "R_T" && c.eigen_param == EigenParameter::RT),
              "mode.vary: R_T cannot be swept while it is the eigen-parameter");
        for (double v : c.values) with_parameter(c.params, c.vary, v);
    }
}

}  // namespace

std::string_view to_string(RunMode mode) {
    switch (mode) {
        case RunMode::steady: return "steady";
        case RunMode::spectrum: return "spectrum";
        case RunMode::neutral: return "neutral";
        case RunMode::critical: return "critical";
        case RunMode::sweep: return "sweep";
    }
    return "unknown";
}

RunMode parse_run_mode(std::string_view name) {
    for (RunMode m : {RunMode::steady, RunMode::spectrum, RunMode::neutral, RunMode::critical,
                      RunMode::sweep})
        if (to_string(m) == name) return m;
    throw ConfigError("mode: unknown mode '" + std::string(name) +
                      "' (steady, spectrum, neutral, critical, sweep)");
}

Override parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || trim(text.substr(0, eq)).empty())
        throw ConfigError("--set: expected key=value, got '" + std::string(text) + "'");
    return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides,
                       RunMode mode) {
    RunConfig cfg;
    cfg.mode = mode;

    std::map<std::string, int> seen;
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_section(section))
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
        if (section.empty()) throw ConfigError(where + ": key outside of a [section]");
        const std::string_view name = trim(line.substr(0, eq));
        const KeySpec* spec = find_key(section, name);
        if (!spec)
            throw ConfigError(section + "." + std::string(name) + ": unknown key (" + where + ")");
        const std::string key = qualified(*spec);
        if (auto [it, inserted] = seen.emplace(key, line_no); !inserted)
            throw ConfigError(key + ": duplicate key (lines " + std::to_string(it->second) +
                              " and " + std::to_string(line_no) + ")");
        spec->set(cfg, key, trim(line.substr(eq + 1)));
    }

    for (const Override& o : overrides) {
        std::string_view sec, name = o.key;
        if (const auto dot = name.find('.'); dot != std::string_view::npos) {
            sec = name.substr(0, dot);
            name = name.substr(dot + 1);
        }
        const KeySpec* spec = find_key(sec, name);
        if (!spec) throw ConfigError(o.key + ": unknown key (--set)");
        spec->set(cfg, qualified(*spec), o.value);
    }

    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides,
                      RunMode mode) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides, mode);
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const KeySpec& k : key_table()) out.push_back(qualified(k));
    return out;
}

}  // namespace biostab
