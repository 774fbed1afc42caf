#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "biostab/model.hpp"
#include "biostab/stability.hpp"

namespace biostab {

enum class RunMode { steady, spectrum, neutral, critical, sweep };

std::string_view to_string(RunMode mode);
/// Throws ConfigError for an unknown name.
RunMode parse_run_mode(std::string_view name);

struct RunConfig {
    RunMode mode = RunMode::critical;
    SuspensionParams params;

    // [numerics]
    std::size_t n_grid = 200;
    double k_min = 0.5;
    double k_max = 10.0;
    std::size_t n_k = 40;
    double R_lo = 0.0;
    double R_hi = 10000.0;
    double rel_tolerance = 1e-6;
    double k_tolerance = 1e-4;
    unsigned threads = 1;
    bool nrk = false;

    // [mode]
    EigenParameter eigen_param = EigenParameter::RB;
    double bio_rayleigh = 0.0;  ///< R_B; fixed value unless it is the eigen-parameter
    double k = 3.0;             ///< wavenumber of the spectrum mode
    std::string vary;
    std::vector<double> values;

    std::filesystem::path out_dir = ".";
};

/// One `key=value` assignment from the command line. The key is either bare
/// (`R_T`) or section-qualified (`thermal.R_T`).
struct Override {
    std::string key;
    std::string value;
};

/// Splits `key=value`; throws ConfigError when '=' is missing.
Override parse_override(std::string_view text);

/// Parses the sectioned key/value format:
///
///     # comment
///     [thermal]
///     R_T = 50
///
/// then applies `overrides` on top. Unknown sections or keys, duplicates and
/// malformed values raise ConfigError naming the key. The mode must be set by
/// the caller beforehand since it is not part of the file.
RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {},
                       RunMode mode = RunMode::critical);

/// Reads `path` and calls parse_config(). Throws IoError if it cannot be read.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<Override>& overrides = {},
                      RunMode mode = RunMode::critical);

/// Every accepted key as `section.key`.
std::vector<std::string> config_keys();

}  // namespace biostab
