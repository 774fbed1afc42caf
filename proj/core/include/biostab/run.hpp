#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "biostab/config.hpp"

namespace biostab {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitConvergence = 3,
    kExitIo = 4,
};

struct RunReport {
    std::string summary;   ///< one line, without wall time
    int exit_code = kExitOk;
    std::vector<std::string> warnings;
    std::vector<std::filesystem::path> files;
};

/// Runs the mode in `config` and writes its files into config.out_dir.
/// Solver and I/O failures propagate as exceptions; partial failures (failed
/// sweep rows, rejected NRK refinement) become warnings.
RunReport execute(const RunConfig& config);

/// Loads the config, runs it and prints the summary line (with wall time) to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run(RunMode mode, const std::filesystem::path& config_path,
        const std::vector<Override>& overrides, const std::optional<std::filesystem::path>& out_dir,
        std::ostream& out, std::ostream& err);

}  // namespace biostab
