#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace fbmcli {

using json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

/// Process exit codes; stable across releases.
enum ExitCode : int {
    kExitOk = 0,
    kExitUnexpected = 1,
    kExitValidation = 2,
    kExitParse = 3,
    kExitNumeric = 4,
    kExitIo = 5,
    kExitReplayMismatch = 6,
};

int exit_code_for(const std::exception& e);

/// $FBM_OUTPUT_DIR, or the working directory when unset.
std::filesystem::path default_output_dir();

struct Outcome {
    json results = json::object();
    json seeds = json::array();
    std::vector<std::string> warnings;
};

/// Runs one command from its full config (the same object echoed in the
/// report). Output files are written only when write_outputs is set, so a
/// replay can recompute without touching them.
Outcome execute(const std::string& command, const json& config, bool write_outputs = true);

/// Fills defaults and resolves output paths; the result is what the report
/// echoes and what replay feeds back to execute().
json normalize_config(const std::string& command, json config);

json make_report(const std::string& command, const json& config, const Outcome& outcome,
                 double duration_seconds);

struct RunResult {
    json report;
    int exit_code = kExitOk;
    std::string error;
};

/// normalize + execute + report, with errors mapped to exit codes. The
/// report is written to config["report"] when that is a non-empty string.
RunResult run(const std::string& command, json config);

struct ReplayResult {
    bool identical = false;
    std::vector<std::string> mismatches;
    json recomputed;
};

/// Re-executes a saved report and compares results bit for bit.
ReplayResult replay(const json& report);

}  // namespace fbmcli
