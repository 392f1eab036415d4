#pragma once

#include <map>
#include <string>
#include <vector>

#include "bbfs/config.hpp"
#include "bbfs/harness.hpp"
#include "bbfs/report.hpp"

namespace bbfs {

/// Validated experiment: grid, named weights / spaces / batteries, wavelet
/// system, harness options and the ordered check list.
struct Experiment {
    ConfigNode effective;  // defaults filled in; reruns byte-identically
    Grid grid;
    std::map<std::string, WeightSpec> weights;
    std::map<std::string, SpaceSpec> spaces;
    std::map<std::string, std::vector<ProbeDesc>> batteries;
    WaveletSystem system;
    HarnessOptions harness;
    int workers = 1;
    std::string suite_name;

    struct CheckRequest {
        std::string id;
        std::string kind;
        ConfigNode params;
    };
    std::vector<CheckRequest> checks;

    Experiment() : grid(Grid::make(1, Box::interval(0, 1), 0)),
                   system(WaveletSystem::build(WaveletFamily::haar, 1, 0, 4)) {}
};

/// Parses and validates; throws ConfigParseError / ConfigValidationError.
Experiment build_experiment(const ConfigNode& cfg);

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 check failure (2/3 reserved for config errors)
    bool pass = true;
    std::vector<VerificationReport> reports;
    std::string json_text;
    std::string table_text;
    std::string csv_text;
    std::string effective_config;
};

/// Executes every requested check; reports are produced regardless of
/// failures. Deterministic for a fixed config and seed.
RunResult run_experiment(const Experiment& exp);

/// Output paths from the config `output` block (empty dir = current).
struct OutputPaths {
    std::string dir;
    std::string json_file = "report.json";
    std::string text_file = "report.txt";
    std::string csv_file = "plot.csv";
    std::string effective_file;  // empty = skip
};

OutputPaths output_paths(const ConfigNode& cfg, const std::string& env_default_dir);
void write_outputs(const RunResult& result, const OutputPaths& paths);

std::string list_spaces_text();
std::string list_checks_text();

}  // namespace bbfs
