#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pipedrive/model.hpp"

namespace pipedrive {

enum class SweepMetric { FinalSlip, Displacement };
enum class SweepAbscissa { Value, FrictionForce };

struct SweepSpec {
    std::string param; // one of R h L L1 E rho tau0 P0 t0 omega
    std::vector<double> values;
    SweepMetric metric = SweepMetric::FinalSlip;
    double probe_z = 0.0;
    SweepAbscissa abscissa = SweepAbscissa::Value;
    bool fit = true;
    // When set, every member gets L = L1 + exposed.
    std::optional<double> exposed;

    bool operator==(const SweepSpec&) const = default;
};

struct OutputSpec {
    std::vector<double> snapshots; // s
    std::vector<double> probes;    // m

    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
    Problem problem;
    GridSpec grid;
    OutputSpec output;
    std::optional<SweepSpec> sweep;

    bool operator==(const RunConfig&) const = default;
};

// Sectioned key = value text; values carry optional unit suffixes
// (m, mm, Pa, kPa, MPa, GPa, N, kN, MN, s, ms, us, kg/m3, rad/s, 1/ms ...).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

std::vector<Diagnostic> validate_run_config(const RunConfig& config);

// Applies one sweep value to a copy of the configuration.
RunConfig apply_sweep_value(const RunConfig& config, double value);
std::vector<RunConfig> expand_sweep(const RunConfig& config);

struct ResultTable {
    std::string name; // file stem
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
};

// Two header lines (names, units), then rows with 12 significant digits.
std::string to_csv(const ResultTable& table);

enum class Command { Simulate, Analytic, Compare, Sweep };

std::optional<Command> parse_command(std::string_view name);

struct CommandOptions {
    std::string variant = "auto";
    bool front_exclusion = true;
};

struct CommandOutput {
    std::vector<ResultTable> tables;
    nlohmann::json manifest;
    std::vector<std::string> warnings;
};

CommandOutput execute(Command command, const RunConfig& config, const CommandOptions& options);

// Writes every table plus manifest.json; removes what it wrote if any write fails.
void write_outputs(const CommandOutput& output, const std::filesystem::path& dir);

// Full command: load, execute, write. Returns the process exit status
// (0 success, 1 invalid input, 2 numerical failure).
int run_command(Command command, const std::filesystem::path& config_path,
                const std::filesystem::path& out_dir, const CommandOptions& options,
                std::ostream& log);

} // namespace pipedrive
