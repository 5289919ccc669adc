#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "contactdg/diagnostics.hpp"
#include "contactdg/integrators.hpp"
#include "contactdg/models.hpp"

namespace contactdg {

/// Config file problem; the message carries the line number where known.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * Parsed experiment description. Sections: [model] picks and parameterizes a
 * built-in model, [initial] sets the starting state (temperatures accepted
 * for thermal blocks), [run] selects method/step/tolerances, [output] names
 * the artifact prefix. See the bundled configs for the full schema.
 */
struct ExperimentConfig {
    std::string model_name;
    std::map<std::string, double> model_params;
    std::map<std::string, std::vector<double>> initial;

    std::string method = "dg:gonzalez";
    double h = 0.1;
    int n_steps = 100;
    std::string solver = "fixed_point";
    double tol_solve = 1e-12;
    int max_iter = 50;
    double tol_energy = 1e-9;
    double tol_entropy = 1e-12;

    std::string prefix = "run";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Config resolved into runnable pieces.
struct BuiltExperiment {
    ModelSpec model;
    Method method;
    StepperConfig stepper;
    Vec x0;
    std::optional<Vec> herglotz_q1;
    int n_steps = 0;
};

BuiltExperiment build_experiment(const ExperimentConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitStepFailure = 3;
inline constexpr int kExitLawFailure = 4;

/**
 * Runs one experiment and writes <prefix>_trajectory.csv, <prefix>_laws.json
 * and <prefix>_summary.txt under out_dir (created if missing). Returns 0, or
 * 3 on step failure, or 4 when strict and a law audit failed. Throws
 * ConfigError (and std::invalid_argument from model construction) for
 * invalid configs; callers map those to exit code 2.
 */
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, bool strict,
                   std::ostream& log);

/// run_experiment on a config path with all failure modes mapped to exit
/// codes (2 config, 3 step/runtime, 4 strict law audit); never throws.
int run_config_file(const std::string& path, const std::string& out_dir, bool strict,
                    std::ostream& log, std::string& message);

struct BatchItem {
    std::string config_path;
    int exit_code = 0;
    std::string message;
};

/// Runs independent configs (concurrently when OpenMP is available); output
/// prefixes should be distinct or artifacts will overwrite each other.
std::vector<BatchItem> run_batch(const std::vector<std::string>& config_paths,
                                 const std::string& out_dir, bool strict);

struct SelftestOptions {
    std::uint64_t seed = 1;
    /// Fault-injection hook: hands the skew-symmetry suite a corrupted
    /// matrix copy so the checker itself can be exercised.
    bool corrupt_structure_matrix = false;
};

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;  // empty on pass, violated identity otherwise
};

/**
 * Deterministic invariant suite over randomized states and energies:
 * vector-field identities, bracket decomposition and skew-symmetry,
 * projector algebra, discrete-gradient identities, structure-matrix
 * skew-symmetry, and the two-component entropy-increment identity.
 */
std::vector<SuiteResult> run_selftest(const SelftestOptions& opt);

int selftest_exit_code(const std::vector<SuiteResult>& results);

}  // namespace contactdg
