#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snse/error_metrics.hpp"
#include "snse/layer_methods.hpp"
#include "snse/model_problems.hpp"

namespace snse {

// Exit codes shared by the command implementations and the CLI.
enum ExitCode { kOk = 0, kConfigError = 2, kBlowUp = 3, kIoError = 4 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key = value text with optional [sections] and # comments.  Duplicate
// keys are preserved in order (used by the mode lists of problem files).
struct KeyValueFile {
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> get(const std::string& key) const;
    std::vector<std::string> get_all(const std::string& key) const;
};

KeyValueFile parse_key_values(std::istream& in);

struct ExperimentConfig {
    std::string model = "1";  // "1", "2", or a path to a problem file
    Method method = Method::B;
    double sigma = 0.1;
    double A = 1.0;
    int kappa = 1;
    double L = 1.0;
    double T = 3.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    int M = 2;
    std::vector<double> h_list;
    int K = 2;
    uint64_t seed = 1;
    std::string out_path;
    int master_refine = 10;   // master path step = min(h)/master_refine
    double blowup_bound = 1e6;
};

ExperimentConfig parse_config(std::istream& in);
void emit_config(const ExperimentConfig& config, std::ostream& out);

// Validates step sizes (each h must divide T; for sweeps each h must be an
// integer multiple of the finest) and instantiates the problem; throws
// ConfigError naming the offending field.
void validate_config(const ExperimentConfig& config, bool fixed_trajectory);
ProblemSpec build_problem(const ExperimentConfig& config);

// Generic problem files: sigma/L/T/M/q scalars plus repeated mode rows
// `phi|f|gamma<r> = n1 n2 re1 im1 re2 im2` with constant-in-time coefficients.
ProblemSpec load_problem_file(const std::string& path);

// Single trajectory: per-layer rows with the nonzero coefficients, the
// divergence residual, and the pointwise max.  Returns an ExitCode.
int cmd_run(const ExperimentConfig& config, std::ostream& diagnostics);

// Fixed-trajectory sweep on one coarsened master path; appends an order row.
int cmd_converge(const ExperimentConfig& config, std::ostream& diagnostics);

// Monte Carlo sweep (mean-square errors with half-widths).
int cmd_mc(const ExperimentConfig& config, std::ostream& diagnostics);

// Shared by cmd_converge/cmd_mc and the tests: the reports behind the CSVs.
std::vector<ErrorReport> converge_reports(const ExperimentConfig& config);
std::vector<ErrorReport> mc_reports(const ExperimentConfig& config);

void write_report_csv(const ExperimentConfig& config, const std::vector<ErrorReport>& reports,
                      std::ostream& out, const std::optional<OrderFit>& fit_v,
                      const std::optional<OrderFit>& fit_p);

}  // namespace snse
