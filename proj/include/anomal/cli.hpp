#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace anomal {

enum class OutputFormat { csv, json };

/// Parsed command line of the `anomal` tool. All computations are
/// deterministic: identical flags produce byte-identical output.
struct RunConfig {
    std::string command;           // profile | exponents | classify | validate | sweep
    double gamma = 0.0;
    int dim = 1;
    std::optional<double> alpha;
    std::optional<int> k_max;
    double eta_max = 0.0;          // 0 -> per-problem default
    int samples = 201;
    double tol = 1e-10;
    OutputFormat output_format = OutputFormat::csv;
    std::optional<std::string> output_path;
    std::vector<std::string> suites;          // validate filter
    std::vector<double> sweep_gammas{0.0};
    std::vector<int> sweep_dims{1};
    std::vector<double> sweep_alphas;         // empty -> exponent sweep
};

/// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_profile(const RunConfig& config, std::ostream& out);
int cmd_exponents(const RunConfig& config, std::ostream& out);
int cmd_classify(const RunConfig& config, std::ostream& out);
int cmd_validate(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);

/// Worker-count cap from ANOMAL_THREADS (0 or unset = hardware concurrency).
int worker_count();

} // namespace anomal
