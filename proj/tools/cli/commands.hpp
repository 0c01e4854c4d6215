#ifndef MMQ_TOOLS_COMMANDS_HPP
#define MMQ_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include <mmq/numeric.hpp>
#include <mmq/oracle.hpp>
#include <mmq/simulate.hpp>

namespace mmq::cli {

enum class Format { csv, json };
Format parse_format(const std::string& name);

enum ExitCode : int { ok = 0, invalid_model = 1, usage_error = 2 };

struct CommonOptions {
    std::string model_path;
    Backend backend = Backend::float64;
    Format format = Format::csv;
};

struct DistOptions {
    CommonOptions common;
    std::size_t k_max = 100;
    double negative_tolerance = 0.0;
    bool rounding_floor = true;
};

struct SimulateOptions {
    CommonOptions common;
    SimulationConfig sim{.iterations = 1'000'000, .runs = 10, .burn_in = 10'000, .seed = 1, .k_max = 30, .threads = 0};
};

struct CompareOptions {
    CommonOptions common;
    SimulationConfig sim{.iterations = 1'000'000, .runs = 10, .burn_in = 10'000, .seed = 1, .k_max = 30, .threads = 0};
    bool rounding_floor = true;
};

struct OracleOptions {
    CommonOptions common;
    std::size_t q_cap = oracle::kDefaultQueueCap;
    std::size_t k_max = 100;
};

// Each command writes its report to `out`, diagnostics to `err`, and returns
// the process exit status. Errors are reported, not thrown.
int cmd_validate(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_analyze(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_dist(const DistOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mmq::cli

#endif // MMQ_TOOLS_COMMANDS_HPP
