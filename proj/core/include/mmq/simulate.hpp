#ifndef MMQ_SIMULATE_HPP
#define MMQ_SIMULATE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <mmq/model.hpp>

namespace mmq {

struct SimulationConfig {
    std::uint64_t iterations = 1'000'000; // slots per run, burn-in included
    unsigned runs = 10;
    std::uint64_t burn_in = 10'000;
    std::uint64_t seed = 1;
    std::size_t k_max = 100; // queue lengths above k_max are lumped
    unsigned threads = 0;    // 0 = hardware concurrency

    void check() const;
};

/// Generator used for every run; recorded in reports.
inline constexpr const char* kGeneratorName = "std::mt19937_64/seed_seq{seed_lo,seed_hi,run}";

/// Per-run occupancy counts of the sampled queue lengths.
struct RunTally {
    unsigned run_index = 0;
    std::uint64_t steps = 0;           // tallied slots = iterations - burn_in
    std::uint64_t queue_sum = 0;       // sum of the sampled queue lengths
    std::vector<std::uint64_t> counts; // counts[k] for k = 0..k_max
    std::uint64_t lumped = 0;          // samples with Q > k_max

    double mean_queue() const;
    double fraction(std::size_t k) const;
    double lumped_fraction() const;
};

/// One independent replication of the slotted system, starting empty and off.
/// Deterministic in (spec, config.seed, run_index).
RunTally simulate_run(const ModelSpec& spec, const SimulationConfig& config, unsigned run_index);

/// Pooled statistic with its per-run values and a 95% t-interval across runs.
struct Estimate {
    double mean = 0.0;
    std::vector<double> per_run;
    std::optional<double> ci_low;
    std::optional<double> ci_high;

    bool contains(double value) const { return ci_low && ci_high && *ci_low <= value && value <= *ci_high; }
};

struct SimulationReport {
    Estimate mean_queue;
    std::vector<Estimate> p_hat; // k = 0..k_max
    Estimate lumped;             // P(Q > k_max)
    double min_resolvable = 0.0; // 1 / tallied steps per run
    std::uint64_t steps_per_run = 0;
    unsigned runs = 0;
    std::string generator = kGeneratorName;
};

/// t_{0.975, dof}.
double student_t_975(unsigned degrees_of_freedom);

/// Estimate from per-run values; the interval is omitted for fewer than 2 runs.
Estimate summarize(std::vector<double> per_run);

SimulationReport aggregate(std::span<const RunTally> runs);

/// Runs config.runs replications (in parallel when threads allow) and aggregates them.
SimulationReport simulate(const ModelSpec& spec, const SimulationConfig& config);

} // namespace mmq

#endif // MMQ_SIMULATE_HPP
