#include <mmq/simulate.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace mmq {

void SimulationConfig::check() const
{
    if (runs < 1) throw Error(ErrorCode::invalid_argument, "runs must be >= 1");
    if (iterations <= burn_in) throw Error(ErrorCode::invalid_argument, "iterations must exceed burn_in");
}

double RunTally::mean_queue() const
{
    return steps == 0 ? 0.0 : static_cast<double>(queue_sum) / static_cast<double>(steps);
}

double RunTally::fraction(std::size_t k) const
{
    return steps == 0 ? 0.0 : static_cast<double>(counts[k]) / static_cast<double>(steps);
}

double RunTally::lumped_fraction() const
{
    return steps == 0 ? 0.0 : static_cast<double>(lumped) / static_cast<double>(steps);
}

namespace {

class CategoricalSampler {
public:
    /// weights[i] is the probability of outcome first + i.
    CategoricalSampler(const std::vector<double>& weights, std::size_t first) : first_(first)
    {
        double acc = 0.0;
        for (double w : weights) {
            acc += w;
            cumulative_.push_back(acc);
        }
        // Rounding must not leave a gap below 1.
        for (std::size_t i = cumulative_.size(); i-- > 0;) {
            if (weights[i] > 0.0) {
                for (std::size_t j = i; j < cumulative_.size(); ++j) cumulative_[j] = 1.0;
                break;
            }
        }
    }

    std::size_t operator()(double u) const
    {
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return first_ + static_cast<std::size_t>(it - cumulative_.begin());
    }

private:
    std::vector<double> cumulative_;
    std::size_t first_;
};

/// Uniform on [0, 1) from the top 53 bits.
inline double uniform(std::mt19937_64& engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::mt19937_64 engine_for(std::uint64_t seed, unsigned run_index)
{
    std::seed_seq sequence{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(run_index)};
    return std::mt19937_64(sequence);
}

} // namespace

RunTally simulate_run(const ModelSpec& spec, const SimulationConfig& config, unsigned run_index)
{
    config.check();
    const CategoricalSampler next_state(spec.f, 0);
    const CategoricalSampler batch_size(spec.g, 1);
    std::mt19937_64 engine = engine_for(config.seed, run_index);

    RunTally tally;
    tally.run_index = run_index;
    tally.counts.assign(config.k_max + 1, 0);

    std::size_t x = 0;
    std::uint64_t q = 0;
    for (std::uint64_t t = 0; t < config.iterations; ++t) {
        if (t >= config.burn_in) {
            ++tally.steps;
            tally.queue_sum += q;
            if (q <= config.k_max) {
                ++tally.counts[q];
            } else {
                ++tally.lumped;
            }
        }
        std::uint64_t arrivals = 0;
        std::size_t next_x = 0;
        if (x == 0) {
            next_x = next_state(uniform(engine));
        } else {
            arrivals = batch_size(uniform(engine));
            next_x = x - 1;
        }
        q = q + arrivals > 0 ? q + arrivals - 1 : 0;
        x = next_x;
    }
    return tally;
}

double student_t_975(unsigned degrees_of_freedom)
{
    const boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
    return boost::math::quantile(dist, 0.975);
}

Estimate summarize(std::vector<double> per_run)
{
    Estimate e;
    e.per_run = std::move(per_run);
    const std::size_t r = e.per_run.size();
    if (r == 0) return e;
    double total = 0.0;
    for (double v : e.per_run) total += v;
    e.mean = total / static_cast<double>(r);
    if (r < 2) return e;

    double squares = 0.0;
    for (double v : e.per_run) squares += (v - e.mean) * (v - e.mean);
    const double sd = std::sqrt(squares / static_cast<double>(r - 1));
    const double half = student_t_975(static_cast<unsigned>(r - 1)) * sd / std::sqrt(static_cast<double>(r));
    e.ci_low = e.mean - half;
    e.ci_high = e.mean + half;
    return e;
}

SimulationReport aggregate(std::span<const RunTally> runs)
{
    SimulationReport report;
    report.runs = static_cast<unsigned>(runs.size());
    if (runs.empty()) return report;

    const std::size_t bins = runs.front().counts.size();
    report.steps_per_run = runs.front().steps;
    for (const auto& run : runs) {
        if (run.counts.size() != bins || run.steps != report.steps_per_run)
            throw Error(ErrorCode::invalid_argument, "runs disagree on k_max or tallied steps");
    }
    report.min_resolvable = report.steps_per_run == 0 ? 0.0 : 1.0 / static_cast<double>(report.steps_per_run);

    // Every run tallies the same number of slots, so the tally-weighted pooled
    // mean is the plain mean of the per-run estimates.
    std::vector<double> values(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) values[r] = runs[r].mean_queue();
    report.mean_queue = summarize(values);

    report.p_hat.reserve(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        for (std::size_t r = 0; r < runs.size(); ++r) values[r] = runs[r].fraction(k);
        report.p_hat.push_back(summarize(values));
    }
    for (std::size_t r = 0; r < runs.size(); ++r) values[r] = runs[r].lumped_fraction();
    report.lumped = summarize(values);
    return report;
}

SimulationReport simulate(const ModelSpec& spec, const SimulationConfig& config)
{
    config.check();
    std::vector<RunTally> tallies(config.runs);

    unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, config.runs);
    if (workers <= 1) {
        for (unsigned r = 0; r < config.runs; ++r) tallies[r] = simulate_run(spec, config, r);
    } else {
        std::atomic<unsigned> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (unsigned r = next++; r < config.runs; r = next++) tallies[r] = simulate_run(spec, config, r);
            });
        }
    }
    return aggregate(tallies);
}

} // namespace mmq
