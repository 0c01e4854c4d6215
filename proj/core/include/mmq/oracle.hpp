#ifndef MMQ_ORACLE_HPP
#define MMQ_ORACLE_HPP

#include <cstddef>
#include <vector>

#include <mmq/model.hpp>

// Brute-force check of the generating-function results: the product chain on
// (modulating state, queue length) is built directly from the slot dynamics
// Q' = max(Q + Y - 1, 0) and solved numerically. Nothing here uses the
// analytic or series modules.

namespace mmq::oracle {

/// Compressed sparse rows of a row-stochastic kernel.
struct SparseKernel {
    std::vector<std::size_t> row_start; // size states + 1
    std::vector<std::size_t> column;
    std::vector<double> probability;

    std::size_t states() const { return row_start.empty() ? 0 : row_start.size() - 1; }
    double row_sum(std::size_t row) const;
};

/// Product chain truncated at q_cap; queue lengths that would exceed the cap
/// are lumped into q_cap.
struct JointChain {
    std::size_t n = 0;     // modulating states are 0..n
    std::size_t q_cap = 0; // queue lengths are 0..q_cap
    SparseKernel kernel;

    std::size_t states() const { return (n + 1) * (q_cap + 1); }
    std::size_t index(std::size_t x, std::size_t q) const { return q * (n + 1) + x; }
    std::size_t state_of_x(std::size_t index) const { return index % (n + 1); }
    std::size_t queue_of(std::size_t index) const { return index / (n + 1); }
};

inline constexpr std::size_t kDefaultQueueCap = 500;

/// Throws CapTooSmall when q_cap < m.
JointChain build_joint_chain(const ModelSpec& spec, std::size_t q_cap = kDefaultQueueCap);

struct SolveOptions {
    double residual_tolerance = 1e-13;
    std::size_t max_iterations = 1'000'000;
};

struct StationarySolution {
    std::vector<double> probability; // indexed like JointChain::index
    double residual = 0.0;           // max_j |(pi K)_j - pi_j|
    std::size_t refinement_steps = 0;
};

/// Stationary vector of the kernel. A sparse LU solve is followed by power steps
/// until the residual reaches the tolerance; throws NoConvergence (with the
/// residual in the message) if the iteration budget runs out first.
StationarySolution joint_stationary(const JointChain& chain, const SolveOptions& options = {});

/// P(Q = q), q = 0..q_cap.
std::vector<double> queue_marginal(const JointChain& chain, const StationarySolution& solution);

/// P(X = x), x = 0..n.
std::vector<double> state_marginal(const JointChain& chain, const StationarySolution& solution);

inline constexpr double kTruncationBiasThreshold = 1e-9;

struct OracleMean {
    double value = 0.0;
    double boundary_mass = 0.0; // P(Q = q_cap), the lumped state
    bool truncation_bias = false;
};

OracleMean oracle_expected_queue(const JointChain& chain, const StationarySolution& solution);

} // namespace mmq::oracle

#endif // MMQ_ORACLE_HPP
