#include <mmq/oracle.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace mmq::oracle {

double SparseKernel::row_sum(std::size_t row) const
{
    double total = 0.0;
    for (std::size_t e = row_start[row]; e < row_start[row + 1]; ++e) total += probability[e];
    return total;
}

JointChain build_joint_chain(const ModelSpec& spec, std::size_t q_cap)
{
    if (q_cap < spec.m()) {
        throw Error(ErrorCode::cap_too_small,
                    "q_cap = " + std::to_string(q_cap) + " is below the largest batch m = " + std::to_string(spec.m()));
    }

    JointChain chain;
    chain.n = spec.n();
    chain.q_cap = q_cap;
    const std::size_t states = chain.states();

    // Successor modulating states and their probabilities.
    std::vector<std::vector<std::pair<std::size_t, double>>> next_x(chain.n + 1);
    for (std::size_t j = 0; j <= chain.n; ++j)
        if (spec.f[j] > 0) next_x[0].emplace_back(j, spec.f[j]);
    for (std::size_t x = 1; x <= chain.n; ++x) next_x[x].emplace_back(x - 1, 1.0);

    // Arrivals per slot: none when off, a batch drawn from g when on.
    std::vector<std::pair<std::size_t, double>> off_arrivals{{0, 1.0}};
    std::vector<std::pair<std::size_t, double>> on_arrivals;
    for (std::size_t y = 1; y <= spec.m(); ++y)
        if (spec.batch(y) > 0) on_arrivals.emplace_back(y, spec.batch(y));

    SparseKernel& kernel = chain.kernel;
    kernel.row_start.assign(states + 1, 0);
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t s = 0; s < states; ++s) {
        const std::size_t x = chain.state_of_x(s);
        const std::size_t q = chain.queue_of(s);
        const auto& arrivals = x == 0 ? off_arrivals : on_arrivals;

        row.clear();
        for (const auto& [y, py] : arrivals) {
            const std::size_t backlog = q + y;
            const std::size_t next_q = std::min(backlog == 0 ? 0 : backlog - 1, q_cap);
            for (const auto& [x2, px] : next_x[x]) row.emplace_back(chain.index(x2, next_q), py * px);
        }
        std::sort(row.begin(), row.end());
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!kernel.column.empty() && kernel.row_start[s] < kernel.column.size() &&
                kernel.column.back() == row[i].first) {
                kernel.probability.back() += row[i].second;
            } else {
                kernel.column.push_back(row[i].first);
                kernel.probability.push_back(row[i].second);
            }
        }
        kernel.row_start[s + 1] = kernel.column.size();
    }
    return chain;
}

namespace {

std::vector<double> apply_kernel(const SparseKernel& kernel, const std::vector<double>& pi)
{
    std::vector<double> next(pi.size(), 0.0);
    for (std::size_t a = 0; a < kernel.states(); ++a) {
        const double mass = pi[a];
        if (mass == 0.0) continue;
        for (std::size_t e = kernel.row_start[a]; e < kernel.row_start[a + 1]; ++e)
            next[kernel.column[e]] += mass * kernel.probability[e];
    }
    return next;
}

double residual_of(const SparseKernel& kernel, const std::vector<double>& pi)
{
    const std::vector<double> next = apply_kernel(kernel, pi);
    double worst = 0.0;
    for (std::size_t j = 0; j < pi.size(); ++j) worst = std::max(worst, std::fabs(next[j] - pi[j]));
    return worst;
}

void normalize(std::vector<double>& pi)
{
    double total = 0.0;
    for (double& v : pi) {
        if (v < 0.0) v = 0.0; // roundoff in states with negligible mass
        total += v;
    }
    for (double& v : pi) v /= total;
}

} // namespace

StationarySolution joint_stationary(const JointChain& chain, const SolveOptions& options)
{
    const SparseKernel& kernel = chain.kernel;
    const std::size_t states = kernel.states();
    StationarySolution solution;
    solution.probability.assign(states, 0.0);
    if (states == 1) {
        solution.probability[0] = 1.0;
        return solution;
    }

    // Solve pi (K - I) = 0 with pi_0 pinned to 1: drop the balance equation and
    // unknown of state 0 and move its column to the right-hand side.
    using SpMat = Eigen::SparseMatrix<double>;
    const auto reduced = static_cast<Eigen::Index>(states - 1);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(kernel.column.size() + states);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(reduced);
    for (std::size_t a = 0; a < states; ++a) {
        for (std::size_t e = kernel.row_start[a]; e < kernel.row_start[a + 1]; ++e) {
            const std::size_t b = kernel.column[e];
            if (b == 0) continue;
            const double p = kernel.probability[e];
            if (a == 0) {
                rhs[static_cast<Eigen::Index>(b - 1)] -= p;
            } else {
                triplets.emplace_back(static_cast<Eigen::Index>(b - 1), static_cast<Eigen::Index>(a - 1), p);
            }
        }
    }
    for (Eigen::Index i = 0; i < reduced; ++i) triplets.emplace_back(i, i, -1.0);

    SpMat system(reduced, reduced);
    system.setFromTriplets(triplets.begin(), triplets.end());
    system.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(system);
    if (lu.info() != Eigen::Success)
        throw Error(ErrorCode::no_convergence, "sparse LU factorization failed: " + lu.lastErrorMessage());
    const Eigen::VectorXd rest = lu.solve(rhs);

    solution.probability[0] = 1.0;
    for (Eigen::Index i = 0; i < reduced; ++i) solution.probability[static_cast<std::size_t>(i + 1)] = rest[i];
    normalize(solution.probability);

    solution.residual = residual_of(kernel, solution.probability);
    while (solution.residual > options.residual_tolerance) {
        if (solution.refinement_steps >= options.max_iterations) {
            throw Error(ErrorCode::no_convergence, "residual " + format_scalar(solution.residual) + " after " +
                                                       std::to_string(solution.refinement_steps) + " iterations");
        }
        solution.probability = apply_kernel(kernel, solution.probability);
        normalize(solution.probability);
        solution.residual = residual_of(kernel, solution.probability);
        ++solution.refinement_steps;
    }
    return solution;
}

std::vector<double> queue_marginal(const JointChain& chain, const StationarySolution& solution)
{
    std::vector<double> out(chain.q_cap + 1, 0.0);
    for (std::size_t s = 0; s < chain.states(); ++s) out[chain.queue_of(s)] += solution.probability[s];
    return out;
}

std::vector<double> state_marginal(const JointChain& chain, const StationarySolution& solution)
{
    std::vector<double> out(chain.n + 1, 0.0);
    for (std::size_t s = 0; s < chain.states(); ++s) out[chain.state_of_x(s)] += solution.probability[s];
    return out;
}

OracleMean oracle_expected_queue(const JointChain& chain, const StationarySolution& solution)
{
    const std::vector<double> marginal = queue_marginal(chain, solution);
    OracleMean out;
    for (std::size_t q = 1; q < marginal.size(); ++q) out.value += static_cast<double>(q) * marginal[q];
    out.boundary_mass = marginal.back();
    out.truncation_bias = out.boundary_mass > kTruncationBiasThreshold;
    return out;
}

} // namespace mmq::oracle
