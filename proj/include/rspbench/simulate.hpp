// simulate.hpp
// Monte Carlo simulation of classical remote state preparation strategies
// and of synthetic RSPMI hit/miss experiments.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rspbench/benchmark.hpp"
#include "rspbench/ensemble.hpp"
#include "rspbench/errors.hpp"
#include "rspbench/linalg.hpp"
#include "rspbench/partitions.hpp"
#include "rspbench/random.hpp"
#include "rspbench/stats.hpp"

namespace rspbench {

/// Message choice for one target: a fixed message index, or a distribution
/// q_k over message indices.
using MessageAssignment = std::variant<std::size_t, std::vector<double>>;

struct ClassicalStrategy {
    int cbits = 0;
    std::vector<MessageAssignment> assignment; // one per target
    std::vector<PureState> outputs;            // Bob's state for each message

    void validate(const TargetEnsemble& ensemble) const {
        if (assignment.size() != ensemble.size()) {
            throw dimension_error("strategy assigns " + std::to_string(assignment.size()) +
                                  " targets, ensemble has " + std::to_string(ensemble.size()));
        }
        if (outputs.empty()) throw validation_error("strategy has no output states");
        if (cbits < 63 && outputs.size() > (std::uint64_t{1} << cbits)) {
            throw validation_error(std::to_string(outputs.size()) + " messages need more than " +
                                   std::to_string(cbits) + " cbits");
        }
        for (const auto& out : outputs) {
            if (out.dim() != ensemble.dim()) {
                throw dimension_error("strategy output dimension differs from the ensemble");
            }
        }
        for (const auto& a : assignment) {
            if (const auto* k = std::get_if<std::size_t>(&a)) {
                if (*k >= outputs.size()) {
                    throw validation_error("message index " + std::to_string(*k) +
                                           " has no output state");
                }
            } else {
                const auto& q = std::get<std::vector<double>>(a);
                if (q.empty() || q.size() > outputs.size()) {
                    throw validation_error("message distribution length must be in [1, " +
                                           std::to_string(outputs.size()) + "]");
                }
                require_probability_vector(q, "message probabilities");
            }
        }
    }

    std::string summary() const {
        std::string out = std::to_string(cbits) + " cbit(s), " + std::to_string(outputs.size()) +
                          " message(s); m = [";
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (i) out += ' ';
            if (const auto* k = std::get_if<std::size_t>(&assignment[i])) {
                out += std::to_string(*k);
            } else {
                out += '*';
            }
        }
        return out + "]";
    }
};

/// Deterministic strategy: message = block index, Bob answers each block
/// with the top eigenvector of its average state (the target itself for
/// singleton blocks).
inline ClassicalStrategy strategy_from_partition(const TargetEnsemble& ensemble,
                                                 const Partitioning& partition, int cbits) {
    if (partition.n() != ensemble.size()) {
        throw dimension_error("partition covers " + std::to_string(partition.n()) +
                              " targets, ensemble has " + std::to_string(ensemble.size()));
    }
    if (partition.block_count() > message_capacity(cbits, ensemble.size())) {
        throw validation_error(std::to_string(partition.block_count()) +
                               " blocks do not fit in " + std::to_string(cbits) + " cbits");
    }
    ClassicalStrategy s;
    s.cbits = cbits;
    s.assignment.resize(ensemble.size());
    for (std::size_t k = 0; k < partition.block_count(); ++k) {
        const auto& block = partition.blocks()[k];
        for (std::size_t a : block) s.assignment[a] = k;
        if (block.size() == 1) {
            s.outputs.push_back(ensemble.state(block.front()));
            continue;
        }
        std::vector<PureState> members;
        for (std::size_t a : block) members.push_back(ensemble.state(a));
        const std::vector<double> w(block.size(), 1.0 / static_cast<double>(block.size()));
        s.outputs.push_back(hermitian_eig_max(mixture(members, w)).vector);
    }
    return s;
}

namespace detail {

/// fidelity[a * K + k] = |<psi_a|phi_k>|^2
inline std::vector<double> fidelity_table(const TargetEnsemble& ensemble,
                                          const ClassicalStrategy& strategy) {
    const std::size_t K = strategy.outputs.size();
    std::vector<double> table(ensemble.size() * K);
    for (std::size_t a = 0; a < ensemble.size(); ++a)
        for (std::size_t k = 0; k < K; ++k)
            table[a * K + k] = pure_fidelity(ensemble.state(a), strategy.outputs[k]);
    return table;
}

/// Inverse CDF over ascending indices; rounding slack falls on the last
/// index with nonzero weight.
inline std::size_t sample_index(std::span<const double> weights, double u) {
    double cumulative = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        cumulative += weights[i];
        last = i;
        if (u < cumulative) return i;
    }
    return last;
}

} // namespace detail

/// sum_a p_a sum_k q_k(a) |<psi_a|phi_k>|^2, evaluated exactly.
inline double expected_fidelity(const TargetEnsemble& ensemble, const ClassicalStrategy& strategy) {
    strategy.validate(ensemble);
    const auto table = detail::fidelity_table(ensemble, strategy);
    const std::size_t K = strategy.outputs.size();
    double total = 0.0;
    for (std::size_t a = 0; a < ensemble.size(); ++a) {
        double fa = 0.0;
        if (const auto* k = std::get_if<std::size_t>(&strategy.assignment[a])) {
            fa = table[a * K + *k];
        } else {
            const auto& q = std::get<std::vector<double>>(strategy.assignment[a]);
            for (std::size_t k = 0; k < q.size(); ++k) fa += q[k] * table[a * K + k];
        }
        total += ensemble.probability(a) * fa;
    }
    return total;
}

struct SimulationReport {
    std::uint64_t trials = 0;
    double mean_fidelity = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    std::string strategy_summary;
};

/// Draws a target from the ensemble prior, a message from the strategy and
/// scores the exact expected fidelity <psi_a|phi_k|psi_a> of Bob's reply.
inline SimulationReport simulate_classical_rsp(const TargetEnsemble& ensemble,
                                               const ClassicalStrategy& strategy,
                                               std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw validation_error("simulation needs at least one trial");
    strategy.validate(ensemble);
    const auto table = detail::fidelity_table(ensemble, strategy);
    const std::size_t K = strategy.outputs.size();
    CounterRng rng(seed);

    // Welford running mean / variance
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t t = 1; t <= trials; ++t) {
        const std::size_t a = detail::sample_index(ensemble.probabilities(), rng.uniform());
        std::size_t k = 0;
        if (const auto* fixed = std::get_if<std::size_t>(&strategy.assignment[a])) {
            k = *fixed;
        } else {
            k = detail::sample_index(std::get<std::vector<double>>(strategy.assignment[a]),
                                     rng.uniform());
        }
        const double f = table[a * K + k];
        const double delta = f - mean;
        mean += delta / static_cast<double>(t);
        m2 += delta * (f - mean);
    }

    SimulationReport r;
    r.trials = trials;
    r.mean_fidelity = mean;
    r.std_error = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1) /
                                         static_cast<double>(trials))
                             : 0.0;
    r.seed = seed;
    r.strategy_summary = strategy.summary();
    return r;
}

inline std::string experiment_label(std::size_t index, std::size_t count) {
    const int width = static_cast<int>(std::to_string(count).size());
    char buf[32];
    std::snprintf(buf, sizeof buf, "sim%0*zu", width, index + 1);
    return buf;
}

/// One record per entry of trials_per_experiment; experiment i draws its
/// Bernoulli(hit_prob) outcomes from substream i of the seed.
inline std::vector<ExperimentRecord> simulate_rspmi_experiments(
    double hit_prob, std::span<const std::uint64_t> trials_per_experiment, std::uint64_t seed) {
    require_unit_interval(hit_prob, "hit probability");
    if (trials_per_experiment.empty()) throw validation_error("need at least one experiment");
    std::vector<ExperimentRecord> records;
    records.reserve(trials_per_experiment.size());
    for (std::size_t i = 0; i < trials_per_experiment.size(); ++i) {
        const std::uint64_t trials = trials_per_experiment[i];
        if (trials < 1) throw validation_error("every experiment needs at least one trial");
        CounterRng rng(seed, i);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t) hits += rng.uniform() < hit_prob ? 1 : 0;
        records.push_back({experiment_label(i, trials_per_experiment.size()), trials, hits});
    }
    return records;
}

inline std::vector<ExperimentRecord> simulate_rspmi_experiments(double hit_prob,
                                                                std::size_t n_experiments,
                                                                std::uint64_t trials_per,
                                                                std::uint64_t seed) {
    if (n_experiments < 1) throw validation_error("need at least one experiment");
    const std::vector<std::uint64_t> trials(n_experiments, trials_per);
    return simulate_rspmi_experiments(hit_prob, trials, seed);
}

} // namespace rspbench
