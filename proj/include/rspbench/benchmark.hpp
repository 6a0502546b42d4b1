// benchmark.hpp
// Optimal classical average fidelity for an equiprobable ensemble and c
// classical bits.
//
// A deterministic classical strategy partitions the n targets into at most
// 2^c blocks, one per message. For a block B Bob's best reply is the top
// eigenvector of the block average (1/|B|) sum_{a in B} |psi_a><psi_a|, worth
// its largest eigenvalue lambda(B). The average fidelity of the partition is
//
//     F = sum_B (|B| / n) lambda(B)
//
// exact_threshold maximizes F over all set partitions. The cheaper upper
// bound replaces lambda(B) by the best value for any block of the same size
// and maximizes over the non-increasing size rows {s_j} instead.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rspbench/ensemble.hpp"
#include "rspbench/errors.hpp"
#include "rspbench/linalg.hpp"
#include "rspbench/partitions.hpp"

namespace rspbench {

/// Largest ensemble for which the per-size maxima (all 2^n - 1 blocks) are
/// computed.
inline constexpr std::size_t max_bound_elements = 20;

/// Value ties within this margin go to the earliest canonical partition.
inline constexpr double argmax_tie_tolerance = 1e-12;

struct ThresholdResult {
    std::size_t n = 0;
    int cbits = 0;
    std::optional<double> exact;
    std::optional<Partitioning> exact_partition;
    double upper_bound = 0.0;
    std::map<std::size_t, double> per_size_max; // block size s -> <F>_s^max
    std::uint64_t partitions_scanned = 0;
};

/// min(2^cbits, n) without overflowing for large cbits.
inline std::size_t message_capacity(int cbits, std::size_t n) {
    if (cbits < 0) throw validation_error("cbits must be >= 0");
    if (cbits >= 63) return n;
    return static_cast<std::size_t>(std::min<std::uint64_t>(std::uint64_t{1} << cbits, n));
}

inline bool perfectly_preparable(std::size_t n, int cbits) {
    if (cbits < 0) throw validation_error("cbits must be >= 0");
    return cbits >= 63 || n <= (std::uint64_t{1} << cbits);
}

/// lambda_max of the uniform average over the given targets. A single pure
/// state is reproduced exactly, so singleton blocks return 1.
inline double block_lambda(const TargetEnsemble& ensemble, const std::vector<std::size_t>& block) {
    if (block.empty()) throw validation_error("empty block");
    if (block.size() == 1) return 1.0;
    std::vector<PureState> states;
    states.reserve(block.size());
    for (std::size_t i : block) states.push_back(ensemble.state(i));
    const std::vector<double> w(block.size(), 1.0 / static_cast<double>(block.size()));
    return hermitian_eig_max(mixture(states, w)).value;
}

namespace detail {

inline double mask_lambda(const TargetEnsemble& ensemble,
                          const std::vector<HermitianMatrix>& projectors, std::uint32_t mask) {
    const int size = std::popcount(mask);
    if (size == 1) return 1.0;
    const std::size_t d = ensemble.dim();
    std::vector<complex> sum(d * d);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        if (!(mask >> i & 1u)) continue;
        const auto e = projectors[i].entries();
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += e[k];
    }
    for (auto& x : sum) x /= static_cast<double>(size);
    return hermitian_eig_max(HermitianMatrix(d, std::move(sum))).value;
}

/// lambda for every nonempty subset, indexed by bitmask.
inline std::vector<double> subset_lambdas(const TargetEnsemble& ensemble) {
    const std::size_t n = ensemble.size();
    if (n > max_bound_elements) {
        throw combinatorial_error("block maxima over " + std::to_string(n) +
                                  " targets exceed the limit of " +
                                  std::to_string(max_bound_elements));
    }
    std::vector<HermitianMatrix> projectors;
    projectors.reserve(n);
    for (const auto& s : ensemble.states()) projectors.push_back(projector(s));
    std::vector<double> table(std::size_t{1} << n, 0.0);
    for (std::uint32_t mask = 1; mask < table.size(); ++mask) {
        table[mask] = mask_lambda(ensemble, projectors, mask);
    }
    return table;
}

inline std::map<std::size_t, double> per_size_from_table(std::size_t n,
                                                         const std::vector<double>& table) {
    std::map<std::size_t, double> best;
    for (std::size_t s = 1; s <= n; ++s) best[s] = 0.0;
    for (std::uint32_t mask = 1; mask < table.size(); ++mask) {
        auto& slot = best[static_cast<std::size_t>(std::popcount(mask))];
        slot = std::max(slot, table[mask]);
    }
    return best;
}

inline double bound_from_sizes(std::size_t n, std::size_t max_parts,
                               const std::map<std::size_t, double>& per_size) {
    double best = 0.0;
    for (const auto& row : enumerate_compositions(n, max_parts)) {
        double value = 0.0;
        for (std::size_t s : row) {
            value += static_cast<double>(s) / static_cast<double>(n) * per_size.at(s);
        }
        best = std::max(best, value);
    }
    return best;
}

inline double partition_value(const std::vector<int>& labels, std::size_t blocks,
                              const std::vector<double>& table) {
    std::uint32_t masks[64] = {};
    for (std::size_t i = 0; i < labels.size(); ++i) masks[labels[i]] |= std::uint32_t{1} << i;
    const double n = static_cast<double>(labels.size());
    double value = 0.0;
    for (std::size_t k = 0; k < blocks; ++k) {
        value += static_cast<double>(std::popcount(masks[k])) / n * table[masks[k]];
    }
    return value;
}

} // namespace detail

/// <F>_s^max: the best block average over all size-s subsets.
inline double max_contribution_by_size(const TargetEnsemble& ensemble, std::size_t s) {
    ensemble.require_uniform("max_contribution_by_size");
    const std::size_t n = ensemble.size();
    if (s < 1 || s > n) {
        throw validation_error("block size " + std::to_string(s) + " outside [1, " +
                               std::to_string(n) + "]");
    }
    if (s == 1) return 1.0;
    if (n > 64) throw combinatorial_error("block maxima need n <= 64");
    // Walk s-combinations of {0..n-1} in lexicographic order.
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    double best = 0.0;
    std::uint64_t visited = 0;
    constexpr std::uint64_t visit_limit = std::uint64_t{1} << 24;
    while (true) {
        if (++visited > visit_limit) {
            throw combinatorial_error("more than 2^24 blocks of size " + std::to_string(s));
        }
        best = std::max(best, block_lambda(ensemble, idx));
        std::size_t i = s;
        while (i-- > 0 && idx[i] == n - s + i) {}
        if (i == static_cast<std::size_t>(-1)) break;
        ++idx[i];
        for (std::size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

/// Per-size maxima and the composition bound, without the exhaustive scan.
inline ThresholdResult threshold_bound(const TargetEnsemble& ensemble, int cbits) {
    ensemble.require_uniform("threshold bound");
    ThresholdResult r;
    r.n = ensemble.size();
    r.cbits = cbits;
    const std::size_t capacity = message_capacity(cbits, r.n);
    if (perfectly_preparable(r.n, cbits)) {
        // The all-singletons row is attainable; larger sizes are informative only.
        r.per_size_max = r.n <= max_bound_elements
                             ? detail::per_size_from_table(r.n, detail::subset_lambdas(ensemble))
                             : std::map<std::size_t, double>{{1, 1.0}};
        r.upper_bound = 1.0;
        return r;
    }
    const auto table = detail::subset_lambdas(ensemble);
    r.per_size_max = detail::per_size_from_table(r.n, table);
    r.upper_bound = detail::bound_from_sizes(r.n, capacity, r.per_size_max);
    return r;
}

inline double upper_bound(const TargetEnsemble& ensemble, int cbits) {
    return threshold_bound(ensemble, cbits).upper_bound;
}

/// Exhaustive search over set partitions into at most 2^cbits blocks.
/// The scan may be split over `jobs` threads; the result does not depend
/// on the split.
inline ThresholdResult exact_threshold(const TargetEnsemble& ensemble, int cbits,
                                       unsigned jobs = 1) {
    ensemble.require_uniform("exact threshold");
    const std::size_t n = ensemble.size();
    if (perfectly_preparable(n, cbits)) {
        ThresholdResult r = threshold_bound(ensemble, cbits);
        r.exact = 1.0;
        r.exact_partition = Partitioning::singletons(n);
        return r;
    }
    require_enumerable(n);
    const std::size_t capacity = message_capacity(cbits, n);

    ThresholdResult r;
    r.n = n;
    r.cbits = cbits;
    const auto table = detail::subset_lambdas(ensemble);
    r.per_size_max = detail::per_size_from_table(n, table);
    r.upper_bound = detail::bound_from_sizes(n, capacity, r.per_size_max);

    jobs = std::max(1u, jobs);
    // Each worker walks the full sequence and evaluates every jobs-th entry.
    auto scan = [&](auto&& visit) {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back([&, t] {
                SetPartitionGenerator gen(n, capacity);
                std::uint64_t index = 0;
                do {
                    if (index % jobs == t) {
                        visit(t, index,
                              detail::partition_value(gen.labels(), gen.block_count(), table));
                    }
                    ++index;
                } while (gen.next());
            });
        }
        for (auto& th : pool) th.join();
    };

    std::vector<double> best(jobs, -1.0);
    std::vector<std::uint64_t> counted(jobs, 0);
    scan([&](unsigned t, std::uint64_t, double v) {
        best[t] = std::max(best[t], v);
        ++counted[t];
    });
    const double top = *std::max_element(best.begin(), best.end());
    for (auto c : counted) r.partitions_scanned += c;

    constexpr auto none = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> first(jobs, none);
    scan([&](unsigned t, std::uint64_t index, double v) {
        if (first[t] == none && v >= top - argmax_tie_tolerance) first[t] = index;
    });
    const std::uint64_t winner = *std::min_element(first.begin(), first.end());

    SetPartitionGenerator gen(n, capacity);
    for (std::uint64_t i = 0; i < winner; ++i) gen.next();
    r.exact = top;
    r.exact_partition = gen.current();
    return r;
}

} // namespace rspbench
