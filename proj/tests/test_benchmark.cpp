#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rspbench/benchmark.hpp"

using namespace rspbench;
using Catch::Approx;

namespace {
const double h = 1.0 / std::sqrt(2.0);
const double bb84_threshold = (1.0 + 1.0 / std::sqrt(2.0)) / 2.0;

TargetEnsemble orthogonal_pair() { return TargetEnsemble({PureState{1.0, 0.0}, PureState{0.0, 1.0}}); }

TargetEnsemble permuted(const TargetEnsemble& e, std::mt19937_64& rng) {
    auto states = e.states();
    std::shuffle(states.begin(), states.end(), rng);
    return TargetEnsemble(std::move(states));
}
} // namespace

TEST_CASE("BB84 reference value from the closed-form oracle", "[benchmark][oracle]") {
    const auto amps = oracle::amplitudes_of(bb84_ensemble());
    REQUIRE(oracle::brute_force_qubit_threshold(amps, 2) == Approx(bb84_threshold).margin(1e-12));
    REQUIRE(oracle::qubit_block_lambda({amps[0], amps[2]}) == Approx(0.8535534).margin(1e-7));
}

TEST_CASE("max_contribution_by_size", "[benchmark]") {
    const auto bb84 = bb84_ensemble();
    REQUIRE(max_contribution_by_size(bb84, 1) == 1.0);
    REQUIRE(max_contribution_by_size(bb84, 2) == Approx(bb84_threshold).margin(1e-10));
    REQUIRE(max_contribution_by_size(orthogonal_pair(), 2) == Approx(0.5).margin(1e-12));

    SECTION("brute force over pairs with the closed-form oracle") {
        const auto amps = oracle::amplitudes_of(bb84);
        for (std::size_t s = 2; s <= 4; ++s) {
            double best = 0.0;
            for (unsigned mask = 1; mask < 16; ++mask) {
                if (static_cast<std::size_t>(std::popcount(mask)) != s) continue;
                std::vector<std::vector<complex>> members;
                for (int i = 0; i < 4; ++i)
                    if (mask >> i & 1u) members.push_back(amps[i]);
                best = std::max(best, oracle::qubit_block_lambda(members));
            }
            REQUIRE(max_contribution_by_size(bb84, s) == Approx(best).margin(1e-10));
        }
    }

    SECTION("errors") {
        REQUIRE_THROWS_AS(max_contribution_by_size(bb84, 0), validation_error);
        REQUIRE_THROWS_AS(max_contribution_by_size(bb84, 5), validation_error);
        const TargetEnsemble skewed({PureState{1.0, 0.0}, PureState{h, h}}, {0.3, 0.7});
        REQUIRE_THROWS_AS(max_contribution_by_size(skewed, 2), unsupported_assumption_error);
    }
}

TEST_CASE("upper_bound", "[benchmark]") {
    const auto bb84 = bb84_ensemble();
    REQUIRE(upper_bound(bb84, 2) == 1.0);
    REQUIRE(upper_bound(bb84, 5) == 1.0);
    REQUIRE(upper_bound(bb84, 1) == Approx(bb84_threshold).margin(1e-10));
    REQUIRE(upper_bound(orthogonal_pair(), 0) == Approx(0.5).margin(1e-12));

    // Rows [4], [3,1], [2,2] evaluated by hand with oracle block values.
    const auto amps = oracle::amplitudes_of(bb84);
    const double f4 = oracle::qubit_block_lambda(amps);
    const double f3 = std::max({oracle::qubit_block_lambda({amps[0], amps[1], amps[2]}),
                                oracle::qubit_block_lambda({amps[0], amps[1], amps[3]}),
                                oracle::qubit_block_lambda({amps[0], amps[2], amps[3]}),
                                oracle::qubit_block_lambda({amps[1], amps[2], amps[3]})});
    const double f2 = bb84_threshold;
    const double expected = std::max({f4, 0.75 * f3 + 0.25, f2});
    REQUIRE(upper_bound(bb84, 1) == Approx(expected).margin(1e-10));

    const TargetEnsemble skewed({PureState{1.0, 0.0}, PureState{h, h}}, {0.3, 0.7});
    REQUIRE_THROWS_AS(upper_bound(skewed, 0), unsupported_assumption_error);
    REQUIRE_THROWS_AS(upper_bound(bb84, -1), validation_error);
}

TEST_CASE("exact_threshold examples", "[benchmark]") {
    const auto bb84 = bb84_ensemble();
    const auto r = exact_threshold(bb84, 1);
    REQUIRE(r.exact.has_value());
    REQUIRE(*r.exact == Approx(bb84_threshold).margin(1e-10));
    REQUIRE(r.exact_partition->to_string() == "{0,2}|{1,3}"); // {|0>,|+>} | {|1>,|->}
    REQUIRE(r.partitions_scanned == 8);
    REQUIRE(r.upper_bound == Approx(bb84_threshold).margin(1e-10));
    REQUIRE(r.per_size_max.at(1) == 1.0);

    const auto full = exact_threshold(bb84, 2);
    REQUIRE(*full.exact == 1.0);
    REQUIRE(*full.exact_partition == Partitioning::singletons(4));
    REQUIRE(full.upper_bound == 1.0);

    REQUIRE(*exact_threshold(orthogonal_pair(), 0).exact == Approx(0.5).margin(1e-12));

    SECTION("errors") {
        const TargetEnsemble skewed({PureState{1.0, 0.0}, PureState{h, h}}, {0.3, 0.7});
        REQUIRE_THROWS_AS(exact_threshold(skewed, 0), unsupported_assumption_error);
        std::mt19937_64 rng(1);
        REQUIRE_THROWS_AS(exact_threshold(oracle::random_ensemble(rng, 15, 2), 1), combinatorial_error);
        REQUIRE_NOTHROW(threshold_bound(oracle::random_ensemble(rng, 15, 2), 1));
    }
}

TEST_CASE("exact threshold agrees with brute force over labellings", "[benchmark][oracle]") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const int cbits = trial % 2;
        const auto e = oracle::random_ensemble(rng, n, 2);
        const double expected = oracle::brute_force_qubit_threshold(oracle::amplitudes_of(e), 1 << cbits);
        REQUIRE(*exact_threshold(e, cbits).exact == Approx(expected).margin(1e-10));
    }
}

TEST_CASE("threshold invariants on random ensembles", "[benchmark][property]") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = 2 + trial % 3;
        const std::size_t n = 2 + trial % 7;
        const auto e = oracle::random_ensemble(rng, n, d);
        INFO("trial " << trial << ", n = " << n << ", d = " << d);

        double previous = 0.0;
        for (int c = 0; c <= 3; ++c) {
            const auto r = exact_threshold(e, c);
            REQUIRE(*r.exact <= r.upper_bound + 1e-12);
            REQUIRE(*r.exact >= previous - 1e-12);
            REQUIRE(*r.exact <= 1.0 + 1e-12);
            REQUIRE(r.exact_partition->block_count() <= message_capacity(c, n));
            previous = *r.exact;

            const auto shuffled = permuted(e, rng);
            const auto rs = exact_threshold(shuffled, c);
            REQUIRE(*rs.exact == Approx(*r.exact).margin(1e-12));
            REQUIRE(rs.upper_bound == Approx(r.upper_bound).margin(1e-12));
        }
    }
}

TEST_CASE("exact threshold value of the argmax partition", "[benchmark][property]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const auto e = oracle::random_ensemble(rng, 3 + trial % 5, 2 + trial % 3);
        const auto r = exact_threshold(e, 1);
        double value = 0.0;
        for (const auto& b : r.exact_partition->blocks()) {
            value += static_cast<double>(b.size()) / static_cast<double>(e.size()) * block_lambda(e, b);
        }
        REQUIRE(value == Approx(*r.exact).margin(1e-12));
    }
}

TEST_CASE("parallel scan gives bit-identical results", "[benchmark][concurrency]") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto e = oracle::random_ensemble(rng, 7 + trial % 3, 3);
        const auto one = exact_threshold(e, 1 + trial % 2, 1);
        for (unsigned jobs : {2u, 3u, 8u}) {
            const auto many = exact_threshold(e, 1 + trial % 2, jobs);
            REQUIRE(*many.exact == *one.exact);
            REQUIRE(*many.exact_partition == *one.exact_partition);
            REQUIRE(many.partitions_scanned == one.partitions_scanned);
        }
    }
}

TEST_CASE("perfect fidelity whenever n <= 2^c", "[benchmark]") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const int c = trial % 4;
        const std::size_t n = 1 + trial % (std::size_t{1} << c);
        const auto e = oracle::random_ensemble(rng, n, 2 + trial % 3);
        const auto r = exact_threshold(e, c);
        REQUIRE(*r.exact == 1.0);
        REQUIRE(r.upper_bound == 1.0);
    }
    REQUIRE(message_capacity(100, 5) == 5);
    REQUIRE(*exact_threshold(bb84_ensemble(), 64).exact == 1.0);
}
