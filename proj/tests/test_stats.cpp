#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rspbench/stats.hpp"

using namespace rspbench;
using Catch::Approx;

TEST_CASE("binary fidelity", "[stats]") {
    REQUIRE(binary_fidelity(0.9, 0.9) == Approx(1.0).margin(1e-15));
    REQUIRE(binary_fidelity(0.9, 0.25) == Approx(0.7482029).margin(1e-7));
    REQUIRE(binary_fidelity(0.9, 0.338214) == Approx(0.808969964).margin(1e-6));
    REQUIRE_THROWS_AS(binary_fidelity(1.1, 0.5), probability_error);
    REQUIRE_THROWS_AS(binary_fidelity(0.5, -0.01), probability_error);
}

TEST_CASE("binary fidelity properties", "[stats][property]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double p = u(rng);
        const double q = u(rng);
        const double f = binary_fidelity(p, q);
        REQUIRE(f <= 1.0 + 1e-15);
        REQUIRE(f >= 0.0);
        REQUIRE(binary_fidelity(q, p) == Approx(f).margin(1e-15));
        REQUIRE(binary_fidelity(1.0 - p, 1.0 - q) == Approx(f).margin(1e-15));
        if (std::abs(p - q) > 1e-3) REQUIRE(f < 1.0);
        // strictly increasing in q below p
        if (q < p) {
            const double q2 = q + (p - q) * u(rng);
            if (q2 > q) REQUIRE(binary_fidelity(p, q2) > f);
        }
    }
    // Complement symmetry holds exactly when both arguments are exact complements.
    REQUIRE(binary_fidelity(0.25, 0.5) == binary_fidelity(0.75, 0.5));
}

TEST_CASE("classical benchmark", "[stats]") {
    REQUIRE(classical_benchmark({0.9, 0.25}) == Approx(0.7482029).margin(1e-7));
    REQUIRE(classical_benchmark({0.9, 0.9}) == Approx(1.0).margin(1e-15));
    REQUIRE(classical_benchmark({0.9, 0.5}) == Approx(std::sqrt(0.45) + std::sqrt(0.05)).margin(1e-15));
    REQUIRE(classical_benchmark({0.9, 0.5}) == Approx(0.8944272).margin(1e-7));
    REQUIRE_THROWS_AS(classical_benchmark({1.0, 0.25}), probability_error);
    REQUIRE_THROWS_AS(classical_benchmark({0.9, 0.0}), probability_error);
}

TEST_CASE("fidelity uncertainty, literal formula", "[stats]") {
    REQUIRE(fidelity_uncertainty_literal(0.9, 0.25, 0.0) == 0.0);
    REQUIRE(fidelity_uncertainty_literal(0.9, 0.25, 0.01) == Approx(0.0010024).margin(1e-7));
    REQUIRE(fidelity_uncertainty_literal(0.5, 0.5, 0.02) == 0.0);
    REQUIRE_THROWS_AS(fidelity_uncertainty_literal(0.9, 0.25, -1.0), validation_error);
}

TEST_CASE("fidelity uncertainty, delta method", "[stats]") {
    REQUIRE(fidelity_uncertainty_delta(0.9, 0.3, 0.0) == 0.0);
    REQUIRE(fidelity_uncertainty_delta(0.9, 0.338214, 0.008188) == Approx(0.005087).margin(1e-6));
    REQUIRE(fidelity_uncertainty_delta(0.5, 0.5, 0.02) == 0.0);
    REQUIRE_THROWS_AS(fidelity_uncertainty_delta(0.9, 0.0, 0.01), boundary_derivative_error);
    REQUIRE_THROWS_AS(fidelity_uncertainty_delta(0.9, 1.0, 0.01), boundary_derivative_error);

    SECTION("matches a central finite difference of binary_fidelity") {
        for (double q : {0.05, 0.2, 0.338214, 0.6, 0.85, 0.97}) {
            const double step = 1e-6;
            const double slope =
                (binary_fidelity(0.9, q + step) - binary_fidelity(0.9, q - step)) / (2 * step);
            REQUIRE(fidelity_uncertainty_delta(0.9, q, 1.0) == Approx(std::abs(slope)).epsilon(1e-6));
        }
    }
}

TEST_CASE("violation z", "[stats]") {
    REQUIRE(violation_z(0.808969964, 0.7482029, 0.001463) == Approx(41.54).margin(0.1));
    REQUIRE(violation_z(0.773165374, 0.7482029, 0.00061946) == Approx(40.30).margin(0.05));
    REQUIRE(violation_z(0.8, 0.8, 0.123) == 0.0);
    REQUIRE_THROWS_AS(violation_z(0.8, 0.7, 0.0), validation_error);
    REQUIRE_THROWS_AS(violation_z(0.8, 0.7, -0.1), validation_error);
}

TEST_CASE("pooled hit rate", "[stats]") {
    const std::vector<ExperimentRecord> one{{"a", 100, 25}};
    const auto p1 = pooled_hit_rate(one);
    REQUIRE(p1.q == 0.25);
    REQUIRE(p1.se == Approx(std::sqrt(0.1875 / 100)).margin(1e-15));
    REQUIRE(p1.se == Approx(0.0433).margin(1e-4));

    const std::vector<ExperimentRecord> two{{"a", 100, 30}, {"b", 400, 30}};
    const auto p2 = pooled_hit_rate(two);
    REQUIRE(p2.q == Approx(0.15).margin(1e-15));
    REQUIRE(p2.se == Approx(std::sqrt(0.1275 / 500)).margin(1e-15));
    REQUIRE(p2.se == Approx(0.01597).margin(1e-5));
    REQUIRE(p2.total_trials == 500);

    const std::vector<ExperimentRecord> same{{"a", 37, 11}, {"b", 74, 22}, {"c", 111, 33}};
    REQUIRE(pooled_hit_rate(same).q == 11.0 / 37.0);

    REQUIRE_THROWS_AS(pooled_hit_rate(std::vector<ExperimentRecord>{}), validation_error);
    REQUIRE_THROWS_AS(pooled_hit_rate(std::vector<ExperimentRecord>{{"z", 0, 0}}), validation_error);
    REQUIRE_THROWS_AS(pooled_hit_rate(std::vector<ExperimentRecord>{{"z", 5, 6}}), validation_error);
}

TEST_CASE("pooled hit rate is invariant under reordering", "[stats][property]") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> trials(1, 120);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ExperimentRecord> records;
        const int count = 1 + trial % 30;
        for (int i = 0; i < count; ++i) {
            const auto t = static_cast<std::uint64_t>(trials(rng));
            std::uniform_int_distribution<std::uint64_t> hits(0, t);
            records.push_back({"r" + std::to_string(i), t, hits(rng)});
        }
        const auto before = pooled_hit_rate(records);
        std::shuffle(records.begin(), records.end(), rng);
        const auto after = pooled_hit_rate(records);
        REQUIRE(after.q == Approx(before.q).margin(1e-14));
        REQUIRE(after.se == Approx(before.se).margin(1e-14));
    }
}

TEST_CASE("meta analysis", "[stats]") {
    SECTION("chance rate gives no violation") {
        const std::vector<ExperimentRecord> chance{{"a", 100, 25}};
        const auto m = meta_analyze(chance);
        REQUIRE(m.fidelity == m.benchmark);
        REQUIRE(m.z_literal == 0.0);
        REQUIRE(m.z_delta == 0.0);
    }

    SECTION("single record equals direct computation") {
        const std::vector<ExperimentRecord> rec{{"a", 38, 14}};
        const auto m = meta_analyze(rec, {0.9, 0.25});
        const double q = 14.0 / 38.0;
        const double se = std::sqrt(q * (1 - q) / 38.0);
        const double f = binary_fidelity(0.9, q);
        const double bench = classical_benchmark({0.9, 0.25});
        REQUIRE(m.pooled_rate == Approx(q).margin(1e-15));
        REQUIRE(m.se_rate == Approx(se).margin(1e-15));
        REQUIRE(m.fidelity == Approx(f).margin(1e-15));
        REQUIRE(m.df_literal == Approx(fidelity_uncertainty_literal(0.9, q, se)).margin(1e-15));
        REQUIRE(*m.df_delta == Approx(fidelity_uncertainty_delta(0.9, q, se)).margin(1e-15));
        REQUIRE(*m.z_literal == Approx((f - bench) / m.df_literal).epsilon(1e-12));
        REQUIRE(*m.z_delta == Approx((f - bench) / *m.df_delta).epsilon(1e-12));
    }

    SECTION("all hits leaves the delta-method uncertainty undefined") {
        const std::vector<ExperimentRecord> rec{{"a", 20, 20}};
        const auto m = meta_analyze(rec);
        REQUIRE(m.pooled_rate == 1.0);
        REQUIRE_FALSE(m.df_delta.has_value());
        REQUIRE_FALSE(m.z_delta.has_value());
        REQUIRE(m.df_literal == 0.0);
        REQUIRE_FALSE(m.z_literal.has_value());
    }

    REQUIRE_THROWS_AS(meta_analyze(std::vector<ExperimentRecord>{{"a", 10, 2}}, {0.9, 1.0}),
                      probability_error);
}

TEST_CASE("check_fidelity reproduces the published violations from quoted uncertainties",
          "[stats]") {
    const auto pooled = check_fidelity(0.338214, {0.9, 0.25}, std::nullopt, 0.001463);
    REQUIRE(pooled.fidelity == Approx(0.808969964).margin(1e-6));
    REQUIRE(*pooled.z_given == Approx(41.5).margin(0.1));

    const auto variant = check_fidelity(0.284, {0.9, 0.25}, std::nullopt, 0.00061946);
    REQUIRE(variant.fidelity == Approx(0.773165374).margin(2e-4));
    REQUIRE(*variant.z_given == Approx(40.29).margin(0.05));

    const auto with_se = check_fidelity(0.338214, {0.9, 0.25}, 0.008188);
    REQUIRE(*with_se.df_delta == Approx(0.005087).margin(1e-6));
    REQUIRE_FALSE(with_se.z_given.has_value());
}

TEST_CASE("rate units are explicit", "[stats]") {
    REQUIRE(rate_to_probability(33.82, RateUnit::percent) == Approx(0.3382).margin(1e-15));
    REQUIRE(rate_to_probability(0.3382, RateUnit::fraction) == 0.3382);
    REQUIRE(rate_to_probability(0.25, RateUnit::percent) == Approx(0.0025).margin(1e-15));
    REQUIRE_THROWS_AS(rate_to_probability(33.82, RateUnit::fraction), probability_error);
    REQUIRE_THROWS_AS(rate_to_probability(101.0, RateUnit::percent), probability_error);
}
