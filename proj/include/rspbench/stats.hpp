// stats.hpp
// Hit/miss fidelity, its uncertainty, the classical benchmark and the
// sqrt(trials)-weighted pooling used to compare RSPMI hit rates against it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rspbench/errors.hpp"

namespace rspbench {

struct BinaryFidelityParams {
    double p_theory = 0.9; // hit probability of an ideal channel
    double chance = 0.25;  // hit probability without any channel, 1/n

    void validate() const {
        if (!(p_theory > 0.0 && p_theory < 1.0)) {
            throw probability_error("p_theory must lie strictly inside (0, 1)");
        }
        if (!(chance > 0.0 && chance < 1.0)) {
            throw probability_error("chance must lie strictly inside (0, 1)");
        }
    }
};

struct ExperimentRecord {
    std::string label;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;

    double rate() const { return static_cast<double>(hits) / static_cast<double>(trials); }

    void validate() const {
        if (trials == 0) throw validation_error("experiment '" + label + "' has zero trials");
        if (hits > trials) {
            throw validation_error("experiment '" + label + "' has more hits than trials");
        }
    }
};

enum class RateUnit { fraction, percent };

/// Converts a user-supplied rate to a probability. The unit is never guessed.
inline double rate_to_probability(double value, RateUnit unit) {
    const double p = unit == RateUnit::percent ? value / 100.0 : value;
    if (!(p >= 0.0 && p <= 1.0)) {
        throw probability_error("rate " + std::to_string(value) + " is outside [0, " +
                                (unit == RateUnit::percent ? "100]" : "1]") +
                                " for the selected unit");
    }
    return p;
}

inline void require_unit_interval(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw probability_error(std::string(name) + " = " + std::to_string(x) +
                                " is outside [0, 1]");
    }
}

/// Bhattacharyya coefficient of Bernoulli(p) and Bernoulli(q):
/// sqrt(pq) + sqrt((1-p)(1-q)).
inline double binary_fidelity(double p, double q) {
    require_unit_interval(p, "p");
    require_unit_interval(q, "q");
    return std::sqrt(p * q) + std::sqrt((1.0 - p) * (1.0 - q));
}

inline double classical_benchmark(const BinaryFidelityParams& params) {
    params.validate();
    return binary_fidelity(params.p_theory, params.chance);
}

/// se/2 * |sqrt(pq) - sqrt((1-p)(1-q))|, evaluated literally.
inline double fidelity_uncertainty_literal(double p, double q, double se) {
    require_unit_interval(p, "p");
    require_unit_interval(q, "q");
    if (!(se >= 0.0)) throw validation_error("standard error must be >= 0");
    return se / 2.0 * std::abs(std::sqrt(p * q) - std::sqrt((1.0 - p) * (1.0 - q)));
}

/// First-order propagation: se * |dF/dq| with
/// dF/dq = (sqrt(p/q) - sqrt((1-p)/(1-q))) / 2.
inline double fidelity_uncertainty_delta(double p, double q, double se) {
    require_unit_interval(p, "p");
    if (!(q > 0.0 && q < 1.0)) {
        throw boundary_derivative_error("dF/dq is unbounded at q = " + std::to_string(q));
    }
    if (!(se >= 0.0)) throw validation_error("standard error must be >= 0");
    return se * 0.5 * std::abs(std::sqrt(p / q) - std::sqrt((1.0 - p) / (1.0 - q)));
}

/// Excess over the benchmark in standard units.
inline double violation_z(double f_exp, double f_bench, double df) {
    if (!(df > 0.0)) throw validation_error("fidelity uncertainty must be > 0");
    return (f_exp - f_bench) / df;
}

struct PooledRate {
    double q = 0.0;
    double se = 0.0;
    std::uint64_t total_trials = 0;
};

/// Mean of per-experiment hit rates weighted by sqrt(trials); se is the
/// binomial standard error of that rate over all trials.
inline PooledRate pooled_hit_rate(std::span<const ExperimentRecord> records) {
    if (records.empty()) throw validation_error("no experiment records to pool");
    for (const auto& r : records) r.validate();
    // Accumulate offsets from the first rate so identical rates pool exactly.
    const double base = records.front().rate();
    double weighted = 0.0;
    double weights = 0.0;
    PooledRate out;
    for (const auto& r : records) {
        const double w = std::sqrt(static_cast<double>(r.trials));
        weighted += w * (r.rate() - base);
        weights += w;
        out.total_trials += r.trials;
    }
    out.q = std::clamp(base + weighted / weights, 0.0, 1.0);
    out.se = std::sqrt(out.q * (1.0 - out.q) / static_cast<double>(out.total_trials));
    return out;
}

struct MetaResult {
    std::size_t experiments = 0;
    std::uint64_t total_trials = 0;
    BinaryFidelityParams params;
    double pooled_rate = 0.0;
    double se_rate = 0.0;
    double fidelity = 0.0;
    double benchmark = 0.0;
    double df_literal = 0.0;
    std::optional<double> df_delta; // absent when q is 0 or 1
    std::optional<double> z_literal;  // absent when its df is 0 and F != benchmark
    std::optional<double> z_delta;
};

namespace detail {
inline std::optional<double> z_or_none(double f, double bench, std::optional<double> df) {
    if (!df) return std::nullopt;
    if (*df > 0.0) return violation_z(f, bench, *df);
    if (f == bench) return 0.0;
    return std::nullopt;
}
} // namespace detail

inline MetaResult meta_analyze(std::span<const ExperimentRecord> records,
                               const BinaryFidelityParams& params = {}) {
    params.validate();
    const auto pooled = pooled_hit_rate(records);
    MetaResult m;
    m.experiments = records.size();
    m.total_trials = pooled.total_trials;
    m.params = params;
    m.pooled_rate = pooled.q;
    m.se_rate = pooled.se;
    m.fidelity = binary_fidelity(params.p_theory, pooled.q);
    m.benchmark = classical_benchmark(params);
    m.df_literal = fidelity_uncertainty_literal(params.p_theory, pooled.q, pooled.se);
    if (pooled.q > 0.0 && pooled.q < 1.0) {
        m.df_delta = fidelity_uncertainty_delta(params.p_theory, pooled.q, pooled.se);
    }
    m.z_literal = detail::z_or_none(m.fidelity, m.benchmark, m.df_literal);
    m.z_delta = detail::z_or_none(m.fidelity, m.benchmark, m.df_delta);
    return m;
}

/// One-off fidelity evaluation for a known hit rate, optionally with its
/// standard error or an externally quoted fidelity uncertainty.
struct FidelityCheck {
    BinaryFidelityParams params;
    double rate = 0.0;
    double fidelity = 0.0;
    double benchmark = 0.0;
    std::optional<double> se;
    std::optional<double> df_literal;
    std::optional<double> df_delta;
    std::optional<double> df_given;
    std::optional<double> z_literal;
    std::optional<double> z_delta;
    std::optional<double> z_given;
};

inline FidelityCheck check_fidelity(double rate, const BinaryFidelityParams& params,
                                    std::optional<double> se = std::nullopt,
                                    std::optional<double> df = std::nullopt) {
    params.validate();
    FidelityCheck c;
    c.params = params;
    c.rate = rate;
    c.fidelity = binary_fidelity(params.p_theory, rate);
    c.benchmark = classical_benchmark(params);
    if (se) {
        c.se = se;
        c.df_literal = fidelity_uncertainty_literal(params.p_theory, rate, *se);
        if (rate > 0.0 && rate < 1.0) {
            c.df_delta = fidelity_uncertainty_delta(params.p_theory, rate, *se);
        }
        c.z_literal = detail::z_or_none(c.fidelity, c.benchmark, c.df_literal);
        c.z_delta = detail::z_or_none(c.fidelity, c.benchmark, c.df_delta);
    }
    if (df) {
        c.df_given = df;
        c.z_given = violation_z(c.fidelity, c.benchmark, *df);
    }
    return c;
}

} // namespace rspbench
