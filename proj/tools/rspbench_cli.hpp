// rspbench_cli.hpp
// Command-line front end. run_cli() is kept separate from main() so the
// test suites can drive the subcommands in-process.
//
// Exit codes: 0 success, 1 internal failure, 2 validation error,
// 3 combinatorial guard, 4 I/O error.

#pragma once

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "rspbench/rspbench.hpp"

namespace rspbench::cli {

enum exit_code : int {
    ok = 0,
    internal = 1,
    validation = 2,
    combinatorial = 3,
    io = 4,
};

namespace detail {

inline std::string fixed9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", x);
    return buf;
}

inline std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

inline std::string opt(const std::optional<double>& x, int digits = 9) {
    return x ? fixed(*x, digits) : std::string("n/a");
}

inline void row(std::ostream& out, const std::string& key, const std::string& value) {
    out << "  ";
    out.width(22);
    out << std::left << key << value << "\n";
}

struct ThresholdArgs {
    std::string ensemble;
    int cbits = 0;
    std::string method = "both";
    unsigned jobs = 1;
    std::string out;
};

struct FidelityArgs {
    double rate = 0.0;
    std::string rate_unit = "fraction";
    double p_theory = 0.9;
    double chance = 0.25;
    std::optional<double> se;
    std::optional<double> df;
    std::string out;
};

struct MetaArgs {
    std::string input;
    double p_theory = 0.9;
    double chance = 0.25;
    std::string out;
};

struct SimulateArgs {
    std::string mode;
    std::optional<std::uint64_t> seed;
    std::string out;
    // classical
    std::string ensemble;
    int cbits = 1;
    std::optional<std::uint64_t> trials; // 100000 classical, 38 per experiment rspmi
    std::string partition;
    // rspmi
    double hit_prob = 0.25;
    std::string rate_unit = "fraction";
    std::size_t experiments = 87;
    std::vector<std::uint64_t> trials_list;
};

inline RateUnit parse_unit(const std::string& s) {
    return s == "percent" ? RateUnit::percent : RateUnit::fraction;
}

inline int run_threshold(const ThresholdArgs& a, std::ostream& out) {
    const auto ensemble = parse_ensemble(a.ensemble);
    const unsigned jobs = a.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.jobs;
    const ThresholdResult r =
        a.method == "upper" ? threshold_bound(ensemble, a.cbits) : exact_threshold(ensemble, a.cbits, jobs);

    out << "classical threshold\n";
    row(out, "targets", std::to_string(r.n));
    row(out, "dimension", std::to_string(ensemble.dim()));
    row(out, "cbits", std::to_string(r.cbits));
    if (a.method != "upper" && r.exact) {
        row(out, "exact", fixed9(*r.exact));
        row(out, "optimal partition", r.exact_partition->to_string());
        row(out, "partitions scanned", std::to_string(r.partitions_scanned));
    }
    if (a.method != "exact") {
        row(out, "upper bound", fixed9(r.upper_bound));
        std::string sizes;
        for (const auto& [s, v] : r.per_size_max) {
            if (!sizes.empty()) sizes += "  ";
            sizes += std::to_string(s) + ":" + fixed9(v);
        }
        row(out, "per-size maxima", sizes);
    }
    if (!a.out.empty()) emit_report(r, a.out, {digest_file(a.ensemble)});
    return ok;
}

inline int run_fidelity(const FidelityArgs& a, std::ostream& out) {
    const double q = rate_to_probability(a.rate, parse_unit(a.rate_unit));
    const auto c = check_fidelity(q, {a.p_theory, a.chance}, a.se, a.df);
    out << "binary fidelity\n";
    row(out, "p_theory", fixed9(c.params.p_theory));
    row(out, "rate", fixed9(c.rate));
    row(out, "fidelity", fixed9(c.fidelity));
    row(out, "benchmark", fixed9(c.benchmark));
    if (c.se) {
        row(out, "df (literal formula)", opt(c.df_literal));
        row(out, "z (literal formula)", opt(c.z_literal, 4));
        row(out, "df (delta method)", opt(c.df_delta));
        row(out, "z (delta method)", opt(c.z_delta, 4));
    }
    if (c.df_given) {
        row(out, "df (given)", opt(c.df_given));
        row(out, "z (given df)", opt(c.z_given, 4));
    }
    if (!a.out.empty()) emit_report(c, a.out);
    return ok;
}

inline int run_meta(const MetaArgs& a, std::ostream& out) {
    const auto records = parse_experiments(a.input);
    const auto m = meta_analyze(records, {a.p_theory, a.chance});
    out << "meta-analysis\n";
    row(out, "experiments", std::to_string(m.experiments));
    row(out, "total trials", std::to_string(m.total_trials));
    row(out, "pooled hit rate", fixed9(m.pooled_rate));
    row(out, "se (binomial)", fixed9(m.se_rate));
    row(out, "fidelity", fixed9(m.fidelity));
    row(out, "benchmark", fixed9(m.benchmark));
    row(out, "df (literal formula)", fixed9(m.df_literal));
    row(out, "z (literal formula)", opt(m.z_literal, 4));
    row(out, "df (delta method)", opt(m.df_delta));
    row(out, "z (delta method)", opt(m.z_delta, 4));
    if (!a.out.empty()) emit_report(m, a.out, {digest_file(a.input)});
    return ok;
}

inline int run_simulate(const SimulateArgs& a, std::ostream& out) {
    if (!a.seed) throw validation_error("simulate requires --seed");
    if (a.mode == "classical") {
        if (a.ensemble.empty()) throw validation_error("classical simulation requires --ensemble");
        const auto ensemble = parse_ensemble(a.ensemble);
        std::optional<Partitioning> partition;
        if (!a.partition.empty()) {
            partition = Partitioning::parse(a.partition, ensemble.size());
        } else {
            partition = exact_threshold(ensemble, a.cbits).exact_partition;
        }
        const auto strategy = strategy_from_partition(ensemble, *partition, a.cbits);
        const auto r = simulate_classical_rsp(ensemble, strategy, a.trials.value_or(100000), *a.seed);
        out << "classical RSP simulation\n";
        row(out, "partition", partition->to_string());
        row(out, "strategy", r.strategy_summary);
        row(out, "trials", std::to_string(r.trials));
        row(out, "seed", std::to_string(r.seed));
        row(out, "mean fidelity", fixed9(r.mean_fidelity));
        row(out, "std error", fixed9(r.std_error));
        row(out, "analytic fidelity", fixed9(expected_fidelity(ensemble, strategy)));
        if (!a.out.empty()) emit_report(r, a.out, {digest_file(a.ensemble)});
        return ok;
    }
    // rspmi
    const double p = rate_to_probability(a.hit_prob, parse_unit(a.rate_unit));
    std::vector<std::uint64_t> trials = a.trials_list;
    if (trials.empty()) {
        if (a.experiments < 1) throw validation_error("--experiments must be >= 1");
        trials.assign(a.experiments, a.trials.value_or(38));
    }
    const auto records = simulate_rspmi_experiments(p, trials, *a.seed);
    const auto csv = experiments_to_csv(records);
    if (a.out.empty()) {
        out << csv;
    } else {
        write_text_file(a.out, csv);
        std::uint64_t total = 0, hits = 0;
        for (const auto& r : records) {
            total += r.trials;
            hits += r.hits;
        }
        out << "synthetic RSPMI experiments\n";
        row(out, "experiments", std::to_string(records.size()));
        row(out, "total trials", std::to_string(total));
        row(out, "total hits", std::to_string(hits));
        row(out, "written to", a.out);
    }
    return ok;
}

} // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"rspbench: classical fidelity benchmarks for remote state preparation"};
    app.name("rspbench");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "Print extra diagnostics");

    detail::ThresholdArgs ta;
    auto* threshold = app.add_subcommand("threshold", "Optimal classical average fidelity of an ensemble");
    threshold->add_option("--ensemble", ta.ensemble, "Ensemble JSON file")->required();
    threshold->add_option("--cbits", ta.cbits, "Classical bits per round")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    threshold->add_option("--method", ta.method, "exact | upper | both")
        ->check(CLI::IsMember({"exact", "upper", "both"}))->capture_default_str();
    threshold->add_option("--jobs", ta.jobs, "Worker threads for the partition scan (0 = all cores)")
        ->capture_default_str();
    threshold->add_option("--out", ta.out, "Write a JSON report here");

    detail::FidelityArgs fa;
    auto* fidelity = app.add_subcommand("fidelity", "Binary hit/miss fidelity for one hit rate");
    fidelity->add_option("--rate", fa.rate, "Observed hit rate")->required();
    fidelity->add_option("--rate-unit", fa.rate_unit, "fraction | percent")
        ->check(CLI::IsMember({"fraction", "percent"}))->capture_default_str();
    fidelity->add_option("--p-theory", fa.p_theory, "Ideal-channel hit probability")->capture_default_str();
    fidelity->add_option("--chance", fa.chance, "Chance hit probability (1/n)")->capture_default_str();
    fidelity->add_option("--se", fa.se, "Standard error of the hit rate");
    fidelity->add_option("--df", fa.df, "Externally quoted fidelity uncertainty");
    fidelity->add_option("--out", fa.out, "Write a JSON report here");

    detail::MetaArgs ma;
    auto* meta = app.add_subcommand("meta", "Pool an experiment table and compare with the benchmark");
    meta->add_option("--input", ma.input, "CSV table with header label,trials,hits")->required();
    meta->add_option("--p-theory", ma.p_theory, "Ideal-channel hit probability")->capture_default_str();
    meta->add_option("--chance", ma.chance, "Chance hit probability (1/n)")->capture_default_str();
    meta->add_option("--out", ma.out, "Write a JSON report here");

    detail::SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation");
    simulate->add_option("--mode", sa.mode, "classical | rspmi")
        ->required()->check(CLI::IsMember({"classical", "rspmi"}));
    simulate->add_option("--seed", sa.seed, "64-bit seed")->required();
    simulate->add_option("--out", sa.out, "Report (classical) or CSV table (rspmi) path");
    simulate->add_option("--ensemble", sa.ensemble, "Ensemble JSON file (classical)");
    simulate->add_option("--cbits", sa.cbits, "Classical bits (classical)")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    simulate->add_option("--trials", sa.trials, "Trials (classical, default 100000) or trials per experiment (rspmi, default 38)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--partition", sa.partition, "Partition such as 0,2|1,3 (default: optimal)");
    simulate->add_option("--hit-prob", sa.hit_prob, "Per-trial hit probability (rspmi)")->capture_default_str();
    simulate->add_option("--rate-unit", sa.rate_unit, "Unit of --hit-prob: fraction | percent")
        ->check(CLI::IsMember({"fraction", "percent"}))->capture_default_str();
    simulate->add_option("--experiments", sa.experiments, "Number of experiments (rspmi)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--trials-list", sa.trials_list, "Per-experiment trial counts (rspmi)")
        ->delimiter(',');

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << version << "\n";
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "rspbench: " << e.what() << "\n";
        return validation;
    }

    try {
        if (threshold->parsed()) return detail::run_threshold(ta, out);
        if (fidelity->parsed()) return detail::run_fidelity(fa, out);
        if (meta->parsed()) return detail::run_meta(ma, out);
        return detail::run_simulate(sa, out);
    } catch (const combinatorial_error& e) {
        err << "rspbench: " << e.what() << "\n";
        if (threshold->parsed()) err << "rspbench: try --method upper for a bound only\n";
        return combinatorial;
    } catch (const io_error& e) {
        err << "rspbench: " << e.what() << "\n";
        return io;
    } catch (const validation_error& e) {
        err << "rspbench: " << e.what() << "\n";
        return validation;
    } catch (const std::exception& e) {
        err << "rspbench: internal error: " << e.what() << "\n";
        if (verbosity > 0) err << "rspbench: please report this with the input files\n";
        return internal;
    }
}

} // namespace rspbench::cli
