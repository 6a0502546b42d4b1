// io.hpp
// Ensemble files (JSON), experiment tables (CSV) and JSON reports.
//
// Ensemble file:
//
//     {
//       "dim": 2,
//       "states": [ [[1, 0], [0, 0]], [[0.70710678, 0], [0.70710678, 0]] ],
//       "probabilities": [0.5, 0.5]          // optional, default uniform
//     }
//
// Each amplitude is a [re, im] pair. Experiment tables are comma-separated
// with the header `label,trials,hits`; blank lines and lines starting with
// '#' are ignored and labels may not contain commas.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rspbench/benchmark.hpp"
#include "rspbench/ensemble.hpp"
#include "rspbench/errors.hpp"
#include "rspbench/simulate.hpp"
#include "rspbench/stats.hpp"
#include "rspbench/version.hpp"

namespace rspbench {

using json = nlohmann::json;

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("failed reading '" + path + "'");
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw io_error("failed writing '" + path + "'");
}

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct InputDigest {
    std::string path;
    std::string fnv1a64;
};

inline InputDigest digest_file(const std::string& path) {
    return {path, fnv1a64(read_text_file(path))};
}

/// Round to 9 significant digits.
inline double round9(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::strtod(buf, nullptr);
}

// ---------------------------------------------------------------- ensembles

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

[[noreturn]] inline void field_error(const std::string& source, const std::string& path,
                                     const std::string& message) {
    throw parse_error(source, 0, 0, path + ": " + message);
}

inline double json_real(const json& v, const std::string& source, const std::string& path) {
    if (!v.is_number()) field_error(source, path, "expected a number");
    return v.get<double>();
}

} // namespace detail

inline TargetEnsemble parse_ensemble_text(const std::string& text,
                                          const std::string& source = "<ensemble>") {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] =
            detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw parse_error(source, line, col, "malformed JSON");
    }
    if (!doc.is_object()) detail::field_error(source, "$", "expected an object");
    if (!doc.contains("dim")) detail::field_error(source, "dim", "missing");
    if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 2) {
        detail::field_error(source, "dim", "expected an integer >= 2");
    }
    const auto dim = static_cast<std::size_t>(doc["dim"].get<long long>());
    if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty()) {
        detail::field_error(source, "states", "expected a nonempty array of states");
    }

    std::vector<PureState> states;
    const auto& arr = doc["states"];
    for (std::size_t s = 0; s < arr.size(); ++s) {
        const std::string spath = "states[" + std::to_string(s) + "]";
        if (!arr[s].is_array()) detail::field_error(source, spath, "expected an amplitude list");
        if (arr[s].size() != dim) {
            throw dimension_error(source + ": " + spath + ": has " +
                                  std::to_string(arr[s].size()) + " amplitudes, dim is " +
                                  std::to_string(dim));
        }
        std::vector<complex> amps;
        for (std::size_t i = 0; i < dim; ++i) {
            const std::string apath = spath + "[" + std::to_string(i) + "]";
            const auto& a = arr[s][i];
            if (!a.is_array() || a.size() != 2) {
                detail::field_error(source, apath, "expected a [re, im] pair");
            }
            amps.emplace_back(detail::json_real(a[0], source, apath + "[0]"),
                              detail::json_real(a[1], source, apath + "[1]"));
        }
        try {
            states.emplace_back(std::move(amps));
        } catch (const normalization_error& e) {
            throw normalization_error(source + ": " + spath + ": " + e.what());
        }
    }

    std::vector<double> probs;
    if (doc.contains("probabilities") && !doc["probabilities"].is_null()) {
        const auto& p = doc["probabilities"];
        if (!p.is_array()) detail::field_error(source, "probabilities", "expected an array");
        if (p.size() != states.size()) {
            throw dimension_error(source + ": probabilities: " + std::to_string(p.size()) +
                                  " entries for " + std::to_string(states.size()) + " states");
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            probs.push_back(
                detail::json_real(p[i], source, "probabilities[" + std::to_string(i) + "]"));
        }
    }
    try {
        return TargetEnsemble(std::move(states), std::move(probs));
    } catch (const probability_error& e) {
        throw probability_error(source + ": probabilities: " + e.what());
    }
}

inline TargetEnsemble parse_ensemble(const std::string& path) {
    return parse_ensemble_text(read_text_file(path), path);
}

inline std::string ensemble_to_json(const TargetEnsemble& ensemble) {
    json states = json::array();
    for (const auto& s : ensemble.states()) {
        json amps = json::array();
        for (const auto& a : s.amplitudes()) amps.push_back({a.real(), a.imag()});
        states.push_back(std::move(amps));
    }
    json doc = {{"dim", ensemble.dim()}, {"states", std::move(states)}};
    if (!ensemble.is_uniform()) doc["probabilities"] = ensemble.probabilities();
    return doc.dump(2) + "\n";
}

// -------------------------------------------------------- experiment tables

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

inline std::optional<std::uint64_t> parse_count(std::string_view cell) {
    std::uint64_t v = 0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

} // namespace detail

inline std::vector<ExperimentRecord> parse_experiments_text(const std::string& text,
                                                            const std::string& source = "<experiments>") {
    std::string_view rest(text);
    if (rest.starts_with("\xEF\xBB\xBF")) rest.remove_prefix(3);

    std::vector<ExperimentRecord> records;
    bool have_header = false;
    std::size_t line_no = 0;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        const std::string_view raw = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;

        const auto cells = detail::split_commas(line);
        if (!have_header) {
            if (cells.size() != 3 || cells[0] != "label" || cells[1] != "trials" ||
                cells[2] != "hits") {
                throw parse_error(source, line_no, 0, "missing header 'label,trials,hits'");
            }
            have_header = true;
            continue;
        }
        const std::size_t row = records.size() + 1;
        auto fail = [&](const std::string& message) {
            throw parse_error(source, line_no, 0, "row " + std::to_string(row) + ": " + message);
        };
        if (cells.size() != 3) fail("expected 3 fields, got " + std::to_string(cells.size()));
        if (cells[0].empty()) fail("empty label");
        const auto trials = detail::parse_count(cells[1]);
        const auto hits = detail::parse_count(cells[2]);
        if (!trials) fail("trials '" + std::string(cells[1]) + "' is not a nonnegative integer");
        if (!hits) fail("hits '" + std::string(cells[2]) + "' is not a nonnegative integer");
        if (*trials == 0) fail("trials must be positive");
        if (*hits > *trials) {
            fail("hits (" + std::to_string(*hits) + ") exceed trials (" +
                 std::to_string(*trials) + ")");
        }
        records.push_back({std::string(cells[0]), *trials, *hits});
    }
    if (!have_header) throw parse_error(source, 0, 0, "missing header 'label,trials,hits'");
    return records;
}

inline std::vector<ExperimentRecord> parse_experiments(const std::string& path) {
    return parse_experiments_text(read_text_file(path), path);
}

inline std::string experiments_to_csv(std::span<const ExperimentRecord> records) {
    std::string out = "label,trials,hits\n";
    for (const auto& r : records) {
        r.validate();
        if (r.label.empty() || r.label.find_first_of(",\n\r") != std::string::npos ||
            r.label.front() == '#') {
            throw validation_error("label '" + r.label + "' cannot be written to CSV");
        }
        out += r.label + "," + std::to_string(r.trials) + "," + std::to_string(r.hits) + "\n";
    }
    return out;
}

// ------------------------------------------------------------------ reports

namespace detail {

inline json real_or_null(const std::optional<double>& v) {
    return v ? json(round9(*v)) : json(nullptr);
}

inline std::optional<double> optional_real(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace detail

inline json to_json(const ThresholdResult& r) {
    json sizes = json::array();
    for (const auto& [s, v] : r.per_size_max) sizes.push_back({{"size", s}, {"value", round9(v)}});
    return {
        {"n", r.n},
        {"cbits", r.cbits},
        {"exact", detail::real_or_null(r.exact)},
        {"exact_partition", r.exact_partition ? json(r.exact_partition->to_string()) : json(nullptr)},
        {"upper_bound", round9(r.upper_bound)},
        {"per_size_max", std::move(sizes)},
        {"partitions_scanned", r.partitions_scanned},
    };
}

inline json to_json(const MetaResult& m) {
    return {
        {"experiments", m.experiments},
        {"total_trials", m.total_trials},
        {"p_theory", round9(m.params.p_theory)},
        {"chance", round9(m.params.chance)},
        {"pooled_rate", round9(m.pooled_rate)},
        {"se_rate", round9(m.se_rate)},
        {"fidelity", round9(m.fidelity)},
        {"benchmark", round9(m.benchmark)},
        {"df_literal", round9(m.df_literal)},
        {"df_delta", detail::real_or_null(m.df_delta)},
        {"z_literal", detail::real_or_null(m.z_literal)},
        {"z_delta", detail::real_or_null(m.z_delta)},
    };
}

inline json to_json(const SimulationReport& s) {
    return {
        {"trials", s.trials},
        {"mean_fidelity", round9(s.mean_fidelity)},
        {"std_error", round9(s.std_error)},
        {"seed", s.seed},
        {"strategy_summary", s.strategy_summary},
    };
}

inline json to_json(const FidelityCheck& c) {
    return {
        {"p_theory", round9(c.params.p_theory)},
        {"chance", round9(c.params.chance)},
        {"rate", round9(c.rate)},
        {"fidelity", round9(c.fidelity)},
        {"benchmark", round9(c.benchmark)},
        {"se", detail::real_or_null(c.se)},
        {"df_literal", detail::real_or_null(c.df_literal)},
        {"df_delta", detail::real_or_null(c.df_delta)},
        {"df_given", detail::real_or_null(c.df_given)},
        {"z_literal", detail::real_or_null(c.z_literal)},
        {"z_delta", detail::real_or_null(c.z_delta)},
        {"z_given", detail::real_or_null(c.z_given)},
    };
}

template <typename T> struct report_kind;
template <> struct report_kind<ThresholdResult> { static constexpr const char* name = "threshold"; };
template <> struct report_kind<MetaResult> { static constexpr const char* name = "meta"; };
template <> struct report_kind<SimulationReport> { static constexpr const char* name = "simulation"; };
template <> struct report_kind<FidelityCheck> { static constexpr const char* name = "fidelity"; };

template <typename T>
std::string render_report(const T& result, const std::vector<InputDigest>& inputs = {}) {
    json in = json::array();
    for (const auto& d : inputs) in.push_back({{"path", d.path}, {"fnv1a64", d.fnv1a64}});
    json doc = {
        {"tool", "rspbench"},
        {"version", version},
        {"report", report_kind<T>::name},
        {"inputs", std::move(in)},
        {"result", to_json(result)},
    };
    return doc.dump(2) + "\n";
}

template <typename T>
void emit_report(const T& result, const std::string& path,
                 const std::vector<InputDigest>& inputs = {}) {
    write_text_file(path, render_report(result, inputs));
}

namespace detail {

inline json report_body(const std::string& text, const char* kind, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw parse_error(source, line, col, "malformed JSON");
    }
    if (!doc.is_object() || doc.value("report", "") != kind || !doc.contains("result")) {
        throw parse_error(source, 0, 0, std::string("not a ") + kind + " report");
    }
    return doc["result"];
}

} // namespace detail

inline ThresholdResult threshold_from_json(const json& j) {
    ThresholdResult r;
    r.n = j.at("n").get<std::size_t>();
    r.cbits = j.at("cbits").get<int>();
    r.exact = detail::optional_real(j, "exact");
    if (j.contains("exact_partition") && !j.at("exact_partition").is_null()) {
        r.exact_partition = Partitioning::parse(j.at("exact_partition").get<std::string>(), r.n);
    }
    r.upper_bound = j.at("upper_bound").get<double>();
    for (const auto& e : j.at("per_size_max")) {
        r.per_size_max[e.at("size").get<std::size_t>()] = e.at("value").get<double>();
    }
    r.partitions_scanned = j.at("partitions_scanned").get<std::uint64_t>();
    return r;
}

inline MetaResult meta_from_json(const json& j) {
    MetaResult m;
    m.experiments = j.at("experiments").get<std::size_t>();
    m.total_trials = j.at("total_trials").get<std::uint64_t>();
    m.params.p_theory = j.at("p_theory").get<double>();
    m.params.chance = j.at("chance").get<double>();
    m.pooled_rate = j.at("pooled_rate").get<double>();
    m.se_rate = j.at("se_rate").get<double>();
    m.fidelity = j.at("fidelity").get<double>();
    m.benchmark = j.at("benchmark").get<double>();
    m.df_literal = j.at("df_literal").get<double>();
    m.df_delta = detail::optional_real(j, "df_delta");
    m.z_literal = detail::optional_real(j, "z_literal");
    m.z_delta = detail::optional_real(j, "z_delta");
    return m;
}

inline SimulationReport simulation_from_json(const json& j) {
    SimulationReport s;
    s.trials = j.at("trials").get<std::uint64_t>();
    s.mean_fidelity = j.at("mean_fidelity").get<double>();
    s.std_error = j.at("std_error").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.strategy_summary = j.at("strategy_summary").get<std::string>();
    return s;
}

inline FidelityCheck fidelity_from_json(const json& j) {
    FidelityCheck c;
    c.params.p_theory = j.at("p_theory").get<double>();
    c.params.chance = j.at("chance").get<double>();
    c.rate = j.at("rate").get<double>();
    c.fidelity = j.at("fidelity").get<double>();
    c.benchmark = j.at("benchmark").get<double>();
    c.se = detail::optional_real(j, "se");
    c.df_literal = detail::optional_real(j, "df_literal");
    c.df_delta = detail::optional_real(j, "df_delta");
    c.df_given = detail::optional_real(j, "df_given");
    c.z_literal = detail::optional_real(j, "z_literal");
    c.z_delta = detail::optional_real(j, "z_delta");
    c.z_given = detail::optional_real(j, "z_given");
    return c;
}

/// Parses the "result" section of a report produced by render_report<T>.
template <typename T>
T parse_report_text(const std::string& text, const std::string& source = "<report>") {
    const json body = detail::report_body(text, report_kind<T>::name, source);
    try {
        if constexpr (std::is_same_v<T, ThresholdResult>) return threshold_from_json(body);
        else if constexpr (std::is_same_v<T, MetaResult>) return meta_from_json(body);
        else if constexpr (std::is_same_v<T, SimulationReport>) return simulation_from_json(body);
        else return fidelity_from_json(body);
    } catch (const json::exception& e) {
        throw parse_error(source, 0, 0, std::string("bad report field: ") + e.what());
    }
}

template <typename T>
T read_report(const std::string& path) {
    return parse_report_text<T>(read_text_file(path), path);
}

} // namespace rspbench
