#pragma once

#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tightspan/balance.hpp"

namespace tightspan {

/// One row of solver output. Fields are optional because the three modes
/// populate different subsets; makespan <= certified_bound is re-checked
/// exactly at emission time.
struct SolveReport {
    std::string instance_id;
    std::string mode;  // general | restricted | oracle
    int m = 0;
    int n = 0;
    std::optional<Rational> epsilon;
    std::optional<Rational> avg_load;          // L
    std::optional<Time> threshold;             // T, general mode
    std::optional<Time> result_makespan;
    std::optional<Rational> certified_bound;
    std::optional<BoundKind> bound_kind;
    std::optional<Rational> q;                 // restricted mode
    std::optional<Rational> ratio_vs_opt;      // only when the oracle ran
    std::optional<bool> beats_33_17;
    long moves = 0;
    long pivots = 0;
    long nodes = 0;
    double wall_ms = 0;
    std::string error;

    bool bound_violated() const {
        return result_makespan && certified_bound && Rational(*result_makespan) > *certified_bound;
    }
};

inline const char* kCsvHeader =
    "instance,mode,m,n,epsilon,L,T,makespan,certified_bound,bound_kind,q,ratio_vs_opt,"
    "beats_33_17,moves,pivots,nodes,wall_ms,error";

namespace detail {

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

template <typename T>
std::string opt_str(const std::optional<T>& value) {
    if (!value) return "";
    if constexpr (std::is_same_v<T, Rational>)
        return value->str();
    else if constexpr (std::is_same_v<T, bool>)
        return *value ? "true" : "false";
    else if constexpr (std::is_same_v<T, BoundKind>)
        return bound_kind_name(*value);
    else
        return std::to_string(*value);
}

}  // namespace detail

inline std::string csv_row(const SolveReport& r) {
    std::ostringstream out;
    out << detail::csv_escape(r.instance_id) << ',' << r.mode << ',' << r.m << ',' << r.n << ','
        << detail::opt_str(r.epsilon) << ',' << detail::opt_str(r.avg_load) << ','
        << detail::opt_str(r.threshold) << ',' << detail::opt_str(r.result_makespan) << ','
        << detail::opt_str(r.certified_bound) << ',' << detail::opt_str(r.bound_kind) << ','
        << detail::opt_str(r.q) << ',' << detail::opt_str(r.ratio_vs_opt) << ','
        << detail::opt_str(r.beats_33_17) << ',' << r.moves << ',' << r.pivots << ',' << r.nodes << ','
        << r.wall_ms << ',' << detail::csv_escape(r.error);
    return out.str();
}

inline nlohmann::json report_json(const SolveReport& r) {
    nlohmann::json doc;
    doc["instance"] = r.instance_id;
    doc["mode"] = r.mode;
    doc["m"] = r.m;
    doc["n"] = r.n;
    auto put_rational = [&](const char* key, const std::optional<Rational>& v) {
        if (v) doc[key] = v->str();
    };
    put_rational("epsilon", r.epsilon);
    put_rational("L", r.avg_load);
    if (r.threshold) doc["T"] = *r.threshold;
    if (r.result_makespan) doc["makespan"] = *r.result_makespan;
    put_rational("certified_bound", r.certified_bound);
    if (r.bound_kind) doc["bound_kind"] = bound_kind_name(*r.bound_kind);
    put_rational("q", r.q);
    put_rational("ratio_vs_opt", r.ratio_vs_opt);
    if (r.beats_33_17) doc["beats_33_17"] = *r.beats_33_17;
    doc["moves"] = r.moves;
    doc["pivots"] = r.pivots;
    doc["nodes"] = r.nodes;
    doc["wall_ms"] = r.wall_ms;
    if (!r.error.empty()) doc["error"] = r.error;
    return doc;
}

}  // namespace tightspan
