#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tightspan/core.hpp"

namespace tightspan {

/// Instance files are JSON objects {"m": int, "n": int, "p": [[int|null] x m] x n}
/// with null marking an infeasible pair. Assignment files are JSON arrays of
/// 1-based machine indices, one per job.

inline Instance parse_instance(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("instance", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("instance", "expected a JSON object");
    if (!doc.contains("m") || !doc["m"].is_number_integer())
        throw ParseError("m", "expected an integer machine count");
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw ParseError("n", "expected an integer job count");
    auto m = doc["m"].get<std::int64_t>();
    auto n = doc["n"].get<std::int64_t>();
    if (m < 1 || m > 100000) throw ParseError("m", "machine count out of range");
    if (n < 0 || n > 1000000) throw ParseError("n", "job count out of range");
    if (!doc.contains("p") || !doc["p"].is_array())
        throw ParseError("p", "expected an array of job rows");
    if (static_cast<std::int64_t>(doc["p"].size()) != n)
        throw ParseError("p", "expected " + std::to_string(n) + " rows, found " + std::to_string(doc["p"].size()));
    Instance inst(static_cast<int>(m), static_cast<int>(n));
    for (int j = 0; j < n; ++j) {
        const auto& row = doc["p"][j];
        std::string where = "p[" + std::to_string(j) + "]";
        if (!row.is_array() || static_cast<std::int64_t>(row.size()) != m)
            throw ParseError(where, "expected a row of " + std::to_string(m) + " entries");
        bool any = false;
        for (int i = 0; i < m; ++i) {
            const auto& cell = row[i];
            std::string cell_where = where + "[" + std::to_string(i) + "]";
            if (cell.is_null()) continue;
            if (!cell.is_number_integer()) throw ParseError(cell_where, "expected an integer or null");
            auto t = cell.get<std::int64_t>();
            if (t < 1 || t > kMaxProcTime)
                throw ParseError(cell_where, "processing time must be in [1, " + std::to_string(kMaxProcTime) + "]");
            inst.at(j, i) = t;
            any = true;
        }
        if (!any) throw ParseError(where, "job has no feasible machine");
    }
    return inst;
}

inline std::string write_instance(const Instance& inst) {
    nlohmann::json doc;
    doc["m"] = inst.machines();
    doc["n"] = inst.jobs();
    nlohmann::json rows = nlohmann::json::array();
    for (int j = 0; j < inst.jobs(); ++j) {
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < inst.machines(); ++i) {
            if (inst.finite(j, i))
                row.push_back(inst.at(j, i));
            else
                row.push_back(nullptr);
        }
        rows.push_back(std::move(row));
    }
    doc["p"] = std::move(rows);
    return doc.dump();
}

inline Assignment parse_assignment(const std::string& text, const Instance& inst) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("assignment", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("assignment", "expected a JSON array of machine indices");
    if (static_cast<int>(doc.size()) != inst.jobs())
        throw ParseError("assignment", "expected " + std::to_string(inst.jobs()) + " entries, found " +
                                           std::to_string(doc.size()));
    Assignment a(inst.jobs());
    for (int j = 0; j < inst.jobs(); ++j) {
        std::string where = "assignment[" + std::to_string(j) + "]";
        if (!doc[j].is_number_integer()) throw ParseError(where, "expected an integer machine index");
        auto machine = doc[j].get<std::int64_t>();  // 1-based on disk
        if (machine < 1 || machine > inst.machines()) throw ParseError(where, "machine index out of range");
        a[j] = static_cast<int>(machine - 1);
    }
    return a;
}

inline std::string write_assignment(const Assignment& a) {
    nlohmann::json doc = nlohmann::json::array();
    for (int j = 0; j < a.size(); ++j) doc.push_back(a[j] + 1);
    return doc.dump();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

}  // namespace tightspan
