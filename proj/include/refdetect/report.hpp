#pragma once

// Output records and their serializations. All formatting here is fixed so
// identical inputs always serialize to identical bytes; wall-clock timing is
// opt-in because it is the one inherently non-reproducible column.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "refdetect/eval.hpp"

namespace refdetect {

struct DetectionRecord {
    std::string label; // commit hash or directory pair label
    RelationshipType type;
    std::string before;
    std::string after;
    double similarity = 0.0;
    long elapsed_ms = 0; // per revision pair, same value on all its records
};

inline std::string format_similarity(double s) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

// Full analysis of one loaded revision pair; elapsed covers parsing through
// relationship analysis.
struct PairAnalysis {
    ParsedPair parsed;
    DetectionResult result;
    long elapsed_ms = 0;

    std::vector<DetectionRecord> records() const {
        std::vector<DetectionRecord> out;
        for (const auto& r : result.refactorings)
            out.push_back(DetectionRecord{parsed.label, r.type,
                                          r.before.descriptor(),
                                          r.after.descriptor(), r.similarity,
                                          elapsed_ms});
        return out;
    }
};

inline PairAnalysis analyze_pair(const RevisionPair& rp,
                                 const ThresholdConfig& config,
                                 std::vector<OracleEntry> oracle = {}) {
    auto t0 = std::chrono::steady_clock::now();
    PairAnalysis pa;
    pa.parsed = parse_pair(rp, std::move(oracle));
    pa.result = detect(pa.parsed.before, pa.parsed.after, config);
    auto t1 = std::chrono::steady_clock::now();
    pa.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return pa;
}

// ---- CSV ----

inline std::string records_csv_header(bool timings) {
    return timings ? "label,type,before,after,similarity,elapsed_ms"
                   : "label,type,before,after,similarity";
}

inline std::string record_to_csv(const DetectionRecord& r, bool timings) {
    std::ostringstream os;
    os << detail::csv_escape(r.label) << ',' << to_string(r.type) << ','
       << detail::csv_escape(r.before) << ',' << detail::csv_escape(r.after)
       << ',' << format_similarity(r.similarity);
    if (timings) os << ',' << r.elapsed_ms;
    return os.str();
}

// ---- JSON ----

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    return out;
}

} // namespace detail

inline std::string records_to_json(const std::vector<DetectionRecord>& records,
                                   bool timings) {
    std::ostringstream os;
    os << "[\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        os << "  {\"label\":\"" << detail::json_escape(r.label)
           << "\",\"type\":\"" << to_string(r.type) << "\",\"before\":\""
           << detail::json_escape(r.before) << "\",\"after\":\""
           << detail::json_escape(r.after)
           << "\",\"similarity\":" << format_similarity(r.similarity);
        if (timings) os << ",\"elapsed_ms\":" << r.elapsed_ms;
        os << "}";
        if (i + 1 < records.size()) os << ",";
        os << "\n";
    }
    os << "]\n";
    return os.str();
}

// ---- text tables ----

inline std::string format_ratio(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return buf;
}

inline std::string render_eval_report(const EvalReport& rep) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-18s %6s %6s %6s %10s %8s\n",
                  "relationship", "tp", "fp", "fn", "precision", "recall");
    os << line;
    auto row = [&](const std::string& name, const TypeCounts& c) {
        std::snprintf(line, sizeof line, "%-18s %6d %6d %6d %10s %8s\n",
                      name.c_str(), c.tp, c.fp, c.fn,
                      format_ratio(precision(c)).c_str(),
                      format_ratio(recall(c)).c_str());
        os << line;
    };
    for (RelationshipType t : reportable_types()) {
        auto it = rep.per_type.find(t);
        if (it == rep.per_type.end()) continue;
        const TypeCounts& c = it->second;
        if (c.tp == 0 && c.fp == 0 && c.fn == 0) continue;
        row(to_string(t), c);
    }
    row("overall", rep.overall());
    return os.str();
}

inline std::string render_calibration_table(const CalibrationResult& cal) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-18s %4s %6s %6s %6s %6s %10s %8s\n",
                  "relationship", "#", "tau", "tp", "fp", "fn", "precision",
                  "recall");
    os << line;
    for (const auto& r : cal.rows) {
        std::snprintf(line, sizeof line,
                      "%-18s %4d %6.3f %6d %6d %6d %10s %8s\n",
                      to_string(r.type), r.oracle_entries, r.tau, r.counts.tp,
                      r.counts.fp, r.counts.fn,
                      format_ratio(precision(r.counts)).c_str(),
                      format_ratio(recall(r.counts)).c_str());
        os << line;
    }
    return os.str();
}

} // namespace refdetect
