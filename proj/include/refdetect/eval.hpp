#pragma once

// Precision/recall evaluation against an oracle of known refactorings, and
// F1-driven threshold calibration over a corpus of revision pairs.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "refdetect/engine.hpp"
#include "refdetect/parser.hpp"
#include "refdetect/relationships.hpp"
#include "refdetect/repo_io.hpp"

namespace refdetect {

// ---- CSV ----

struct MalformedOracle : Error {
    int line;
    MalformedOracle(const std::string& origin, int l, const std::string& why)
        : Error(origin + ":" + std::to_string(l) + ": " + why), line(l) {}
};

namespace detail {

// Minimal RFC-4180 reader: quoted fields, doubled quotes, embedded commas.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; any = true; break;
            case ',': row.push_back(field); field.clear(); any = true; break;
            case '\r': break;
            case '\n':
                if (any || !field.empty()) {
                    row.push_back(field);
                    rows.push_back(row);
                }
                row.clear();
                field.clear();
                any = false;
                break;
            default: field.push_back(c); any = true; break;
        }
    }
    if (any || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

} // namespace detail

// ---- oracle ----

// Entries whose type column names something this engine does not support
// still load (type stays unset) and are excluded from fn counting.
struct OracleEntry {
    std::string type_name;
    std::optional<RelationshipType> type;
    std::string before;
    std::string after;
};

// whitespace-insensitive descriptor key; lenient drops a method's parameter
// list so oracles with approximate signatures can still match
inline std::string canonical_descriptor(const std::string& s, bool lenient) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (c != ' ' && c != '\t') out.push_back(c);
    if (lenient) {
        auto p = out.find('(');
        if (p != std::string::npos) out.erase(p);
    }
    return out;
}

inline std::vector<OracleEntry> load_oracle(const std::string& text,
                                            const std::string& origin) {
    auto rows = detail::parse_csv(text);
    if (rows.empty()) throw MalformedOracle(origin, 1, "empty oracle file");

    const auto& header = rows[0];
    int ti = -1, bi = -1, ai = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string h = canonical_descriptor(header[i], false);
        if (h == "type") ti = static_cast<int>(i);
        else if (h == "before") bi = static_cast<int>(i);
        else if (h == "after") ai = static_cast<int>(i);
    }
    if (ti < 0 || bi < 0 || ai < 0)
        throw MalformedOracle(origin, 1,
                              "header must contain type,before,after columns");

    std::vector<OracleEntry> out;
    int need = std::max({ti, bi, ai}) + 1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;
        if (static_cast<int>(row.size()) < need)
            throw MalformedOracle(origin, static_cast<int>(r + 1),
                                  "row has too few columns");
        OracleEntry e;
        e.type_name = canonical_descriptor(row[ti], false);
        e.type = relationship_type_from_string(e.type_name);
        if (e.type && is_same_relationship(*e.type))
            e.type = std::nullopt; // Same* is never reported, never scored
        e.before = canonical_descriptor(row[bi], false);
        e.after = canonical_descriptor(row[ai], false);
        if (e.type_name.empty() || e.before.empty() || e.after.empty())
            throw MalformedOracle(origin, static_cast<int>(r + 1),
                                  "empty type/before/after field");
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<OracleEntry> load_oracle_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read oracle: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_oracle(ss.str(), path);
}

// ---- counts and scores ----

struct TypeCounts {
    int tp = 0, fp = 0, fn = 0;

    TypeCounts& operator+=(const TypeCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

inline std::optional<double> precision(const TypeCounts& c) {
    if (c.tp + c.fp == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

inline std::optional<double> recall(const TypeCounts& c) {
    if (c.tp + c.fn == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

inline double f1(double p, double r) {
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

inline double f1(const TypeCounts& c) {
    auto p = precision(c), r = recall(c);
    return f1(p.value_or(0.0), r.value_or(0.0));
}

struct EvalReport {
    std::map<RelationshipType, TypeCounts> per_type;

    TypeCounts overall() const {
        TypeCounts t;
        for (const auto& [k, v] : per_type) t += v;
        return t;
    }
};

// Set comparison of found relationships against the oracle. Oracle entries
// of unsupported types never count as misses; a found relationship of a
// supported type absent from the oracle is a false positive.
inline EvalReport evaluate(const std::vector<Relationship>& found,
                           const std::vector<OracleEntry>& oracle,
                           const std::set<RelationshipType>& supported,
                           bool lenient_methods = false) {
    using Key = std::tuple<RelationshipType, std::string, std::string>;
    std::set<Key> found_keys, oracle_keys;

    for (const auto& r : found) {
        if (is_same_relationship(r.type) || !supported.count(r.type)) continue;
        found_keys.insert(
            {r.type,
             canonical_descriptor(r.before.descriptor(), lenient_methods),
             canonical_descriptor(r.after.descriptor(), lenient_methods)});
    }
    for (const auto& e : oracle) {
        if (!e.type || !supported.count(*e.type)) continue;
        oracle_keys.insert({*e.type,
                            canonical_descriptor(e.before, lenient_methods),
                            canonical_descriptor(e.after, lenient_methods)});
    }

    EvalReport rep;
    for (RelationshipType t : supported) rep.per_type[t]; // ensure rows
    for (const auto& k : found_keys) {
        auto& c = rep.per_type[std::get<0>(k)];
        if (oracle_keys.count(k)) ++c.tp;
        else ++c.fp;
    }
    for (const auto& k : oracle_keys)
        if (!found_keys.count(k)) ++rep.per_type[std::get<0>(k)].fn;
    return rep;
}

inline std::set<RelationshipType> supported_types() {
    std::set<RelationshipType> s;
    for (RelationshipType t : reportable_types()) s.insert(t);
    return s;
}

// ---- corpus handling ----

// A revision pair parsed once so threshold sweeps can re-run detection
// without re-reading or re-parsing anything.
struct ParsedPair {
    std::string label;
    CodeModel before{""};
    CodeModel after{""};
    std::vector<ParseError> errors;
    std::vector<OracleEntry> oracle;
};

inline ParsedPair parse_pair(const RevisionPair& rp,
                             std::vector<OracleEntry> oracle = {}) {
    ParsedPair p;
    p.label = rp.label;
    auto b = parse_source_set(rp.before_files, rp.label + ":before");
    auto a = parse_source_set(rp.after_files, rp.label + ":after");
    p.errors = b.errors;
    p.errors.insert(p.errors.end(), a.errors.begin(), a.errors.end());
    apply_field_virtual_bodies(b.model);
    apply_field_virtual_bodies(a.model);
    p.before = std::move(b.model);
    p.after = std::move(a.model);
    p.oracle = std::move(oracle);
    return p;
}

// ---- calibration ----

struct UncoveredType : Error {
    RelationshipType type;
    explicit UncoveredType(RelationshipType t)
        : Error(std::string("oracle has no entry of calibratable type ") +
                to_string(t)),
          type(t) {}
};

struct SweepPoint {
    double tau = 0.0;
    TypeCounts counts;
};

inline std::vector<double> default_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
    return g;
}

// Sweeps one type's threshold over the grid with every other type held at
// `fixed`; counts are restricted to the swept type.
inline std::vector<SweepPoint> sweep_thresholds(
    RelationshipType type, const std::vector<ParsedPair>& corpus,
    const std::vector<double>& grid, const ThresholdConfig& fixed) {
    std::vector<SweepPoint> out;
    for (double tau : grid) {
        ThresholdConfig cfg = fixed;
        cfg.set(type, tau);
        TypeCounts counts;
        for (const auto& pair : corpus) {
            DetectionResult r = detect(pair.before, pair.after, cfg);
            std::vector<Relationship> of_type;
            for (const auto& rel : r.refactorings)
                if (rel.type == type) of_type.push_back(rel);
            EvalReport rep = evaluate(of_type, pair.oracle, {type});
            counts += rep.per_type[type];
        }
        out.push_back(SweepPoint{tau, counts});
    }
    return out;
}

struct CalibrationRow {
    RelationshipType type;
    int oracle_entries = 0;
    double tau = 0.0;
    TypeCounts counts;
};

struct CalibrationResult {
    ThresholdConfig config;
    std::vector<CalibrationRow> rows; // in calibration (detection) order
};

// Calibrates every reportable type in detection order: earlier types keep
// their freshly calibrated tau while later ones are swept. Ties on F1 go to
// the lowest tau.
inline CalibrationResult calibrate_all(const std::vector<ParsedPair>& corpus,
                                       const std::vector<double>& grid,
                                       ThresholdConfig base =
                                           ThresholdConfig::defaults()) {
    if (grid.empty()) throw Error("calibration grid is empty");
    CalibrationResult result;
    ThresholdConfig fixed = base;
    for (RelationshipType type : reportable_types()) {
        int entries = 0;
        for (const auto& pair : corpus)
            for (const auto& e : pair.oracle)
                if (e.type && *e.type == type) ++entries;
        if (entries == 0) throw UncoveredType(type);

        auto points = sweep_thresholds(type, corpus, grid, fixed);
        const SweepPoint* best = &points.front();
        for (const auto& p : points)
            if (f1(p.counts) > f1(best->counts)) best = &p; // ties keep lowest
        fixed.set(type, best->tau);
        result.rows.push_back(
            CalibrationRow{type, entries, best->tau, best->counts});
    }
    result.config = fixed;
    return result;
}

} // namespace refdetect
