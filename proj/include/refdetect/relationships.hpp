#pragma once

// Relationship vocabulary and per-type similarity thresholds.

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "refdetect/model.hpp"

namespace refdetect {

// Declaration order is detection order. Hierarchy-specific passes (pull up,
// push down) run before the general rename/move passes at the same
// granularity, otherwise the broader conditions would claim their pairs.
// Same* entries only ever feed the matching context; they are not reported.
enum class RelationshipType {
    SameType,
    MoveType,
    RenameType,
    MoveAndRenameType,
    SameMethod,
    PullUpMethod,
    PushDownMethod,
    RenameMethod,
    MoveMethod,
    SameField,
    PullUpField,
    PushDownField,
    MoveField,
    ExtractSupertype,
    ExtractMethod,
    InlineMethod,
};

inline const std::array<RelationshipType, 16>& all_relationship_types() {
    static const std::array<RelationshipType, 16> order = {
        RelationshipType::SameType,       RelationshipType::MoveType,
        RelationshipType::RenameType,     RelationshipType::MoveAndRenameType,
        RelationshipType::SameMethod,     RelationshipType::PullUpMethod,
        RelationshipType::PushDownMethod, RelationshipType::RenameMethod,
        RelationshipType::MoveMethod,     RelationshipType::SameField,
        RelationshipType::PullUpField,    RelationshipType::PushDownField,
        RelationshipType::MoveField,      RelationshipType::ExtractSupertype,
        RelationshipType::ExtractMethod,  RelationshipType::InlineMethod,
    };
    return order;
}

inline bool is_same_relationship(RelationshipType t) {
    return t == RelationshipType::SameType ||
           t == RelationshipType::SameMethod ||
           t == RelationshipType::SameField;
}

// matching relationships form a partial one-to-one mapping between the
// revisions; extract/inline/extract-supertype pairs may share endpoints
inline bool is_matching_relationship(RelationshipType t) {
    return t != RelationshipType::ExtractSupertype &&
           t != RelationshipType::ExtractMethod &&
           t != RelationshipType::InlineMethod;
}

inline const char* to_string(RelationshipType t) {
    switch (t) {
        case RelationshipType::SameType: return "SameType";
        case RelationshipType::MoveType: return "MoveType";
        case RelationshipType::RenameType: return "RenameType";
        case RelationshipType::MoveAndRenameType: return "MoveAndRenameType";
        case RelationshipType::SameMethod: return "SameMethod";
        case RelationshipType::PullUpMethod: return "PullUpMethod";
        case RelationshipType::PushDownMethod: return "PushDownMethod";
        case RelationshipType::RenameMethod: return "RenameMethod";
        case RelationshipType::MoveMethod: return "MoveMethod";
        case RelationshipType::SameField: return "SameField";
        case RelationshipType::PullUpField: return "PullUpField";
        case RelationshipType::PushDownField: return "PushDownField";
        case RelationshipType::MoveField: return "MoveField";
        case RelationshipType::ExtractSupertype: return "ExtractSupertype";
        case RelationshipType::ExtractMethod: return "ExtractMethod";
        case RelationshipType::InlineMethod: return "InlineMethod";
    }
    return "?";
}

inline std::optional<RelationshipType> relationship_type_from_string(
    const std::string& s) {
    for (RelationshipType t : all_relationship_types())
        if (s == to_string(t)) return t;
    return std::nullopt;
}

// the 13 reportable refactoring types, in detection order
inline std::vector<RelationshipType> reportable_types() {
    std::vector<RelationshipType> out;
    for (RelationshipType t : all_relationship_types())
        if (!is_same_relationship(t)) out.push_back(t);
    return out;
}

struct Relationship {
    RelationshipType type;
    EntityId before;
    EntityId after;
    double similarity = 0.0; // 1.0 for Same* matches
};

// Per-type similarity thresholds tau. A candidate pair is kept only when its
// score strictly exceeds the type's tau. Same* types carry no threshold.
class ThresholdConfig {
public:
    static constexpr double default_tau = 0.5;

    static ThresholdConfig defaults() {
        ThresholdConfig c;
        for (RelationshipType t : reportable_types())
            c.tau_[t] = default_tau;
        return c;
    }

    double tau(RelationshipType t) const {
        auto it = tau_.find(t);
        return it == tau_.end() ? default_tau : it->second;
    }

    void set(RelationshipType t, double v) {
        if (is_same_relationship(t))
            throw Error(std::string("no threshold for ") + to_string(t));
        if (!(v > 0.0 && v < 1.0))
            throw Error("threshold out of range (0,1): " + std::to_string(v));
        tau_[t] = v;
    }

    // flat key=value file, one reportable type per line, 3 decimals
    std::string serialize() const {
        std::ostringstream os;
        for (RelationshipType t : reportable_types()) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%.3f", tau(t));
            os << to_string(t) << "=" << buf << "\n";
        }
        return os.str();
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cannot write threshold config: " + path);
        f << serialize();
    }

    static ThresholdConfig parse(std::istream& in, const std::string& origin) {
        ThresholdConfig c = defaults();
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = trim(line);
            if (s.empty() || s[0] == '#') continue;
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw Error(origin + ":" + std::to_string(lineno) +
                            ": expected key=value");
            std::string key = trim(s.substr(0, eq));
            std::string val = trim(s.substr(eq + 1));
            auto t = relationship_type_from_string(key);
            if (!t || is_same_relationship(*t))
                throw Error(origin + ":" + std::to_string(lineno) +
                            ": unknown relationship type '" + key + "'");
            try {
                c.set(*t, std::stod(val));
            } catch (const std::invalid_argument&) {
                throw Error(origin + ":" + std::to_string(lineno) +
                            ": bad threshold value '" + val + "'");
            }
        }
        return c;
    }

    static ThresholdConfig load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw Error("cannot read threshold config: " + path);
        return parse(f, path);
    }

private:
    std::map<RelationshipType, double> tau_;

    static std::string trim(const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        std::size_t e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }
};

} // namespace refdetect
