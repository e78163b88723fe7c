#pragma once

// Code entities extracted from a source tree revision: types, methods and
// fields, each with the token multiset its similarity is computed from.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "refdetect/tokens.hpp"

namespace refdetect {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EntityKind { Type, Method, Field };

inline const char* to_string(EntityKind k) {
    switch (k) {
        case EntityKind::Type: return "Type";
        case EntityKind::Method: return "Method";
        case EntityKind::Field: return "Field";
    }
    return "?";
}

// Identity of an entity within one revision.
//  - Type:   qualified_name = pkg.Outer.Name, signature = Name
//  - Method: qualified_name = pkg.Type.name,  signature = name(ParamType,...)
//  - Field:  qualified_name = pkg.Type.name,  signature = name
struct EntityId {
    EntityKind kind = EntityKind::Type;
    std::string qualified_name;
    std::string signature;

    auto operator<=>(const EntityId&) const = default;

    std::string simple_name() const {
        auto pos = qualified_name.rfind('.');
        return pos == std::string::npos ? qualified_name
                                        : qualified_name.substr(pos + 1);
    }

    // qualified name of the enclosing scope (package path for top level types,
    // declaring type for members); empty for the default package
    std::string container_path() const {
        auto pos = qualified_name.rfind('.');
        return pos == std::string::npos ? std::string()
                                        : qualified_name.substr(0, pos);
    }

    // canonical descriptor used in CLI output and oracle files:
    //   pkg.Type | pkg.Type#field | pkg.Type#method(Param1,Param2)
    std::string descriptor() const {
        switch (kind) {
            case EntityKind::Type: return qualified_name;
            case EntityKind::Field: return container_path() + "#" + simple_name();
            case EntityKind::Method: return container_path() + "#" + signature;
        }
        return qualified_name;
    }
};

// A called method as seen from a call site: simple name plus argument count.
struct CallDescriptor {
    std::string name;
    int arg_count = 0;

    auto operator<=>(const CallDescriptor&) const = default;
};

// One statement-level unit of a method body. Kept on the method so field
// virtual bodies can be assembled after the whole model is parsed.
struct StatementInfo {
    TokenMultiset tokens;
    // names that may refer to a field: bare unshadowed identifiers plus
    // identifiers behind a dot, minus call positions
    std::set<std::string> refs;
};

struct CodeEntity {
    EntityId id;
    std::optional<EntityId> container;
    TokenMultiset tokens;
    std::set<CallDescriptor> calls;          // methods only
    std::set<std::string> field_accesses;    // methods only, resolved names
    std::vector<std::string> supertypes;     // types only, declared simple names
    std::string source_file;

    bool has_body = true;                    // false for abstract/interface methods
    bool is_constructor = false;
    std::vector<std::string> param_types;    // methods only, simple type names
    std::vector<StatementInfo> statements;   // methods only

    std::string simple_name() const { return id.simple_name(); }
};

class CodeModel {
public:
    explicit CodeModel(std::string label = {}) : label_(std::move(label)) {}

    const std::string& label() const { return label_; }

    void add(CodeEntity e) {
        if (index_.count(e.id))
            throw Error("duplicate entity id: " + e.id.descriptor());
        index_[e.id] = entities_.size();
        entities_.push_back(std::move(e));
    }

    const std::vector<CodeEntity>& entities() const { return entities_; }
    std::vector<CodeEntity>& entities() { return entities_; }

    const CodeEntity* find(const EntityId& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? nullptr : &entities_[it->second];
    }

    CodeEntity* find(const EntityId& id) {
        auto it = index_.find(id);
        return it == index_.end() ? nullptr : &entities_[it->second];
    }

    std::vector<const CodeEntity*> of_kind(EntityKind k) const {
        std::vector<const CodeEntity*> out;
        for (const auto& e : entities_)
            if (e.id.kind == k) out.push_back(&e);
        return out;
    }

    // set once field virtual bodies have been written into field entities;
    // similarity corpora refuse models where this is still false
    bool virtual_bodies_applied() const { return virtual_bodies_applied_; }
    void mark_virtual_bodies_applied() { virtual_bodies_applied_ = true; }

private:
    std::string label_;
    std::vector<CodeEntity> entities_;
    std::map<EntityId, std::size_t> index_;
    bool virtual_bodies_applied_ = false;
};

} // namespace refdetect
