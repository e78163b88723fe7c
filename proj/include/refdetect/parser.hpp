#pragma once

// Structural parser for the supported Java subset. It does not build an AST;
// it recovers just enough structure to emit code entities: type declarations
// with their supertype names, methods with parameter signatures, bodies split
// into statement-level units, call sites, and field declarations. Statements
// inside bodies are lexed generically.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "refdetect/model.hpp"
#include "refdetect/tokens.hpp"

namespace refdetect {

struct SourceFile {
    std::string path;
    std::string text;
};

// Per-file failure; the file is dropped from the model, the rest survives.
struct ParseError {
    std::string path;
    int line = 0;
    std::string reason;

    std::string message() const {
        return path + ":" + std::to_string(line) + ": " + reason;
    }
};

// thrown inside a single-file parse, converted to ParseError by the driver
struct ParseFailure : Error {
    int line;
    std::string reason;
    ParseFailure(int l, std::string r)
        : Error("line " + std::to_string(l) + ": " + r),
          line(l),
          reason(std::move(r)) {}
};

struct ParseOutcome {
    CodeModel model;
    std::vector<ParseError> errors;
    int skipped_chars = 0;
};

class LanguageFrontend {
public:
    virtual ~LanguageFrontend() = default;
    // throws ParseFailure on unsupported or malformed syntax
    virtual std::vector<CodeEntity> parse_file(const std::string& path,
                                               std::string_view text,
                                               int* skipped_chars) const = 0;
};

namespace detail {

inline std::string normalize_newlines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') continue;
            out.push_back('\n');
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

inline bool is_modifier(const Token& t) {
    if (t.kind != TokenKind::Keyword) return false;
    static const std::set<std::string> mods = {
        "public", "protected", "private", "static",   "final",
        "abstract", "native",  "synchronized", "transient", "volatile",
        "strictfp", "default",
    };
    return mods.count(t.text) > 0;
}

// Scans one method body token range: splits it into statement units, records
// potential field references (shadowing-aware), call descriptors, and local
// declarations. Block structure is only honored at paren depth 0, so lambda
// and anonymous-class braces degrade gracefully into extra unit boundaries.
class BodyScanner {
public:
    BodyScanner(const std::vector<Token>& toks, std::size_t begin,
                std::size_t end, const std::vector<std::string>& param_names)
        : toks_(toks), begin_(begin), end_(end) {
        scopes_.emplace_back(param_names.begin(), param_names.end());
    }

    void run(std::vector<StatementInfo>& statements,
             std::set<CallDescriptor>& calls) {
        std::size_t unit_start = begin_;
        int paren_depth = 0;
        for (std::size_t i = begin_; i < end_; ++i) {
            const Token& t = toks_[i];
            if (t.kind == TokenKind::Punct) {
                if (t.text == "(") ++paren_depth;
                else if (t.text == ")") paren_depth = std::max(0, paren_depth - 1);
                else if (paren_depth == 0 && (t.text == ";" || t.text == "{" || t.text == "}")) {
                    flush(unit_start, i, statements, calls);
                    unit_start = i + 1;
                    if (t.text == "{") scopes_.emplace_back();
                    if (t.text == "}" && scopes_.size() > 1) scopes_.pop_back();
                }
            }
        }
        flush(unit_start, end_, statements, calls);
    }

private:
    const std::vector<Token>& toks_;
    std::size_t begin_, end_;
    std::vector<std::set<std::string>> scopes_;

    bool shadowed(const std::string& name) const {
        for (const auto& s : scopes_)
            if (s.count(name)) return true;
        return false;
    }

    static bool decl_prev_ok(const Token& t) {
        if (t.kind == TokenKind::Identifier) return true;
        if (t.kind == TokenKind::Keyword && is_primitive_type_name(t.text))
            return true;
        if (t.kind == TokenKind::Operator &&
            (t.text == "]" || t.text == ">" || t.text == ">>" || t.text == ">>>"))
            return true;
        return false;
    }

    static bool decl_next_ok(const Token* t) {
        if (!t) return true; // end of unit terminates a declarator
        return t->text == "=" || t->text == "," || t->text == ";" ||
               t->text == ":" || t->text == ")" || t->text == "[";
    }

    // argument count for a call whose '(' sits at index open
    int count_args(std::size_t open) const {
        int depth = 0, commas = 0;
        bool any = false;
        for (std::size_t j = open; j < end_; ++j) {
            const std::string& s = toks_[j].text;
            if (s == "(" || s == "[" || s == "{") { ++depth; continue; }
            if (s == ")" || s == "]" || s == "}") {
                --depth;
                if (depth == 0) break;
                continue;
            }
            if (depth == 1 && s == ",") { ++commas; continue; }
            if (depth >= 1) any = true;
        }
        return any ? commas + 1 : 0;
    }

    void flush(std::size_t from, std::size_t to,
               std::vector<StatementInfo>& statements,
               std::set<CallDescriptor>& calls) {
        if (from >= to) return;
        StatementInfo si;
        int depth = 0; // paren/bracket depth inside the unit
        bool unit_had_decl = false;
        for (std::size_t i = from; i < to; ++i) {
            const Token& t = toks_[i];
            if (counts_toward_multiset(t)) si.tokens.add(t.text);
            if (t.text == "(" || t.text == "[") ++depth;
            else if (t.text == ")" || t.text == "]") depth = std::max(0, depth - 1);
            if (t.kind != TokenKind::Identifier) continue;

            const Token* prev = i > from ? &toks_[i - 1] : nullptr;
            const Token* next = i + 1 < to ? &toks_[i + 1] : nullptr;

            if (next && next->text == "(") {
                calls.insert(CallDescriptor{t.text, count_args(i + 1)});
                continue;
            }
            bool dotted = prev && prev->kind == TokenKind::Punct && prev->text == ".";
            if (dotted) {
                si.refs.insert(t.text);
                continue;
            }
            // local declarator: Type name [= , ; : ) []], also "Type a, b"
            bool prev_ok = prev && (decl_prev_ok(*prev) ||
                                    (prev->text == "," && depth == 0 &&
                                     unit_had_decl));
            if (prev_ok && decl_next_ok(next)) {
                scopes_.back().insert(t.text);
                unit_had_decl = true;
                continue;
            }
            // type position right before a declarator: skip the type name
            if (next && next->kind == TokenKind::Identifier) {
                const Token* after = i + 2 < to ? &toks_[i + 2] : nullptr;
                if (decl_next_ok(after)) continue;
            }
            if (!shadowed(t.text)) si.refs.insert(t.text);
        }
        if (!si.tokens.empty()) statements.push_back(std::move(si));
    }
};

} // namespace detail

// Recursive-descent scan over the token stream of one file.
class JavaFrontend : public LanguageFrontend {
public:
    std::vector<CodeEntity> parse_file(const std::string& path,
                                       std::string_view text,
                                       int* skipped_chars) const override {
        std::string normalized = detail::normalize_newlines(text);
        LexResult lexed = lex(normalized);
        if (skipped_chars) *skipped_chars = lexed.skipped_chars;
        FileParser p(path, lexed.tokens);
        return p.parse();
    }

private:
    class FileParser {
    public:
        FileParser(const std::string& path, const std::vector<Token>& toks)
            : path_(path), toks_(toks) {}

        std::vector<CodeEntity> parse() {
            skip_annotations();
            parse_package();
            skip_imports();
            while (!at_end()) {
                if (cur().text == ";") { ++pos_; continue; }
                parse_top_level();
            }
            return std::move(out_);
        }

    private:
        const std::string& path_;
        const std::vector<Token>& toks_;
        std::size_t pos_ = 0;
        std::string package_;
        std::vector<CodeEntity> out_;

        [[noreturn]] void fail(const std::string& reason) const {
            int line = pos_ < toks_.size() ? toks_[pos_].line
                       : (toks_.empty() ? 1 : toks_.back().line);
            throw ParseFailure(line, reason);
        }

        bool at_end() const { return pos_ >= toks_.size(); }

        const Token& cur() const {
            if (at_end()) throw ParseFailure(
                toks_.empty() ? 1 : toks_.back().line, "unexpected end of file");
            return toks_[pos_];
        }

        const Token* peek(std::size_t ahead = 1) const {
            return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
        }

        std::string expect_identifier(const char* what) {
            if (at_end() || cur().kind != TokenKind::Identifier)
                fail(std::string("expected ") + what);
            return toks_[pos_++].text;
        }

        void expect(const char* text) {
            if (at_end() || cur().text != text)
                fail(std::string("expected '") + text + "'");
            ++pos_;
        }

        void parse_package() {
            if (at_end() || cur().text != "package") return;
            ++pos_;
            package_ = expect_identifier("package name");
            while (!at_end() && cur().text == ".") {
                ++pos_;
                package_ += "." + expect_identifier("package name segment");
            }
            expect(";");
        }

        void skip_imports() {
            while (!at_end() && cur().text == "import") {
                while (!at_end() && cur().text != ";") ++pos_;
                expect(";");
            }
        }

        void skip_annotations() {
            while (!at_end() && cur().text == "@") {
                const Token* nx = peek();
                if (nx && nx->text == "interface") return; // @interface decl
                ++pos_;
                expect_identifier("annotation name");
                while (!at_end() && cur().text == ".") {
                    ++pos_;
                    expect_identifier("annotation name segment");
                }
                if (!at_end() && cur().text == "(") skip_parens();
            }
        }

        void skip_modifiers_and_annotations() {
            for (;;) {
                if (at_end()) return;
                if (cur().text == "@") {
                    const Token* nx = peek();
                    if (nx && nx->text == "interface") return;
                    skip_annotations();
                    continue;
                }
                if (detail::is_modifier(cur())) { ++pos_; continue; }
                return;
            }
        }

        void skip_parens() {
            expect("(");
            int depth = 1;
            while (depth > 0) {
                if (at_end()) fail("unbalanced parentheses");
                const std::string& s = toks_[pos_++].text;
                if (s == "(") ++depth;
                else if (s == ")") --depth;
            }
        }

        void skip_braces() {
            expect("{");
            int depth = 1;
            while (depth > 0) {
                if (at_end()) fail("unbalanced braces");
                const std::string& s = toks_[pos_++].text;
                if (s == "{") ++depth;
                else if (s == "}") --depth;
            }
        }

        // cur() is '<': skip a generic argument/parameter section. '>>' and
        // '>>>' close two and three levels because the lexer is greedy.
        void skip_angles() {
            expect("<");
            int depth = 1;
            while (depth > 0) {
                if (at_end()) fail("unbalanced type arguments");
                const std::string& s = toks_[pos_++].text;
                if (s == "<") ++depth;
                else if (s == ">") --depth;
                else if (s == ">>") depth -= 2;
                else if (s == ">>>") depth -= 3;
                else if (s == ";" || s == "{") fail("malformed type arguments");
            }
        }

        struct TypeRef {
            std::string simple; // last name segment, or primitive name
            int dims = 0;
        };

        TypeRef parse_type_ref() {
            TypeRef tr;
            if (at_end()) fail("expected type");
            if (cur().kind == TokenKind::Keyword &&
                is_primitive_type_name(cur().text)) {
                tr.simple = toks_[pos_++].text;
            } else if (cur().kind == TokenKind::Identifier) {
                tr.simple = toks_[pos_++].text;
                while (!at_end() && cur().text == "." && peek() &&
                       peek()->kind == TokenKind::Identifier) {
                    ++pos_;
                    tr.simple = toks_[pos_++].text;
                }
            } else {
                fail("expected type name");
            }
            if (!at_end() && cur().text == "<") skip_angles();
            while (!at_end() && cur().text == "[" && peek() &&
                   peek()->text == "]") {
                pos_ += 2;
                ++tr.dims;
            }
            return tr;
        }

        static std::string type_string(const TypeRef& tr) {
            std::string s = tr.simple;
            for (int i = 0; i < tr.dims; ++i) s += "[]";
            return s;
        }

        void parse_top_level() {
            skip_modifiers_and_annotations();
            if (at_end()) return;
            const std::string& s = cur().text;
            if (s == "class" || s == "interface") {
                parse_type_decl(std::nullopt, package_);
            } else if (s == "enum" || s == "record") {
                skip_unmodeled_decl();
            } else if (s == "@" && peek() && peek()->text == "interface") {
                pos_ += 2;
                expect_identifier("annotation type name");
                while (!at_end() && cur().text != "{") ++pos_;
                skip_braces();
            } else {
                fail("unexpected token at top level: '" + s + "'");
            }
        }

        // enum/record declarations are lexed through without producing
        // entities; their tokens still count toward an enclosing type's body
        void skip_unmodeled_decl() {
            ++pos_; // enum | record
            expect_identifier("declaration name");
            while (!at_end() && cur().text != "{") {
                if (cur().text == "(") { skip_parens(); continue; }
                if (cur().text == "<") { skip_angles(); continue; }
                if (cur().text == ";") { ++pos_; return; }
                ++pos_;
            }
            skip_braces();
        }

        void parse_type_decl(const std::optional<EntityId>& container,
                             const std::string& scope_qn) {
            bool is_interface = cur().text == "interface";
            ++pos_; // class | interface
            std::string name = expect_identifier("type name");
            if (!at_end() && cur().text == "<") skip_angles();

            std::vector<std::string> supers;
            if (!at_end() && cur().text == "extends") {
                ++pos_;
                supers.push_back(parse_type_ref().simple);
                while (is_interface && !at_end() && cur().text == ",") {
                    ++pos_;
                    supers.push_back(parse_type_ref().simple);
                }
            }
            if (!at_end() && cur().text == "implements") {
                ++pos_;
                supers.push_back(parse_type_ref().simple);
                while (!at_end() && cur().text == ",") {
                    ++pos_;
                    supers.push_back(parse_type_ref().simple);
                }
            }

            std::string qn = scope_qn.empty() ? name : scope_qn + "." + name;
            EntityId id{EntityKind::Type, qn, name};

            expect("{");
            std::size_t body_start = pos_;
            parse_members(id, name);
            std::size_t body_end = pos_; // index of '}'
            expect("}");

            CodeEntity e;
            e.id = id;
            e.container = container;
            e.tokens = multiset_from_tokens(toks_, body_start, body_end);
            e.supertypes = std::move(supers);
            e.source_file = path_;
            out_.push_back(std::move(e));
        }

        void parse_members(const EntityId& type_id,
                           const std::string& type_simple) {
            while (true) {
                if (at_end()) fail("unexpected end of file in type body");
                if (cur().text == "}") return;
                if (cur().text == ";") { ++pos_; continue; }
                if (cur().text == "{") { skip_braces(); continue; } // initializer
                skip_modifiers_and_annotations();
                if (at_end()) fail("unexpected end of file in type body");
                if (cur().text == "{") { skip_braces(); continue; } // static init
                const std::string& s = cur().text;
                if (s == "class" || s == "interface") {
                    parse_type_decl(type_id, type_id.qualified_name);
                    continue;
                }
                if (s == "enum" || s == "record") {
                    skip_unmodeled_decl();
                    continue;
                }
                if (s == "@" && peek() && peek()->text == "interface") {
                    pos_ += 2;
                    expect_identifier("annotation type name");
                    while (!at_end() && cur().text != "{") ++pos_;
                    skip_braces();
                    continue;
                }
                if (s == "<") skip_angles(); // generic method type params
                parse_field_or_method(type_id, type_simple);
            }
        }

        void parse_field_or_method(const EntityId& type_id,
                                   const std::string& type_simple) {
            bool ctor = false;
            std::string name;
            if (cur().kind == TokenKind::Identifier && peek() &&
                peek()->text == "(") {
                // no return type: constructor
                ctor = true;
                name = toks_[pos_++].text;
            } else {
                parse_type_ref(); // return type or field type
                if (at_end()) fail("unexpected end of member declaration");
                if (cur().kind != TokenKind::Identifier)
                    fail("expected member name");
                name = toks_[pos_++].text;
            }

            if (!at_end() && cur().text == "(") {
                parse_method(type_id, type_simple, name, ctor);
            } else {
                if (ctor) fail("expected '(' after constructor name");
                parse_field_declarators(type_id, name);
            }
        }

        void parse_method(const EntityId& type_id,
                          const std::string& type_simple, std::string name,
                          bool ctor) {
            std::vector<std::string> param_types;
            std::vector<std::string> param_names;
            parse_params(param_types, param_names);

            // trailing array dims on the return type (ancient syntax)
            while (!at_end() && cur().text == "[" && peek() &&
                   peek()->text == "]")
                pos_ += 2;
            if (!at_end() && cur().text == "throws") {
                ++pos_;
                parse_type_ref();
                while (!at_end() && cur().text == ",") {
                    ++pos_;
                    parse_type_ref();
                }
            }

            CodeEntity e;
            std::string sig = name + "(";
            for (std::size_t i = 0; i < param_types.size(); ++i) {
                if (i) sig += ",";
                sig += param_types[i];
            }
            sig += ")";
            e.id = EntityId{EntityKind::Method,
                            type_id.qualified_name + "." + name, sig};
            e.container = type_id;
            e.is_constructor = ctor && name == type_simple;
            e.param_types = std::move(param_types);
            e.source_file = path_;

            if (!at_end() && cur().text == ";") {
                ++pos_;
                e.has_body = false; // abstract or interface method
            } else if (!at_end() && cur().text == "{") {
                ++pos_;
                std::size_t body_start = pos_;
                int depth = 1;
                while (depth > 0) {
                    if (at_end()) fail("unbalanced braces in method body");
                    const std::string& t = toks_[pos_++].text;
                    if (t == "{") ++depth;
                    else if (t == "}") --depth;
                }
                std::size_t body_end = pos_ - 1;
                e.tokens = multiset_from_tokens(toks_, body_start, body_end);
                detail::BodyScanner scan(toks_, body_start, body_end,
                                         param_names);
                scan.run(e.statements, e.calls);
            } else {
                fail("expected method body or ';'");
            }
            out_.push_back(std::move(e));
        }

        void parse_params(std::vector<std::string>& types,
                          std::vector<std::string>& names) {
            expect("(");
            if (!at_end() && cur().text == ")") { ++pos_; return; }
            for (;;) {
                skip_annotations();
                while (!at_end() && cur().text == "final") ++pos_;
                skip_annotations();
                TypeRef tr = parse_type_ref();
                if (!at_end() && cur().text == "...") {
                    ++pos_;
                    ++tr.dims; // varargs normalize to an array dimension
                }
                if (!at_end() && cur().text == "this") {
                    ++pos_; // receiver parameter, carries no name
                } else {
                    std::string pname = expect_identifier("parameter name");
                    while (!at_end() && cur().text == "[" && peek() &&
                           peek()->text == "]") {
                        pos_ += 2;
                        ++tr.dims;
                    }
                    names.push_back(std::move(pname));
                }
                types.push_back(type_string(tr));
                if (at_end()) fail("unterminated parameter list");
                if (cur().text == ",") { ++pos_; continue; }
                expect(")");
                return;
            }
        }

        void parse_field_declarators(const EntityId& type_id,
                                     std::string first_name) {
            std::string name = std::move(first_name);
            for (;;) {
                while (!at_end() && cur().text == "[" && peek() &&
                       peek()->text == "]")
                    pos_ += 2;
                CodeEntity e;
                e.id = EntityId{EntityKind::Field,
                                type_id.qualified_name + "." + name, name};
                e.container = type_id;
                e.source_file = path_;
                // tokens stay empty until the virtual body pass
                out_.push_back(std::move(e));

                if (!at_end() && cur().text == "=") {
                    ++pos_;
                    skip_initializer();
                }
                if (at_end()) fail("unterminated field declaration");
                if (cur().text == ",") {
                    ++pos_;
                    name = expect_identifier("field name");
                    continue;
                }
                expect(";");
                return;
            }
        }

        // consume an initializer expression up to a ',' or ';' at depth 0
        void skip_initializer() {
            int depth = 0;
            while (!at_end()) {
                const std::string& s = cur().text;
                if (s == "(" || s == "[" || s == "{") ++depth;
                else if (s == ")" || s == "]" || s == "}") --depth;
                else if (depth == 0 && (s == "," || s == ";")) return;
                ++pos_;
            }
            fail("unterminated initializer");
        }
    };
};

inline const LanguageFrontend& default_frontend() {
    static JavaFrontend fe;
    return fe;
}

// ---- field access resolution and virtual bodies ----

namespace detail {

struct AccessResolution {
    // per field: multiset sum over the statements that read or write it
    std::map<EntityId, TokenMultiset> field_bodies;
    // per method: simple names of the fields it touches
    std::map<EntityId, std::set<std::string>> method_accesses;
};

// Maps every potential field reference in every method onto the field the
// name resolves to: the nearest declaration walking from the method's own
// class up through declared supertypes (matched by simple name within the
// model). A name shadowed by a closer declaration never reaches the outer
// field, mirroring Java lookup closely enough for similarity purposes.
inline AccessResolution resolve_field_accesses(const CodeModel& m) {
    AccessResolution out;

    std::map<std::string, const CodeEntity*> type_by_qn;
    std::map<std::string, std::vector<std::string>> qns_by_simple;
    std::map<std::string, std::map<std::string, std::vector<EntityId>>> fields_of;

    for (const auto& e : m.entities()) {
        if (e.id.kind == EntityKind::Type) {
            type_by_qn[e.id.qualified_name] = &e;
            qns_by_simple[e.id.simple_name()].push_back(e.id.qualified_name);
        } else if (e.id.kind == EntityKind::Field) {
            fields_of[e.id.container_path()][e.simple_name()].push_back(e.id);
        }
    }
    for (auto& [s, v] : qns_by_simple) std::sort(v.begin(), v.end());

    // per starting type: field name -> ids at the nearest declaring level
    std::map<std::string, std::map<std::string, std::vector<EntityId>>> cache;

    auto resolution_for = [&](const std::string& start_qn)
        -> const std::map<std::string, std::vector<EntityId>>& {
        auto hit = cache.find(start_qn);
        if (hit != cache.end()) return hit->second;

        std::map<std::string, std::vector<EntityId>> res;
        std::set<std::string> visited;
        std::vector<std::string> frontier{start_qn};
        visited.insert(start_qn);
        while (!frontier.empty()) {
            for (const auto& qn : frontier) {
                auto fit = fields_of.find(qn);
                if (fit == fields_of.end()) continue;
                for (const auto& [name, ids] : fit->second) {
                    auto& slot = res[name];
                    if (slot.empty())
                        slot.insert(slot.end(), ids.begin(), ids.end());
                }
            }
            std::vector<std::string> next;
            for (const auto& qn : frontier) {
                auto tit = type_by_qn.find(qn);
                if (tit == type_by_qn.end()) continue;
                for (const auto& super : tit->second->supertypes) {
                    auto sit = qns_by_simple.find(super);
                    if (sit == qns_by_simple.end()) continue;
                    for (const auto& sqn : sit->second)
                        if (visited.insert(sqn).second) next.push_back(sqn);
                }
            }
            std::sort(next.begin(), next.end());
            frontier = std::move(next);
        }
        return cache.emplace(start_qn, std::move(res)).first->second;
    };

    for (const auto& e : m.entities()) {
        if (e.id.kind != EntityKind::Method || !e.container) continue;
        const auto& res = resolution_for(e.container->qualified_name);
        if (res.empty()) continue;
        for (const auto& st : e.statements) {
            for (const auto& ref : st.refs) {
                auto it = res.find(ref);
                if (it == res.end()) continue;
                out.method_accesses[e.id].insert(ref);
                for (const auto& fid : it->second)
                    out.field_bodies[fid].add(st.tokens);
            }
        }
    }
    return out;
}

} // namespace detail

// The virtual body of a field: the multiset sum of the token multisets of
// every statement that reads or writes it. Computed from method statements,
// so it is idempotent and ignores whatever the field's tokens currently hold.
inline TokenMultiset build_field_virtual_body(const CodeEntity& field,
                                              const CodeModel& model) {
    if (field.id.kind != EntityKind::Field)
        throw Error("build_field_virtual_body: not a field: " +
                    field.id.descriptor());
    auto res = detail::resolve_field_accesses(model);
    auto it = res.field_bodies.find(field.id);
    return it == res.field_bodies.end() ? TokenMultiset() : it->second;
}

// Writes every field's virtual body into the field entity and marks the
// model; weight index construction requires this to have happened.
inline void apply_field_virtual_bodies(CodeModel& model) {
    auto res = detail::resolve_field_accesses(model);
    for (auto& e : model.entities()) {
        if (e.id.kind != EntityKind::Field) continue;
        auto it = res.field_bodies.find(e.id);
        e.tokens = it == res.field_bodies.end() ? TokenMultiset() : it->second;
    }
    model.mark_virtual_bodies_applied();
}

// Parses a set of files into one model. A file that fails to parse (or whose
// entities collide with already-parsed ones) is excluded as a whole and
// reported; everything else stays. Files are processed in path order so the
// result does not depend on input order.
inline ParseOutcome parse_source_set(
    std::vector<SourceFile> files, std::string label,
    const LanguageFrontend& frontend = default_frontend()) {
    std::sort(files.begin(), files.end(),
              [](const SourceFile& a, const SourceFile& b) {
                  return a.path < b.path;
              });
    ParseOutcome out{CodeModel(std::move(label)), {}, 0};
    for (const auto& f : files) {
        int skipped = 0;
        std::vector<CodeEntity> entities;
        try {
            entities = frontend.parse_file(f.path, f.text, &skipped);
        } catch (const ParseFailure& pf) {
            out.errors.push_back(ParseError{f.path, pf.line, pf.reason});
            continue;
        }
        out.skipped_chars += skipped;

        bool collision = false;
        for (const auto& e : entities) {
            if (out.model.find(e.id)) {
                out.errors.push_back(ParseError{
                    f.path, 1, "duplicate entity id: " + e.id.descriptor()});
                collision = true;
                break;
            }
        }
        if (collision) continue;
        std::set<EntityId> within;
        for (const auto& e : entities) {
            if (!within.insert(e.id).second) {
                out.errors.push_back(ParseError{
                    f.path, 1, "duplicate entity id: " + e.id.descriptor()});
                collision = true;
                break;
            }
        }
        if (collision) continue;
        for (auto& e : entities) out.model.add(std::move(e));
    }

    // resolved field access names land on the method entities
    auto res = detail::resolve_field_accesses(out.model);
    for (auto& e : out.model.entities()) {
        if (e.id.kind != EntityKind::Method) continue;
        auto it = res.method_accesses.find(e.id);
        if (it != res.method_accesses.end()) e.field_accesses = it->second;
    }
    return out;
}

} // namespace refdetect
