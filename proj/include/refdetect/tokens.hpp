#pragma once

// Lexing of the supported Java subset and the token multisets built from it.
// Multisets deliberately drop pure punctuation ({ } ( ) ; , .) so that code
// with identical vocabulary but shuffled statement boundaries still compares
// as equal. Everything else (identifiers, keywords, literals, operators)
// counts, with multiplicity.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace refdetect {

enum class TokenKind {
    Identifier,
    Keyword,
    Literal,
    Operator,
    Punct, // { } ( ) ; , .  -- structural only, never enters a multiset
};

struct Token {
    TokenKind kind;
    std::string text;
    int line = 0;

    bool is(std::string_view s) const { return text == s; }
};

inline const std::set<std::string, std::less<>>& java_keywords() {
    static const std::set<std::string, std::less<>> kw = {
        "abstract", "assert",   "boolean",    "break",    "byte",
        "case",     "catch",    "char",       "class",    "const",
        "continue", "default",  "do",         "double",   "else",
        "enum",     "extends",  "final",      "finally",  "float",
        "for",      "goto",     "if",         "implements", "import",
        "instanceof", "int",    "interface",  "long",     "native",
        "new",      "package",  "private",    "protected", "public",
        "return",   "short",    "static",     "strictfp", "super",
        "switch",   "synchronized", "this",   "throw",    "throws",
        "transient", "try",     "void",       "volatile", "while",
    };
    return kw;
}

inline bool is_primitive_type_name(std::string_view s) {
    return s == "boolean" || s == "byte" || s == "char" || s == "double" ||
           s == "float" || s == "int" || s == "long" || s == "short" ||
           s == "void";
}

struct LexResult {
    std::vector<Token> tokens;
    int skipped_chars = 0; // unlexable bytes, tallied instead of failing
};

namespace detail {

inline bool ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
           c == '$' || c >= 0x80;
}

inline bool ident_part(unsigned char c) {
    return ident_start(c) || (c >= '0' && c <= '9');
}

inline bool digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Multi-char operators, longest first so maximal munch works by scan order.
inline const std::vector<std::string>& operator_table() {
    static const std::vector<std::string> ops = {
        ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--",
        "&&",   "||",  "==",  "!=",  "<=",  ">=", "+=", "-=", "*=",
        "/=",   "%=",  "&=",  "|=",  "^=",  "<<", ">>", "+",  "-",
        "*",    "/",   "%",   "=",   "<",   ">",  "!",  "~",  "&",
        "|",    "^",   "?",   ":",   "@",   "[",  "]",
    };
    return ops;
}

} // namespace detail

// Lexes the full text; never throws. Characters that fit no token class are
// skipped and tallied in skipped_chars.
inline LexResult lex(std::string_view src) {
    LexResult out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    int line = 1;

    auto push = [&](TokenKind k, std::string text) {
        out.tokens.push_back(Token{k, std::move(text), line});
    };

    while (i < n) {
        unsigned char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
            ++i;
            continue;
        }
        // comments
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) {
                if (src[i] == '\n') ++line;
                ++i;
            }
            i = (i + 1 < n) ? i + 2 : n;
            continue;
        }
        if (detail::ident_start(c)) {
            std::size_t j = i + 1;
            while (j < n && detail::ident_part(src[j])) ++j;
            std::string word(src.substr(i, j - i));
            if (word == "true" || word == "false" || word == "null")
                push(TokenKind::Literal, std::move(word));
            else if (java_keywords().count(word))
                push(TokenKind::Keyword, std::move(word));
            else
                push(TokenKind::Identifier, std::move(word));
            i = j;
            continue;
        }
        if (detail::digit(c) || (c == '.' && i + 1 < n && detail::digit(src[i + 1]))) {
            std::size_t j = i;
            bool seen_digit = false;
            while (j < n) {
                unsigned char d = src[j];
                if (detail::digit(d) || (d >= 'a' && d <= 'z') ||
                    (d >= 'A' && d <= 'Z') || d == '_' || d == '.') {
                    // exponent sign is part of the literal: 1e-3, 0x1p+2
                    seen_digit = seen_digit || detail::digit(d);
                    ++j;
                    if ((d == 'e' || d == 'E' || d == 'p' || d == 'P') &&
                        seen_digit && j < n && (src[j] == '+' || src[j] == '-'))
                        ++j;
                } else {
                    break;
                }
            }
            push(TokenKind::Literal, std::string(src.substr(i, j - i)));
            i = j;
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < n && src[j] != '"' && src[j] != '\n') {
                if (src[j] == '\\' && j + 1 < n) ++j;
                ++j;
            }
            if (j < n && src[j] == '"') ++j;
            push(TokenKind::Literal, std::string(src.substr(i, j - i)));
            i = j;
            continue;
        }
        if (c == '\'') {
            std::size_t j = i + 1;
            while (j < n && src[j] != '\'' && src[j] != '\n') {
                if (src[j] == '\\' && j + 1 < n) ++j;
                ++j;
            }
            if (j < n && src[j] == '\'') ++j;
            push(TokenKind::Literal, std::string(src.substr(i, j - i)));
            i = j;
            continue;
        }
        if (c == '.' && src.compare(i, 3, "...") == 0) {
            push(TokenKind::Operator, "...");
            i += 3;
            continue;
        }
        if (c == '{' || c == '}' || c == '(' || c == ')' || c == ';' ||
            c == ',' || c == '.') {
            push(TokenKind::Punct, std::string(1, static_cast<char>(c)));
            ++i;
            continue;
        }
        bool matched = false;
        for (const auto& op : detail::operator_table()) {
            if (src.compare(i, op.size(), op) == 0) {
                push(TokenKind::Operator, op);
                i += op.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        ++out.skipped_chars;
        ++i;
    }
    return out;
}

// Multiset of token strings with positive multiplicities. Ordered container
// so every iteration (and thus every weighted sum) is in ascending token
// order, which keeps floating point results reproducible.
class TokenMultiset {
public:
    using Map = std::map<std::string, int>;
    using const_iterator = Map::const_iterator;

    void add(const std::string& token, int times = 1) {
        if (times <= 0) return;
        counts_[token] += times;
    }

    void add(const TokenMultiset& other) {
        for (const auto& [t, c] : other.counts_) counts_[t] += c;
    }

    int multiplicity(const std::string& token) const {
        auto it = counts_.find(token);
        return it == counts_.end() ? 0 : it->second;
    }

    bool empty() const { return counts_.empty(); }
    std::size_t distinct_size() const { return counts_.size(); }

    std::size_t total_size() const {
        std::size_t s = 0;
        for (const auto& [t, c] : counts_) s += static_cast<std::size_t>(c);
        return s;
    }

    // true when every token of *this occurs in other at >= multiplicity
    bool subset_of(const TokenMultiset& other) const {
        for (const auto& [t, c] : counts_)
            if (other.multiplicity(t) < c) return false;
        return true;
    }

    const_iterator begin() const { return counts_.begin(); }
    const_iterator end() const { return counts_.end(); }

    bool operator==(const TokenMultiset& other) const = default;

private:
    Map counts_;
};

inline bool counts_toward_multiset(const Token& t) {
    return t.kind != TokenKind::Punct;
}

inline TokenMultiset multiset_from_tokens(const std::vector<Token>& tokens,
                                          std::size_t begin, std::size_t end) {
    TokenMultiset m;
    for (std::size_t i = begin; i < end && i < tokens.size(); ++i)
        if (counts_toward_multiset(tokens[i])) m.add(tokens[i].text);
    return m;
}

// Lex + filter in one step. Unlexable characters are skipped; if the caller
// cares, the tally lands in *skipped.
inline TokenMultiset tokenize_body(std::string_view body, int* skipped = nullptr) {
    LexResult r = lex(body);
    if (skipped) *skipped = r.skipped_chars;
    return multiset_from_tokens(r.tokens, 0, r.tokens.size());
}

} // namespace refdetect
