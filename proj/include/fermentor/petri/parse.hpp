#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fermentor/petri/net.hpp"

namespace fermentor::petri {

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(column) +
                             ": " + message),
          line(line),
          column(column) {}

    int line;
    int column;
};

namespace detail {

struct Token {
    std::string text;
    int column = 0;
    bool quoted = false;
};

// Splits one line into whitespace-separated tokens; `"..."` groups into a
// single token and `#` starts a comment.
inline std::vector<Token> tokenize_line(const std::string& line, int line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        int col = static_cast<int>(i) + 1;
        if (line[i] == '"') {
            std::string text;
            ++i;
            bool closed = false;
            while (i < line.size()) {
                if (line[i] == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                text.push_back(line[i++]);
            }
            if (!closed) throw ParseError(line_no, col, "unterminated string literal");
            out.push_back({text, col, true});
        } else {
            std::string text;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
                   line[i] != '#')
                text.push_back(line[i++]);
            out.push_back({text, col, false});
        }
    }
    return out;
}

inline std::int64_t parse_int(const Token& tok, int line_no) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(tok.text, &used);
        if (used != tok.text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line_no, tok.column, "expected an integer, got '" + tok.text + "'");
    }
}

inline bool valid_id(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

}  // namespace detail

/// Parses the line-oriented net description format:
///
///   net <name>
///   place <id> [capacity <int>] [init <int>] [label "<text>"]
///   trans <id> [label "<text>"]
///   arc <src> -> <dst> [weight <int>] [rewritable <int>]
///
/// `#` introduces a comment. Structural validation (unique ids, bipartite
/// arcs, capacity bounds) runs after reading, so errors carry the offending
/// line where the format keeps it known.
inline NetDefinition parse_net(const std::string& text) {
    std::string name;
    bool saw_net = false;
    std::vector<PlaceDef> places;
    std::vector<TransitionDef> transitions;
    std::vector<ArcDef> arcs;
    struct ArcLine {
        int line;
        int column;
    };
    std::vector<ArcLine> arc_lines;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = detail::tokenize_line(line, line_no);
        if (toks.empty()) continue;
        const auto& head = toks[0];

        auto expect_id = [&](std::size_t idx, const char* what) -> std::string {
            if (idx >= toks.size())
                throw ParseError(line_no, static_cast<int>(line.size()) + 1,
                                 std::string("missing ") + what);
            if (!detail::valid_id(toks[idx].text))
                throw ParseError(line_no, toks[idx].column,
                                 std::string("invalid ") + what + ": '" + toks[idx].text + "'");
            return toks[idx].text;
        };

        if (head.text == "net") {
            if (saw_net) throw ParseError(line_no, head.column, "duplicate 'net' line");
            name = expect_id(1, "net name");
            if (toks.size() > 2) throw ParseError(line_no, toks[2].column, "unexpected token after net name");
            saw_net = true;
        } else if (head.text == "place") {
            PlaceDef p;
            p.id = expect_id(1, "place id");
            for (std::size_t i = 2; i < toks.size();) {
                const std::string& key = toks[i].text;
                if (key == "capacity" || key == "init") {
                    if (i + 1 >= toks.size())
                        throw ParseError(line_no, toks[i].column, "missing value after '" + key + "'");
                    std::int64_t v = detail::parse_int(toks[i + 1], line_no);
                    if (v < 0) throw ParseError(line_no, toks[i + 1].column, key + " must be non-negative");
                    (key == "capacity" ? p.capacity : p.initial_tokens) = v;
                    i += 2;
                } else if (key == "label") {
                    if (i + 1 >= toks.size() || !toks[i + 1].quoted)
                        throw ParseError(line_no, toks[i].column, "label expects a quoted string");
                    p.label = toks[i + 1].text;
                    i += 2;
                } else {
                    throw ParseError(line_no, toks[i].column, "unknown place attribute '" + key + "'");
                }
            }
            places.push_back(std::move(p));
        } else if (head.text == "trans") {
            TransitionDef t;
            t.id = expect_id(1, "transition id");
            for (std::size_t i = 2; i < toks.size();) {
                if (toks[i].text == "label") {
                    if (i + 1 >= toks.size() || !toks[i + 1].quoted)
                        throw ParseError(line_no, toks[i].column, "label expects a quoted string");
                    t.label = toks[i + 1].text;
                    i += 2;
                } else {
                    throw ParseError(line_no, toks[i].column,
                                     "unknown transition attribute '" + toks[i].text + "'");
                }
            }
            transitions.push_back(std::move(t));
        } else if (head.text == "arc") {
            ArcDef a;
            a.source = expect_id(1, "arc source");
            if (toks.size() < 3 || toks[2].text != "->")
                throw ParseError(line_no, toks.size() > 2 ? toks[2].column : head.column,
                                 "expected '->' after arc source");
            a.target = expect_id(3, "arc target");
            for (std::size_t i = 4; i < toks.size();) {
                const std::string& key = toks[i].text;
                if (key == "weight" || key == "rewritable") {
                    if (i + 1 >= toks.size())
                        throw ParseError(line_no, toks[i].column, "missing value after '" + key + "'");
                    std::int64_t v = detail::parse_int(toks[i + 1], line_no);
                    if (v < 1) throw ParseError(line_no, toks[i + 1].column, key + " must be >= 1");
                    if (key == "weight")
                        a.weight = v;
                    else
                        a.rewrite_limit = v;
                    i += 2;
                } else {
                    throw ParseError(line_no, toks[i].column, "unknown arc attribute '" + key + "'");
                }
            }
            arcs.push_back(std::move(a));
            arc_lines.push_back({line_no, head.column});
        } else {
            throw ParseError(line_no, head.column, "unknown directive '" + head.text + "'");
        }
    }
    if (!saw_net) throw ParseError(line_no == 0 ? 1 : line_no, 1, "missing 'net <name>' line");

    try {
        return NetDefinition(name, std::move(places), std::move(transitions), std::move(arcs));
    } catch (const NetError& e) {
        throw ParseError(line_no, 1, e.what());
    }
}

}  // namespace fermentor::petri
