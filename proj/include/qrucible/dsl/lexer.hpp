#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "../error.hpp"
#include "ast.hpp"

namespace qrucible::dsl {

enum class Tok { Int, Rat, Ident, String, Punct, End };

struct Token {
    Tok type = Tok::End;
    std::string text;
    Span span;
};

/// Longest-match tokenizer. `3/4` without spaces is one rational literal;
/// `#` starts a comment running to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto digit = [&](std::size_t k) { return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k])); };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Span sp{line, col};
        if (digit(i)) {
            std::size_t j = i;
            while (digit(j)) ++j;
            if (j < src.size() && src[j] == '/' && digit(j + 1)) {
                std::size_t k = j + 1;
                while (digit(k)) ++k;
                out.push_back({Tok::Rat, std::string(src.substr(i, k - i)), sp});
                advance(k - i);
            } else {
                out.push_back({Tok::Int, std::string(src.substr(i, j - i)), sp});
                advance(j - i);
            }
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), sp});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
            if (j >= src.size() || src[j] != '"') raise(ErrorKind::SyntaxError, "unterminated string at " + sp.str());
            out.push_back({Tok::String, std::string(src.substr(i + 1, j - i - 1)), sp});
            advance(j + 1 - i);
            continue;
        }
        if (c == '.' && i + 1 < src.size() && src[i + 1] == '.') {
            out.push_back({Tok::Punct, "..", sp});
            advance(2);
            continue;
        }
        if (std::string_view("+-*/^()[]{};,=").find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c), sp});
            advance(1);
            continue;
        }
        raise(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "' at " + sp.str());
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

} // namespace qrucible::dsl
