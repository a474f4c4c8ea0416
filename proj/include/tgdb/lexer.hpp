#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tgdb {

enum class TokenKind {
    End,
    Identifier,        // unquoted, folded to upper case
    QuotedIdentifier,  // "exact"
    String,            // 'text'
    Integer,
    Decimal,
    CurrencyNumber,    // 2.50€
    DateLiteral,       // DATE'2023-03-22'
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Semicolon,
    Dot,
    DotDot,
    DashBracket,       // -[
    RBracketArrow,     // ]->
    LArrowBracket,     // <-[
    RBracketDash,      // ]-
    Arrow,             // ->
    LArrow,            // <-
    Plus,
    Minus,
    Star,
    Slash,
    Question,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Concat,            // ||
};

std::string_view token_name(TokenKind k);

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // folded identifier, unescaped string, or number text
    std::size_t offset = 0;
    std::size_t length = 0;
    int line = 1;
    int column = 1;

    bool is(TokenKind k) const { return kind == k; }
    // Unquoted identifier equal (case-insensitively) to `keyword`.
    bool is_keyword(std::string_view keyword) const;
};

// Splits statement text into tokens. The final token is always End.
// Whitespace and // comments are skipped. Throws SyntaxError on an
// unterminated string or quoted identifier, or on an unexpected character.
std::vector<Token> tokenize(std::string_view text);

std::string to_upper(std::string_view s);

}  // namespace tgdb
