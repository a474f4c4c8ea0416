#include "tgdb/lexer.hpp"

#include <cctype>

#include "tgdb/error.hpp"

namespace tgdb {

std::string_view token_name(TokenKind k) {
    switch (k) {
        case TokenKind::End: return "end of input";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::QuotedIdentifier: return "quoted identifier";
        case TokenKind::String: return "string";
        case TokenKind::Integer: return "integer";
        case TokenKind::Decimal: return "decimal";
        case TokenKind::CurrencyNumber: return "currency amount";
        case TokenKind::DateLiteral: return "date";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::Comma: return "','";
        case TokenKind::Colon: return "':'";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Dot: return "'.'";
        case TokenKind::DotDot: return "'..'";
        case TokenKind::DashBracket: return "'-['";
        case TokenKind::RBracketArrow: return "']->'";
        case TokenKind::LArrowBracket: return "'<-['";
        case TokenKind::RBracketDash: return "']-'";
        case TokenKind::Arrow: return "'->'";
        case TokenKind::LArrow: return "'<-'";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::Question: return "'?'";
        case TokenKind::Eq: return "'='";
        case TokenKind::Ne: return "'<>'";
        case TokenKind::Lt: return "'<'";
        case TokenKind::Le: return "'<='";
        case TokenKind::Gt: return "'>'";
        case TokenKind::Ge: return "'>='";
        case TokenKind::Concat: return "'||'";
    }
    return "?";
}

std::string to_upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    return out;
}

bool Token::is_keyword(std::string_view keyword) const {
    return kind == TokenKind::Identifier && text == keyword;
}

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_part(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

// Currency symbols that may directly follow a number: € £ $
std::size_t currency_suffix(std::string_view rest) {
    if (rest.starts_with("\xE2\x82\xAC")) return 3;
    if (rest.starts_with("\xC2\xA3")) return 2;
    if (rest.starts_with("$")) return 1;
    return 0;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t;
            t.offset = pos_;
            t.line = line_;
            t.column = column();
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            lex_one(t);
            t.length = pos_ - t.offset;
            out.push_back(std::move(t));
        }
    }

private:
    int column() const { return static_cast<int>(pos_ - line_start_) + 1; }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                line_start_ = pos_ + 1;
            }
            ++pos_;
        }
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg, int line, int col) {
        throw SyntaxError(msg, line, col);
    }

    std::string quoted(char quote, const char* what) {
        int line = line_, col = column();
        advance();  // opening quote
        std::string s;
        for (;;) {
            if (pos_ >= src_.size()) fail(std::string("unterminated ") + what, line, col);
            char c = src_[pos_];
            if (c == quote) {
                if (peek(1) == quote) {
                    s += quote;
                    advance(2);
                    continue;
                }
                advance();
                return s;
            }
            s += c;
            advance();
        }
    }

    void lex_number(Token& t) {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        bool decimal = false;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            decimal = true;
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = decimal ? TokenKind::Decimal : TokenKind::Integer;
        if (std::size_t n = currency_suffix(src_.substr(pos_))) {
            t.text += std::string(src_.substr(pos_, n));
            advance(n);
            t.kind = TokenKind::CurrencyNumber;
        }
    }

    void lex_one(Token& t) {
        unsigned char c = static_cast<unsigned char>(src_[pos_]);
        auto simple = [&](TokenKind k, std::size_t n) {
            t.kind = k;
            t.text = std::string(src_.substr(pos_, n));
            advance(n);
        };
        if (std::isdigit(c)) return lex_number(t);
        if (ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_])))
                advance();
            std::string word(src_.substr(start, pos_ - start));
            if (to_upper(word) == "DATE" && peek() == '\'') {
                t.kind = TokenKind::DateLiteral;
                t.text = quoted('\'', "date literal");
                return;
            }
            t.kind = TokenKind::Identifier;
            t.text = to_upper(word);
            return;
        }
        switch (c) {
            case '\'':
                t.kind = TokenKind::String;
                t.text = quoted('\'', "string");
                return;
            case '"':
                t.kind = TokenKind::QuotedIdentifier;
                t.text = quoted('"', "quoted identifier");
                if (t.text.empty()) fail("empty quoted identifier", t.line, t.column);
                return;
            case '(': return simple(TokenKind::LParen, 1);
            case ')': return simple(TokenKind::RParen, 1);
            case '[': return simple(TokenKind::LBracket, 1);
            case ']':
                if (peek(1) == '-' && peek(2) == '>') return simple(TokenKind::RBracketArrow, 3);
                if (peek(1) == '-') return simple(TokenKind::RBracketDash, 2);
                return simple(TokenKind::RBracket, 1);
            case '{': return simple(TokenKind::LBrace, 1);
            case '}': return simple(TokenKind::RBrace, 1);
            case ',': return simple(TokenKind::Comma, 1);
            case ':': return simple(TokenKind::Colon, 1);
            case ';': return simple(TokenKind::Semicolon, 1);
            case '.':
                if (peek(1) == '.') return simple(TokenKind::DotDot, 2);
                return simple(TokenKind::Dot, 1);
            case '-':
                if (peek(1) == '[') return simple(TokenKind::DashBracket, 2);
                if (peek(1) == '>') return simple(TokenKind::Arrow, 2);
                return simple(TokenKind::Minus, 1);
            case '<':
                if (peek(1) == '-' && peek(2) == '[') return simple(TokenKind::LArrowBracket, 3);
                if (peek(1) == '-') return simple(TokenKind::LArrow, 2);
                if (peek(1) == '=') return simple(TokenKind::Le, 2);
                if (peek(1) == '>') return simple(TokenKind::Ne, 2);
                return simple(TokenKind::Lt, 1);
            case '>':
                if (peek(1) == '=') return simple(TokenKind::Ge, 2);
                return simple(TokenKind::Gt, 1);
            case '!':
                if (peek(1) == '=') return simple(TokenKind::Ne, 2);
                break;
            case '=': return simple(TokenKind::Eq, 1);
            case '+': return simple(TokenKind::Plus, 1);
            case '*': return simple(TokenKind::Star, 1);
            case '/': return simple(TokenKind::Slash, 1);
            case '?': return simple(TokenKind::Question, 1);
            case '|':
                if (peek(1) == '|') return simple(TokenKind::Concat, 2);
                break;
            default: break;
        }
        fail(std::string("unexpected character '") + static_cast<char>(c) + "'", t.line, t.column);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace tgdb
