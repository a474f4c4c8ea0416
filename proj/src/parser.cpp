#include "tgdb/parser.hpp"

#include <charconv>
#include <initializer_list>
#include <limits>

#include "tgdb/error.hpp"

namespace tgdb {

namespace {

bool is_statement_keyword(const Token& t) {
    for (auto kw : {"CREATE", "MATCH", "SET", "DELETE", "ALTER", "BEGIN", "COMMIT", "ROLLBACK",
                    "GRANT", "SHOW"})
        if (t.is_keyword(kw)) return true;
    return false;
}

class Parser {
public:
    Parser(std::string_view src, std::vector<Token> tokens)
        : src_(src), toks_(std::move(tokens)) {}

    std::vector<Statement> statements() {
        std::vector<Statement> out;
        while (!at(TokenKind::End)) {
            if (accept(TokenKind::Semicolon)) continue;
            if (at(TokenKind::LBracket)) {
                advance();
                while (!at(TokenKind::RBracket)) {
                    if (accept(TokenKind::Semicolon)) continue;
                    if (at(TokenKind::End)) fail_expected({"']'"});
                    out.push_back(statement());
                }
                advance();
                continue;
            }
            out.push_back(statement());
        }
        return out;
    }

    Expr expression_only() {
        Expr e = expression();
        expect(TokenKind::End);
        return e;
    }

private:
    // ---- token plumbing -------------------------------------------------

    const Token& cur() const { return toks_[pos_]; }
    const Token& look(std::size_t n) const {
        return toks_[std::min(pos_ + n, toks_.size() - 1)];
    }
    bool at(TokenKind k) const { return cur().kind == k; }
    bool at_kw(std::string_view kw) const { return cur().is_keyword(kw); }
    const Token& advance() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept(TokenKind k) {
        if (!at(k)) return false;
        advance();
        return true;
    }
    bool accept_kw(std::string_view kw) {
        if (!at_kw(kw)) return false;
        advance();
        return true;
    }

    [[noreturn]] void fail_expected(std::vector<std::string> expected) {
        const Token& t = cur();
        std::string found = t.is(TokenKind::End) ? std::string("end of input")
                                                 : "'" + std::string(lexeme(t)) + "'";
        throw SyntaxError("unexpected " + found, t.line, t.column, std::move(expected));
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw SyntaxError(msg, cur().line, cur().column);
    }

    std::string_view lexeme(const Token& t) const { return src_.substr(t.offset, t.length); }

    const Token& expect(TokenKind k) {
        if (!at(k)) fail_expected({std::string(token_name(k))});
        return advance();
    }
    void expect_kw(std::string_view kw) {
        if (!accept_kw(kw)) fail_expected({std::string(kw)});
    }

    bool at_name() const { return at(TokenKind::Identifier) || at(TokenKind::QuotedIdentifier); }
    std::string name() {
        if (!at_name()) fail_expected({"identifier"});
        return advance().text;
    }

    std::uint64_t unsigned_int() {
        const Token& t = expect(TokenKind::Integer);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{}) throw SyntaxError("integer out of range", t.line, t.column);
        return v;
    }

    // ---- statements -----------------------------------------------------

    Statement statement() {
        Statement s;
        s.line = cur().line;
        s.column = cur().column;
        if (at_kw("CREATE")) {
            if (look(1).is_keyword("TYPE")) {
                s.node = create_type();
            } else if (look(1).is_keyword("ROLE")) {
                s.node = noop_role();
            } else {
                s.node = create();
            }
        } else if (at_kw("MATCH")) {
            s.node = match();
        } else if (at_kw("SET")) {
            s.node = set();
        } else if (at_kw("DELETE")) {
            s.node = del();
        } else if (at_kw("ALTER")) {
            s.node = alter();
        } else if (at_kw("BEGIN")) {
            advance();
            accept_kw("TRANSACTION") || accept_kw("WORK");
            s.node = TransactionStmt{TransactionStmt::Kind::Begin};
        } else if (at_kw("COMMIT")) {
            advance();
            accept_kw("WORK");
            s.node = TransactionStmt{TransactionStmt::Kind::Commit};
        } else if (at_kw("ROLLBACK")) {
            advance();
            accept_kw("WORK");
            s.node = TransactionStmt{TransactionStmt::Kind::Rollback};
        } else if (at_kw("GRANT")) {
            s.node = grant();
        } else if (at_kw("SHOW")) {
            advance();
            if (accept_kw("GRAPHS"))
                s.node = ShowStmt{ShowStmt::Kind::Graphs};
            else if (accept_kw("TYPES"))
                s.node = ShowStmt{ShowStmt::Kind::Types};
            else
                fail_expected({"GRAPHS", "TYPES"});
        } else {
            fail_expected({"CREATE", "MATCH", "SET", "DELETE", "ALTER", "BEGIN", "COMMIT",
                           "ROLLBACK", "GRANT", "SHOW"});
        }
        return s;
    }

    NoopStmt noop_from(std::size_t start_tok) {
        std::size_t b = toks_[start_tok].offset;
        const Token& last = toks_[pos_ - 1];
        return NoopStmt{std::string(src_.substr(b, last.offset + last.length - b))};
    }

    NoopStmt noop_role() {
        std::size_t start = pos_;
        advance();  // CREATE
        advance();  // ROLE
        name();
        if (at(TokenKind::String)) advance();  // optional description
        return noop_from(start);
    }

    // GRANT role TO grantee{,grantee}
    // GRANT priv{,priv} ON [TABLE|TYPE] object TO grantee{,grantee}
    NoopStmt grant() {
        std::size_t start = pos_;
        advance();
        name();
        if (accept_kw("PRIVILEGES")) {
        }
        while (accept(TokenKind::Comma)) name();
        if (accept_kw("ON")) {
            accept_kw("TABLE") || accept_kw("TYPE");
            name();
        }
        expect_kw("TO");
        name();
        while (accept(TokenKind::Comma)) name();
        return noop_from(start);
    }

    CreateStmt create() {
        expect_kw("CREATE");
        CreateStmt c;
        c.graphs.push_back(chain(false));
        while (accept(TokenKind::Comma)) c.graphs.push_back(chain(false));
        if (accept_kw("THEN")) c.then.push_back(statement());
        return c;
    }

    MatchStmt match() {
        expect_kw("MATCH");
        MatchStmt m;
        m.matches.push_back(match_item());
        while (accept(TokenKind::Comma)) m.matches.push_back(match_item());
        if (m.matches.size() > 1) {
            for (const auto& mi : m.matches)
                if (mi.selection != SelectionMode::None)
                    fail("SHORTEST, ALL and ANY cannot be combined with ','");
        }
        if (accept_kw("WHERE")) m.where = expression();
        if (accept_kw("RETURN")) {
            std::vector<ReturnItem> items;
            do {
                ReturnItem ri{expression(), std::nullopt};
                if (accept_kw("AS")) ri.alias = name();
                items.push_back(std::move(ri));
            } while (accept(TokenKind::Comma));
            m.returns = std::move(items);
        } else if (is_statement_keyword(cur())) {
            m.dependent.push_back(statement());
        }
        if (accept_kw("THEN")) {
            std::vector<Statement> block;
            while (!accept_kw("END")) {
                if (accept(TokenKind::Semicolon)) continue;
                if (at(TokenKind::End)) fail_expected({"END"});
                block.push_back(statement());
            }
            m.then_block = std::move(block);
        }
        return m;
    }

    MatchItem match_item() {
        MatchItem mi;
        if (!look(1).is(TokenKind::Eq)) {
            if (accept_kw("TRAIL"))
                mi.repetition = RepetitionMode::Trail;
            else if (accept_kw("ACYCLIC"))
                mi.repetition = RepetitionMode::Acyclic;
            else if (accept_kw("SIMPLE"))
                mi.repetition = RepetitionMode::Simple;
        }
        if (!look(1).is(TokenKind::Eq)) {
            if (accept_kw("SHORTEST"))
                mi.selection = SelectionMode::Shortest;
            else if (accept_kw("ALL"))
                mi.selection = SelectionMode::All;
            else if (accept_kw("ANY"))
                mi.selection = SelectionMode::Any;
        }
        if (at_name() && look(1).is(TokenKind::Eq)) {
            mi.path_alias = name();
            advance();
        }
        mi.chain = chain(true);
        return mi;
    }

    // Node {(Edge | Path) Node}
    MatchChain chain(bool matching) {
        MatchChain c;
        c.head = node(matching);
        for (;;) {
            Segment seg;
            if (auto e = edge(matching)) {
                seg.link = std::move(*e);
            } else if (matching && at(TokenKind::LBracket)) {
                seg.link = path();
            } else {
                break;
            }
            seg.node = node(matching);
            c.tail.push_back(std::move(seg));
        }
        return c;
    }

    ItemPattern node(bool matching) {
        expect(TokenKind::LParen);
        ItemPattern item = item_body(matching);
        expect(TokenKind::RParen);
        return item;
    }

    std::optional<EdgePattern> edge(bool matching) {
        EdgePattern e;
        if (at(TokenKind::DashBracket) ||
            (at(TokenKind::Minus) && look(1).is(TokenKind::LBracket))) {
            if (!accept(TokenKind::DashBracket)) {
                advance();
                advance();
            }
            e.direction = Direction::Forward;
            e.item = item_body(matching);
            if (accept(TokenKind::RBracketArrow)) return e;
            if (at(TokenKind::RBracket) && look(1).is(TokenKind::Arrow)) {
                advance();
                advance();
                return e;
            }
            if (at(TokenKind::RBracketDash) && look(1).is(TokenKind::Gt)) {
                advance();
                advance();
                return e;
            }
            fail_expected({"']->'"});
        }
        if (at(TokenKind::LArrowBracket) ||
            (at(TokenKind::LArrow) && look(1).is(TokenKind::LBracket))) {
            if (!accept(TokenKind::LArrowBracket)) {
                advance();
                advance();
            }
            e.direction = Direction::Backward;
            e.item = item_body(matching);
            if (accept(TokenKind::RBracketDash)) return e;
            if (at(TokenKind::RBracket) && look(1).is(TokenKind::Minus)) {
                advance();
                advance();
                return e;
            }
            fail_expected({"']-'"});
        }
        if (accept(TokenKind::Arrow)) {
            e.direction = Direction::Forward;
            return e;
        }
        if (accept(TokenKind::LArrow)) {
            e.direction = Direction::Backward;
            return e;
        }
        return std::nullopt;
    }

    PathPattern path() {
        expect(TokenKind::LBracket);
        PathPattern p;
        *p.body = chain(true);
        expect(TokenKind::RBracket);
        if (accept(TokenKind::Question)) {
            p.quantifier = Quantifier::optional();
        } else if (accept(TokenKind::Star)) {
            p.quantifier = Quantifier::star();
        } else if (accept(TokenKind::Plus)) {
            p.quantifier = Quantifier::plus();
        } else if (accept(TokenKind::LBrace)) {
            auto lo = unsigned_int();
            std::optional<std::uint64_t> hi = lo;
            if (accept(TokenKind::Comma)) {
                hi.reset();
                if (at(TokenKind::Integer)) hi = unsigned_int();
            }
            expect(TokenKind::RBrace);
            constexpr auto cap = std::numeric_limits<std::uint32_t>::max();
            if (lo > cap || (hi && *hi > cap)) fail("quantifier bound too large");
            if (hi && *hi < lo) fail("quantifier upper bound is below lower bound");
            p.quantifier = Quantifier::range(static_cast<std::uint32_t>(lo),
                                             hi ? std::optional<std::uint32_t>(*hi) : std::nullopt);
        } else {
            fail_expected({"'?'", "'*'", "'+'", "'{'"});
        }
        return p;
    }

    // [alias] {':' label} [doc] [WHERE expr]
    ItemPattern item_body(bool matching) {
        ItemPattern item;
        if (at_name() && !(matching && at_kw("WHERE") && !look(1).is(TokenKind::Colon)))
            item.alias = name();
        while (accept(TokenKind::Colon)) item.labels.push_back(name());
        if (at(TokenKind::LBrace)) item.doc = doc();
        if (matching && accept_kw("WHERE")) item.where = expression();
        return item;
    }

    DocEntries doc() {
        expect(TokenKind::LBrace);
        DocEntries entries;
        if (!at(TokenKind::RBrace)) {
            do {
                std::string key;
                if (at(TokenKind::String))
                    key = advance().text;
                else
                    key = name();
                for (const auto& [k, _] : entries)
                    if (k == key) fail("duplicate property '" + key + "'");
                expect(TokenKind::Colon);
                entries.emplace_back(std::move(key), expression());
            } while (accept(TokenKind::Comma));
        }
        expect(TokenKind::RBrace);
        return entries;
    }

    SetStmt set() {
        expect_kw("SET");
        SetStmt s;
        do {
            Assignment a;
            a.target = name();
            if (!at(TokenKind::Dot)) fail_expected({"'.'"});
            while (accept(TokenKind::Dot)) a.path.push_back(name());
            expect(TokenKind::Eq);
            a.value = expression();
            s.assignments.push_back(std::move(a));
        } while (accept(TokenKind::Comma));
        return s;
    }

    DeleteStmt del() {
        expect_kw("DELETE");
        DeleteStmt d;
        d.targets.push_back(name());
        while (accept(TokenKind::Comma)) d.targets.push_back(name());
        if (accept_kw("CASCADE"))
            d.cascade = true;
        else
            accept_kw("RESTRICT");
        return d;
    }

    ColumnDef column_def() {
        ColumnDef c;
        c.name = name();
        if (!at(TokenKind::Identifier)) fail_expected({"type name"});
        c.type_name = advance().text;
        if (accept(TokenKind::LParen)) {  // length/precision, ignored
            unsigned_int();
            if (accept(TokenKind::Comma)) unsigned_int();
            expect(TokenKind::RParen);
        }
        if (accept_kw("NOT")) {
            expect_kw("NULL");
            c.not_null = true;
        }
        return c;
    }

    CreateTypeStmt create_type() {
        expect_kw("CREATE");
        expect_kw("TYPE");
        CreateTypeStmt t;
        t.name = name();
        if (accept_kw("UNDER")) t.under = name();
        if (accept_kw("AS")) {
            expect(TokenKind::LParen);
            if (!at(TokenKind::RParen)) {
                do {
                    t.columns.push_back(column_def());
                } while (accept(TokenKind::Comma));
            }
            expect(TokenKind::RParen);
        }
        if (accept_kw("NODETYPE")) {
            t.kind = CreateTypeStmt::Kind::Node;
        } else if (accept_kw("EDGETYPE")) {
            t.kind = CreateTypeStmt::Kind::Edge;
            expect(TokenKind::LParen);
            expect_kw("LEAVING");
            t.leaving = name();
            expect(TokenKind::Comma);
            expect_kw("ARRIVING");
            t.arriving = name();
            expect(TokenKind::RParen);
        }
        return t;
    }

    Bounds bounds() {
        Bounds b;
        b.min = unsigned_int();
        expect(TokenKind::DotDot);
        if (!accept(TokenKind::Star)) b.max = unsigned_int();
        if (b.max && *b.max < b.min) fail("cardinality maximum is below minimum");
        return b;
    }

    AlterStmt alter() {
        expect_kw("ALTER");
        AlterStmt a;
        if (accept_kw("TYPE"))
            a.is_type = true;
        else if (!accept_kw("TABLE"))
            fail_expected({"TABLE", "TYPE"});
        a.name = name();
        if (accept_kw("ADD")) {
            if (accept_kw("PRIMARY")) {
                expect_kw("KEY");
                expect(TokenKind::LParen);
                AlterStmt::AddPrimaryKey pk;
                do {
                    pk.columns.push_back(name());
                } while (accept(TokenKind::Comma));
                expect(TokenKind::RParen);
                a.action = pk;
            } else if (at_kw("CONSTRAINT") || at_kw("CHECK")) {
                AlterStmt::AddCheck chk;
                if (accept_kw("CONSTRAINT")) chk.name = name();
                expect_kw("CHECK");
                expect(TokenKind::LParen);
                chk.condition = expression();
                expect(TokenKind::RParen);
                a.action = chk;
            } else {
                accept_kw("COLUMN");
                a.action = AlterStmt::AddColumn{column_def()};
            }
        } else if (accept_kw("DROP")) {
            accept_kw("COLUMN");
            a.action = AlterStmt::DropColumn{name()};
        } else if (accept_kw("SET")) {
            expect_kw("CARDINALITY");
            AlterStmt::SetCardinality sc;
            if (accept_kw("LEAVING")) sc.leaving = bounds();
            if (accept_kw("ARRIVING")) sc.arriving = bounds();
            if (!sc.leaving && !sc.arriving) fail_expected({"LEAVING", "ARRIVING"});
            a.action = sc;
        } else {
            fail_expected({"ADD", "DROP", "SET"});
        }
        return a;
    }

    // ---- expressions ----------------------------------------------------

    Expr expression() { return disjunction(); }

    Expr disjunction() {
        Expr e = conjunction();
        while (accept_kw("OR")) e = Expr::binary("OR", std::move(e), conjunction());
        return e;
    }

    Expr conjunction() {
        Expr e = negation();
        while (accept_kw("AND")) e = Expr::binary("AND", std::move(e), negation());
        return e;
    }

    Expr negation() {
        if (accept_kw("NOT")) return Expr::unary("NOT", negation());
        return comparison();
    }

    Expr comparison() {
        Expr e = additive();
        for (;;) {
            if (at_kw("IS")) {
                advance();
                bool neg = accept_kw("NOT");
                expect_kw("NULL");
                e = Expr::is_null(std::move(e), neg);
                continue;
            }
            std::string op;
            switch (cur().kind) {
                case TokenKind::Eq: op = "="; break;
                case TokenKind::Ne: op = "<>"; break;
                case TokenKind::Lt: op = "<"; break;
                case TokenKind::Le: op = "<="; break;
                case TokenKind::Gt: op = ">"; break;
                case TokenKind::Ge: op = ">="; break;
                case TokenKind::LArrow: {
                    // `a<-1` lexes as '<-'; read it as '<' followed by a negation.
                    advance();
                    e = Expr::binary("<", std::move(e), negate(additive()));
                    continue;
                }
                default: return e;
            }
            advance();
            e = Expr::binary(op, std::move(e), additive());
        }
    }

    Expr additive() {
        Expr e = multiplicative();
        for (;;) {
            std::string op;
            if (at(TokenKind::Plus))
                op = "+";
            else if (at(TokenKind::Minus))
                op = "-";
            else if (at(TokenKind::Concat))
                op = "||";
            else
                return e;
            advance();
            e = Expr::binary(op, std::move(e), multiplicative());
        }
    }

    Expr multiplicative() {
        Expr e = unary();
        for (;;) {
            std::string op;
            if (at(TokenKind::Star))
                op = "*";
            else if (at(TokenKind::Slash))
                op = "/";
            else
                return e;
            advance();
            e = Expr::binary(op, std::move(e), unary());
        }
    }

    static Expr negate(Expr e) {
        if (e.kind == Expr::Kind::Literal) {
            if (e.literal.is_int() && e.literal.as_int() != std::numeric_limits<std::int64_t>::min())
                return Expr::lit(Value(-e.literal.as_int()));
            if (e.literal.is_decimal()) return Expr::lit(Value(-e.literal.as_decimal()));
            if (e.literal.is_currency()) {
                Currency c = e.literal.as_currency();
                c.amount = -c.amount;
                return Expr::lit(Value(c));
            }
        }
        return Expr::unary("-", std::move(e));
    }

    Expr unary() {
        if (accept(TokenKind::Minus)) return negate(unary());
        if (accept(TokenKind::Plus)) return unary();
        return postfix();
    }

    Expr postfix() {
        Expr e = primary();
        while (at(TokenKind::Dot) && (look(1).is(TokenKind::Identifier) ||
                                      look(1).is(TokenKind::QuotedIdentifier))) {
            advance();
            e = Expr::field(std::move(e), name());
        }
        return e;
    }

    Expr number(const Token& t) {
        if (t.is(TokenKind::Integer)) {
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc{}) throw SyntaxError("integer out of range", t.line, t.column);
            return Expr::lit(Value(v));
        }
        double d = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), d);
        return Expr::lit(Value(d));
    }

    Expr primary() {
        const Token& t = cur();
        switch (t.kind) {
            case TokenKind::Integer:
            case TokenKind::Decimal: advance(); return number(t);
            case TokenKind::CurrencyNumber: {
                advance();
                auto v = coerce(Value(t.text), DataType{BaseType::Currency});
                if (!v) throw SyntaxError("invalid currency amount", t.line, t.column);
                return Expr::lit(*v);
            }
            case TokenKind::String: advance(); return Expr::lit(Value(t.text));
            case TokenKind::DateLiteral: {
                advance();
                try {
                    return Expr::lit(Value(Date::parse(t.text)));
                } catch (const ExecutionError& e) {
                    throw SyntaxError(e.what(), t.line, t.column);
                }
            }
            case TokenKind::LParen: {
                advance();
                Expr e = expression();
                expect(TokenKind::RParen);
                return e;
            }
            case TokenKind::LBrace: return Expr::doc(doc());
            case TokenKind::Identifier:
                if (t.text == "TRUE") {
                    advance();
                    return Expr::lit(Value(true));
                }
                if (t.text == "FALSE") {
                    advance();
                    return Expr::lit(Value(false));
                }
                if (t.text == "NULL") {
                    advance();
                    return Expr::lit(Value());
                }
                advance();
                return Expr::ident(t.text);
            case TokenKind::QuotedIdentifier: advance(); return Expr::ident(t.text);
            default: fail_expected({"expression"});
        }
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<Statement> parse_statements(std::string_view text) {
    return Parser(text, tokenize(text)).statements();
}

Statement parse_statement(std::string_view text) {
    auto all = parse_statements(text);
    if (all.size() != 1) {
        throw SyntaxError(all.empty() ? "empty statement" : "more than one statement", 1, 1);
    }
    return std::move(all.front());
}

Expr parse_expression(std::string_view text) {
    return Parser(text, tokenize(text)).expression_only();
}

}  // namespace tgdb
