#include <gtest/gtest.h>

#include "support/helpers.hpp"
#include "tgdb/error.hpp"
#include "tgdb/lexer.hpp"
#include "tgdb/parser.hpp"

using namespace tgdb;

namespace {

std::vector<TokenKind> kinds(std::string_view text) {
    std::vector<TokenKind> out;
    for (const auto& t : tokenize(text)) out.push_back(t.kind);
    return out;
}

}  // namespace

TEST(Lexer, ArrowTokens) {
    using K = TokenKind;
    EXPECT_EQ(kinds("(a)-[:E]->(b)"),
              (std::vector<K>{K::LParen, K::Identifier, K::RParen, K::DashBracket, K::Colon, K::Identifier,
                              K::RBracketArrow, K::LParen, K::Identifier, K::RParen, K::End}));
    EXPECT_EQ(kinds("(a)<-[e]-(b)"),
              (std::vector<K>{K::LParen, K::Identifier, K::RParen, K::LArrowBracket, K::Identifier,
                              K::RBracketDash, K::LParen, K::Identifier, K::RParen, K::End}));
    EXPECT_EQ(kinds("x->y<-z"), (std::vector<K>{K::Identifier, K::Arrow, K::Identifier, K::LArrow,
                                                K::Identifier, K::End}));
    // A bracket list inside an expression is not an edge.
    EXPECT_EQ(kinds("a - [1]"), (std::vector<K>{K::Identifier, K::Minus, K::LBracket, K::Integer,
                                                K::RBracket, K::End}));
}

TEST(Lexer, LiteralsAndCase) {
    auto t = tokenize("name 'it''s' \"MixedCase\" 2.50€ DATE'2023-03-22' 1..* // trailing");
    ASSERT_GE(t.size(), 8u);
    EXPECT_EQ(t[0].kind, TokenKind::Identifier);
    EXPECT_EQ(t[0].text, "NAME");
    EXPECT_EQ(t[1].kind, TokenKind::String);
    EXPECT_EQ(t[1].text, "it's");
    EXPECT_EQ(t[2].kind, TokenKind::QuotedIdentifier);
    EXPECT_EQ(t[2].text, "MixedCase");
    EXPECT_EQ(t[3].kind, TokenKind::CurrencyNumber);
    EXPECT_EQ(t[4].kind, TokenKind::DateLiteral);
    EXPECT_EQ(t[5].kind, TokenKind::Integer);
    EXPECT_EQ(t[6].kind, TokenKind::DotDot);
    EXPECT_EQ(t[7].kind, TokenKind::Star);
    EXPECT_EQ(t.back().kind, TokenKind::End);
}

TEST(Lexer, OffsetsReconstructSource) {
    const std::string text = "MATCH (x:Person {name:'A b'})-[:Child]->(y)\n  RETURN y.name, x";
    auto toks = tokenize(text);
    std::string rebuilt;
    std::size_t pos = 0;
    for (const auto& t : toks) {
        if (t.kind == TokenKind::End) break;
        ASSERT_GE(t.offset, pos);
        rebuilt += text.substr(pos, t.offset - pos);  // trivia
        rebuilt += text.substr(t.offset, t.length);
        pos = t.offset + t.length;
    }
    rebuilt += text.substr(pos);
    EXPECT_EQ(rebuilt, text);
    EXPECT_EQ(toks.back().line, 2);
}

TEST(Lexer, RejectsUnterminatedString) {
    EXPECT_THROW(tokenize("'abc"), SyntaxError);
}

TEST(Parser, RoundTripsCorpus) {
    for (const char* file : {"corpus/erp.sql", "tests/data/family.sql"}) {
        auto stmts = parse_statements(testkit::slurp(testkit::source_path(file)));
        ASSERT_FALSE(stmts.empty()) << file;
        for (const auto& s : stmts) {
            std::string src = to_source(s);
            Statement again = parse_statement(src);
            EXPECT_EQ(again, s) << src;
            EXPECT_EQ(to_source(again), src);
        }
    }
}

TEST(Parser, QuantifiedPathAndModes) {
    Statement s = parse_statement("MATCH TRAIL SHORTEST p = (a) [(q)-[:E]->()]{2,3} (b) WHERE b.x > 1 RETURN b");
    const auto* m = s.as<MatchStmt>();
    ASSERT_NE(m, nullptr);
    ASSERT_EQ(m->matches.size(), 1u);
    EXPECT_EQ(m->matches[0].repetition, RepetitionMode::Trail);
    EXPECT_EQ(m->matches[0].selection, SelectionMode::Shortest);
    ASSERT_TRUE(m->matches[0].path_alias.has_value());
    const auto& seg = m->matches[0].chain.tail.at(0);
    const auto* pp = std::get_if<PathPattern>(&seg.link);
    ASSERT_NE(pp, nullptr);
    EXPECT_EQ(pp->quantifier.min, 2u);
    ASSERT_TRUE(pp->quantifier.max.has_value());
    EXPECT_EQ(*pp->quantifier.max, 3u);
    EXPECT_TRUE(m->where.has_value());
}

TEST(Parser, SyntaxErrorsCarryPosition) {
    try {
        parse_statements("CREATE (a:T)\nMATCH (x RETURN x");
        FAIL() << "expected a syntax error";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_GT(e.column(), 1);
    }
    EXPECT_THROW(parse_statement("MATCH SHORTEST (a)-[]->(b), (c)"), SyntaxError);
    EXPECT_THROW(parse_statement("CREATE (a:T"), SyntaxError);
}

TEST(Parser, AlterForms) {
    auto pk = parse_statement("alter table person add primary key(name)");
    ASSERT_NE(pk.as<AlterStmt>(), nullptr);
    EXPECT_TRUE(std::holds_alternative<AlterStmt::AddPrimaryKey>(pk.as<AlterStmt>()->action));
    auto drop = parse_statement("alter table person drop id");
    EXPECT_TRUE(std::holds_alternative<AlterStmt::DropColumn>(drop.as<AlterStmt>()->action));
    auto card = parse_statement("alter type BELONGS_TO set cardinality leaving 1..1 arriving 1..*");
    EXPECT_TRUE(std::holds_alternative<AlterStmt::SetCardinality>(card.as<AlterStmt>()->action));
}

TEST(Parser, KeywordsAreContextual) {
    auto s = parse_statement("CREATE (:Thing {match:1, return:'x'})");
    EXPECT_NE(s.as<CreateStmt>(), nullptr);
}
