#include <gtest/gtest.h>

#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "tgdb/parser.hpp"

using namespace tgdb;
using testkit::column;

namespace {

std::multiset<std::string> names(Session& s, const std::string& q) { return column(s, q); }

// Number of PERSON elements in each rendered path array.
std::multiset<std::size_t> path_lengths(Session& s, const std::string& q) {
    std::multiset<std::size_t> out;
    for (const auto& arr : column(s, q, 0)) {
        std::size_t n = 0;
        for (std::size_t i = arr.find("PERSON("); i != std::string::npos; i = arr.find("PERSON(", i + 1)) ++n;
        out.insert(n);
    }
    return out;
}

class Family : public ::testing::Test {
protected:
    void SetUp() override { s.execute(testkit::kFamily); }
    Database db;
    Session s{db};
};

}  // namespace

TEST_F(Family, Descendants) {
    EXPECT_EQ(names(s, "MATCH ({name:'Peter Smith'}) [()-[:Child]->()]+ (x) RETURN x.name"),
              (std::multiset<std::string>{"Fred Smith", "Mary Smith", "Lee Smith", "Bill Smith"}));
    EXPECT_EQ(names(s, "MATCH ({name:'Peter Smith'}) [()-[:Child]->()]* (x) RETURN x.name").size(), 5u);
    EXPECT_EQ(names(s, "MATCH ({name:'Peter Smith'}) [()-[:Child]->()]? (x) RETURN x.name"),
              (std::multiset<std::string>{"Peter Smith", "Fred Smith"}));
}

TEST_F(Family, InnerIdentifiersAccumulate) {
    EXPECT_EQ(path_lengths(s, "MATCH ({name:'Peter Smith'}) [(p)-[:Child]->()]+ ({name:x})"),
              (std::multiset<std::size_t>{1, 2, 3, 3}));
}

TEST_F(Family, BoundedQuantifier) {
    EXPECT_EQ(names(s, "MATCH ({name:'Peter Smith'}) [()-[:Child]->()]{2,2} (x) RETURN x.name"),
              (std::multiset<std::string>{"Mary Smith"}));
    EXPECT_EQ(names(s, "MATCH ({name:'Peter Smith'}) [()-[:Child]->()]{2,3} (x) RETURN x.name"),
              (std::multiset<std::string>{"Mary Smith", "Lee Smith", "Bill Smith"}));
}

TEST_F(Family, BackwardEdgesAndJoins) {
    EXPECT_EQ(names(s, "MATCH (x)<-[:Child]-({name:'Mary Smith'}) RETURN x.name"),
              (std::multiset<std::string>{"Lee Smith", "Bill Smith"}));
    EXPECT_EQ(names(s, "MATCH (a)-[:Child]->(b), (b)-[:Child]->(c) WHERE c.name = 'Lee Smith' RETURN a.name"),
              (std::multiset<std::string>{"Fred Smith"}));
}

TEST_F(Family, UnknownLabelIsEmpty) {
    EXPECT_TRUE(names(s, "MATCH (x:Nothing) RETURN x.name").empty());
}

TEST(Matcher, CycleModes) {
    Database db;
    Session s(db);
    s.execute("[CREATE (a:N {K:1})-[:E]->(b:N {K:2})-[:E]->(c:N {K:3})-[:E]->(a), (b)-[:E]->(d:N {K:4})]");
    auto ends = [&](const std::string& mode, const std::string& quant) {
        return names(s, "MATCH " + mode + " (:N {K:1}) [()-[:E]->()]" + quant + " (x) RETURN x.K");
    };
    EXPECT_EQ(ends("", "+"), (std::multiset<std::string>{"1", "2", "3", "4"}));
    EXPECT_EQ(ends("TRAIL", "+"), (std::multiset<std::string>{"1", "2", "3", "4"}));
    EXPECT_EQ(ends("ACYCLIC", "+"), (std::multiset<std::string>{"2", "3", "4"}));
    EXPECT_EQ(ends("SIMPLE", "+"), (std::multiset<std::string>{"1", "2", "3", "4"}));
    EXPECT_EQ(names(s, "MATCH SIMPLE p = (x:N {K:1}) [()-[:E]->()]+ (x) RETURN x.K"),
              (std::multiset<std::string>{"1"}));
}

TEST(Matcher, ShortestAndAny) {
    Database db;
    Session s(db);
    s.execute("[CREATE (a:N {K:1})-[:E]->(b:N {K:2})-[:E]->(c:N {K:3}), (a)-[:E]->(c)]");
    auto q = [&](const std::string& sel) {
        Statement st = parse_statement("MATCH " + sel + " p = (:N {K:1}) [()-[:E]->()]+ (:N {K:3})");
        return find_bindings(*st.as<MatchStmt>(), s.view());
    };
    auto all = q("");
    EXPECT_EQ(all.rows.size(), 2u);
    auto shortest = q("SHORTEST");
    ASSERT_EQ(shortest.rows.size(), 1u);
    EXPECT_EQ(shortest.walks[0].size(), 3u);
    auto any = q("ANY");
    ASSERT_EQ(any.rows.size(), 1u);
}

TEST(Matcher, DeterministicOrder) {
    Database db;
    Session s(db);
    s.execute(testkit::kFamily);
    Statement st = parse_statement("MATCH (a)-[:Child]->(b) RETURN a, b");
    auto first = find_bindings(*st.as<MatchStmt>(), s.view());
    auto second = find_bindings(*st.as<MatchStmt>(), s.view());
    EXPECT_EQ(first.walks, second.walks);
    EXPECT_TRUE(std::is_sorted(first.walks.begin(), first.walks.end()));
}

TEST(Matcher, OracleAgreementOnDenseGraphs) {
    std::mt19937_64 rng(5);
    for (int g = 0; g < 150; ++g) {
        Database db;
        auto graph = testkit::make_random_graph(db, rng, 6, 12, 2);
        Snapshot snap = db.snapshot();
        for (RepetitionMode mode : {RepetitionMode::None, RepetitionMode::Trail, RepetitionMode::Acyclic}) {
            auto p = testkit::make_random_pattern(graph, mode, rng);
            EXPECT_EQ(testkit::PatternOracle(p, snap).run(), testkit::matcher_rows(p.text(), snap)) << p.text();
        }
    }
}

TEST(Matcher, TerminatesOnSelfLoops) {
    Database db;
    Session s(db);
    std::string text = "[CREATE (a:N {K:1})";
    for (int i = 0; i < 10; ++i) text += ", (a)-[:E]->(a)";
    s.execute(text + "]");
    EXPECT_EQ(names(s, "MATCH (:N) [(q)-[:E]->()]+ (x) RETURN x.K"), (std::multiset<std::string>{"1"}));
}
