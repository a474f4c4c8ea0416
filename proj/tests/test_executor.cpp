#include <gtest/gtest.h>

#include "support/helpers.hpp"
#include "tgdb/error.hpp"

using namespace tgdb;
using testkit::column;

namespace {

const TypeDescriptor& type_of(Session& s, const std::string& label) {
    static Snapshot keep;
    keep = s.view();
    return keep.catalog().require_label(label);
}

std::optional<ColumnDescriptor> column_of(Session& s, const std::string& label, const std::string& name) {
    Snapshot v = s.view();
    return v.catalog().effective_column(v.catalog().require_label(label).id, name);
}

}  // namespace

TEST(Executor, CreateDefinesTypesFromInstances) {
    Database db;
    Session s(db);
    s.execute(testkit::kFamily);
    const auto& person = type_of(s, "PERSON");
    EXPECT_EQ(person.kind, TypeKind::Node);
    const auto& child = type_of(s, "CHILD");
    EXPECT_EQ(child.kind, TypeKind::Edge);
    EXPECT_EQ(child.leaving_type, person.id);
    EXPECT_EQ(s.view().all_nodes().size(), 5u);
    EXPECT_EQ(s.view().all_edges().size(), 4u);
    EXPECT_EQ(s.view().graphs().size(), 1u);
}

TEST(Executor, EdgeDirection) {
    Database db;
    Session s(db);
    s.execute("CREATE (:A {N:1})<-[:E]-(:B {N:2})");
    EXPECT_EQ(column(s, "MATCH (b:B)-[:E]->(a:A) RETURN a.N"), (std::multiset<std::string>{"1"}));
    EXPECT_TRUE(column(s, "MATCH (a:A)-[:E]->(b:B) RETURN b.N").empty());
    Snapshot v = s.view();
    EXPECT_EQ(v.catalog().require_label("E").leaving_type, v.catalog().require_label("B").id);
}

TEST(Executor, ColumnsWidenAndRetype) {
    Database db;
    Session s(db);
    s.execute("CREATE (:T {K:1, V:2})");
    EXPECT_EQ(column_of(s, "T", "V")->type.base, BaseType::Integer);
    s.execute("CREATE (:T {K:2, V:2.5, W:'new'})");
    EXPECT_EQ(column_of(s, "T", "V")->type.base, BaseType::Decimal);
    ASSERT_TRUE(column_of(s, "T", "W").has_value());
    EXPECT_EQ(column(s, "MATCH (t:T {K:1}) RETURN t.V"), (std::multiset<std::string>{"2"}));
    EXPECT_THROW(s.execute("CREATE (:T {K:3, V:'text'})"), Error);
}

TEST(Executor, LabelChainsCreateSubtypes) {
    Database db;
    Session s(db);
    s.execute("CREATE (:Part {PartId:'P1'}), (:Part:Purchased {PartId:'P2', Price:1.5})");
    Snapshot v = s.view();
    const auto& sub = v.catalog().require_label("PURCHASED");
    ASSERT_TRUE(sub.supertype.has_value());
    EXPECT_EQ(*sub.supertype, v.catalog().require_label("PART").id);
    EXPECT_EQ(column(s, "MATCH (p:Part) RETURN p.PartId").size(), 2u);
    EXPECT_EQ(column(s, "MATCH (p:Purchased) RETURN p.PartId"), (std::multiset<std::string>{"P2"}));
}

TEST(Executor, ThenSharesScope) {
    Database db;
    Session s(db);
    s.execute("CREATE (a:T {N:1}) THEN CREATE (a)-[:E]->(:T {N:2})");
    EXPECT_EQ(column(s, "MATCH (:T {N:1})-[:E]->(x) RETURN x.N"), (std::multiset<std::string>{"2"}));
}

TEST(Executor, MatchCreatePerBinding) {
    Database db;
    Session s(db);
    s.execute("CREATE (:T {N:1}), (:T {N:2}), (:T {N:3})");
    s.execute("MATCH (x:T) CREATE (x)-[:HAS]->(:Tag {V:x.N})");
    EXPECT_EQ(column(s, "MATCH (:T)-[:HAS]->(g) RETURN g.V"), (std::multiset<std::string>{"1", "2", "3"}));
}

TEST(Executor, SetAndNull) {
    Database db;
    Session s(db);
    s.execute("CREATE (:T {N:1, Note:'x'})");
    s.execute("MATCH (t:T) SET t.Note = NULL, t.Extra = 5");
    EXPECT_EQ(column(s, "MATCH (t:T) RETURN t.Note"), (std::multiset<std::string>{""}));
    EXPECT_EQ(column(s, "MATCH (t:T) RETURN t.Extra"), (std::multiset<std::string>{"5"}));
}

TEST(Executor, DeleteAndCascade) {
    Database db;
    Session s(db);
    s.execute(testkit::kFamily);
    EXPECT_THROW(s.execute("MATCH (p:Person {name:'Mary Smith'}) DELETE p"), Error);
    s.execute("MATCH (p:Person {name:'Mary Smith'}) DELETE p CASCADE");
    EXPECT_EQ(s.view().all_nodes().size(), 4u);
    EXPECT_EQ(s.view().all_edges().size(), 1u);
    EXPECT_EQ(s.view().graphs().size(), 3u);
    s.execute("MATCH ()-[e:Child]->() DELETE e");
    EXPECT_TRUE(s.view().all_edges().empty());
}

TEST(Executor, ExistenceCheckWithoutColumns) {
    Database db;
    Session s(db);
    s.execute(testkit::kFamily);
    auto yes = s.execute("MATCH (:Person {name:'Fred Smith'})-[:Child]->(:Person {name:'Mary Smith'})");
    EXPECT_EQ(yes.kind, StatementResult::Kind::Truth);
    EXPECT_TRUE(yes.truth);
    auto no = s.execute("MATCH (:Person {name:'Mary Smith'})-[:Child]->(:Person {name:'Fred Smith'})");
    EXPECT_FALSE(no.truth);
}

TEST(Executor, AlterAddCheckAndCardinality) {
    Database db;
    Session s(db);
    s.execute("CREATE (:Item {Qty:3})");
    s.execute("alter table item add constraint positive check (qty > 0)");
    EXPECT_THROW(s.execute("CREATE (:Item {Qty:0})"), ValidationError);
    EXPECT_THROW(s.execute("alter table item add column note string not null"), Error);
    s.execute("alter table item add column note string");
    s.execute("CREATE (:Box {N:1})-[:Holds]->(:Item {Qty:1})");
    s.execute("alter type holds set cardinality leaving 1..1");
    EXPECT_THROW(s.execute("CREATE (:Box {N:2})"), ValidationError);
}

TEST(Session, ExplicitTransactions) {
    Database db;
    Session s(db);
    s.execute("CREATE (:T {N:1})");
    s.execute("BEGIN");
    EXPECT_TRUE(s.in_transaction());
    s.execute("CREATE (:T {N:2})");
    EXPECT_EQ(db.snapshot().all_nodes().size(), 1u);
    EXPECT_THROW(s.execute("CREATE (:T {N:'bad'})"), Error);
    EXPECT_TRUE(s.in_transaction());
    EXPECT_EQ(s.view().all_nodes().size(), 2u);
    s.execute("ROLLBACK");
    EXPECT_EQ(db.snapshot().all_nodes().size(), 1u);
    s.execute("BEGIN");
    s.execute("CREATE (:T {N:3})");
    s.execute("COMMIT");
    EXPECT_EQ(db.snapshot().all_nodes().size(), 2u);
}
