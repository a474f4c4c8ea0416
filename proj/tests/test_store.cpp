#include <gtest/gtest.h>

#include "support/helpers.hpp"
#include "tgdb/error.hpp"
#include "tgdb/store.hpp"

using namespace tgdb;
using testkit::TempDir;

namespace {

ColumnDescriptor col(const std::string& name, BaseType t, bool nullable = true) {
    return {name, DataType{t}, nullable};
}

void define_people(Database& db) {
    Transaction tx = db.begin();
    Catalog& cat = tx.mutable_catalog();
    cat.define_node_type("PERSON", {col("NAME", BaseType::String, false), col("AGE", BaseType::Integer)});
    cat.define_node_type("STUDENT", {col("SCHOOL", BaseType::String)}, std::string("PERSON"));
    cat.define_edge_type("KNOWS", {}, "PERSON", "PERSON");
    db.commit(tx);
}

TypeId type(const Database& db, const std::string& label) {
    return db.snapshot().catalog().require_label(label).id;
}

}  // namespace

TEST(Catalog, HierarchyAndEffectiveColumns) {
    Catalog cat;
    TypeId person = cat.define_node_type("PERSON", {col("NAME", BaseType::String)});
    TypeId student = cat.define_node_type("STUDENT", {col("SCHOOL", BaseType::String)}, std::string("PERSON"));
    TypeId teacher = cat.define_node_type("TEACHER", {}, std::string("PERSON"));
    EXPECT_TRUE(cat.is_subtype_of(student, person));
    EXPECT_FALSE(cat.is_subtype_of(person, student));
    EXPECT_EQ(cat.root_of(student), person);
    EXPECT_EQ(cat.common_supertype(student, teacher), person);
    EXPECT_EQ(cat.subtype_closure(person), (std::set<TypeId>{person, student, teacher}));

    auto cols = cat.effective_columns(student);
    ASSERT_GE(cols.size(), 2u);
    EXPECT_EQ(cols.back().name, "SCHOOL");
    EXPECT_EQ(cat.effective_key(student), cat.effective_key(person));
    EXPECT_THROW(cat.define_node_type("PERSON", {}), Error);
    EXPECT_THROW(cat.define_edge_type("E", {}, "PERSON", "NOPE"), Error);
}

TEST(Store, RollbackLeavesNoTrace) {
    Database db;
    define_people(db);
    std::string before = db.state_digest();
    Transaction tx = db.begin();
    tx.insert_node(type(db, "PERSON"), {{"NAME", Value("Ann")}});
    db.rollback(tx);
    EXPECT_EQ(db.state_digest(), before);
    EXPECT_FALSE(tx.is_open());
}

TEST(Store, SnapshotsAreIsolated) {
    Database db;
    define_people(db);
    Snapshot old = db.snapshot();
    Transaction tx = db.begin();
    Uid a = tx.insert_node(type(db, "PERSON"), {{"NAME", Value("Ann")}});
    EXPECT_TRUE(tx.view().contains(a));
    EXPECT_FALSE(db.snapshot().contains(a));
    db.commit(tx);
    EXPECT_TRUE(db.snapshot().contains(a));
    EXPECT_FALSE(old.contains(a));
}

TEST(Store, FirstCommitterWins) {
    Database db;
    define_people(db);
    Transaction t1 = db.begin();
    Transaction t2 = db.begin();
    t1.insert_node(type(db, "PERSON"), {{"NAME", Value("Ann")}});
    t2.insert_node(type(db, "PERSON"), {{"NAME", Value("Bob")}});
    db.commit(t1);
    EXPECT_THROW(db.commit(t2), Error);
}

TEST(Store, ValidationRules) {
    Database db;
    define_people(db);
    TypeId person = type(db, "PERSON");
    auto rule_of = [&](auto&& body) -> std::string {
        Transaction tx = db.begin();
        try {
            body(tx);
            db.commit(tx);
        } catch (const ValidationError& e) {
            return e.rule();
        } catch (const Error& e) {
            return std::string("other: ") + e.what();
        }
        return "committed";
    };
    EXPECT_EQ(rule_of([&](Transaction& tx) { tx.insert_node(person, {}); }), "not null");
    // Ill-typed values are refused on insert, before commit-time validation.
    EXPECT_EQ(rule_of([&](Transaction& tx) { tx.insert_node(person, {{"NAME", Value("Ann")}, {"AGE", Value("x")}}); })
                  .rfind("other: type mismatch", 0),
              0u);
    EXPECT_EQ(rule_of([&](Transaction& tx) {
                  tx.insert_node(person, {{"NAME", Value("Ann")}, {"ID", Value(7)}});
                  tx.insert_node(type(db, "STUDENT"), {{"NAME", Value("Bob")}, {"ID", Value(7)}});
              }),
              "key uniqueness");
    {
        Transaction tx = db.begin();
        Catalog& cat = tx.mutable_catalog();
        Multiplicity m;
        m.leaving_min = 1;
        cat.set_multiplicity(cat.require_label("KNOWS").id, m);
        db.commit(tx);
    }
    EXPECT_EQ(rule_of([&](Transaction& tx) { tx.insert_node(person, {{"NAME", Value("Lonely")}}); }),
              "multiplicity");
    EXPECT_EQ(rule_of([&](Transaction& tx) {
                  Uid a = tx.insert_node(person, {{"NAME", Value("A")}});
                  Uid b = tx.insert_node(person, {{"NAME", Value("B")}});
                  tx.insert_edge(tx.catalog().require_label("KNOWS").id, a, b, {});
                  tx.insert_edge(tx.catalog().require_label("KNOWS").id, b, a, {});
              }),
              "committed");
    validate_full(db.snapshot());
}

TEST(Store, DeleteNeedsCascade) {
    Database db;
    define_people(db);
    Transaction tx = db.begin();
    Uid a = tx.insert_node(type(db, "PERSON"), {{"NAME", Value("A")}});
    Uid b = tx.insert_node(type(db, "PERSON"), {{"NAME", Value("B")}});
    Uid e = tx.insert_edge(type(db, "KNOWS"), a, b, {});
    db.commit(tx);

    Transaction del = db.begin();
    EXPECT_THROW(del.delete_row(a), Error);
    del.delete_row(a, true);
    EXPECT_FALSE(del.view().contains(e));
    db.commit(del);
    EXPECT_EQ(db.snapshot().all_edges().size(), 0u);
    EXPECT_EQ(db.snapshot().graphs().component_of(b).nodes.size(), 1u);
}

TEST(Store, KeyChangeRewritesEdgeReferences) {
    Database db;
    define_people(db);
    Transaction tx = db.begin();
    TypeId person = type(db, "PERSON");
    Uid a = tx.insert_node(person, {{"NAME", Value("A")}});
    Uid b = tx.insert_node(person, {{"NAME", Value("B")}});
    Uid e = tx.insert_edge(type(db, "KNOWS"), a, b, {});
    db.commit(tx);

    Transaction alter = db.begin();
    CascadeReport rep = alter.alter_primary_key(person, {"NAME"});
    db.commit(alter);
    EXPECT_EQ(rep.edges_rewritten, 1u);
    Snapshot s = db.snapshot();
    EXPECT_EQ(s.row(e)->value_or_null(kLeavingColumn), Value("A"));
    EXPECT_EQ(s.row(e)->value_or_null(kArrivingColumn), Value("B"));

    Transaction rename = db.begin();
    rename.update_row(b, {{"NAME", Value("Bea")}});
    db.commit(rename);
    EXPECT_EQ(db.snapshot().row(e)->value_or_null(kArrivingColumn), Value("Bea"));
    EXPECT_EQ(db.snapshot().endpoints(e)->arriving, b);
}

TEST(Store, PersistsAndReplays) {
    TempDir dir("persist");
    std::string digest;
    {
        Database db(dir / "people");
        define_people(db);
        Transaction tx = db.begin();
        Uid a = tx.insert_node(type(db, "PERSON"), {{"NAME", Value("A")}, {"AGE", Value(40)}});
        Uid b = tx.insert_node(type(db, "STUDENT"), {{"NAME", Value("B")}, {"SCHOOL", Value("X")}});
        tx.insert_edge(type(db, "KNOWS"), a, b, {});
        db.commit(tx);
        digest = db.state_digest();
        EXPECT_EQ(db.name(), "people");
    }
    Database again(dir / "people");
    EXPECT_EQ(again.state_digest(), digest);
    EXPECT_TRUE(again.warnings().empty());
    validate_full(again.snapshot());
}

TEST(Store, TruncatedTailIsDropped) {
    TempDir dir("truncate");
    std::string first;
    std::uintmax_t size_after_first = 0;
    {
        Database db(dir / "log");
        define_people(db);
        first = db.state_digest();
        size_after_first = std::filesystem::file_size(dir / "log");
        Transaction tx = db.begin();
        tx.insert_node(type(db, "PERSON"), {{"NAME", Value("A")}});
        db.commit(tx);
    }
    std::filesystem::resize_file(dir / "log", std::filesystem::file_size(dir / "log") - 3);
    Database db(dir / "log");
    EXPECT_EQ(db.state_digest(), first);
    EXPECT_FALSE(db.warnings().empty());
    // The damaged tail is cut so later commits append cleanly.
    EXPECT_EQ(std::filesystem::file_size(dir / "log"), size_after_first);
    Transaction tx = db.begin();
    tx.insert_node(type(db, "PERSON"), {{"NAME", Value("B")}});
    db.commit(tx);
    std::string now = db.state_digest();
    Database reopened(dir / "log");
    EXPECT_EQ(reopened.state_digest(), now);
}

TEST(Store, CorruptRecordStopsReplay) {
    TempDir dir("corrupt");
    std::string first;
    {
        Database db(dir / "log");
        define_people(db);
        first = db.state_digest();
        Transaction tx = db.begin();
        tx.insert_node(type(db, "PERSON"), {{"NAME", Value("A")}});
        db.commit(tx);
    }
    std::string bytes = testkit::slurp(dir / "log");
    bytes[bytes.size() - 2] ^= 0x55;
    std::ofstream(dir / "log", std::ios::binary | std::ios::trunc) << bytes;
    Database db(dir / "log");
    EXPECT_EQ(db.state_digest(), first);
    EXPECT_FALSE(db.warnings().empty());
}
