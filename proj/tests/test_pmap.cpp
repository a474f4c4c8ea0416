#include <gtest/gtest.h>

#include <map>
#include <random>

#include "tgdb/pmap.hpp"

using tgdb::PMap;
using tgdb::PSet;

TEST(PMap, MatchesStdMapUnderRandomEdits) {
    std::mt19937_64 rng(1);
    PMap<int, int> p;
    std::map<int, int> m;
    std::vector<std::pair<PMap<int, int>, std::map<int, int>>> history;
    for (int i = 0; i < 5000; ++i) {
        int k = static_cast<int>(rng() % 300);
        if (rng() % 3 == 0) {
            EXPECT_EQ(p.erase(k), m.erase(k) == 1);
        } else {
            int v = static_cast<int>(rng() % 1000);
            p.set(k, v);
            m[k] = v;
        }
        if (i % 500 == 0) history.emplace_back(p, m);
    }
    ASSERT_EQ(p.size(), m.size());
    auto it = m.begin();
    for (auto [k, v] : p) {
        EXPECT_EQ(k, it->first);
        EXPECT_EQ(v, it->second);
        ++it;
    }
    // Older versions are untouched by later edits.
    for (const auto& [snap, ref] : history) {
        ASSERT_EQ(snap.size(), ref.size());
        for (const auto& [k, v] : ref) {
            ASSERT_NE(snap.find(k), nullptr);
            EXPECT_EQ(*snap.find(k), v);
        }
    }
}

TEST(PMap, LowerBoundAndEquality) {
    PMap<int, int> a;
    for (int i = 0; i < 100; i += 10) a.set(i, i * i);
    auto lb = a.lower_bound(35);
    ASSERT_TRUE(lb != a.end());
    EXPECT_EQ(lb.key(), 40);
    EXPECT_TRUE(a.lower_bound(1000) == a.end());

    PMap<int, int> b;
    for (int i = 90; i >= 0; i -= 10) b.set(i, i * i);
    EXPECT_TRUE(a == b);
    b.set(50, 0);
    EXPECT_FALSE(a == b);
}

TEST(PSet, IteratesInOrder) {
    PSet<int> s;
    for (int x : {5, 3, 9, 1, 3}) s.insert(x);
    std::vector<int> got(s.begin(), s.end());
    EXPECT_EQ(got, (std::vector<int>{1, 3, 5, 9}));
    s.erase(3);
    EXPECT_FALSE(s.contains(3));
    EXPECT_EQ(s.size(), 3u);
}
