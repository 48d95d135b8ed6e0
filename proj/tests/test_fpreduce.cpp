#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "icft/error.hpp"
#include "icft/fpreduce.hpp"
#include "oracles.hpp"

using namespace icft;

namespace {

Item feat(std::size_t attr, int value = 1) { return {false, attr, value}; }

std::vector<WeightedTransaction> weight1(const std::vector<std::vector<Item>>& ts) {
    std::vector<WeightedTransaction> out;
    for (const auto& t : ts) out.push_back({t, 1});
    return out;
}

}  // namespace

TEST_CASE("fp_growth on the classic 3-transaction example") {
    // {a,b,c}, {a,b}, {a,c} with minsup 2/3
    Item a = feat(0), b = feat(1), c = feat(2);
    std::vector<std::vector<Item>> ts = {{a, b, c}, {a, b}, {a, c}};
    FPTree fp(weight1(ts), 2, false);

    // header: a(3) then b(2), c(2) by attribute order
    REQUIRE(fp.header().size() == 3);
    CHECK(fp.header()[0].item == a);
    CHECK(fp.header()[0].support == 3);
    CHECK(fp.header()[1].item == b);
    CHECK(fp.header()[2].item == c);

    auto got = fp_growth(fp, 2);
    auto want = oracles::apriori(ts, 2);
    CHECK(got == want);
    // spot checks: {a}:3 {b}:2 {c}:2 {a,b}:2 {a,c}:2
    CHECK(got.size() == 5);
    CHECK(std::count_if(got.begin(), got.end(), [&](const Pattern& p) {
              return p.items == std::vector<Item>{a, b} && p.support == 2;
          }) == 1);
}

TEST_CASE("fp_growth corner cases") {
    Item a = feat(0), b = feat(1);
    SUBCASE("one transaction gives a single path") {
        FPTree fp(weight1({{a, b}}), 1, false);
        auto got = fp_growth(fp, 1);
        CHECK(got.size() == 3);  // {a},{b},{a,b}
    }
    SUBCASE("minsup above every support empties the tree") {
        FPTree fp(weight1({{a}, {b}, {a}}), 4, false);
        CHECK(fp.bare());
        CHECK(fp_growth(fp, 4).empty());
    }
}

TEST_CASE("fp_growth equals Apriori on random transaction sets") {
    std::mt19937 rng(71);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t universe = 4 + rng() % 7;  // <= 10 items
        std::size_t n = 5 + rng() % 36;        // <= 40 transactions
        std::vector<std::vector<Item>> ts;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Item> t;
            for (std::size_t it = 0; it < universe; ++it)
                if (rng() % 3 == 0) t.push_back(feat(it));
            if (!t.empty()) ts.push_back(t);
        }
        if (ts.empty()) continue;
        for (long long min_count : {1LL, 2LL, 3LL, (long long)(ts.size() / 2 + 1)}) {
            FPTree fp(weight1(ts), min_count, false);
            CHECK(fp_growth(fp, min_count) == oracles::apriori(ts, min_count));
        }
    }
}

TEST_CASE("downward closure holds on fp_growth output") {
    std::mt19937 rng(73);
    std::vector<std::vector<Item>> ts;
    for (int i = 0; i < 30; ++i) {
        std::vector<Item> t;
        for (std::size_t it = 0; it < 8; ++it)
            if (rng() % 3 == 0) t.push_back(feat(it));
        if (!t.empty()) ts.push_back(t);
    }
    long long min_count = 3;
    FPTree fp(weight1(ts), min_count, false);
    auto patterns = fp_growth(fp, min_count);
    std::map<std::vector<Item>, long long> support;
    for (const auto& p : patterns) support[p.items] = p.support;
    for (const auto& p : patterns) {
        for (std::size_t drop = 0; drop < p.items.size(); ++drop) {
            if (p.items.size() == 1) continue;
            auto sub = p.items;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
            REQUIRE(support.count(sub));
            CHECK(support[sub] >= p.support);
        }
    }
}

namespace {

FTree tiny_ftree() {
    // 4 instances over 2 slots
    FTree t(2);
    t.insert({{0, 0}, 0});
    t.insert({{0, 1}, 0});
    t.insert({{0, 1}, 0});
    t.insert({{1, 1}, 1});
    return t;
}

std::vector<std::vector<Item>> raw_transactions(const FTree& t) {
    std::vector<std::vector<Item>> out;
    t.for_each_leaf([&](const std::vector<int>& path, const std::map<int, long long>& hist) {
        for (const auto& [cls, c] : hist) {
            std::vector<Item> items;
            for (std::size_t slot = 0; slot < path.size(); ++slot)
                items.push_back({false, slot, path[slot]});
            items.push_back({true, t.arity(), cls});
            for (long long k = 0; k < c; ++k) out.push_back(items);
        }
    });
    return out;
}

}  // namespace

TEST_CASE("build_fptree matches the two-scan construction from the raw log") {
    std::mt19937 rng(79);
    for (int trial = 0; trial < 15; ++trial) {
        FTree t(3);
        std::uniform_int_distribution<int> val(0, 3);
        std::size_t n = 20 + rng() % 80;
        for (std::size_t i = 0; i < n; ++i)
            t.insert({{val(rng), val(rng), val(rng)}, val(rng) % 2});
        double minsup = 0.1;
        FPTree from_ftree = build_fptree(t, minsup);
        FPTree two_scan(
            [&] {
                std::vector<WeightedTransaction> w;
                for (const auto& items : raw_transactions(t)) w.push_back({items, 1});
                return w;
            }(),
            min_count_of(minsup, t.instance_total()), true);
        CHECK(from_ftree.canonical_serialize() == two_scan.canonical_serialize());
    }
}

TEST_CASE("build_fptree rejects an empty tree; high minsup leaves a bare root") {
    FTree empty(2);
    CHECK_THROWS_AS(build_fptree(empty, 0.1), Error);

    FTree t = tiny_ftree();
    FPTree fp(weight1({{feat(0)}, {feat(1)}, {feat(2)}}), 99, false);
    CHECK(fp.bare());
}

TEST_CASE("incremental F-Tree rebuild equals batch FP-tree construction") {
    std::mt19937 rng(83);
    std::uniform_int_distribution<int> val(0, 2);
    FTree incremental(2);
    FTree batch(2);
    std::vector<DiscreteInstance> all;
    for (int i = 0; i < 150; ++i)
        all.push_back({{val(rng), val(rng)}, val(rng) % 2});
    for (int i = 0; i < 100; ++i) incremental.insert(all[static_cast<std::size_t>(i)]);
    // delta arrives later
    for (int i = 100; i < 150; ++i) incremental.insert(all[static_cast<std::size_t>(i)]);
    for (const auto& x : all) batch.insert(x);
    CHECK(build_fptree(incremental, 0.05).canonical_serialize() ==
          build_fptree(batch, 0.05).canonical_serialize());
}

TEST_CASE("score_attributes accumulates class-bearing pattern mass") {
    FTree t = tiny_ftree();
    long long n = t.instance_total();
    auto patterns = fp_growth(build_fptree(t, 0.25), min_count_of(0.25, n));
    auto scores = score_attributes(patterns, 2, n);
    CHECK(scores[0] > 0);
    CHECK(scores[1] > 0);

    SUBCASE("no class-bearing patterns scores everything 0") {
        std::vector<Pattern> no_class = {{{feat(0)}, 3}, {{feat(0), feat(1)}, 2}};
        auto zeroes = score_attributes(no_class, 2, 4);
        CHECK(zeroes == std::vector<double>{0, 0});
    }
    SUBCASE("duplicating every transaction leaves scores unchanged") {
        FTree doubled(2);
        for (int rep = 0; rep < 2; ++rep) {
            doubled.insert({{0, 0}, 0});
            doubled.insert({{0, 1}, 0});
            doubled.insert({{0, 1}, 0});
            doubled.insert({{1, 1}, 1});
        }
        long long n2 = doubled.instance_total();
        auto p2 = fp_growth(build_fptree(doubled, 0.25), min_count_of(0.25, n2));
        auto s2 = score_attributes(p2, 2, n2);
        for (std::size_t slot = 0; slot < 2; ++slot)
            CHECK(s2[slot] == doctest::Approx(scores[slot]));
    }
}

TEST_CASE("attribute tied to the class outranks one independent of it") {
    // slot 0 mirrors the class exactly; slot 1 is constant
    FTree t(2);
    for (int i = 0; i < 4; ++i) t.insert({{i % 2, 0}, i % 2});
    long long n = t.instance_total();
    auto patterns = fp_growth(build_fptree(t, 0.1), min_count_of(0.1, n));
    auto scores = score_attributes(patterns, 2, n);
    CHECK(scores[0] > scores[1] - 1e-12);
    auto selected = select_features(scores, 1, 0.0);
    CHECK(selected == std::vector<std::size_t>{0});
}

TEST_CASE("select_features ranking, floor and fallback") {
    SUBCASE("rank then truncate") {
        CHECK(select_features({0.9, 0.1, 0.5}, 2, 0.2) ==
              std::vector<std::size_t>{0, 2});
    }
    SUBCASE("all-zero scores fall back to the lowest id, flagged") {
        bool degenerate = false;
        auto sel = select_features({0, 0, 0}, 2, 0.5, &degenerate);
        CHECK(sel == std::vector<std::size_t>{0});
        CHECK(degenerate);
    }
    SUBCASE("top_k covering everything returns score order") {
        CHECK(select_features({0.2, 0.9, 0.4}, 10, 0.0) ==
              std::vector<std::size_t>{1, 2, 0});
    }
    SUBCASE("argmax invariant under uniform positive scaling") {
        std::vector<double> s = {0.3, 0.7, 0.1};
        auto a = select_features(s, 2, 0.0);
        for (auto& v : s) v *= 17.5;
        CHECK(select_features(s, 2, 0.0) == a);
    }
}
