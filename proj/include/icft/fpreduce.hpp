#ifndef ICFT_FPREDUCE_HPP
#define ICFT_FPREDUCE_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "icft/ftree.hpp"

namespace icft {

// A transaction item: either feature slot = value or class = value.
// Class items sort behind every feature slot via attr = slot count.
struct Item {
    bool is_class = false;
    std::size_t attr = 0;
    int value = 0;

    bool operator<(const Item& o) const {
        return std::tie(attr, value) < std::tie(o.attr, o.value);
    }
    bool operator==(const Item& o) const {
        return is_class == o.is_class && attr == o.attr && value == o.value;
    }
};

struct WeightedTransaction {
    std::vector<Item> items;
    long long weight = 1;
};

// Support-descending prefix tree with header table and per-item node links.
class FPTree {
public:
    struct Node {
        std::size_t rank;  // header index
        long long count = 0;
        Node* parent = nullptr;
        std::map<std::size_t, std::unique_ptr<Node>> children;  // keyed by rank
        Node* next = nullptr;                                   // node-link chain
    };

    struct HeaderEntry {
        Item item;
        long long support = 0;
        Node* head = nullptr;
        Node* tail = nullptr;
    };

    // Items below min_count are dropped from transactions before insertion;
    // class items are kept regardless when class_exempt is set.
    FPTree(const std::vector<WeightedTransaction>& transactions,
           long long min_count, bool class_exempt);

    const std::vector<HeaderEntry>& header() const { return header_; }
    const Node& root() const { return root_; }
    bool bare() const { return root_.children.empty(); }

    std::string canonical_serialize() const;

private:
    std::vector<HeaderEntry> header_;
    std::map<Item, std::size_t> rank_;
    Node root_;

    void insert(const std::vector<std::size_t>& ranks, long long weight);
};

struct Pattern {
    std::vector<Item> items;  // sorted ascending
    long long support = 0;

    bool operator<(const Pattern& o) const {
        return std::tie(items, support) < std::tie(o.items, o.support);
    }
    bool operator==(const Pattern& o) const {
        return items == o.items && support == o.support;
    }
};

// One transaction per (leaf path, class) pair of the F-Tree, weighted by the
// leaf histogram; no rescan of the raw instance log. Throws on an empty tree.
FPTree build_fptree(const FTree& t, double minsup);

std::vector<WeightedTransaction> ftree_transactions(const FTree& t);

long long min_count_of(double minsup, long long n);

// Exact frequent itemsets (support >= ceil(minsup * N)) via conditional
// pattern bases and recursive conditional trees.
std::vector<Pattern> fp_growth(const FPTree& fp, long long min_count);

struct FeatureReport {
    std::vector<double> scores;           // per feature slot
    std::vector<std::size_t> selected;    // slots, best first
    bool degenerate = false;              // fallback fired (all below floor)
};

// score(slot) = sum over class-bearing frequent itemsets touching the slot of
// support / N.
std::vector<double> score_attributes(const std::vector<Pattern>& patterns,
                                     std::size_t n_slots, long long n);

std::vector<std::size_t> select_features(const std::vector<double>& scores,
                                         std::size_t top_k, double floor,
                                         bool* degenerate = nullptr);

nlohmann::json feature_report_json(const FeatureReport& report, const Schema& schema,
                                   double minsup, std::size_t top_k);

}  // namespace icft

#endif
