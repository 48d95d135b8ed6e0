#ifndef ICFT_FTREE_HPP
#define ICFT_FTREE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icft/discretize.hpp"

namespace icft {

// Trie over discrete instances: one level per feature slot, counted edges,
// class histogram at the leaves. Stores the full instance history; node count
// is bounded by the value domains, not by the stream length.
class FTree {
public:
    struct Node {
        long long count = 0;
        std::map<int, std::unique_ptr<Node>> children;  // value-ascending
        std::map<int, long long> hist;                  // leaves only
    };

    explicit FTree(std::size_t arity) : arity_(arity) {}

    std::size_t arity() const { return arity_; }
    long long instance_total() const { return root_.count; }
    std::uint64_t sequence_number() const { return seq_; }
    int num_classes() const { return num_classes_; }
    bool empty() const { return root_.count == 0; }
    const Node& root() const { return root_; }

    void insert(const DiscreteInstance& x);

    // Pattern slots left empty act as wildcards.
    long long path_count(const std::vector<std::optional<int>>& pattern) const;

    struct Projection {
        QuantaMatrix q;
        std::vector<int> values;  // target value behind each column
        bool empty = false;
    };
    // Class x target-value counts over instances matching every constraint.
    Projection project_quanta(const std::vector<std::pair<std::size_t, int>>& constraints,
                              std::size_t target) const;

    // Class histogram over instances matching every constraint.
    std::map<int, long long> class_hist(
        const std::vector<std::pair<std::size_t, int>>& constraints) const;

    struct Supports {
        std::map<std::pair<std::size_t, int>, long long> feature;  // (slot, value)
        std::map<int, long long> cls;
    };
    Supports level_supports() const;

    struct Stats {
        std::size_t nodes = 0;  // includes the root
        std::size_t depth = 0;
        long long instance_total = 0;
    };
    Stats stats() const;

    // Visits every leaf with its root-to-leaf value path and class histogram.
    void for_each_leaf(
        const std::function<void(const std::vector<int>&, const std::map<int, long long>&)>& fn)
        const;

    // Depth-first, value-ascending (level, value, count[, hist]) listing.
    std::string canonical_serialize() const;

private:
    std::size_t arity_;
    Node root_;
    std::uint64_t seq_ = 0;
    int num_classes_ = 0;
};

}  // namespace icft

#endif
