#include "icft/ftree.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "icft/error.hpp"

namespace icft {

void FTree::insert(const DiscreteInstance& x) {
    if (x.label < 0)
        throw Error("UnlabeledInstance", "insert requires a labeled instance");
    if (x.values.size() != arity_)
        throw Error("ArityMismatch", "instance has " + std::to_string(x.values.size()) +
                                         " slots, tree expects " + std::to_string(arity_));
    Node* node = &root_;
    ++node->count;
    for (int v : x.values) {
        auto& child = node->children[v];
        if (!child) child = std::make_unique<Node>();
        node = child.get();
        ++node->count;
    }
    ++node->hist[x.label];
    ++seq_;
    num_classes_ = std::max(num_classes_, x.label + 1);
}

namespace {

long long count_matching(const FTree::Node& node,
                         const std::vector<std::optional<int>>& pattern,
                         std::size_t level) {
    if (level == pattern.size()) return node.count;
    if (pattern[level]) {
        auto it = node.children.find(*pattern[level]);
        return it == node.children.end()
                   ? 0
                   : count_matching(*it->second, pattern, level + 1);
    }
    long long total = 0;
    for (const auto& [v, child] : node.children)
        total += count_matching(*child, pattern, level + 1);
    return total;
}

}  // namespace

long long FTree::path_count(const std::vector<std::optional<int>>& pattern) const {
    if (pattern.size() != arity_)
        throw Error("ArityMismatch", "pattern arity must match the tree");
    return count_matching(root_, pattern, 0);
}

FTree::Projection FTree::project_quanta(
    const std::vector<std::pair<std::size_t, int>>& constraints, std::size_t target) const {
    std::vector<std::optional<int>> bound(arity_);
    for (const auto& [slot, v] : constraints) {
        if (slot == target)
            throw Error("TargetConstrained", "target slot appears in constraints");
        bound[slot] = v;
    }

    // class x target-value tally over all matching leaves
    std::map<int, std::map<int, long long>> tally;  // value -> class -> count
    std::vector<int> path(arity_);
    std::function<void(const Node&, std::size_t)> walk = [&](const Node& node,
                                                             std::size_t level) {
        if (level == arity_) {
            for (const auto& [cls, c] : node.hist) tally[path[target]][cls] += c;
            return;
        }
        if (bound[level]) {
            auto it = node.children.find(*bound[level]);
            if (it == node.children.end()) return;
            path[level] = it->first;
            walk(*it->second, level + 1);
            return;
        }
        for (const auto& [v, child] : node.children) {
            path[level] = v;
            walk(*child, level + 1);
        }
    };
    walk(root_, 0);

    Projection p;
    if (tally.empty()) {
        p.empty = true;
        p.q = QuantaMatrix(static_cast<std::size_t>(std::max(num_classes_, 1)), 1);
        return p;
    }
    for (const auto& [v, _] : tally) p.values.push_back(v);
    p.q = QuantaMatrix(static_cast<std::size_t>(std::max(num_classes_, 1)), p.values.size());
    for (std::size_t r = 0; r < p.values.size(); ++r)
        for (const auto& [cls, c] : tally.at(p.values[r]))
            p.q.at(static_cast<std::size_t>(cls), r) = c;
    return p;
}

std::map<int, long long> FTree::class_hist(
    const std::vector<std::pair<std::size_t, int>>& constraints) const {
    std::vector<std::optional<int>> bound(arity_);
    for (const auto& [slot, v] : constraints) bound[slot] = v;
    std::map<int, long long> hist;
    std::function<void(const Node&, std::size_t)> walk = [&](const Node& node,
                                                             std::size_t level) {
        if (level == arity_) {
            for (const auto& [cls, c] : node.hist) hist[cls] += c;
            return;
        }
        if (bound[level]) {
            auto it = node.children.find(*bound[level]);
            if (it != node.children.end()) walk(*it->second, level + 1);
            return;
        }
        for (const auto& [v, child] : node.children) walk(*child, level + 1);
    };
    walk(root_, 0);
    return hist;
}

FTree::Supports FTree::level_supports() const {
    Supports s;
    std::function<void(const Node&, std::size_t)> walk = [&](const Node& node,
                                                             std::size_t level) {
        if (level == arity_) {
            for (const auto& [cls, c] : node.hist) s.cls[cls] += c;
            return;
        }
        for (const auto& [v, child] : node.children) {
            s.feature[{level, v}] += child->count;
            walk(*child, level + 1);
        }
    };
    walk(root_, 0);
    return s;
}

FTree::Stats FTree::stats() const {
    Stats st;
    st.instance_total = root_.count;
    std::function<void(const Node&, std::size_t)> walk = [&](const Node& node,
                                                             std::size_t depth) {
        ++st.nodes;
        st.depth = std::max(st.depth, depth);
        for (const auto& [v, child] : node.children) walk(*child, depth + 1);
    };
    walk(root_, 0);
    return st;
}

void FTree::for_each_leaf(
    const std::function<void(const std::vector<int>&, const std::map<int, long long>&)>& fn)
    const {
    std::vector<int> path(arity_);
    std::function<void(const Node&, std::size_t)> walk = [&](const Node& node,
                                                             std::size_t level) {
        if (level == arity_) {
            fn(path, node.hist);
            return;
        }
        for (const auto& [v, child] : node.children) {
            path[level] = v;
            walk(*child, level + 1);
        }
    };
    walk(root_, 0);
}

std::string FTree::canonical_serialize() const {
    std::ostringstream os;
    os << "ftree arity=" << arity_ << " total=" << root_.count << "\n";
    std::function<void(const Node&, std::size_t, int)> walk =
        [&](const Node& node, std::size_t level, int value) {
            if (level > 0) {
                os << level << ":" << value << ":" << node.count;
                if (level == arity_) {
                    os << ":{";
                    bool first = true;
                    for (const auto& [cls, c] : node.hist) {
                        if (!first) os << ",";
                        os << cls << "=" << c;
                        first = false;
                    }
                    os << "}";
                }
                os << "\n";
            }
            for (const auto& [v, child] : node.children) walk(*child, level + 1, v);
        };
    walk(root_, 0, 0);
    return os.str();
}

}  // namespace icft
