#include "icft/fpreduce.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "icft/error.hpp"

namespace icft {

FPTree::FPTree(const std::vector<WeightedTransaction>& transactions,
               long long min_count, bool class_exempt) {
    std::map<Item, long long> support;
    for (const auto& t : transactions)
        for (const Item& it : t.items) support[it] += t.weight;

    std::vector<std::pair<Item, long long>> kept;
    for (const auto& [item, sup] : support)
        if (sup >= min_count || (class_exempt && item.is_class))
            kept.emplace_back(item, sup);
    // support descending, ties by (attr, value) ascending
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;
                     });
    header_.reserve(kept.size());
    for (const auto& [item, sup] : kept) {
        rank_[item] = header_.size();
        header_.push_back({item, sup, nullptr, nullptr});
    }

    for (const auto& t : transactions) {
        std::vector<std::size_t> ranks;
        for (const Item& it : t.items) {
            auto r = rank_.find(it);
            if (r != rank_.end()) ranks.push_back(r->second);
        }
        std::sort(ranks.begin(), ranks.end());
        if (!ranks.empty()) insert(ranks, t.weight);
    }
}

void FPTree::insert(const std::vector<std::size_t>& ranks, long long weight) {
    Node* node = &root_;
    for (std::size_t r : ranks) {
        auto& child = node->children[r];
        if (!child) {
            child = std::make_unique<Node>();
            child->rank = r;
            child->parent = node;
            // append to the node-link chain
            HeaderEntry& h = header_[r];
            if (h.tail) h.tail->next = child.get();
            else h.head = child.get();
            h.tail = child.get();
        }
        node = child.get();
        node->count += weight;
    }
}

std::string FPTree::canonical_serialize() const {
    std::ostringstream os;
    os << "fptree header=[";
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) os << ",";
        const Item& it = header_[i].item;
        os << (it.is_class ? "c" : "f") << it.attr << "=" << it.value << ":"
           << header_[i].support;
    }
    os << "]\n";
    std::function<void(const Node&, std::size_t)> walk = [&](const Node& node,
                                                             std::size_t depth) {
        for (const auto& [r, child] : node.children) {
            const Item& it = header_[r].item;
            os << std::string(depth, ' ') << (it.is_class ? "c" : "f") << it.attr << "="
               << it.value << ":" << child->count << "\n";
            walk(*child, depth + 1);
        }
    };
    walk(root_, 0);
    return os.str();
}

long long min_count_of(double minsup, long long n) {
    auto c = static_cast<long long>(std::ceil(minsup * static_cast<double>(n) - 1e-9));
    return std::max<long long>(c, 1);
}

std::vector<WeightedTransaction> ftree_transactions(const FTree& t) {
    std::vector<WeightedTransaction> out;
    t.for_each_leaf([&](const std::vector<int>& path, const std::map<int, long long>& hist) {
        for (const auto& [cls, c] : hist) {
            WeightedTransaction w;
            for (std::size_t slot = 0; slot < path.size(); ++slot)
                w.items.push_back({false, slot, path[slot]});
            w.items.push_back({true, t.arity(), cls});
            w.weight = c;
            out.push_back(std::move(w));
        }
    });
    return out;
}

FPTree build_fptree(const FTree& t, double minsup) {
    if (t.empty())
        throw Error("EmptyTree", "build_fptree needs a non-empty F-Tree");
    return FPTree(ftree_transactions(t), min_count_of(minsup, t.instance_total()), true);
}

namespace {

void growth(const FPTree& fp, long long min_count, const std::vector<Item>& suffix,
            std::vector<Pattern>& out) {
    const auto& header = fp.header();
    for (std::size_t i = header.size(); i-- > 0;) {
        if (header[i].support < min_count) continue;  // class-exempt stragglers
        Pattern p;
        p.items = suffix;
        p.items.push_back(header[i].item);
        std::sort(p.items.begin(), p.items.end());
        p.support = header[i].support;
        out.push_back(p);

        // conditional pattern base: prefix path of every node in the chain
        std::vector<WeightedTransaction> base;
        for (const FPTree::Node* node = header[i].head; node; node = node->next) {
            WeightedTransaction w;
            w.weight = node->count;
            for (const FPTree::Node* up = node->parent; up && up->parent; up = up->parent)
                w.items.push_back(header[up->rank].item);
            if (!w.items.empty()) base.push_back(std::move(w));
        }
        if (base.empty()) continue;
        FPTree cond(base, min_count, false);
        if (!cond.bare()) growth(cond, min_count, p.items, out);
    }
}

}  // namespace

std::vector<Pattern> fp_growth(const FPTree& fp, long long min_count) {
    std::vector<Pattern> out;
    growth(fp, min_count, {}, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> score_attributes(const std::vector<Pattern>& patterns,
                                     std::size_t n_slots, long long n) {
    std::vector<double> scores(n_slots, 0.0);
    for (const Pattern& p : patterns) {
        bool has_class = false;
        for (const Item& it : p.items)
            if (it.is_class) { has_class = true; break; }
        if (!has_class) continue;
        std::vector<bool> touched(n_slots, false);
        for (const Item& it : p.items)
            if (!it.is_class) touched[it.attr] = true;
        double frac = static_cast<double>(p.support) / static_cast<double>(n);
        for (std::size_t slot = 0; slot < n_slots; ++slot)
            if (touched[slot]) scores[slot] += frac;
    }
    return scores;
}

std::vector<std::size_t> select_features(const std::vector<double>& scores,
                                         std::size_t top_k, double floor,
                                         bool* degenerate) {
    if (top_k < 1)
        throw Error("BadTopK", "top_k must be at least 1");
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    std::vector<std::size_t> selected;
    for (std::size_t slot : order) {
        if (scores[slot] < floor) break;
        selected.push_back(slot);
        if (selected.size() == top_k) break;
    }
    bool degen = selected.empty();
    if (degen && !order.empty()) selected.push_back(order.front());
    if (degenerate) *degenerate = degen;
    return selected;
}

nlohmann::json feature_report_json(const FeatureReport& report, const Schema& schema,
                                   double minsup, std::size_t top_k) {
    nlohmann::json scores = nlohmann::json::object();
    for (std::size_t slot = 0; slot < report.scores.size(); ++slot)
        scores[schema.feature(slot).name] = report.scores[slot];
    nlohmann::json selected = nlohmann::json::array();
    for (std::size_t slot : report.selected)
        selected.push_back(schema.feature(slot).name);
    return {{"scores", scores},
            {"selected", selected},
            {"minsup", minsup},
            {"top_k", top_k}};
}

}  // namespace icft
