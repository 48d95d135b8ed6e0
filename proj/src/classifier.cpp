#include "icft/classifier.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "icft/error.hpp"

namespace icft {

void DriftPolicy::validate() const {
    if (window < 10) throw Error("BadDriftPolicy", "window must be >= 10");
    if (!(delta > 0 && delta < 1)) throw Error("BadDriftPolicy", "delta must be in (0,1)");
    if (min_leaf < 1) throw Error("BadDriftPolicy", "min_leaf must be >= 1");
}

std::unique_ptr<DNode> DNode::clone() const {
    auto n = std::make_unique<DNode>();
    n->is_leaf = is_leaf;
    n->test_attr = test_attr;
    n->hist = hist;
    n->majority = majority;
    n->n_seen = n_seen;
    n->n_err = n_err;
    n->recent = recent;
    n->recent_err = recent_err;
    n->dirty = dirty;
    for (const auto& [v, child] : branches) n->branches[v] = child->clone();
    return n;
}

std::size_t Model::node_count() const {
    std::size_t n = 0;
    std::function<void(const DNode&)> walk = [&](const DNode& node) {
        ++n;
        for (const auto& [v, child] : node.branches) walk(*child);
    };
    if (root) walk(*root);
    return n;
}

std::pair<double, double> split_score(const QuantaMatrix& q) {
    std::size_t nonzero = 0;
    for (long long c : q.counts)
        if (c > 0) ++nonzero;
    if (nonzero < 2) return {0.0, 0.0};
    double cair;
    try {
        cair = cair_score(q);
    } catch (const Error&) {
        return {0.0, 0.0};
    }
    return {cair, caim_score(q)};
}

namespace {

int majority_of(const std::map<int, long long>& hist) {
    int best = -1;
    long long best_count = -1;
    for (const auto& [cls, c] : hist)
        if (c > best_count) { best = cls; best_count = c; }
    return best;
}

std::unique_ptr<DNode> build_node(const FTree& t, const NodePath& constraints,
                                  const std::vector<std::size_t>& features,
                                  std::vector<bool>& used, const DriftPolicy& policy) {
    auto node = std::make_unique<DNode>();
    node->hist = t.class_hist(constraints);
    node->majority = majority_of(node->hist);
    long long mass = 0;
    for (const auto& [cls, c] : node->hist) mass += c;

    bool pure = node->hist.size() <= 1;
    bool features_left = false;
    for (std::size_t f = 0; f < features.size(); ++f)
        if (!used[f]) { features_left = true; break; }
    if (pure || !features_left || mass < policy.min_leaf) return node;

    // best unused feature by (CAIR, CAIM), ties to the lower slot id
    double best_cair = -1, best_caim = -1;
    std::size_t best_f = features.size();
    FTree::Projection best_proj;
    for (std::size_t f = 0; f < features.size(); ++f) {
        if (used[f]) continue;
        auto proj = t.project_quanta(constraints, features[f]);
        auto [cair, caim] = split_score(proj.q);
        if (cair > best_cair || (cair == best_cair && caim > best_caim)) {
            best_cair = cair;
            best_caim = caim;
            best_f = f;
            best_proj = std::move(proj);
        }
    }
    // leaf when no candidate separates anything at all
    if (best_f == features.size() || (best_cair == 0.0 && best_caim == 0.0)) return node;

    node->is_leaf = false;
    node->test_attr = features[best_f];
    used[best_f] = true;
    NodePath child_constraints = constraints;
    for (int v : best_proj.values) {
        child_constraints.push_back({features[best_f], v});
        node->branches[v] = build_node(t, child_constraints, features, used, policy);
        child_constraints.pop_back();
    }
    used[best_f] = false;
    return node;
}

}  // namespace

std::shared_ptr<Model> build_tree(const FTree& t, const std::vector<std::size_t>& features,
                                  const DriftPolicy& policy, std::uint64_t version) {
    if (t.empty()) throw Error("EmptyTree", "build_tree needs a non-empty F-Tree");
    if (features.empty()) throw Error("NoFeatures", "build_tree needs at least one feature");
    policy.validate();
    auto m = std::make_shared<Model>();
    m->version = version;
    m->features = features;
    m->built_at = t.sequence_number();
    std::vector<bool> used(features.size(), false);
    m->root = build_node(t, {}, features, used, policy);
    return m;
}

ClassifyResult classify(const Model& m, const std::vector<int>& x) {
    const DNode* node = m.root.get();
    bool fell_off = false;
    while (!node->is_leaf) {
        auto it = node->branches.find(x[node->test_attr]);
        if (it == node->branches.end()) {
            fell_off = true;
            break;
        }
        node = it->second.get();
    }
    ClassifyResult r;
    r.cls = node->majority;
    r.classified = !fell_off;
    r.version = m.version;
    long long mass = 0, top = 0;
    for (const auto& [cls, c] : node->hist) {
        mass += c;
        if (cls == node->majority) top = c;
    }
    r.confidence = mass > 0 ? static_cast<double>(top) / static_cast<double>(mass) : 0.0;
    return r;
}

std::vector<NodePath> record_outcome(Model& m, const std::vector<int>& x, int truth,
                                     const DriftPolicy& policy, FTree* history) {
    ClassifyResult r = classify(m, x);
    bool err = !r.classified || r.cls != truth;

    std::vector<NodePath> newly_dirty;
    NodePath path;
    DNode* node = m.root.get();
    for (;;) {
        ++node->n_seen;
        if (err) ++node->n_err;
        node->recent.push_back(err ? 1 : 0);
        node->recent_err += err ? 1 : 0;
        if (node->recent.size() > policy.window) {
            node->recent_err -= node->recent.front();
            node->recent.pop_front();
        }
        if (!node->dirty && node->recent.size() >= policy.window) {
            double window_rate = static_cast<double>(node->recent_err) /
                                 static_cast<double>(node->recent.size());
            long long before_n = node->n_seen - static_cast<long long>(node->recent.size());
            double lifetime_before =
                before_n > 0
                    ? static_cast<double>(node->n_err - node->recent_err) /
                          static_cast<double>(before_n)
                    : 0.0;
            if (window_rate >= lifetime_before + policy.delta) {
                node->dirty = true;
                newly_dirty.push_back(path);
            }
        }
        if (node->is_leaf) break;
        auto it = node->branches.find(x[node->test_attr]);
        if (it == node->branches.end()) break;
        path.push_back({node->test_attr, it->first});
        node = it->second.get();
    }

    if (err && history && truth >= 0) {
        DiscreteInstance d;
        d.values = x;
        d.label = truth;
        history->insert(d);
    }
    return newly_dirty;
}

std::vector<NodePath> collect_dirty(const Model& m) {
    std::vector<NodePath> out;
    NodePath path;
    std::function<void(const DNode&)> walk = [&](const DNode& node) {
        if (node.dirty) out.push_back(path);
        for (const auto& [v, child] : node.branches) {
            path.push_back({node.test_attr, v});
            walk(*child);
            path.pop_back();
        }
    };
    if (m.root) walk(*m.root);
    std::stable_sort(out.begin(), out.end(),
                     [](const NodePath& a, const NodePath& b) { return a.size() < b.size(); });
    return out;
}

std::shared_ptr<Model> rebuild_subtree(const Model& m, const NodePath& path,
                                       const FTree& t,
                                       const std::vector<std::size_t>& features,
                                       const DriftPolicy& policy) {
    if (t.sequence_number() < m.built_at)
        throw Error("StaleSnapshot", "F-Tree is older than the model");
    auto next = std::make_shared<Model>();
    next->version = m.version + 1;
    next->features = features;
    next->built_at = t.sequence_number();
    next->root = m.root->clone();

    // locate the clone of the target node and its parent slot
    DNode* node = next->root.get();
    DNode* parent = nullptr;
    int branch_value = 0;
    for (const auto& [slot, v] : path) {
        if (node->is_leaf || node->test_attr != slot)
            throw Error("BadNodePath", "path does not match the model structure");
        auto it = node->branches.find(v);
        if (it == node->branches.end())
            throw Error("BadNodePath", "missing branch on the model");
        parent = node;
        branch_value = v;
        node = it->second.get();
    }

    std::vector<bool> used(features.size(), false);
    for (const auto& [slot, v] : path)
        for (std::size_t f = 0; f < features.size(); ++f)
            if (features[f] == slot) used[f] = true;
    auto rebuilt = build_node(t, path, features, used, policy);
    if (parent) parent->branches[branch_value] = std::move(rebuilt);
    else next->root = std::move(rebuilt);
    return next;
}

namespace {

void serialize_node(const DNode& node, std::size_t depth, std::ostringstream& os) {
    os << std::string(depth, ' ');
    if (node.is_leaf) {
        os << "leaf {";
        bool first = true;
        for (const auto& [cls, c] : node.hist) {
            if (!first) os << ",";
            os << cls << "=" << c;
            first = false;
        }
        os << "} -> " << node.majority << "\n";
        return;
    }
    os << "test a" << node.test_attr << "\n";
    for (const auto& [v, child] : node.branches) {
        os << std::string(depth + 1, ' ') << "= " << v << ":\n";
        serialize_node(*child, depth + 2, os);
    }
}

nlohmann::json node_json(const DNode& node) {
    if (node.is_leaf) {
        nlohmann::json hist = nlohmann::json::object();
        for (const auto& [cls, c] : node.hist) hist[std::to_string(cls)] = c;
        return {{"leaf", hist}, {"majority", node.majority}};
    }
    nlohmann::json branches = nlohmann::json::object();
    for (const auto& [v, child] : node.branches)
        branches[std::to_string(v)] = node_json(*child);
    return {{"test", node.test_attr}, {"branches", branches}};
}

}  // namespace

std::string canonical_serialize(const Model& m) {
    std::ostringstream os;
    os << "model features=[";
    for (std::size_t i = 0; i < m.features.size(); ++i) {
        if (i) os << ",";
        os << m.features[i];
    }
    os << "]\n";
    if (m.root) serialize_node(*m.root, 0, os);
    return os.str();
}

nlohmann::json model_json(const Model& m) {
    return {{"version", m.version},
            {"features", m.features},
            {"built_at", m.built_at},
            {"tree", node_json(*m.root)}};
}

}  // namespace icft
