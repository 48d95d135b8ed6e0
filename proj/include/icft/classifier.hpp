#ifndef ICFT_CLASSIFIER_HPP
#define ICFT_CLASSIFIER_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "icft/ftree.hpp"

namespace icft {

struct DriftPolicy {
    std::size_t window = 200;      // trailing outcomes per node
    double delta = 0.15;           // window error excess that marks a node dirty
    long long min_leaf = 5;        // pre-pruning mass floor
    std::size_t rebuild_every = 500;

    void validate() const;
};

struct DNode {
    bool is_leaf = true;
    std::size_t test_attr = 0;                       // feature slot (internal)
    std::map<int, std::unique_ptr<DNode>> branches;  // value-ascending
    std::map<int, long long> hist;                   // class histogram (all nodes)
    int majority = -1;                               // argmax of hist, lowest id ties

    // error monitor
    long long n_seen = 0;
    long long n_err = 0;
    std::deque<unsigned char> recent;
    long long recent_err = 0;
    bool dirty = false;

    std::unique_ptr<DNode> clone() const;
};

struct Model {
    std::uint64_t version = 1;
    std::unique_ptr<DNode> root;
    std::vector<std::size_t> features;  // feature slots in use
    std::uint64_t built_at = 0;         // F-Tree sequence number of the snapshot

    std::size_t node_count() const;
};

// (CAIR, CAIM) lexicographic split score; (0, 0) for degenerate matrices.
std::pair<double, double> split_score(const QuantaMatrix& q);

std::shared_ptr<Model> build_tree(const FTree& t, const std::vector<std::size_t>& features,
                                  const DriftPolicy& policy, std::uint64_t version = 1);

struct ClassifyResult {
    int cls = -1;
    double confidence = 0.0;
    bool classified = false;  // false: fell off an unseen branch value
    std::uint64_t version = 0;
};

ClassifyResult classify(const Model& m, const std::vector<int>& x);

// Path to a node as the (slot, branch value) pairs from the root; empty = root.
using NodePath = std::vector<std::pair<std::size_t, int>>;

// Updates the error monitors along x's traversal path; when the prediction was
// wrong or fell off the tree the instance is stored into the F-Tree (the update
// trigger for unclassified and wrongly classified instances). Returns the paths
// of nodes that just turned dirty.
std::vector<NodePath> record_outcome(Model& m, const std::vector<int>& x, int truth,
                                     const DriftPolicy& policy, FTree* history = nullptr);

// Paths of every dirty node, root-most first.
std::vector<NodePath> collect_dirty(const Model& m);

// New model with the subtree at `path` rebuilt from the current F-Tree snapshot
// (counters of rebuilt nodes reset, everything else carried over).
std::shared_ptr<Model> rebuild_subtree(const Model& m, const NodePath& path,
                                       const FTree& t,
                                       const std::vector<std::size_t>& features,
                                       const DriftPolicy& policy);

// Serving slot: swap is atomic, every classification uses exactly one version.
class Engine {
public:
    std::shared_ptr<Model> current() const {
        std::lock_guard<std::mutex> lock(mu_);
        return model_;
    }
    // Rejects stale versions; returns whether the swap happened.
    bool swap_model(std::shared_ptr<Model> next) {
        std::lock_guard<std::mutex> lock(mu_);
        if (model_ && next->version <= model_->version) return false;
        model_ = std::move(next);
        return true;
    }

private:
    mutable std::mutex mu_;
    std::shared_ptr<Model> model_;
};

std::string canonical_serialize(const Model& m);
nlohmann::json model_json(const Model& m);

}  // namespace icft

#endif
