#ifndef ICFT_STREAM_HPP
#define ICFT_STREAM_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "icft/classifier.hpp"
#include "icft/fpreduce.hpp"

namespace icft {

// SEA-style threshold concept: x1, x2 ~ U[0,10], label = (x1 + x2 > theta)
// per segment, flipped with the noise probability.
struct StreamSpec {
    std::size_t n = 10000;
    std::vector<std::size_t> drift_at;  // strictly increasing, < n
    std::vector<double> thetas;         // one per segment (drift_at.size() + 1)
    double noise = 0.0;                 // in [0, 0.5)
    std::uint64_t seed = 42;

    void validate() const;
};

Dataset generate_stream(const StreamSpec& spec);

struct MetricsRow {
    std::size_t index = 0;
    double window_accuracy = 0.0;
    double cumulative_accuracy = 0.0;
    std::size_t n_features_active = 0;
    std::size_t tree_nodes = 0;
    std::uint64_t model_version = 0;
    std::size_t rebuilds_total = 0;
};

struct RunConfig {
    double minsup = 0.05;
    std::size_t top_k = 10;
    double score_floor = 0.0;
    DriftPolicy drift;
    std::size_t warmup = 500;
    std::size_t report_every = 100;
    double epsilon = 0.0025;
    std::size_t cap_factor = 4;
    bool rebuilds_enabled = true;
};

struct RunEvent {
    enum class Kind { Test, Train };
    Kind kind;
    std::size_t index;  // stream position
};

struct RunArtifacts {
    std::vector<RunEvent> events;
    std::vector<unsigned char> outcomes;  // 1 = correct, per tested instance
    std::shared_ptr<Model> final_model;
    DiscretizationScheme scheme;
    FeatureReport report;
    std::size_t rebuilds = 0;
};

// Test-then-train over a labeled dataset: the first `warmup` instances seed
// the F-Tree, discretization, feature reduction and the initial model; every
// later instance is classified first, then its outcome recorded.
std::vector<MetricsRow> prequential_run(const Dataset& data, const RunConfig& cfg,
                                        RunArtifacts* artifacts = nullptr);

void emit_metrics(const std::vector<MetricsRow>& rows, std::ostream& out);
std::vector<MetricsRow> parse_metrics(std::istream& in);

}  // namespace icft

#endif
