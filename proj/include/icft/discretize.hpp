#ifndef ICFT_DISCRETIZE_HPP
#define ICFT_DISCRETIZE_HPP

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "icft/dataprep.hpp"

namespace icft {

// Class x interval contingency table (classes are rows, intervals columns).
struct QuantaMatrix {
    std::size_t classes = 0;
    std::size_t intervals = 0;
    std::vector<long long> counts;  // row-major, classes * intervals

    QuantaMatrix() = default;
    QuantaMatrix(std::size_t s, std::size_t n)
        : classes(s), intervals(n), counts(s * n, 0) {}

    long long& at(std::size_t i, std::size_t r) { return counts[i * intervals + r]; }
    long long at(std::size_t i, std::size_t r) const { return counts[i * intervals + r]; }

    long long row_total(std::size_t i) const;
    long long col_total(std::size_t r) const;
    long long total() const;
};

// Index of the interval containing v under the (lo, hi] convention:
// interval r spans (cut_{r-1}, cut_r], with open ends at both extremes.
std::size_t interval_of(double v, const std::vector<double>& cuts);

QuantaMatrix build_quanta(const std::vector<double>& values,
                          const std::vector<int>& labels,
                          const std::vector<double>& cuts);

// Mean over intervals of (column max)^2 / column total; empty columns add 0.
double caim_score(const QuantaMatrix& q);

// Mutual information of the joint distribution divided by its joint entropy,
// log base 2; in [0,1]. Throws DegenerateJoint when the joint entropy is 0.
double cair_score(const QuantaMatrix& q);

// Greedy CAIM: candidates are midpoints of adjacent distinct values; keep
// adding the best candidate while CAIM improves or fewer than S intervals
// exist. Constant or single-class columns yield no cuts.
std::vector<double> caim_discretize(const std::vector<double>& values,
                                    const std::vector<int>& labels);

// Merges adjacent interval pairs, always the pair with the lowest pairwise
// CAIR first, while that pairwise CAIR is <= epsilon, the post-merge global
// CAIR stays >= (1-epsilon) of the pre-merge value, and more than S intervals
// remain. A pair whose two columns carry the same class mix scores 0 and is
// always mergeable.
std::vector<double> merge_intervals(const std::vector<double>& values,
                                    const std::vector<int>& labels,
                                    std::vector<double> cuts,
                                    double epsilon);

// Phase 1 runs greedy CAIM, then over-generates to the interval cap
// (cap_factor * S) with equal-frequency cuts. Phase 2 merges redundant
// neighbours back out.
std::vector<double> mcaim_discretize(const std::vector<double>& values,
                                     const std::vector<int>& labels,
                                     double epsilon = 0.0025,
                                     std::size_t cap_factor = 4);

// Per-feature-slot cut lists; categorical slots keep an empty list.
struct DiscretizationScheme {
    std::vector<std::vector<double>> cuts;  // indexed by feature slot

    nlohmann::json to_json(const Schema& schema) const;
    static DiscretizationScheme from_json(const nlohmann::json& doc, const Schema& schema);
};

enum class DiscretizeMethod { Caim, Mcaim };

DiscretizationScheme fit_scheme(const Dataset& data, DiscretizeMethod method,
                                double epsilon = 0.0025, std::size_t cap_factor = 4);

// Instance with every slot reduced to a small id (interval or category).
struct DiscreteInstance {
    std::vector<int> values;
    int label = -1;  // -1 while unlabeled
};

DiscreteInstance apply_scheme(const Instance& x, const DiscretizationScheme& scheme,
                              const Schema& schema);

}  // namespace icft

#endif
