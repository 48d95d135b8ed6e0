#include "icft/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "icft/error.hpp"

namespace icft {

long long QuantaMatrix::row_total(std::size_t i) const {
    long long s = 0;
    for (std::size_t r = 0; r < intervals; ++r) s += at(i, r);
    return s;
}

long long QuantaMatrix::col_total(std::size_t r) const {
    long long s = 0;
    for (std::size_t i = 0; i < classes; ++i) s += at(i, r);
    return s;
}

long long QuantaMatrix::total() const {
    long long s = 0;
    for (long long c : counts) s += c;
    return s;
}

std::size_t interval_of(double v, const std::vector<double>& cuts) {
    // number of cuts strictly below v; boundary values fall left ((lo, hi])
    return static_cast<std::size_t>(
        std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

QuantaMatrix build_quanta(const std::vector<double>& values,
                          const std::vector<int>& labels,
                          const std::vector<double>& cuts) {
    if (values.size() != labels.size())
        throw Error("LengthMismatch", "values and labels differ in length");
    if (values.empty())
        throw Error("EmptyColumn", "build_quanta needs at least one value");
    int max_label = 0;
    for (int l : labels) max_label = std::max(max_label, l);
    QuantaMatrix q(static_cast<std::size_t>(max_label) + 1, cuts.size() + 1);
    for (std::size_t k = 0; k < values.size(); ++k)
        ++q.at(static_cast<std::size_t>(labels[k]), interval_of(values[k], cuts));
    return q;
}

double caim_score(const QuantaMatrix& q) {
    double sum = 0;
    for (std::size_t r = 0; r < q.intervals; ++r) {
        long long col = q.col_total(r);
        if (col == 0) continue;
        long long mx = 0;
        for (std::size_t i = 0; i < q.classes; ++i) mx = std::max(mx, q.at(i, r));
        sum += static_cast<double>(mx) * static_cast<double>(mx) / static_cast<double>(col);
    }
    return sum / static_cast<double>(q.intervals);
}

double cair_score(const QuantaMatrix& q) {
    long long n = q.total();
    if (n < 1)
        throw Error("EmptyColumn", "cair_score needs mass");
    std::vector<double> row(q.classes, 0), col(q.intervals, 0);
    for (std::size_t i = 0; i < q.classes; ++i)
        row[i] = static_cast<double>(q.row_total(i)) / static_cast<double>(n);
    for (std::size_t r = 0; r < q.intervals; ++r)
        col[r] = static_cast<double>(q.col_total(r)) / static_cast<double>(n);
    double info = 0, entropy = 0;
    for (std::size_t i = 0; i < q.classes; ++i) {
        for (std::size_t r = 0; r < q.intervals; ++r) {
            long long c = q.at(i, r);
            if (c == 0) continue;
            double p = static_cast<double>(c) / static_cast<double>(n);
            info += p * std::log2(p / (row[i] * col[r]));
            entropy -= p * std::log2(p);
        }
    }
    if (entropy == 0)
        throw Error("DegenerateJoint", "single nonzero cell");
    double v = info / entropy;
    // clamp tiny float excursions outside [0,1]
    return std::min(1.0, std::max(0.0, v));
}

namespace {

std::vector<double> candidate_cuts(const std::vector<double>& values) {
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<double> cands;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        cands.push_back(0.5 * (sorted[i] + sorted[i + 1]));
    return cands;
}

std::size_t class_count(const std::vector<int>& labels) {
    std::set<int> s(labels.begin(), labels.end());
    return s.size();
}

double cair_or_zero(const QuantaMatrix& q) {
    try {
        return cair_score(q);
    } catch (const Error&) {
        return 0.0;
    }
}

}  // namespace

std::vector<double> caim_discretize(const std::vector<double>& values,
                                    const std::vector<int>& labels) {
    if (values.size() != labels.size())
        throw Error("LengthMismatch", "values and labels differ in length");
    auto cands = candidate_cuts(values);
    std::size_t s = class_count(labels);
    if (cands.empty() || s < 2) return {};  // NoInformation

    std::vector<double> cuts;
    std::vector<bool> used(cands.size(), false);
    double best_caim = caim_score(build_quanta(values, labels, cuts));
    for (;;) {
        double step_best = -1;
        std::size_t step_idx = cands.size();
        for (std::size_t c = 0; c < cands.size(); ++c) {
            if (used[c]) continue;
            std::vector<double> trial = cuts;
            trial.insert(std::upper_bound(trial.begin(), trial.end(), cands[c]), cands[c]);
            double sc = caim_score(build_quanta(values, labels, trial));
            if (sc > step_best) {  // first (smallest) candidate wins ties
                step_best = sc;
                step_idx = c;
            }
        }
        if (step_idx == cands.size()) break;  // no candidates left
        bool improves = step_best > best_caim;
        bool below_floor = cuts.size() + 1 < s;
        if (!improves && !below_floor) break;
        used[step_idx] = true;
        cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), cands[step_idx]),
                    cands[step_idx]);
        if (improves) best_caim = step_best;
    }
    return cuts;
}

namespace {

// Pairwise CAIR of adjacent intervals r and r+1; 0 when the 2-column joint is
// degenerate (identical or single-class columns carry no interdependence).
double pair_cair(const QuantaMatrix& q, std::size_t r) {
    QuantaMatrix sub(q.classes, 2);
    for (std::size_t i = 0; i < q.classes; ++i) {
        sub.at(i, 0) = q.at(i, r);
        sub.at(i, 1) = q.at(i, r + 1);
    }
    if (sub.total() == 0) return 0.0;
    return cair_or_zero(sub);
}

}  // namespace

std::vector<double> merge_intervals(const std::vector<double>& values,
                                    const std::vector<int>& labels,
                                    std::vector<double> cuts,
                                    double epsilon) {
    std::size_t s = class_count(labels);
    while (cuts.size() + 1 > s && !cuts.empty()) {
        auto q = build_quanta(values, labels, cuts);
        double current = cair_or_zero(q);
        double lowest = std::numeric_limits<double>::infinity();
        std::size_t idx = cuts.size();
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            double lc = pair_cair(q, i);
            if (lc < lowest) {  // smallest cut value wins ties
                lowest = lc;
                idx = i;
            }
        }
        if (idx == cuts.size() || lowest > epsilon + 1e-12) break;
        std::vector<double> trial = cuts;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(idx));
        double after = cair_or_zero(build_quanta(values, labels, trial));
        if (after + 1e-12 < (1.0 - epsilon) * current) break;
        cuts = std::move(trial);
    }
    return cuts;
}

std::vector<double> mcaim_discretize(const std::vector<double>& values,
                                     const std::vector<int>& labels,
                                     double epsilon,
                                     std::size_t cap_factor) {
    auto cands = candidate_cuts(values);
    std::size_t s = class_count(labels);
    if (cands.empty() || s < 2) return {};

    std::vector<double> cuts = caim_discretize(values, labels);
    std::size_t cap = std::min(cands.size() + 1, cap_factor * s);

    // over-generation: fill up to the cap with equal-frequency midpoints
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 1; k < cap && cuts.size() + 1 < cap; ++k) {
        std::size_t i = k * sorted.size() / cap;
        if (i == 0 || i >= sorted.size() || sorted[i - 1] == sorted[i]) continue;
        double c = 0.5 * (sorted[i - 1] + sorted[i]);
        auto pos = std::lower_bound(cuts.begin(), cuts.end(), c);
        if (pos != cuts.end() && *pos == c) continue;
        cuts.insert(pos, c);
    }
    return merge_intervals(values, labels, std::move(cuts), epsilon);
}

nlohmann::json DiscretizationScheme::to_json(const Schema& schema) const {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t slot = 0; slot < cuts.size(); ++slot) {
        if (schema.feature(slot).kind != AttrKind::Numeric) continue;
        out.push_back({{"attribute", schema.feature(slot).name}, {"cuts", cuts[slot]}});
    }
    return out;
}

DiscretizationScheme DiscretizationScheme::from_json(const nlohmann::json& doc,
                                                     const Schema& schema) {
    DiscretizationScheme scheme;
    scheme.cuts.resize(schema.feature_count());
    for (const auto& entry : doc) {
        std::string name = entry.at("attribute").get<std::string>();
        bool found = false;
        for (std::size_t slot = 0; slot < schema.feature_count(); ++slot) {
            if (schema.feature(slot).name == name) {
                scheme.cuts[slot] = entry.at("cuts").get<std::vector<double>>();
                if (!std::is_sorted(scheme.cuts[slot].begin(), scheme.cuts[slot].end()))
                    throw Error("UnsortedCuts", name);
                found = true;
                break;
            }
        }
        if (!found) throw Error("UnknownAttribute", name);
    }
    return scheme;
}

DiscretizationScheme fit_scheme(const Dataset& data, DiscretizeMethod method,
                                double epsilon, std::size_t cap_factor) {
    DiscretizationScheme scheme;
    scheme.cuts.resize(data.schema.feature_count());
    for (std::size_t slot = 0; slot < data.schema.feature_count(); ++slot) {
        if (data.schema.feature(slot).kind != AttrKind::Numeric) continue;
        std::vector<double> values;
        std::vector<int> labels;
        for (const auto& x : data.instances) {
            if (!x.label || x.values[slot].is_missing()) continue;
            values.push_back(x.values[slot].num);
            labels.push_back(*x.label);
        }
        if (values.empty()) continue;
        scheme.cuts[slot] = method == DiscretizeMethod::Caim
                                ? caim_discretize(values, labels)
                                : mcaim_discretize(values, labels, epsilon, cap_factor);
    }
    return scheme;
}

DiscreteInstance apply_scheme(const Instance& x, const DiscretizationScheme& scheme,
                              const Schema& schema) {
    DiscreteInstance d;
    d.values.resize(x.values.size());
    for (std::size_t slot = 0; slot < x.values.size(); ++slot) {
        const Cell& cell = x.values[slot];
        if (cell.is_missing())
            throw Error("MissingValue", schema.feature(slot).name + " (impute first)");
        if (schema.feature(slot).kind == AttrKind::Numeric)
            d.values[slot] = static_cast<int>(interval_of(cell.num, scheme.cuts[slot]));
        else
            d.values[slot] = cell.cat;
    }
    d.label = x.label ? *x.label : -1;
    return d;
}

}  // namespace icft
