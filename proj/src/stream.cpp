#include "icft/stream.hpp"

#include <algorithm>
#include <deque>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "icft/error.hpp"

namespace icft {

void StreamSpec::validate() const {
    if (n == 0) throw Error("BadStreamSpec", "n must be positive");
    if (thetas.size() != drift_at.size() + 1)
        throw Error("BadStreamSpec", "need one theta per segment");
    for (std::size_t i = 0; i < drift_at.size(); ++i) {
        if (drift_at[i] >= n) throw Error("BadStreamSpec", "drift index past the stream");
        if (i && drift_at[i] <= drift_at[i - 1])
            throw Error("BadStreamSpec", "drift indices must be strictly increasing");
    }
    if (!(noise >= 0 && noise < 0.5))
        throw Error("BadStreamSpec", "noise must be in [0, 0.5)");
}

Dataset generate_stream(const StreamSpec& spec) {
    spec.validate();
    Dataset data;
    data.schema.attributes = {{"x1", AttrKind::Numeric},
                              {"x2", AttrKind::Numeric},
                              {"label", AttrKind::Categorical}};
    data.schema.class_index = 2;
    data.feature_dicts.resize(2);
    data.class_dict.intern("false");
    data.class_dict.intern("true");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t segment = 0;
    for (std::size_t i = 0; i < spec.n; ++i) {
        while (segment < spec.drift_at.size() && i >= spec.drift_at[segment]) ++segment;
        double x1 = coord(rng);
        double x2 = coord(rng);
        double flip = unit(rng);  // drawn regardless of noise, keeps x draws aligned
        bool label = x1 + x2 > spec.thetas[segment];
        if (flip < spec.noise) label = !label;
        Instance x;
        x.values = {Cell::number(x1), Cell::number(x2)};
        x.label = label ? 1 : 0;
        data.instances.push_back(std::move(x));
    }
    return data;
}

namespace {

// Drops paths that extend another pending path; rebuild of the ancestor covers them.
std::vector<NodePath> rootmost(std::vector<NodePath> paths) {
    std::sort(paths.begin(), paths.end(),
              [](const NodePath& a, const NodePath& b) { return a.size() < b.size(); });
    std::vector<NodePath> kept;
    for (const auto& p : paths) {
        bool covered = false;
        for (const auto& k : kept) {
            if (k.size() <= p.size() && std::equal(k.begin(), k.end(), p.begin())) {
                covered = true;
                break;
            }
        }
        if (!covered) kept.push_back(p);
    }
    return kept;
}

}  // namespace

std::vector<MetricsRow> prequential_run(const Dataset& data, const RunConfig& cfg,
                                        RunArtifacts* artifacts) {
    cfg.drift.validate();
    const std::size_t n = data.instances.size();
    if (cfg.warmup > n)
        throw Error("WarmupTooLarge", "warmup exceeds the stream length");
    if (cfg.warmup == 0)
        throw Error("WarmupTooSmall", "warmup must cover at least one instance");
    for (const auto& x : data.instances) {
        if (!x.label) throw Error("UnlabeledInstance", "prequential run needs labels");
        for (const auto& cell : x.values)
            if (cell.is_missing()) throw Error("MissingValue", "impute before running");
    }

    // warmup: fit discretization, seed the F-Tree, reduce features, build v1
    Dataset warm;
    warm.schema = data.schema;
    warm.feature_dicts = data.feature_dicts;
    warm.class_dict = data.class_dict;
    warm.instances.assign(data.instances.begin(),
                          data.instances.begin() + static_cast<std::ptrdiff_t>(cfg.warmup));
    DiscretizationScheme scheme =
        fit_scheme(warm, DiscretizeMethod::Mcaim, cfg.epsilon, cfg.cap_factor);

    FTree history(data.schema.feature_count());
    for (const auto& x : warm.instances)
        history.insert(apply_scheme(x, scheme, data.schema));

    auto reduce = [&]() {
        FeatureReport report;
        FPTree fp = build_fptree(history, cfg.minsup);
        auto patterns = fp_growth(fp, min_count_of(cfg.minsup, history.instance_total()));
        report.scores =
            score_attributes(patterns, data.schema.feature_count(), history.instance_total());
        report.selected =
            select_features(report.scores, cfg.top_k, cfg.score_floor, &report.degenerate);
        return report;
    };
    FeatureReport report = reduce();

    Engine engine;
    engine.swap_model(build_tree(history, report.selected, cfg.drift, 1));

    std::vector<MetricsRow> rows;
    std::deque<unsigned char> window;
    long long window_correct = 0;
    long long tested = 0, correct_total = 0;
    std::size_t rebuilds = 0;
    std::size_t since_rebuild = 0;

    for (std::size_t i = cfg.warmup; i < n; ++i) {
        DiscreteInstance d = apply_scheme(data.instances[i], scheme, data.schema);
        auto model = engine.current();
        ClassifyResult r = classify(*model, d.values);
        if (artifacts) artifacts->events.push_back({RunEvent::Kind::Test, i});
        bool ok = r.classified && r.cls == d.label;
        ++tested;
        if (ok) ++correct_total;
        window.push_back(ok ? 1 : 0);
        window_correct += ok ? 1 : 0;
        if (window.size() > cfg.drift.window) {
            window_correct -= window.front();
            window.pop_front();
        }
        if (artifacts) artifacts->outcomes.push_back(ok ? 1 : 0);

        std::uint64_t seq_before = history.sequence_number();
        auto dirty = record_outcome(*model, d.values, d.label, cfg.drift, &history);
        if (artifacts && history.sequence_number() > seq_before)
            artifacts->events.push_back({RunEvent::Kind::Train, i});
        ++since_rebuild;

        bool want_rebuild = cfg.rebuilds_enabled &&
                            (!dirty.empty() ||
                             (since_rebuild >= cfg.drift.rebuild_every &&
                              !collect_dirty(*model).empty()));
        if (want_rebuild) {
            auto paths = rootmost(collect_dirty(*model));
            bool full = std::any_of(paths.begin(), paths.end(),
                                    [](const NodePath& p) { return p.empty(); });
            std::shared_ptr<Model> next;
            if (full) {
                report = reduce();  // global drift: re-score features as well
                next = build_tree(history, report.selected, cfg.drift, model->version + 1);
            } else {
                next = engine.current();
                for (const auto& p : paths)
                    next = rebuild_subtree(*next, p, history, next->features, cfg.drift);
            }
            if (engine.swap_model(next)) {
                ++rebuilds;
                since_rebuild = 0;
            }
        }

        std::size_t done = i - cfg.warmup + 1;
        if (done % cfg.report_every == 0 || i + 1 == n) {
            auto current = engine.current();
            MetricsRow row;
            row.index = i + 1;
            row.window_accuracy = window.empty()
                                      ? 0.0
                                      : static_cast<double>(window_correct) /
                                            static_cast<double>(window.size());
            row.cumulative_accuracy =
                static_cast<double>(correct_total) / static_cast<double>(tested);
            row.n_features_active = current->features.size();
            row.tree_nodes = current->node_count();
            row.model_version = current->version;
            row.rebuilds_total = rebuilds;
            rows.push_back(row);
        }
    }

    if (artifacts) {
        artifacts->final_model = engine.current();
        artifacts->scheme = scheme;
        artifacts->report = report;
        artifacts->rebuilds = rebuilds;
    }
    return rows;
}

void emit_metrics(const std::vector<MetricsRow>& rows, std::ostream& out) {
    out << "index,window_accuracy,cumulative_accuracy,n_features_active,tree_nodes,"
           "model_version,rebuilds_total\n";
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.index << ',' << r.window_accuracy << ',' << r.cumulative_accuracy << ','
            << r.n_features_active << ',' << r.tree_nodes << ',' << r.model_version << ','
            << r.rebuilds_total << '\n';
        if (!out) throw Error("WriteFailure", "metrics sink write failed");
    }
    if (!out) throw Error("WriteFailure", "metrics sink write failed");
}

std::vector<MetricsRow> parse_metrics(std::istream& in) {
    std::vector<MetricsRow> rows;
    std::string line;
    if (!std::getline(in, line)) throw Error("BadMetricsFile", "missing header");
    if (line != "index,window_accuracy,cumulative_accuracy,n_features_active,tree_nodes,"
                "model_version,rebuilds_total")
        throw Error("BadMetricsFile", "unexpected header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        MetricsRow r;
        char c;
        ls >> r.index >> c >> r.window_accuracy >> c >> r.cumulative_accuracy >> c >>
            r.n_features_active >> c >> r.tree_nodes >> c >> r.model_version >> c >>
            r.rebuilds_total;
        if (!ls) throw Error("BadMetricsFile", "unparsable row: " + line);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace icft
