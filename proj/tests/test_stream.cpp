#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "icft/error.hpp"
#include "icft/stream.hpp"

using namespace icft;

TEST_CASE("generate_stream labels by the segment threshold") {
    StreamSpec spec;
    spec.n = 2000;
    spec.thetas = {8};
    spec.noise = 0;
    spec.seed = 1;
    auto data = generate_stream(spec);
    REQUIRE(data.instances.size() == 2000);
    for (const auto& x : data.instances) {
        double sum = x.values[0].num + x.values[1].num;
        CHECK(*x.label == (sum > 8 ? 1 : 0));
        CHECK((x.values[0].num >= 0 && x.values[0].num <= 10));
    }
}

TEST_CASE("generate_stream is deterministic per seed") {
    StreamSpec spec;
    spec.n = 500;
    spec.thetas = {7};
    spec.noise = 0.1;
    spec.seed = 99;
    auto a = generate_stream(spec);
    auto b = generate_stream(spec);
    for (std::size_t i = 0; i < spec.n; ++i) {
        CHECK(a.instances[i].values[0].num == b.instances[i].values[0].num);
        CHECK(a.instances[i].label == b.instances[i].label);
    }
}

TEST_CASE("noise flips labels at the configured rate") {
    StreamSpec noisy;
    noisy.n = 10000;
    noisy.thetas = {8};
    noisy.noise = 0.1;
    noisy.seed = 7;
    StreamSpec clean = noisy;
    clean.noise = 0;
    auto a = generate_stream(noisy);
    auto b = generate_stream(clean);
    std::size_t flips = 0;
    for (std::size_t i = 0; i < noisy.n; ++i) {
        CHECK(a.instances[i].values[0].num == b.instances[i].values[0].num);
        if (a.instances[i].label != b.instances[i].label) ++flips;
    }
    double rate = static_cast<double>(flips) / static_cast<double>(noisy.n);
    CHECK(rate == doctest::Approx(0.1).epsilon(0.1));  // 0.1 +- 0.01
}

TEST_CASE("generate_stream validates its spec") {
    StreamSpec spec;
    spec.n = 100;
    spec.thetas = {8, 5};
    spec.drift_at = {};
    CHECK_THROWS_AS(generate_stream(spec), Error);  // theta per segment
    spec.drift_at = {50};
    spec.noise = 0.7;
    CHECK_THROWS_AS(generate_stream(spec), Error);
    spec.noise = 0.0;
    spec.drift_at = {150};
    CHECK_THROWS_AS(generate_stream(spec), Error);
}

TEST_CASE("emit_metrics writes the exact header and survives a round trip") {
    std::vector<MetricsRow> rows = {{100, 0.5, 0.625, 2, 7, 1, 0},
                                    {200, 0.9312513, 0.75, 2, 9, 2, 1},
                                    {300, 1.0, 0.8333333333333333, 3, 11, 2, 1}};
    std::ostringstream out;
    emit_metrics(rows, out);
    auto lines = out.str();
    CHECK(lines.substr(0, lines.find('\n')) ==
          "index,window_accuracy,cumulative_accuracy,n_features_active,tree_nodes,"
          "model_version,rebuilds_total");
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 4);  // header + 3 rows

    std::istringstream in(lines);
    auto back = parse_metrics(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].index == rows[i].index);
        CHECK(back[i].window_accuracy == rows[i].window_accuracy);
        CHECK(back[i].cumulative_accuracy == rows[i].cumulative_accuracy);
        CHECK(back[i].model_version == rows[i].model_version);
    }

    std::ostringstream empty;
    emit_metrics({}, empty);
    auto header_only = empty.str();
    CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);
}

TEST_CASE("prequential_run on a stationary separable stream") {
    StreamSpec spec;
    spec.n = 3000;
    spec.thetas = {8};
    spec.noise = 0;
    spec.seed = 11;
    auto data = generate_stream(spec);

    RunConfig cfg;
    cfg.warmup = 500;
    RunArtifacts art;
    auto rows = prequential_run(data, cfg, &art);
    REQUIRE_FALSE(rows.empty());
    CHECK(rows.back().window_accuracy >= 0.95);
    CHECK(art.final_model != nullptr);
    CHECK(art.report.selected.size() == 2);
}

TEST_CASE("prequential_run on one repeated instance converges to accuracy 1") {
    Dataset data;
    data.schema.attributes = {{"x1", AttrKind::Numeric},
                              {"x2", AttrKind::Numeric},
                              {"label", AttrKind::Categorical}};
    data.schema.class_index = 2;
    data.feature_dicts.resize(2);
    data.class_dict.intern("false");
    data.class_dict.intern("true");
    for (int i = 0; i < 800; ++i) {
        Instance x;
        x.values = {Cell::number(1.0), Cell::number(2.0)};
        x.label = 1;
        data.instances.push_back(x);
    }
    RunConfig cfg;
    cfg.warmup = 100;
    auto rows = prequential_run(data, cfg);
    CHECK(rows.back().cumulative_accuracy == doctest::Approx(1.0));
}

TEST_CASE("prequential loop tests before it trains, and metrics recompute") {
    StreamSpec spec;
    spec.n = 1500;
    spec.thetas = {8};
    spec.noise = 0.05;
    spec.seed = 13;
    auto data = generate_stream(spec);

    RunConfig cfg;
    cfg.warmup = 300;
    RunArtifacts art;
    auto rows = prequential_run(data, cfg, &art);

    // no Train event for an index precedes its Test event
    std::map<std::size_t, RunEvent::Kind> first_event;
    for (const auto& e : art.events)
        if (!first_event.count(e.index)) first_event[e.index] = e.kind;
    for (const auto& [idx, kind] : first_event) CHECK(kind == RunEvent::Kind::Test);

    // cumulative accuracy equals a recount of the raw outcome log
    long long correct = 0;
    for (unsigned char ok : art.outcomes) correct += ok;
    CHECK(rows.back().cumulative_accuracy ==
          doctest::Approx(static_cast<double>(correct) /
                          static_cast<double>(art.outcomes.size())));

    // monotone columns
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].model_version >= rows[i - 1].model_version);
        CHECK(rows[i].rebuilds_total >= rows[i - 1].rebuilds_total);
    }
}

TEST_CASE("prequential_run rejects bad configs") {
    StreamSpec spec;
    spec.n = 100;
    spec.thetas = {8};
    auto data = generate_stream(spec);
    RunConfig cfg;
    cfg.warmup = 101;
    CHECK_THROWS_WITH_AS(prequential_run(data, cfg), doctest::Contains("Warmup"), Error);

    Dataset unlabeled = data;
    cfg.warmup = 50;
    unlabeled.instances[70].label.reset();
    CHECK_THROWS_AS(prequential_run(unlabeled, cfg), Error);
}
