#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "icft/dataprep.hpp"
#include "icft/discretize.hpp"
#include "icft/error.hpp"
#include "icft/stream.hpp"

namespace {

icft::Schema read_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw icft::Error("FileOpen", path);
    nlohmann::json doc;
    in >> doc;
    return icft::parse_schema(doc);
}

icft::Dataset read_dataset(const std::string& path, const icft::Schema& schema) {
    std::ifstream in(path);
    if (!in) throw icft::Error("FileOpen", path);
    return icft::load_csv(in, schema);
}

std::vector<std::size_t> parse_indices(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
    return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incremental feature-tree stream classifier"};
    app.require_subcommand(1);

    // prep
    auto* prep = app.add_subcommand("prep", "impute (and optionally normalize) a CSV");
    std::string prep_input, prep_schema, prep_out, prep_norm;
    double skew_threshold = 1.0;
    prep->add_option("--input", prep_input)->required();
    prep->add_option("--schema", prep_schema)->required();
    prep->add_option("--out", prep_out)->required();
    prep->add_option("--normalize", prep_norm)
        ->check(CLI::IsMember({"minmax", "zscore", "decimal"}));
    prep->add_option("--skew-threshold", skew_threshold);

    // discretize
    auto* disc = app.add_subcommand("discretize", "fit a discretization scheme");
    std::string disc_input, disc_schema, disc_out, disc_method = "mcaim";
    double disc_epsilon = 0.0025;
    disc->add_option("--input", disc_input)->required();
    disc->add_option("--schema", disc_schema)->required();
    disc->add_option("--method", disc_method)->check(CLI::IsMember({"caim", "mcaim"}));
    disc->add_option("--epsilon", disc_epsilon)->check(CLI::Range(0.0, 0.1));
    disc->add_option("--out", disc_out)->required();

    // run
    auto* run = app.add_subcommand("run", "prequential evaluation over a labeled CSV");
    std::string run_input, run_schema, run_metrics, run_dump;
    icft::RunConfig cfg;
    run->add_option("--input", run_input)->required();
    run->add_option("--schema", run_schema)->required();
    run->add_option("--minsup", cfg.minsup);
    run->add_option("--topk", cfg.top_k);
    run->add_option("--window", cfg.drift.window);
    run->add_option("--delta", cfg.drift.delta);
    run->add_option("--min-leaf", cfg.drift.min_leaf);
    run->add_option("--rebuild-every", cfg.drift.rebuild_every);
    run->add_option("--warmup", cfg.warmup);
    run->add_option("--report-every", cfg.report_every);
    run->add_option("--epsilon", cfg.epsilon);
    run->add_option("--metrics", run_metrics)->required();
    run->add_option("--dump-model", run_dump);
    run->add_flag("--no-rebuild", "disable drift rebuilds (negative control)");

    // gen
    auto* gen = app.add_subcommand("gen", "synthetic drift stream generator");
    std::string gen_kind = "sea", gen_drift, gen_theta = "8", gen_out, gen_schema_out;
    icft::StreamSpec spec;
    gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"sea"}));
    gen->add_option("--n", spec.n);
    gen->add_option("--drift-at", gen_drift);
    gen->add_option("--theta", gen_theta);
    gen->add_option("--noise", spec.noise);
    gen->add_option("--seed", spec.seed);
    gen->add_option("--out", gen_out)->required();
    gen->add_option("--schema-out", gen_schema_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*prep) {
            auto schema = read_schema(prep_schema);
            auto data = read_dataset(prep_input, schema);
            data.instances =
                icft::impute_missing(data.instances, schema, {skew_threshold});
            if (!prep_norm.empty()) {
                icft::NormalizeMethod method =
                    prep_norm == "minmax"   ? icft::NormalizeMethod::MinMax
                    : prep_norm == "zscore" ? icft::NormalizeMethod::ZScore
                                            : icft::NormalizeMethod::Decimal;
                for (std::size_t slot = 0; slot < schema.feature_count(); ++slot) {
                    if (schema.feature(slot).kind != icft::AttrKind::Numeric) continue;
                    std::vector<double> col;
                    for (const auto& x : data.instances) col.push_back(x.values[slot].num);
                    auto normed = icft::normalize_column(col, method);
                    for (std::size_t i = 0; i < data.instances.size(); ++i)
                        data.instances[i].values[slot] = icft::Cell::number(normed[i]);
                }
            }
            std::ofstream out(prep_out);
            if (!out) throw icft::Error("FileOpen", prep_out);
            icft::write_csv(out, data);
        } else if (*disc) {
            auto schema = read_schema(disc_schema);
            auto data = read_dataset(disc_input, schema);
            data.instances = icft::impute_missing(data.instances, schema);
            auto scheme = icft::fit_scheme(data,
                                           disc_method == "caim"
                                               ? icft::DiscretizeMethod::Caim
                                               : icft::DiscretizeMethod::Mcaim,
                                           disc_epsilon);
            std::ofstream out(disc_out);
            if (!out) throw icft::Error("FileOpen", disc_out);
            out << scheme.to_json(schema).dump(2) << "\n";
        } else if (*run) {
            auto schema = read_schema(run_schema);
            auto data = read_dataset(run_input, schema);
            cfg.rebuilds_enabled = run->count("--no-rebuild") == 0;
            icft::RunArtifacts art;
            auto rows = icft::prequential_run(data, cfg, &art);
            std::ofstream out(run_metrics);
            if (!out) throw icft::Error("FileOpen", run_metrics);
            icft::emit_metrics(rows, out);
            if (!run_dump.empty()) {
                std::ofstream mout(run_dump);
                if (!mout) throw icft::Error("FileOpen", run_dump);
                mout << icft::model_json(*art.final_model).dump(2) << "\n";
            }
            if (!rows.empty())
                std::cout << "final cumulative accuracy "
                          << rows.back().cumulative_accuracy << " over "
                          << data.instances.size() - cfg.warmup << " tested instances, "
                          << art.rebuilds << " rebuilds\n";
        } else if (*gen) {
            if (!gen_drift.empty()) spec.drift_at = parse_indices(gen_drift);
            spec.thetas = parse_doubles(gen_theta);
            auto data = icft::generate_stream(spec);
            std::ofstream out(gen_out);
            if (!out) throw icft::Error("FileOpen", gen_out);
            icft::write_csv(out, data);
            if (!gen_schema_out.empty()) {
                std::ofstream sout(gen_schema_out);
                if (!sout) throw icft::Error("FileOpen", gen_schema_out);
                sout << icft::schema_json(data.schema).dump(2) << "\n";
            }
        }
    } catch (const icft::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
