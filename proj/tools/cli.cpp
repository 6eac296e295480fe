#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "deeplda/data.hpp"
#include "deeplda/error.hpp"
#include "deeplda/lda.hpp"
#include "deeplda/metrics.hpp"
#include "deeplda/pipeline.hpp"
#include "deeplda/serialize.hpp"
#include "deeplda/synthetic.hpp"

namespace deeplda::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string group_thousands(std::size_t value) {
    std::string digits = std::to_string(value);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i != 0 && (digits.size() - i) % 3 == 0) out += ',';
        out += digits[i];
    }
    return out;
}

namespace {

/// Fully resolved experiment settings. Precedence: flags > --config file > defaults.
struct RunConfig {
    std::string data;
    std::string schema;
    std::uint64_t seed = 42;
    double val_fraction = 0.2;
    TrainConfig phase1;
    TrainConfig phase2;
    std::size_t phase1_units = 1024;
    std::string out = "run";

    ordered_json to_json() const {
        ordered_json j;
        j["data"] = data;
        j["schema"] = schema;
        j["seed"] = seed;
        j["val_fraction"] = val_fraction;
        j["phase1_units"] = phase1_units;
        j["out"] = out;
        j["phase1"] = ordered_json::parse(train_config_to_json(phase1));
        j["phase2"] = ordered_json::parse(train_config_to_json(phase2));
        return j;
    }
};

/// Flag values as parsed; engaged only when the flag was given.
struct Overrides {
    std::string config;
    std::optional<std::string> data, schema, out;
    std::optional<std::uint64_t> seed;
    std::optional<double> val_fraction, lr, l2;
    std::optional<std::size_t> epochs, batch_size, phase1_units;
};

void apply_phase_keys(TrainConfig& c, const ordered_json& j) {
    for (const auto& [k, v] : j.items()) {
        if (k == "lr" || k == "learning_rate") c.learning_rate = v.get<double>();
        else if (k == "epochs") c.epochs = v.get<std::size_t>();
        else if (k == "batch_size") c.batch_size = v.get<std::size_t>();
        else if (k == "l2" || k == "l2_lambda") c.l2_lambda = v.get<double>();
        else if (k == "threshold") c.threshold = v.get<double>();
        else if (k != "seed") throw ArgumentError("config: unknown phase key '" + k + "'");
    }
}

RunConfig resolve(const Overrides& o) {
    RunConfig rc;
    if (!o.config.empty()) {
        const auto j = ordered_json::parse(read_text_file(o.config), nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw DataError("config: " + o.config + " is not a JSON object");
        try {
            for (const auto& [k, v] : j.items()) {
                if (k == "data") rc.data = v.get<std::string>();
                else if (k == "schema") rc.schema = v.get<std::string>();
                else if (k == "seed") rc.seed = v.get<std::uint64_t>();
                else if (k == "val_fraction") rc.val_fraction = v.get<double>();
                else if (k == "out") rc.out = v.get<std::string>();
                else if (k == "phase1_units") rc.phase1_units = v.get<std::size_t>();
                else if (k == "phase1") apply_phase_keys(rc.phase1, v);
                else if (k == "phase2") apply_phase_keys(rc.phase2, v);
                else if (k == "lr" || k == "learning_rate" || k == "epochs" || k == "batch_size" || k == "l2" ||
                         k == "l2_lambda" || k == "threshold") {
                    ordered_json one;
                    one[k] = v;
                    apply_phase_keys(rc.phase1, one);
                    apply_phase_keys(rc.phase2, one);
                } else {
                    throw ArgumentError("config: unknown key '" + k + "'");
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw ArgumentError(std::string("config: ") + e.what());
        }
    }
    if (o.data) rc.data = *o.data;
    if (o.schema) rc.schema = *o.schema;
    if (o.out) rc.out = *o.out;
    if (o.seed) rc.seed = *o.seed;
    if (o.val_fraction) rc.val_fraction = *o.val_fraction;
    if (o.phase1_units) rc.phase1_units = *o.phase1_units;
    for (TrainConfig* c : {&rc.phase1, &rc.phase2}) {
        if (o.lr) c->learning_rate = *o.lr;
        if (o.epochs) c->epochs = *o.epochs;
        if (o.batch_size) c->batch_size = *o.batch_size;
        if (o.l2) c->l2_lambda = *o.l2;
        c->seed = rc.seed;
        c->validate();
        if (c->epochs == 0) throw ArgumentError("epochs must be >= 1");
    }
    if (rc.data.empty()) throw ArgumentError("--data is required (flag or config file)");
    if (rc.schema.empty()) throw ArgumentError("--schema is required (flag or config file)");
    if (rc.phase1_units == 0) throw ArgumentError("--phase1-units must be >= 1");
    return rc;
}

template <typename T>
void bind_override(CLI::App* cmd, const std::string& name, std::optional<T>& slot, const std::string& help) {
    cmd->add_option_function<T>(name, [&slot](const T& v) { slot = v; }, help);
}

void add_run_options(CLI::App* cmd, Overrides& o, bool training) {
    cmd->add_option("--config", o.config, "JSON run config; flags override its values")->check(CLI::ExistingFile);
    bind_override(cmd, "--data", o.data, "input CSV file");
    bind_override(cmd, "--schema", o.schema, "JSON schema (target, drop, positive_label)");
    bind_override(cmd, "--seed", o.seed, "seed for splitting, initialization and shuffling (default 42)");
    bind_override(cmd, "--val-fraction", o.val_fraction, "stratified validation fraction (default 0.2)");
    bind_override(cmd, "--out", o.out, "output directory (default ./run)");
    if (training) {
        bind_override(cmd, "--lr", o.lr, "Adam learning rate for both phases (default 1e-5)");
        bind_override(cmd, "--epochs", o.epochs, "epochs per phase (default 100)");
        bind_override(cmd, "--batch-size", o.batch_size, "mini-batch size (default 64)");
        bind_override(cmd, "--l2", o.l2, "phase-1 kernel L2 coefficient (default 0.01)");
        bind_override(cmd, "--phase1-units", o.phase1_units, "phase-1 hidden width (default 1024)");
    }
}

struct Prepared {
    DataSchema schema;
    Dataset full;
    Split split;
    Standardizer standardizer;
};

Prepared prepare(const RunConfig& rc) {
    DataSchema schema = DataSchema::load(rc.schema);
    Dataset full = clean(load_csv(rc.data, schema), schema);
    Rng split_rng(rc.seed);
    Split split = stratified_split(full, rc.val_fraction, split_rng);
    Standardizer s = Standardizer::fit(split);
    Split scaled{s.apply(split.train), s.apply(split.val)};
    return Prepared{std::move(schema), std::move(full), std::move(scaled), std::move(s)};
}

std::string report_block(const std::string& title, std::size_t rows, const MetricsReport& r) {
    return "== " + title + " (" + std::to_string(rows) + " rows) ==\n" + r.to_text();
}

int cmd_train(const RunConfig& rc, std::ostream& out) {
    auto prep = prepare(rc);
    const fs::path dir = rc.out;
    fs::create_directories(dir);

    // Split consumed Rng(seed); training continues from a second stream so
    // that the split stays identical to `baseline` for the same seed.
    Rng train_rng(rc.seed + 1);
    TwoPhaseOptions options;
    options.phase1_hidden = rc.phase1_units;
    auto result = train_two_phase(prep.split.train, prep.split.val, rc.phase1, rc.phase2, train_rng, options);
    result.model.preprocessing = prep.standardizer;

    ordered_json extra;
    extra["seed"] = rc.seed;
    extra["val_fraction"] = rc.val_fraction;
    extra["schema"] = ordered_json::parse(prep.schema.to_json_text());
    save_two_phase(result.model, dir / "model", extra.dump());

    history_to_csv(result.phase1_history, dir / "lda.csv");
    history_to_csv(result.phase2_history, dir / "svm.csv");

    const auto& split = prep.split;
    const auto val_pred = predict_two_phase(result.model, split.val.x(), rc.phase2.threshold);
    const auto train_pred = predict_two_phase(result.model, split.train.x(), rc.phase2.threshold);
    const auto val_report = MetricsReport::from(confusion(val_pred.labels, split.val.y()));
    const auto train_report = MetricsReport::from(confusion(train_pred.labels, split.train.y()));

    const std::string text = report_block("validation", split.val.rows(), val_report) + "\n" +
                             report_block("training", split.train.rows(), train_report);
    write_text_file(dir / "metrics.txt", text);
    ordered_json mj;
    mj["validation"] = ordered_json::parse(val_report.to_json());
    mj["training"] = ordered_json::parse(train_report.to_json());
    write_text_file(dir / "metrics.json", mj.dump(2) + "\n");

    ordered_json manifest;
    manifest["command"] = "train";
    manifest["config"] = rc.to_json();
    manifest["rows"] = {{"total", prep.full.rows()}, {"train", split.train.rows()}, {"val", split.val.rows()}};
    manifest["features"] = prep.full.features();
    manifest["param_count"] = {{"phase1", result.model.phase1.param_count()},
                               {"phase2", result.model.phase2.param_count()}};
    manifest["artifacts"] = {"model/", "lda.csv", "svm.csv", "metrics.txt", "metrics.json", "manifest.json"};
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << text;
    out << "artifacts written to " << dir.string() << "\n";
    return kOk;
}

int cmd_evaluate(const std::string& model_dir, const std::string& data, const std::string& schema_path,
                 std::ostream& out) {
    const TwoPhaseModel model = load_two_phase(model_dir);
    DataSchema schema;
    if (!schema_path.empty()) {
        schema = DataSchema::load(schema_path);
    } else {
        const auto m = ordered_json::parse(read_text_file(fs::path(model_dir) / "manifest.json"));
        if (!m.contains("schema")) throw DataError("model manifest has no schema; pass --schema");
        schema = DataSchema::from_json_text(m.at("schema").dump());
    }
    Dataset ds = clean(load_csv(data, schema), schema);
    if (ds.feature_names() != model.feature_names) {
        throw DataError("data columns do not match the model's " + std::to_string(model.feature_names.size()) +
                        " training features");
    }
    if (model.preprocessing) ds = model.preprocessing->apply(ds);
    const auto pred = predict_two_phase(model, ds.x(), model.config2.threshold);
    out << report_block("evaluation", ds.rows(), MetricsReport::from(confusion(pred.labels, ds.y())));
    return kOk;
}

int cmd_inspect(int phase, std::size_t input_dim, std::ostream& out) {
    const NetworkSpec spec = phase == 2 ? build_phase2_spec() : build_phase1_spec(input_dim);
    char buf[160];
    out << "phase " << phase << " network (input " << spec.input_dim << ")\n";
    std::snprintf(buf, sizeof buf, "  %-6s %-8s %-6s %-11s %14s\n", "layer", "kind", "units", "activation", "params");
    out << buf;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto& l = spec.layers[i];
        const std::string units = l.kind == LayerKind::dense ? std::to_string(l.units) : "-";
        const std::string act =
            l.kind == LayerKind::dense ? std::string(to_string(l.activation)) : "rate " + std::to_string(l.rate).substr(0, 4);
        std::snprintf(buf, sizeof buf, "  %-6zu %-8s %-6s %-11s %14s\n", i + 1, std::string(to_string(l.kind)).c_str(),
                      units.c_str(), act.c_str(), group_thousands(layer_param_count(spec, i)).c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "  %-33s %14s\n", "total", group_thousands(param_count(spec)).c_str());
    out << buf;
    return kOk;
}

int cmd_baseline(const RunConfig& rc, bool write_out, std::ostream& out) {
    auto prep = prepare(rc);
    const LdaModel model = fit_fisher(prep.split.train);
    const auto pred = predict_lda(model, prep.split.val.x());
    const auto report = MetricsReport::from(confusion(pred.labels, prep.split.val.y()));
    const std::string text = report_block("validation", prep.split.val.rows(), report);
    if (write_out) {
        const fs::path dir = rc.out;
        fs::create_directories(dir);
        write_text_file(dir / "baseline_lda.json", lda_to_json(model));
        write_text_file(dir / "baseline_metrics.txt", text);
        write_text_file(dir / "baseline_metrics.json", report.to_json());
    }
    out << text;
    return kOk;
}

int cmd_synth(const std::string& kind, const std::string& path, std::size_t rows, std::uint64_t seed,
              std::size_t dim, double separation, std::ostream& out) {
    Rng rng(seed);
    std::string text;
    if (kind == "pcos") {
        text = synthetic_pcos_csv(rows, rng);
    } else if (kind == "gaussian") {
        const Dataset ds = sample_gaussian_pair(GaussianPair::separated(dim, separation), rows, rng);
        std::ostringstream os;
        os.precision(17);
        for (const auto& n : ds.feature_names()) os << n << ',';
        os << "label\n";
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            for (double v : ds.x().row(i)) os << v << ',';
            os << ds.y()[i] << '\n';
        }
        text = os.str();
    } else {
        throw ArgumentError("--kind must be 'pcos' or 'gaussian'");
    }
    write_text_file(path, text);
    out << "wrote " << rows << " rows to " << path << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-phase deep discriminant classifier for tabular binary data", "deeplda"};
    app.require_subcommand(1);

    Overrides train_o, base_o;
    auto* train = app.add_subcommand("train", "train both phases and write model, curves, metrics and manifest");
    add_run_options(train, train_o, true);

    std::string model_dir, eval_data, eval_schema;
    auto* evaluate = app.add_subcommand("evaluate", "report confusion matrix and metrics of a saved model");
    evaluate->add_option("--model", model_dir, "model directory written by train")->required();
    evaluate->add_option("--data", eval_data, "CSV file to evaluate")->required();
    evaluate->add_option("--schema", eval_schema, "schema override (default: the one stored with the model)");

    int phase = 1;
    std::size_t input_dim = 41;
    auto* inspect = app.add_subcommand("inspect", "print per-layer and total parameter counts");
    inspect->add_option("--phase", phase, "1 or 2")->check(CLI::IsMember({1, 2}));
    inspect->add_option("--input-dim", input_dim, "phase-1 input width (default 41)")->check(CLI::PositiveNumber);

    auto* baseline = app.add_subcommand("baseline", "fit Fisher LDA on the training split and report validation metrics");
    add_run_options(baseline, base_o, false);

    std::string synth_kind = "pcos", synth_out;
    std::size_t synth_rows = 541, synth_dim = 41;
    std::uint64_t synth_seed = 42;
    double synth_sep = 4.0;
    auto* synth = app.add_subcommand("synth", "write a synthetic CSV (PCOS column layout or two Gaussians)");
    synth->add_option("--kind", synth_kind, "pcos or gaussian");
    synth->add_option("--out", synth_out, "output CSV path")->required();
    synth->add_option("--rows", synth_rows, "row count")->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--dim", synth_dim, "gaussian: feature count")->check(CLI::PositiveNumber);
    synth->add_option("--separation", synth_sep, "gaussian: distance between class means");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*train) return cmd_train(resolve(train_o), out);
        if (*evaluate) return cmd_evaluate(model_dir, eval_data, eval_schema, out);
        if (*inspect) return cmd_inspect(phase, input_dim, out);
        if (*baseline) return cmd_baseline(resolve(base_o), base_o.out.has_value(), out);
        if (*synth) return cmd_synth(synth_kind, synth_out, synth_rows, synth_seed, synth_dim, synth_sep, out);
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsage;
}

}  // namespace deeplda::cli
