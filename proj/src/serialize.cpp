#include "deeplda/serialize.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "deeplda/error.hpp"

namespace deeplda {

using nlohmann::ordered_json;

namespace {

constexpr const char* kNetworkFormat = "deeplda-network";
constexpr const char* kLdaFormat = "deeplda-fisher-lda";
constexpr const char* kTwoPhaseFormat = "deeplda-two-phase";
constexpr int kVersion = 1;

ordered_json matrix_to_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

Matrix matrix_from_json(const ordered_json& j) {
    return Matrix::from_rows(j.get<std::vector<std::vector<double>>>());
}

ordered_json config_json(const TrainConfig& c) {
    ordered_json j;
    j["learning_rate"] = c.learning_rate;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["l2_lambda"] = c.l2_lambda;
    j["seed"] = c.seed;
    j["threshold"] = c.threshold;
    return j;
}

TrainConfig config_from(const ordered_json& j) {
    TrainConfig c;
    c.learning_rate = j.at("learning_rate").get<double>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.l2_lambda = j.at("l2_lambda").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.threshold = j.at("threshold").get<double>();
    return c;
}

ordered_json parse(const std::string& text, const char* what) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

void expect_format(const ordered_json& j, const char* format) {
    if (!j.is_object() || j.value("format", std::string{}) != format) {
        throw DataError(std::string("expected a '") + format + "' document");
    }
    if (j.value("version", 0) != kVersion) throw DataError(std::string(format) + ": unsupported version");
}

ordered_json network_json(const Network& net, const TrainConfig* config) {
    ordered_json j;
    j["format"] = kNetworkFormat;
    j["version"] = kVersion;
    j["input_dim"] = net.spec.input_dim;
    j["param_count"] = net.param_count();
    ordered_json layers = ordered_json::array();
    for (std::size_t i = 0; i < net.spec.layers.size(); ++i) {
        const auto& l = net.spec.layers[i];
        ordered_json lj;
        lj["kind"] = to_string(l.kind);
        if (l.kind == LayerKind::dense) {
            lj["units"] = l.units;
            lj["activation"] = to_string(l.activation);
            lj["l2_lambda"] = l.l2_lambda;
            lj["weights"] = matrix_to_json(net.params[i]->weights);
            lj["bias"] = std::vector<double>(net.params[i]->bias.data().begin(), net.params[i]->bias.data().end());
        } else {
            lj["rate"] = l.rate;
        }
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    if (config) j["config"] = config_json(*config);
    return j;
}

Network network_from(const ordered_json& j) {
    expect_format(j, kNetworkFormat);
    NetworkSpec spec;
    spec.input_dim = j.at("input_dim").get<std::size_t>();
    std::vector<std::optional<std::pair<Matrix, Matrix>>> params;
    for (const auto& lj : j.at("layers")) {
        const LayerKind kind = parse_layer_kind(lj.at("kind").get<std::string>());
        if (kind == LayerKind::dense) {
            spec.layers.push_back(LayerSpec::dense(lj.at("units").get<std::size_t>(),
                                                   parse_activation(lj.at("activation").get<std::string>()),
                                                   lj.at("l2_lambda").get<double>()));
            auto bias = lj.at("bias").get<std::vector<double>>();
            const std::size_t units = bias.size();
            params.emplace_back(std::pair{matrix_from_json(lj.at("weights")), Matrix(1, units, std::move(bias))});
        } else {
            spec.layers.push_back(LayerSpec::dropout(lj.at("rate").get<double>()));
            params.emplace_back(std::nullopt);
        }
    }
    return make_network(spec, std::move(params));
}

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string(what) + ": " + e.what());
    } catch (const ShapeError& e) {
        throw DataError(std::string(what) + ": " + e.what());
    } catch (const ArgumentError& e) {
        throw DataError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << text;
    if (!f) throw DataError("failed writing " + path.string());
}

std::string network_to_json(const Network& net, const TrainConfig* config) {
    return network_json(net, config).dump() + "\n";
}

Network network_from_json(const std::string& text) {
    return guarded("network", [&] { return network_from(parse(text, "network")); });
}

std::string train_config_to_json(const TrainConfig& config) { return config_json(config).dump(2) + "\n"; }

TrainConfig train_config_from_json(const std::string& text) {
    return guarded("train config", [&] { return config_from(parse(text, "train config")); });
}

std::string lda_to_json(const LdaModel& m) {
    ordered_json j;
    j["format"] = kLdaFormat;
    j["version"] = kVersion;
    j["dim"] = m.w.size();
    j["w"] = m.w;
    j["b"] = m.b;
    j["class_means"] = {m.class_means[0], m.class_means[1]};
    j["priors"] = {m.priors[0], m.priors[1]};
    j["scatter_dof"] = m.scatter_dof;
    return j.dump(2) + "\n";
}

LdaModel lda_from_json(const std::string& text) {
    return guarded("lda", [&] {
        const auto j = parse(text, "lda");
        expect_format(j, kLdaFormat);
        LdaModel m;
        m.w = j.at("w").get<std::vector<double>>();
        m.b = j.at("b").get<double>();
        const auto means = j.at("class_means").get<std::vector<std::vector<double>>>();
        const auto priors = j.at("priors").get<std::vector<double>>();
        m.scatter_dof = j.at("scatter_dof").get<double>();
        if (m.w.size() != j.at("dim").get<std::size_t>() || means.size() != 2 || priors.size() != 2 ||
            means[0].size() != m.w.size() || means[1].size() != m.w.size()) {
            throw DataError("lda: inconsistent dimensions");
        }
        m.class_means = {means[0], means[1]};
        m.priors = {priors[0], priors[1]};
        return m;
    });
}

void save_two_phase(const TwoPhaseModel& model, const std::filesystem::path& dir, const std::string& extra_manifest) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / "phase1.json", network_to_json(model.phase1, &model.config1));
    write_text_file(dir / "phase2.json", network_to_json(model.phase2, &model.config2));

    ordered_json m;
    m["format"] = kTwoPhaseFormat;
    m["version"] = kVersion;
    m["phase1"] = "phase1.json";
    m["phase2"] = "phase2.json";
    m["config1"] = config_json(model.config1);
    m["config2"] = config_json(model.config2);
    m["feature_names"] = model.feature_names;
    if (model.preprocessing) {
        m["preprocessing"] = {{"kind", "standardize"},
                              {"mean", model.preprocessing->mean()},
                              {"std", model.preprocessing->stddev()}};
    } else {
        m["preprocessing"] = nullptr;
    }
    const auto extra = parse(extra_manifest, "manifest extras");
    if (!extra.is_object()) throw ArgumentError("manifest extras must be a JSON object");
    for (const auto& [k, v] : extra.items()) m[k] = v;
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

TwoPhaseModel load_two_phase(const std::filesystem::path& dir) {
    const auto m = parse(read_text_file(dir / "manifest.json"), "manifest");
    return guarded("manifest", [&] {
        expect_format(m, kTwoPhaseFormat);
        TwoPhaseModel model;
        model.phase1 = network_from_json(read_text_file(dir / m.at("phase1").get<std::string>()));
        model.phase2 = network_from_json(read_text_file(dir / m.at("phase2").get<std::string>()));
        model.config1 = config_from(m.at("config1"));
        model.config2 = config_from(m.at("config2"));
        model.feature_names = m.at("feature_names").get<std::vector<std::string>>();
        const auto& pre = m.at("preprocessing");
        if (!pre.is_null()) {
            model.preprocessing = Standardizer::restore(pre.at("mean").get<std::vector<double>>(),
                                                        pre.at("std").get<std::vector<double>>());
        }
        if (model.phase1.spec.input_dim != model.feature_names.size() || model.phase2.spec.input_dim != 1 ||
            (model.preprocessing && model.preprocessing->mean().size() != model.feature_names.size())) {
            throw DataError("manifest: phase dimensions are inconsistent");
        }
        return model;
    });
}

}  // namespace deeplda
