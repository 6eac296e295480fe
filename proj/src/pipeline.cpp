#include "deeplda/pipeline.hpp"

#include "deeplda/error.hpp"

namespace deeplda {

NetworkSpec build_phase1_spec(std::size_t input_dim, double l2_lambda, std::size_t hidden_units) {
    if (input_dim == 0) throw ArgumentError("phase 1 input_dim must be >= 1");
    NetworkSpec spec{input_dim, {}};
    for (int i = 0; i < 3; ++i) spec.layers.push_back(LayerSpec::dense(hidden_units, Activation::sigmoid, l2_lambda));
    spec.layers.push_back(LayerSpec::dense(1, Activation::sigmoid, l2_lambda));
    return spec;
}

NetworkSpec build_phase2_spec(std::size_t hidden_units) {
    return NetworkSpec{1,
                       {LayerSpec::dense(hidden_units, Activation::relu), LayerSpec::dropout(0.5),
                        LayerSpec::dense(1, Activation::sigmoid)}};
}

Matrix transform_phase1(const TwoPhaseModel& model, const Matrix& x) { return predict(model.phase1, x).probs; }

namespace {

Dataset lift(const Dataset& ds, const Matrix& phase1_out) { return ds.with_features(phase1_out, {"phase1_probability"}); }

TrainingHistory train_phase2(TwoPhaseModel& model, const Dataset& train, const Dataset& val,
                             const TrainConfig& config2, std::size_t hidden, Rng& rng) {
    const Dataset train2 = lift(train, transform_phase1(model, train.x()));
    const Dataset val2 = lift(val, transform_phase1(model, val.x()));
    model.phase2 = init_network(build_phase2_spec(hidden), rng);
    model.config2 = config2;
    return fit(model.phase2, train2, val2, config2, rng);
}

}  // namespace

TrainingHistory retrain_phase2(TwoPhaseModel& model, const Dataset& train, const Dataset& val,
                               const TrainConfig& config2, Rng& rng) {
    std::size_t hidden = 100;
    if (!model.phase2.spec.layers.empty()) hidden = model.phase2.spec.layers.front().units;
    return train_phase2(model, train, val, config2, hidden, rng);
}

TwoPhaseResult train_two_phase(const Dataset& train, const Dataset& val, const TrainConfig& config1,
                               const TrainConfig& config2, Rng& rng, const TwoPhaseOptions& options) {
    if (train.features() != val.features()) {
        throw ShapeError("train_two_phase: train has " + std::to_string(train.features()) + " features, val has " +
                         std::to_string(val.features()));
    }
    TwoPhaseResult result;
    auto& model = result.model;
    model.config1 = config1;
    model.feature_names = train.feature_names();
    model.phase1 = init_network(build_phase1_spec(train.features(), config1.l2_lambda, options.phase1_hidden), rng);
    result.phase1_history = fit(model.phase1, train, val, config1, rng);

    result.phase2_history = train_phase2(model, train, val, config2, options.phase2_hidden, rng);
    return result;
}

Prediction predict_two_phase(const TwoPhaseModel& model, const Matrix& x, double threshold) {
    return predict(model.phase2, transform_phase1(model, x), threshold);
}

}  // namespace deeplda
