#include <gtest/gtest.h>

#include "deeplda/error.hpp"
#include "deeplda/pipeline.hpp"
#include "deeplda/serialize.hpp"
#include "deeplda/synthetic.hpp"

namespace deeplda {
namespace {

struct SyntheticSplit {
    Dataset train;
    Dataset val;
};

SyntheticSplit separable(std::uint64_t seed, std::size_t dim = 41, double separation = 8.0) {
    Rng rng(seed);
    const auto g = GaussianPair::separated(dim, separation);
    return {sample_gaussian_pair(g, 400, rng), sample_gaussian_pair(g, 100, rng)};
}

TrainConfig fast_config(std::size_t epochs = 100) {
    TrainConfig c;
    c.learning_rate = 1e-3;
    c.epochs = epochs;
    return c;
}

TEST(PhaseSpecs, Phase1Counts) {
    EXPECT_EQ(param_count(build_phase1_spec()), 2143233u);
    EXPECT_EQ(layer_param_count(build_phase1_spec(41), 0), 43008u);
    EXPECT_EQ(layer_param_count(build_phase1_spec(1), 0), 2048u);
    const auto spec = build_phase1_spec();
    ASSERT_EQ(spec.layers.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(spec.layers[i].activation, Activation::sigmoid);
        EXPECT_EQ(spec.layers[i].l2_lambda, 0.01);
    }
    EXPECT_THROW(build_phase1_spec(0), ArgumentError);
}

TEST(PhaseSpecs, Phase2Counts) {
    const auto spec = build_phase2_spec();
    EXPECT_EQ(param_count(spec), 301u);
    EXPECT_EQ(layer_param_count(spec, 0), 200u);
    EXPECT_EQ(layer_param_count(spec, 2), 101u);
    EXPECT_EQ(spec.input_dim, 1u);
    EXPECT_EQ(spec.layers[1].kind, LayerKind::dropout);
    EXPECT_EQ(spec.layers[1].rate, 0.5);
}

TEST(TransformPhase1, WidthOneAndDefinitional) {
    Rng rng(1);
    TwoPhaseModel model;
    model.phase1 = init_network(build_phase1_spec(5, 0.01, 16), rng);
    model.phase2 = init_network(build_phase2_spec(), rng);
    Matrix x(9, 5);
    for (double& v : x.data()) v = rng.next_normal();
    const auto t = transform_phase1(model, x);
    EXPECT_EQ(t.cols(), 1u);
    EXPECT_EQ(t.rows(), 9u);
    EXPECT_EQ(t, predict(model.phase1, x).probs);
    for (double v : t.data()) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
    EXPECT_THROW(transform_phase1(model, Matrix(2, 4)), ShapeError);
}

TEST(TransformPhase1, ZeroWeightsGiveHalf) {
    Rng rng(2);
    TwoPhaseModel model;
    model.phase1 = init_network(build_phase1_spec(3, 0.0, 8), rng);
    for (auto& p : model.phase1.params)
        for (double& w : p->weights.data()) w = 0.0;
    const Matrix t = transform_phase1(model, Matrix(4, 3, 2.0));
    for (double v : t.data()) EXPECT_EQ(v, 0.5);
}

TEST(TwoPhase, HistoriesDeterminismAndComposition) {
    const auto data = separable(3, 8);
    const auto run = [&] {
        Rng rng(17);
        return train_two_phase(data.train, data.val, fast_config(6), fast_config(7), rng, {32, 100});
    };
    const auto a = run();
    const auto b = run();
    EXPECT_EQ(a.phase1_history.size(), 6u);
    EXPECT_EQ(a.phase2_history.size(), 7u);
    EXPECT_EQ(a.phase1_history.epochs, b.phase1_history.epochs);
    EXPECT_EQ(a.phase2_history.epochs, b.phase2_history.epochs);

    const auto composed = predict_two_phase(a.model, data.val.x());
    const auto manual = predict(a.model.phase2, transform_phase1(a.model, data.val.x()));
    EXPECT_EQ(composed.probs, manual.probs);
    EXPECT_EQ(composed.labels, manual.labels);
    EXPECT_EQ(composed.labels.size(), data.val.rows());
    EXPECT_EQ(a.model.phase2.param_count(), 301u);
}

TEST(TwoPhase, DefaultPhase2HistoryHasHundredRows) {
    const auto data = separable(4, 3);
    Rng rng(5);
    TrainConfig c1 = fast_config(2);
    const auto r = train_two_phase(data.train, data.val, c1, TrainConfig{}, rng, {8, 100});
    EXPECT_EQ(r.phase2_history.size(), 100u);
}

TEST(TwoPhase, RetrainingPhase2LeavesPhase1Untouched) {
    const auto data = separable(6, 5);
    Rng rng(7);
    auto r = train_two_phase(data.train, data.val, fast_config(3), fast_config(3), rng, {16, 100});
    const std::string before = network_to_json(r.model.phase1);
    const std::string phase2_before = network_to_json(r.model.phase2);
    Rng other(12345);
    retrain_phase2(r.model, data.train, data.val, fast_config(4), other);
    EXPECT_EQ(network_to_json(r.model.phase1), before);
    EXPECT_NE(network_to_json(r.model.phase2), phase2_before);
}

TEST(TwoPhase, FinalDecisionDependsOnlyOnPhase1Output) {
    const auto data = separable(8, 4);
    Rng rng(9);
    const auto r = train_two_phase(data.train, data.val, fast_config(5), fast_config(5), rng, {16, 100});
    const Matrix p1 = transform_phase1(r.model, data.val.x());
    const auto end_to_end = predict_two_phase(r.model, data.val.x());
    for (std::size_t i = 0; i < p1.rows(); ++i) {
        const auto single = predict(r.model.phase2, Matrix::from_rows({{p1(i, 0)}}));
        EXPECT_EQ(single.probs(0, 0), end_to_end.probs(i, 0));
        EXPECT_EQ(single.labels[0], end_to_end.labels[i]);
    }
    // Duplicate rows -> equal phase-1 outputs -> equal decisions.
    Matrix twice(2, data.val.features());
    for (std::size_t j = 0; j < twice.cols(); ++j) twice(0, j) = twice(1, j) = data.val.x()(0, j);
    const auto dup = predict_two_phase(r.model, twice);
    EXPECT_EQ(dup.probs(0, 0), dup.probs(1, 0));
}

TEST(TwoPhase, SeparableSyntheticReducedWidth) {
    const auto data = separable(10);
    Rng rng(11);
    const auto r = train_two_phase(data.train, data.val, fast_config(), fast_config(), rng, {64, 100});
    const auto pred = predict_two_phase(r.model, data.val.x());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.val.rows(); ++i) correct += pred.labels[i] == data.val.y()[i];
    EXPECT_GE(static_cast<double>(correct) / static_cast<double>(data.val.rows()), 0.95);
}

TEST(TwoPhase, FeatureMismatchRejected) {
    const auto a = separable(1, 3);
    const auto b = separable(1, 4);
    Rng rng(1);
    EXPECT_THROW(train_two_phase(a.train, b.val, fast_config(1), fast_config(1), rng), ShapeError);
}

}  // namespace
}  // namespace deeplda
