#pragma once

#include <cstdint>
#include <utility>

#include "deeplda/data.hpp"
#include "deeplda/metrics.hpp"
#include "deeplda/network.hpp"

namespace deeplda {

/// Training hyperparameters. Defaults follow the reference experiment:
/// Adam at 1e-5 for 100 epochs in batches of 64.
///
/// l2_lambda is consumed when a spec is built (it is a per-layer property);
/// fit() itself reads the coefficients from the network spec.
struct TrainConfig {
    double learning_rate = 1e-5;
    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    double l2_lambda = 0.01;
    std::uint64_t seed = 0;
    double threshold = 0.5;

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

/// Mini-batch Adam training. Rows are reshuffled with `rng` every epoch and
/// the last partial batch is kept. Train metrics are batch-size-weighted
/// running averages of the train-mode passes; validation metrics come from
/// one inference pass at the end of each epoch. Losses include the L2 term.
TrainingHistory fit(Network& net, const Dataset& train, const Dataset& val, const TrainConfig& config, Rng& rng);

struct Prediction {
    Matrix probs;
    Labels labels;
};

/// Inference-mode forward; label is 1 iff prob >= threshold.
Prediction predict(const Network& net, const Matrix& x, double threshold = 0.5);

Labels threshold_labels(const Matrix& probs, double threshold);

}  // namespace deeplda
