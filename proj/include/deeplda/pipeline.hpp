#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deeplda/data.hpp"
#include "deeplda/network.hpp"
#include "deeplda/train.hpp"

namespace deeplda {

/// Three 1024-unit sigmoid layers with kernel L2, then a 1-unit sigmoid.
/// With input_dim = 41 this has 2,143,233 parameters.
NetworkSpec build_phase1_spec(std::size_t input_dim = 41, double l2_lambda = 0.01, std::size_t hidden_units = 1024);

/// 1 -> dense(100, relu) -> dropout(0.5) -> dense(1, sigmoid): 301 parameters.
NetworkSpec build_phase2_spec(std::size_t hidden_units = 100);

/// Phase 1 maps features to a single probability; phase 2 is a small
/// classifier trained on that scalar. The phases are trained separately.
struct TwoPhaseModel {
    Network phase1;
    Network phase2;
    TrainConfig config1;
    TrainConfig config2;
    std::optional<Standardizer> preprocessing;
    std::vector<std::string> feature_names;
};

struct TwoPhaseResult {
    TwoPhaseModel model;
    TrainingHistory phase1_history;
    TrainingHistory phase2_history;
};

/// Inference-mode phase-1 output (n x 1 probabilities), fed raw to phase 2.
Matrix transform_phase1(const TwoPhaseModel& model, const Matrix& x);

/// Options beyond the two TrainConfigs; defaults reproduce the reference setup.
struct TwoPhaseOptions {
    std::size_t phase1_hidden = 1024;
    std::size_t phase2_hidden = 100;
};

/// Trains phase 1 on the features, then phase 2 on phase 1's outputs for
/// the same rows. Both draw from `rng` in that order.
TwoPhaseResult train_two_phase(const Dataset& train, const Dataset& val, const TrainConfig& config1,
                               const TrainConfig& config2, Rng& rng, const TwoPhaseOptions& options = {});

/// Re-initializes and retrains phase 2 only; phase 1 is left untouched.
TrainingHistory retrain_phase2(TwoPhaseModel& model, const Dataset& train, const Dataset& val,
                               const TrainConfig& config2, Rng& rng);

Prediction predict_two_phase(const TwoPhaseModel& model, const Matrix& x, double threshold = 0.5);

}  // namespace deeplda
