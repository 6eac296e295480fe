#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deeplda/matrix.hpp"
#include "deeplda/rng.hpp"

namespace deeplda {

enum class LayerKind { dense, dropout };
enum class Activation { sigmoid, relu, none };
enum class Mode { train, infer };

std::string_view to_string(LayerKind kind) noexcept;
std::string_view to_string(Activation act) noexcept;
LayerKind parse_layer_kind(std::string_view name);
Activation parse_activation(std::string_view name);

struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    std::size_t units = 1;
    Activation activation = Activation::none;
    /// Kernel (weight-only) L2 coefficient; biases are never penalized.
    double l2_lambda = 0.0;
    double rate = 0.0;

    static LayerSpec dense(std::size_t units, Activation act, double l2_lambda = 0.0);
    static LayerSpec dropout(double rate);

    bool operator==(const LayerSpec&) const = default;
};

/// Declarative layer list. A valid spec ends in a 1-unit sigmoid dense layer.
struct NetworkSpec {
    std::size_t input_dim = 1;
    std::vector<LayerSpec> layers;

    /// Throws ArgumentError describing the first violated invariant.
    void validate() const;

    bool operator==(const NetworkSpec&) const = default;
};

/// Learnable parameters of one layer. Dropout layers contribute 0.
std::size_t layer_param_count(const NetworkSpec& spec, std::size_t layer);
std::size_t param_count(const NetworkSpec& spec);

struct AdamState {
    Matrix m;
    Matrix v;
    std::uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;

    static AdamState zeros_like(const Matrix& param);
};

struct DenseParams {
    Matrix weights;  // fan_in x units
    Matrix bias;     // 1 x units
    AdamState weights_state;
    AdamState bias_state;
};

/// Instantiated network. `params[i]` is engaged iff layer i is dense.
struct Network {
    NetworkSpec spec;
    std::vector<std::optional<DenseParams>> params;

    std::size_t param_count() const { return deeplda::param_count(spec); }
};

/// Glorot-uniform weights, zero biases, zeroed Adam moments.
Network init_network(const NetworkSpec& spec, Rng& rng);

/// Builds a network from explicit parameters (deserialization, tests).
/// Shapes are checked against the spec; Adam state starts fresh.
Network make_network(const NetworkSpec& spec, std::vector<std::optional<std::pair<Matrix, Matrix>>> weights_and_biases);

double sigmoid(double z) noexcept;
double relu(double z) noexcept;

/// Per-layer state retained by forward() for backward().
struct ForwardCache {
    Matrix input;
    /// outputs[i] is the output of layer i; outputs.back() is the prediction.
    std::vector<Matrix> outputs;
    /// masks[i] holds the dropout scale factors (0 or 1/(1-rate)) of layer i,
    /// or is empty for dense layers and infer-mode dropout.
    std::vector<Matrix> masks;
    std::size_t layer_count = 0;
};

struct ForwardResult {
    Matrix output;
    ForwardCache cache;
};

ForwardResult forward(const Network& net, const Matrix& x, Mode mode, Rng& rng);

/// Inference-mode forward pass; needs no randomness.
ForwardResult forward(const Network& net, const Matrix& x);

/// Train-mode forward with caller-supplied dropout masks (one per layer,
/// empty for dense layers). Used to freeze the dropout pattern.
ForwardResult forward_with_masks(const Network& net, const Matrix& x, const std::vector<Matrix>& masks);

struct LossResult {
    double loss = 0.0;
    Matrix grad;
};

inline constexpr double kProbabilityClamp = 1e-7;

/// Mean binary cross-entropy on clamped probabilities, with its gradient
/// with respect to `pred` (zero where the clamp is active).
LossResult bce_loss(const Matrix& pred, const Matrix& y);

/// Per-dense-layer gradients; entries for dropout layers stay empty.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Matrix> biases;
};

struct PenaltyResult {
    double penalty = 0.0;
    Gradients grads;
};

/// lambda * sum(w^2) over every dense kernel, with gradient 2*lambda*w.
PenaltyResult l2_penalty(const Network& net, double lambda);

/// Same, using each layer's own l2_lambda from the spec.
PenaltyResult l2_penalty(const Network& net);

/// Penalty value only (no gradient allocation), per-layer coefficients.
double l2_penalty_value(const Network& net) noexcept;

/// Gradients of (loss + spec L2 penalty) given dLoss/dOutput.
Gradients backward(const Network& net, const ForwardCache& cache, const Matrix& loss_grad);

/// One Adam update of every parameter.
void adam_step(Network& net, const Gradients& grads, double learning_rate);

/// Elementwise Adam update of a single parameter tensor.
void adam_update(Matrix& param, AdamState& state, const Matrix& grad, double learning_rate);

}  // namespace deeplda
