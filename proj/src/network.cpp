#include "deeplda/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deeplda/error.hpp"

namespace deeplda {

std::string_view to_string(LayerKind kind) noexcept { return kind == LayerKind::dense ? "dense" : "dropout"; }

std::string_view to_string(Activation act) noexcept {
    switch (act) {
        case Activation::sigmoid: return "sigmoid";
        case Activation::relu: return "relu";
        case Activation::none: return "none";
    }
    return "none";
}

LayerKind parse_layer_kind(std::string_view name) {
    if (name == "dense") return LayerKind::dense;
    if (name == "dropout") return LayerKind::dropout;
    throw ArgumentError("unknown layer kind '" + std::string(name) + "'");
}

Activation parse_activation(std::string_view name) {
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "relu") return Activation::relu;
    if (name == "none") return Activation::none;
    throw ArgumentError("unknown activation '" + std::string(name) + "'");
}

LayerSpec LayerSpec::dense(std::size_t units, Activation act, double l2_lambda) {
    return LayerSpec{LayerKind::dense, units, act, l2_lambda, 0.0};
}

LayerSpec LayerSpec::dropout(double rate) { return LayerSpec{LayerKind::dropout, 0, Activation::none, 0.0, rate}; }

void NetworkSpec::validate() const {
    if (input_dim == 0) throw ArgumentError("network input_dim must be >= 1");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        const std::string where = "layer " + std::to_string(i) + ": ";
        if (l.kind == LayerKind::dense) {
            if (l.units == 0) throw ArgumentError(where + "dense units must be >= 1");
            if (!(l.l2_lambda >= 0.0)) throw ArgumentError(where + "l2_lambda must be >= 0");
        } else if (!(l.rate >= 0.0 && l.rate < 1.0)) {
            throw ArgumentError(where + "dropout rate must lie in [0, 1)");
        }
    }
    if (layers.empty() || layers.back().kind != LayerKind::dense || layers.back().units != 1 ||
        layers.back().activation != Activation::sigmoid) {
        throw ArgumentError("last layer must be dense with 1 unit and sigmoid activation");
    }
}

namespace {

// Width flowing into layer `layer`.
std::size_t fan_in(const NetworkSpec& spec, std::size_t layer) {
    std::size_t width = spec.input_dim;
    for (std::size_t i = 0; i < layer; ++i)
        if (spec.layers[i].kind == LayerKind::dense) width = spec.layers[i].units;
    return width;
}

}  // namespace

std::size_t layer_param_count(const NetworkSpec& spec, std::size_t layer) {
    const auto& l = spec.layers.at(layer);
    if (l.kind != LayerKind::dense) return 0;
    return fan_in(spec, layer) * l.units + l.units;
}

std::size_t param_count(const NetworkSpec& spec) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) total += layer_param_count(spec, i);
    return total;
}

AdamState AdamState::zeros_like(const Matrix& param) {
    AdamState s;
    s.m = Matrix(param.rows(), param.cols());
    s.v = Matrix(param.rows(), param.cols());
    return s;
}

Network init_network(const NetworkSpec& spec, Rng& rng) {
    spec.validate();
    Network net{spec, {}};
    net.params.resize(spec.layers.size());
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto& l = spec.layers[i];
        if (l.kind != LayerKind::dense) continue;
        const std::size_t in = fan_in(spec, i);
        const double limit = std::sqrt(6.0 / static_cast<double>(in + l.units));
        DenseParams p;
        p.weights = Matrix(in, l.units);
        for (double& w : p.weights.data()) w = rng.next_uniform(-limit, limit);
        p.bias = Matrix(1, l.units);
        p.weights_state = AdamState::zeros_like(p.weights);
        p.bias_state = AdamState::zeros_like(p.bias);
        net.params[i] = std::move(p);
    }
    return net;
}

Network make_network(const NetworkSpec& spec, std::vector<std::optional<std::pair<Matrix, Matrix>>> weights_and_biases) {
    spec.validate();
    if (weights_and_biases.size() != spec.layers.size()) {
        throw ShapeError("make_network: expected parameters for " + std::to_string(spec.layers.size()) + " layers");
    }
    Network net{spec, {}};
    net.params.resize(spec.layers.size());
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto& l = spec.layers[i];
        auto& wb = weights_and_biases[i];
        if (l.kind != LayerKind::dense) {
            if (wb) throw ShapeError("make_network: dropout layer " + std::to_string(i) + " cannot hold parameters");
            continue;
        }
        if (!wb) throw ShapeError("make_network: dense layer " + std::to_string(i) + " is missing parameters");
        const std::size_t in = fan_in(spec, i);
        if (wb->first.rows() != in || wb->first.cols() != l.units || wb->second.rows() != 1 ||
            wb->second.cols() != l.units) {
            throw ShapeError("make_network: layer " + std::to_string(i) + " expects weights (" + std::to_string(in) +
                             "x" + std::to_string(l.units) + "), got " + wb->first.shape_string() + " and bias " +
                             wb->second.shape_string());
        }
        DenseParams p;
        p.weights = std::move(wb->first);
        p.bias = std::move(wb->second);
        p.weights_state = AdamState::zeros_like(p.weights);
        p.bias_state = AdamState::zeros_like(p.bias);
        net.params[i] = std::move(p);
    }
    return net;
}

double sigmoid(double z) noexcept {
    // Kept strictly inside (0, 1) even where exp over/underflows.
    constexpr double lo = std::numeric_limits<double>::min();
    constexpr double hi = 1.0 - 0x1.0p-53;
    double s;
    if (z >= 0.0) {
        s = 1.0 / (1.0 + std::exp(-z));
    } else {
        const double e = std::exp(z);
        s = e / (1.0 + e);
    }
    return std::clamp(s, lo, hi);
}

double relu(double z) noexcept { return z > 0.0 ? z : 0.0; }

namespace {

void apply_activation(Matrix& m, Activation act) {
    switch (act) {
        case Activation::sigmoid:
            for (double& v : m.data()) v = sigmoid(v);
            break;
        case Activation::relu:
            for (double& v : m.data()) v = relu(v);
            break;
        case Activation::none: break;
    }
}

ForwardResult run_forward(const Network& net, const Matrix& x, std::vector<Matrix> masks) {
    if (x.cols() != net.spec.input_dim) {
        throw ShapeError("forward: input " + x.shape_string() + " does not match input_dim " +
                         std::to_string(net.spec.input_dim));
    }
    const std::size_t layer_count = net.spec.layers.size();
    ForwardCache cache;
    cache.input = x;
    cache.outputs.reserve(layer_count);
    cache.masks = std::move(masks);
    cache.layer_count = layer_count;

    const Matrix* current = &x;
    for (std::size_t i = 0; i < layer_count; ++i) {
        const auto& spec = net.spec.layers[i];
        Matrix out;
        if (spec.kind == LayerKind::dense) {
            const auto& p = *net.params[i];
            out = add_row_broadcast(matmul(*current, p.weights), p.bias);
            apply_activation(out, spec.activation);
        } else {
            out = *current;
            const Matrix& mask = cache.masks[i];
            if (!mask.empty()) {
                if (mask.rows() != out.rows() || mask.cols() != out.cols()) {
                    throw ShapeError("forward: dropout mask " + mask.shape_string() + " does not match activations " +
                                     out.shape_string());
                }
                auto o = out.data();
                auto mk = mask.data();
                for (std::size_t k = 0; k < o.size(); ++k) o[k] *= mk[k];
            }
        }
        cache.outputs.push_back(std::move(out));
        current = &cache.outputs.back();
    }
    ForwardResult result;
    result.output = cache.outputs.empty() ? x : cache.outputs.back();
    result.cache = std::move(cache);
    return result;
}

// Width of the activations leaving layer i.
std::size_t output_width(const NetworkSpec& spec, std::size_t layer) {
    return spec.layers[layer].kind == LayerKind::dense ? spec.layers[layer].units : fan_in(spec, layer);
}

}  // namespace

ForwardResult forward(const Network& net, const Matrix& x, Mode mode, Rng& rng) {
    std::vector<Matrix> masks(net.spec.layers.size());
    if (mode == Mode::train) {
        for (std::size_t i = 0; i < net.spec.layers.size(); ++i) {
            const auto& l = net.spec.layers[i];
            if (l.kind != LayerKind::dropout || l.rate == 0.0) continue;
            const double keep_scale = 1.0 / (1.0 - l.rate);
            Matrix mask(x.rows(), output_width(net.spec, i));
            for (double& m : mask.data()) m = rng.next_unit() < l.rate ? 0.0 : keep_scale;
            masks[i] = std::move(mask);
        }
    }
    return run_forward(net, x, std::move(masks));
}

ForwardResult forward(const Network& net, const Matrix& x) {
    return run_forward(net, x, std::vector<Matrix>(net.spec.layers.size()));
}

ForwardResult forward_with_masks(const Network& net, const Matrix& x, const std::vector<Matrix>& masks) {
    if (masks.size() != net.spec.layers.size()) {
        throw ShapeError("forward_with_masks: expected " + std::to_string(net.spec.layers.size()) + " masks");
    }
    return run_forward(net, x, masks);
}

LossResult bce_loss(const Matrix& pred, const Matrix& y) {
    if (pred.cols() != 1 || y.cols() != 1 || pred.rows() != y.rows() || pred.rows() == 0) {
        throw ShapeError("bce_loss: prediction " + pred.shape_string() + " and labels " + y.shape_string() +
                         " must be matching non-empty columns");
    }
    constexpr double lo = kProbabilityClamp;
    constexpr double hi = 1.0 - kProbabilityClamp;
    const auto n = static_cast<double>(pred.rows());
    LossResult r;
    r.grad = Matrix(pred.rows(), 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.rows(); ++i) {
        const double t = y(i, 0);
        if (t != 0.0 && t != 1.0) {
            throw ArgumentError("bce_loss: label at row " + std::to_string(i) + " is not 0 or 1");
        }
        const double p = pred(i, 0);
        const double pc = std::clamp(p, lo, hi);
        sum += t == 1.0 ? std::log(pc) : std::log(1.0 - pc);
        if (p >= lo && p <= hi) r.grad(i, 0) = (t == 1.0 ? -1.0 / pc : 1.0 / (1.0 - pc)) / n;
    }
    r.loss = -sum / n;
    return r;
}

namespace {

PenaltyResult penalty_impl(const Network& net, const double* uniform_lambda) {
    PenaltyResult r;
    r.grads.weights.resize(net.spec.layers.size());
    r.grads.biases.resize(net.spec.layers.size());
    for (std::size_t i = 0; i < net.spec.layers.size(); ++i) {
        if (!net.params[i]) continue;
        const double lambda = uniform_lambda ? *uniform_lambda : net.spec.layers[i].l2_lambda;
        const auto& p = *net.params[i];
        Matrix g(p.weights.rows(), p.weights.cols());
        double sq = 0.0;
        auto w = p.weights.data();
        auto gd = g.data();
        for (std::size_t k = 0; k < w.size(); ++k) {
            sq += w[k] * w[k];
            gd[k] = 2.0 * lambda * w[k];
        }
        r.penalty += lambda * sq;
        r.grads.weights[i] = std::move(g);
        r.grads.biases[i] = Matrix(1, p.bias.cols());
    }
    return r;
}

}  // namespace

PenaltyResult l2_penalty(const Network& net, double lambda) {
    if (!(lambda >= 0.0)) throw ArgumentError("l2_penalty: lambda must be >= 0");
    return penalty_impl(net, &lambda);
}

PenaltyResult l2_penalty(const Network& net) { return penalty_impl(net, nullptr); }

double l2_penalty_value(const Network& net) noexcept {
    double total = 0.0;
    for (std::size_t i = 0; i < net.spec.layers.size(); ++i) {
        if (!net.params[i]) continue;
        double sq = 0.0;
        for (double w : net.params[i]->weights.data()) sq += w * w;
        total += net.spec.layers[i].l2_lambda * sq;
    }
    return total;
}

Gradients backward(const Network& net, const ForwardCache& cache, const Matrix& loss_grad) {
    const std::size_t layer_count = net.spec.layers.size();
    if (cache.layer_count != layer_count || cache.outputs.size() != layer_count || cache.masks.size() != layer_count) {
        throw ContractError("backward: cache was produced by a different network");
    }
    if (layer_count == 0) return {};
    const Matrix& out = cache.outputs.back();
    if (loss_grad.rows() != out.rows() || loss_grad.cols() != out.cols()) {
        throw ContractError("backward: loss gradient " + loss_grad.shape_string() + " does not match cached output " +
                            out.shape_string());
    }
    for (std::size_t i = 0; i < layer_count; ++i) {
        const bool dense = net.spec.layers[i].kind == LayerKind::dense;
        if (dense && (cache.outputs[i].cols() != net.spec.layers[i].units || cache.outputs[i].rows() != out.rows())) {
            throw ContractError("backward: cached activations of layer " + std::to_string(i) + " have stale shape");
        }
    }

    Gradients g;
    g.weights.resize(layer_count);
    g.biases.resize(layer_count);
    Matrix delta = loss_grad;  // dLoss/d(output of layer i)
    for (std::size_t i = layer_count; i-- > 0;) {
        const auto& l = net.spec.layers[i];
        const Matrix& layer_in = i == 0 ? cache.input : cache.outputs[i - 1];
        if (l.kind == LayerKind::dropout) {
            const Matrix& mask = cache.masks[i];
            if (!mask.empty()) {
                auto d = delta.data();
                auto mk = mask.data();
                for (std::size_t k = 0; k < d.size(); ++k) d[k] *= mk[k];
            }
            continue;
        }
        // delta -> dLoss/d(pre-activation)
        const Matrix& a = cache.outputs[i];
        auto d = delta.data();
        auto av = a.data();
        switch (l.activation) {
            case Activation::sigmoid:
                for (std::size_t k = 0; k < d.size(); ++k) d[k] *= av[k] * (1.0 - av[k]);
                break;
            case Activation::relu:
                for (std::size_t k = 0; k < d.size(); ++k)
                    if (!(av[k] > 0.0)) d[k] = 0.0;
                break;
            case Activation::none: break;
        }
        const auto& p = *net.params[i];
        Matrix gw = matmul_transposed_lhs(layer_in, delta);
        if (l.l2_lambda != 0.0) {
            auto gwd = gw.data();
            auto w = p.weights.data();
            for (std::size_t k = 0; k < gwd.size(); ++k) gwd[k] += 2.0 * l.l2_lambda * w[k];
        }
        g.weights[i] = std::move(gw);
        g.biases[i] = column_sums(delta);
        if (i > 0) delta = matmul(delta, transpose(p.weights));
    }
    return g;
}

void adam_update(Matrix& param, AdamState& state, const Matrix& grad, double learning_rate) {
    if (grad.rows() != param.rows() || grad.cols() != param.cols() || state.m.rows() != param.rows() ||
        state.m.cols() != param.cols()) {
        throw ShapeError("adam_step: gradient " + grad.shape_string() + " does not match parameter " +
                         param.shape_string());
    }
    state.t += 1;
    const double t = static_cast<double>(state.t);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    auto p = param.data();
    auto g = grad.data();
    auto m = state.m.data();
    auto v = state.v.data();
    for (std::size_t k = 0; k < p.size(); ++k) {
        m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
        v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
        const double m_hat = m[k] / c1;
        const double v_hat = v[k] / c2;
        p[k] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

void adam_step(Network& net, const Gradients& grads, double learning_rate) {
    if (grads.weights.size() != net.params.size() || grads.biases.size() != net.params.size()) {
        throw ShapeError("adam_step: gradient list does not match the network's layers");
    }
    for (std::size_t i = 0; i < net.params.size(); ++i) {
        if (!net.params[i]) continue;
        auto& p = *net.params[i];
        adam_update(p.weights, p.weights_state, grads.weights[i], learning_rate);
        adam_update(p.bias, p.bias_state, grads.biases[i], learning_rate);
    }
}

}  // namespace deeplda
