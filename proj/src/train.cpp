#include "deeplda/train.hpp"

#include <algorithm>
#include <cmath>

#include "deeplda/error.hpp"

namespace deeplda {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ArgumentError("learning_rate must be > 0");
    if (batch_size == 0) throw ArgumentError("batch_size must be >= 1");
    if (!(l2_lambda >= 0.0)) throw ArgumentError("l2_lambda must be >= 0");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ArgumentError("threshold must lie in (0, 1)");
}

Labels threshold_labels(const Matrix& probs, double threshold) {
    Labels labels(probs.rows());
    for (std::size_t i = 0; i < probs.rows(); ++i) labels[i] = probs(i, 0) >= threshold ? 1 : 0;
    return labels;
}

Prediction predict(const Network& net, const Matrix& x, double threshold) {
    Prediction p;
    p.probs = forward(net, x).output;
    p.labels = threshold_labels(p.probs, threshold);
    return p;
}

namespace {

std::size_t count_correct(const Matrix& probs, const Labels& y, std::span<const std::size_t> rows, double threshold) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const int label = probs(i, 0) >= threshold ? 1 : 0;
        if (label == y[rows[i]]) ++correct;
    }
    return correct;
}

}  // namespace

TrainingHistory fit(Network& net, const Dataset& train, const Dataset& val, const TrainConfig& config, Rng& rng) {
    config.validate();
    if (train.rows() == 0) throw DataError("fit: empty training set");
    if (train.features() != net.spec.input_dim || val.features() != net.spec.input_dim) {
        throw ShapeError("fit: datasets have " + std::to_string(train.features()) + "/" +
                         std::to_string(val.features()) + " features, network expects " +
                         std::to_string(net.spec.input_dim));
    }
    TrainingHistory history;
    const Matrix val_y = val.y_matrix();
    const std::size_t n = train.rows();

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const std::vector<std::size_t> order = rng.permutation(n);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t stop = std::min(n, start + config.batch_size);
            const std::span<const std::size_t> rows(order.data() + start, stop - start);
            const Matrix xb = train.x().select_rows(rows);
            Matrix yb(rows.size(), 1);
            for (std::size_t i = 0; i < rows.size(); ++i) yb(i, 0) = train.y()[rows[i]];

            auto fwd = forward(net, xb, Mode::train, rng);
            const auto loss = bce_loss(fwd.output, yb);
            const double penalty = l2_penalty_value(net);
            const double objective = loss.loss + penalty;
            if (!std::isfinite(objective)) throw NumericalError("fit: objective became non-finite");

            loss_sum += objective * static_cast<double>(rows.size());
            correct += count_correct(fwd.output, train.y(), rows, config.threshold);

            adam_step(net, backward(net, fwd.cache, loss.grad), config.learning_rate);
        }

        const Matrix val_probs = forward(net, val.x()).output;
        const double val_loss = bce_loss(val_probs, val_y).loss + l2_penalty_value(net);
        std::size_t val_correct = 0;
        for (std::size_t i = 0; i < val.rows(); ++i)
            if ((val_probs(i, 0) >= config.threshold ? 1 : 0) == val.y()[i]) ++val_correct;

        history.append(static_cast<double>(correct) / static_cast<double>(n), loss_sum / static_cast<double>(n),
                       static_cast<double>(val_correct) / static_cast<double>(val.rows()), val_loss);
    }
    return history;
}

}  // namespace deeplda
