#include "deeplda/lda.hpp"

#include <algorithm>
#include <cmath>

#include "deeplda/error.hpp"

namespace deeplda {

namespace {

std::array<std::vector<double>, 2> class_means(const Dataset& ds) {
    const std::size_t d = ds.features();
    std::array<std::vector<double>, 2> mu{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    std::array<std::size_t, 2> n{0, 0};
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const int c = ds.y()[i];
        ++n[c];
        auto r = ds.x().row(i);
        for (std::size_t j = 0; j < d; ++j) mu[c][j] += r[j];
    }
    for (int c : {0, 1}) {
        if (n[c] == 0) throw DataError("fisher lda: class " + std::to_string(c) + " has no samples");
        for (double& v : mu[c]) v /= static_cast<double>(n[c]);
    }
    return mu;
}

Matrix scatter_about(const Dataset& ds, const std::array<std::vector<double>, 2>& mu) {
    const std::size_t d = ds.features();
    Matrix s(d, d);
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const auto& m = mu[ds.y()[i]];
        auto r = ds.x().row(i);
        for (std::size_t j = 0; j < d; ++j) diff[j] = r[j] - m[j];
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) s(a, b) += diff[a] * diff[b];
    }
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

Matrix within_class_scatter(const Dataset& ds) { return scatter_about(ds, class_means(ds)); }

LdaModel fit_fisher(const Dataset& train, double ridge) {
    if (!(ridge >= 0.0)) throw ArgumentError("fisher lda: ridge must be >= 0");
    const std::size_t d = train.features();
    LdaModel model;
    model.class_means = class_means(train);
    const auto n1 = static_cast<double>(train.count(1));
    const auto n = static_cast<double>(train.rows());
    model.priors = {1.0 - n1 / n, n1 / n};

    Matrix sw = scatter_about(train, model.class_means);
    for (std::size_t j = 0; j < d; ++j) sw(j, j) += ridge;
    std::vector<double> delta(d);
    for (std::size_t j = 0; j < d; ++j) delta[j] = model.class_means[1][j] - model.class_means[0][j];
    model.w = solve(sw, delta);

    // S_w = (n - 2) * pooled covariance, so w is the covariance-based
    // discriminant divided by (n - 2); the log-prior shift scales alike.
    model.scatter_dof = std::max(1.0, n - 2.0);
    std::vector<double> midpoint(d);
    for (std::size_t j = 0; j < d; ++j) midpoint[j] = 0.5 * (model.class_means[0][j] + model.class_means[1][j]);
    model.b = dot(model.w, midpoint) - std::log(model.priors[1] / model.priors[0]) / model.scatter_dof;
    if (!std::isfinite(model.b)) throw NumericalError("fisher lda: non-finite threshold");
    return model;
}

LdaPrediction predict_lda(const LdaModel& model, const Matrix& x) {
    if (x.cols() != model.w.size()) {
        throw ShapeError("predict_lda: input " + x.shape_string() + " does not match " + std::to_string(model.w.size()) +
                         " features");
    }
    LdaPrediction p;
    p.scores.resize(x.rows());
    p.labels.resize(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        p.scores[i] = dot(model.w, x.row(i)) - model.b;
        p.labels[i] = p.scores[i] >= 0.0 ? 1 : 0;
    }
    return p;
}

double fisher_ratio(const Dataset& ds, const std::vector<double>& direction) {
    if (direction.size() != ds.features()) throw ShapeError("fisher_ratio: direction length mismatch");
    const auto mu = class_means(ds);
    const Matrix sw = scatter_about(ds, mu);
    std::vector<double> delta(ds.features());
    for (std::size_t j = 0; j < delta.size(); ++j) delta[j] = mu[1][j] - mu[0][j];
    const double between = dot(direction, delta) * dot(direction, delta);
    double within = 0.0;
    for (std::size_t a = 0; a < delta.size(); ++a)
        for (std::size_t b = 0; b < delta.size(); ++b) within += direction[a] * sw(a, b) * direction[b];
    return between / within;
}

}  // namespace deeplda
