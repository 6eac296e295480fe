#pragma once

#include <array>
#include <vector>

#include "deeplda/data.hpp"
#include "deeplda/matrix.hpp"

namespace deeplda {

/// Two-class Fisher discriminant. score(x) = w.x - b; label 1 iff score >= 0.
struct LdaModel {
    std::vector<double> w;
    double b = 0.0;
    std::array<std::vector<double>, 2> class_means;
    std::array<double, 2> priors{};
    /// Degrees of freedom of the pooled scatter (n - 2, at least 1); scales
    /// the log-prior term to the scatter-based w.
    double scatter_dof = 1.0;
};

inline constexpr double kDefaultRidge = 1e-6;

/// w solves (S_w + ridge*I) w = mu1 - mu0. The threshold sits at the class
/// midpoint shifted by the log prior ratio, scaled for the pooled covariance.
LdaModel fit_fisher(const Dataset& train, double ridge = kDefaultRidge);

struct LdaPrediction {
    std::vector<double> scores;
    Labels labels;
};

LdaPrediction predict_lda(const LdaModel& model, const Matrix& x);

/// Within-class scatter matrix sum_c sum_{i in c} (x_i - mu_c)(x_i - mu_c)^T.
Matrix within_class_scatter(const Dataset& ds);

/// Between over within variance of the data projected onto `direction`.
double fisher_ratio(const Dataset& ds, const std::vector<double>& direction);

}  // namespace deeplda
