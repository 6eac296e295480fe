#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "deeplda/data.hpp"
#include "deeplda/rng.hpp"

namespace deeplda {

/// Two spherical Gaussians N(mu_c, sigma^2 I), equal priors by default.
struct GaussianPair {
    std::vector<double> mean0;
    std::vector<double> mean1;
    double sigma = 1.0;

    /// Means at -/+ separation/2 along a fixed unit direction (1,...,1)/sqrt(d).
    static GaussianPair separated(std::size_t dim, double separation, double sigma = 1.0);

    /// Closed-form accuracy of the optimal rule for equal priors:
    /// Phi(|mu1 - mu0| / (2 sigma)).
    double bayes_accuracy() const;
};

/// Alternating labels (0,1,0,1,...) so the classes are balanced.
Dataset sample_gaussian_pair(const GaussianPair& g, std::size_t rows, Rng& rng);

/// CSV text laid out like the public PCOS table (serial number, file number,
/// "PCOS (Y/N)", 41 clinical columns, a trailing blank column) with
/// synthetic values. A few cells are left blank to exercise imputation.
std::string synthetic_pcos_csv(std::size_t rows, Rng& rng);

/// Names of the 41 clinical feature columns of the PCOS layout.
const std::vector<std::string>& pcos_feature_columns();

}  // namespace deeplda
