#pragma once

#include <array>
#include <span>
#include <vector>

#include "scenelab/image.hpp"
#include "scenelab/signature.hpp"

namespace scenelab {

/// Gaussian Naive Bayes: per-class priors plus one (mean, variance) pair
/// per feature and class. Variances are clamped below at variance_floor.
struct GaussianNbModel {
    std::array<double, kNumClasses> priors{};
    std::array<std::vector<double>, kNumClasses> feat_mean;
    std::array<std::vector<double>, kNumClasses> feat_var;
    double variance_floor = 1e-6;
    int feature_dim = 0;
};

/// Learns priors from class frequencies and per-class per-feature sample
/// mean / population variance. Every class needs at least 2 samples.
GaussianNbModel fit(const std::vector<std::vector<double>>& features, const std::vector<ClassId>& labels,
                    double variance_floor = 1e-6);

GaussianNbModel fit(const std::vector<Signature>& signatures, const std::vector<ClassId>& labels,
                    bool include_color = true, double variance_floor = 1e-6);

/// Unnormalized log posterior of each class:
/// ln P(C_i) + sum_j [ -ln(sqrt(2 pi) sigma_ij) - (x_j - mu_ij)^2 / (2 sigma_ij^2) ].
std::array<double, kNumClasses> log_posterior_scores(const GaussianNbModel& model,
                                                     std::span<const double> x);

/// Argmax of the log posterior scores; ties go to the lowest class ordinal.
ClassId predict(const GaussianNbModel& model, std::span<const double> x);

}  // namespace scenelab
