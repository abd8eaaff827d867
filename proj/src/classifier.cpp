#include "scenelab/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "scenelab/errors.hpp"

namespace scenelab {

GaussianNbModel fit(const std::vector<std::vector<double>>& features, const std::vector<ClassId>& labels,
                    double variance_floor) {
    if (features.size() != labels.size())
        throw DimensionMismatch("feature and label counts differ");
    if (features.empty())
        throw ClassUnderrepresented("no training samples");

    const int dim = int(features.front().size());
    std::array<std::size_t, kNumClasses> counts{};
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (int(features[i].size()) != dim)
            throw DimensionMismatch("training features have inconsistent dimensions");
        if (labels[i] == ClassId::Void)
            throw UnknownLabel("Void is not a trainable class");
        ++counts[static_cast<int>(labels[i])];
    }
    for (int c = 0; c < kNumClasses; ++c) {
        if (counts[c] < 2)
            throw ClassUnderrepresented(std::string("class '") + class_name(ClassId(c)) + "' has " +
                                        std::to_string(counts[c]) + " training samples, need at least 2");
    }

    GaussianNbModel model;
    model.variance_floor = variance_floor;
    model.feature_dim = dim;
    for (int c = 0; c < kNumClasses; ++c) {
        model.priors[c] = double(counts[c]) / double(features.size());
        model.feat_mean[c].assign(dim, 0.0);
        model.feat_var[c].assign(dim, 0.0);
    }

    for (std::size_t i = 0; i < features.size(); ++i) {
        std::vector<double>& mean = model.feat_mean[static_cast<int>(labels[i])];
        for (int j = 0; j < dim; ++j)
            mean[j] += features[i][j];
    }
    for (int c = 0; c < kNumClasses; ++c)
        for (int j = 0; j < dim; ++j)
            model.feat_mean[c][j] /= double(counts[c]);

    for (std::size_t i = 0; i < features.size(); ++i) {
        const int c = static_cast<int>(labels[i]);
        for (int j = 0; j < dim; ++j) {
            const double d = features[i][j] - model.feat_mean[c][j];
            model.feat_var[c][j] += d * d;
        }
    }
    for (int c = 0; c < kNumClasses; ++c)
        for (int j = 0; j < dim; ++j)
            model.feat_var[c][j] = std::max(model.feat_var[c][j] / double(counts[c]), variance_floor);

    return model;
}

GaussianNbModel fit(const std::vector<Signature>& signatures, const std::vector<ClassId>& labels,
                    bool include_color, double variance_floor) {
    std::vector<std::vector<double>> features;
    features.reserve(signatures.size());
    for (const Signature& s : signatures)
        features.push_back(feature_vector(s, include_color));
    return fit(features, labels, variance_floor);
}

std::array<double, kNumClasses> log_posterior_scores(const GaussianNbModel& model,
                                                     std::span<const double> x) {
    if (int(x.size()) != model.feature_dim)
        throw DimensionMismatch("input has " + std::to_string(x.size()) + " features, model expects " +
                                std::to_string(model.feature_dim));

    constexpr double kHalfLogTwoPi = 0.5 * 1.8378770664093454836;  // ln(2 pi) / 2
    std::array<double, kNumClasses> scores{};
    for (int c = 0; c < kNumClasses; ++c) {
        double s = std::log(model.priors[c]);
        const double* mu = model.feat_mean[c].data();
        const double* var = model.feat_var[c].data();
        for (int j = 0; j < model.feature_dim; ++j) {
            const double d = x[j] - mu[j];
            s -= kHalfLogTwoPi + 0.5 * std::log(var[j]) + d * d / (2.0 * var[j]);
        }
        scores[c] = s;
    }
    return scores;
}

ClassId predict(const GaussianNbModel& model, std::span<const double> x) {
    const std::array<double, kNumClasses> scores = log_posterior_scores(model, x);
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (scores[c] > scores[best])
            best = c;
    }
    return ClassId(best);
}

}  // namespace scenelab
