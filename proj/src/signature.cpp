#include "scenelab/signature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scenelab/errors.hpp"

namespace scenelab {

std::vector<double> fuzzy_memberships(const Descriptor& p, const Vocabulary& vocab, double m) {
    if (vocab.size() < 1)
        throw InsufficientData("fuzzy_memberships: empty vocabulary");
    if (m <= 1.0)
        throw std::invalid_argument("fuzzy_memberships: degree of fuzziness must be > 1");
    if (int(p.values.size()) != vocab.dim())
        throw DimensionMismatch("descriptor dimension does not match vocabulary");

    const int k = vocab.size();
    const int dim = vocab.dim();
    std::vector<double> dist(k);
    constexpr double kCoincident = 1e-12;
    int coinciding = 0;
    for (int i = 0; i < k; ++i) {
        double d2 = 0.0;
        const float* w = vocab.words[i].data();
        for (int j = 0; j < dim; ++j) {
            const double d = double(p.values[j]) - double(w[j]);
            d2 += d * d;
        }
        dist[i] = std::sqrt(d2);
        if (dist[i] < kCoincident)
            ++coinciding;
    }

    std::vector<double> u(k, 0.0);
    if (coinciding > 0) {
        // Limit of the weighting scheme: all mass on the coinciding centers.
        for (int i = 0; i < k; ++i)
            if (dist[i] < kCoincident)
                u[i] = 1.0 / coinciding;
        return u;
    }

    // U_i = d_i^(-e) / sum_n d_n^(-e), rescaled by the minimum distance so
    // the powers stay in (0, 1].
    const double e = 2.0 / (m - 1.0);
    const double dmin = *std::min_element(dist.begin(), dist.end());
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        u[i] = std::pow(dmin / dist[i], e);
        total += u[i];
    }
    for (int i = 0; i < k; ++i)
        u[i] /= total;
    return u;
}

std::vector<double> bow_weights(const std::vector<Descriptor>& descriptors, const Vocabulary& vocab,
                                const SignatureConfig& cfg) {
    std::vector<double> bow(vocab.size(), 0.0);
    for (const Descriptor& d : descriptors) {
        const std::vector<double> u = fuzzy_memberships(d, vocab, cfg.fuzziness);
        for (int i = 0; i < vocab.size(); ++i)
            bow[i] += u[i];
    }
    if (cfg.normalize_bow && !descriptors.empty()) {
        for (double& v : bow)
            v /= double(descriptors.size());
    }
    return bow;
}

std::array<double, 6> color_stats(const RgbImage& img, const Region& region) {
    if (region.pixels.empty())
        throw EmptyRegion("region " + std::to_string(region.id) + " has no pixels");

    // [0,1] scale; population variance, two-pass.
    const double n = double(region.pixels.size());
    double mean[3] = {0.0, 0.0, 0.0};
    for (const Pixel& px : region.pixels) {
        const Rgb c = img.at(px.x, px.y);
        mean[0] += c.r;
        mean[1] += c.g;
        mean[2] += c.b;
    }
    for (double& v : mean)
        v /= 255.0 * n;
    double var[3] = {0.0, 0.0, 0.0};
    for (const Pixel& px : region.pixels) {
        const Rgb c = img.at(px.x, px.y);
        const double dr = c.r / 255.0 - mean[0];
        const double dg = c.g / 255.0 - mean[1];
        const double db = c.b / 255.0 - mean[2];
        var[0] += dr * dr;
        var[1] += dg * dg;
        var[2] += db * db;
    }
    std::array<double, 6> out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = mean[i];
        out[i + 3] = var[i] / n;
    }
    return out;
}

Signature region_signature(const RgbImage& img, const Region& region,
                           const std::vector<Descriptor>& descriptors, const Vocabulary& vocab,
                           const SignatureConfig& cfg) {
    if (region.pixels.empty())
        throw EmptyRegion("region " + std::to_string(region.id) + " has no pixels");

    Signature sig;
    sig.bow = bow_weights(descriptors, vocab, cfg);
    sig.color = color_stats(img, region);
    return sig;
}

std::vector<double> feature_vector(const Signature& s, bool include_color) {
    std::vector<double> x = s.bow;
    if (include_color)
        x.insert(x.end(), s.color.begin(), s.color.end());
    return x;
}

}  // namespace scenelab
