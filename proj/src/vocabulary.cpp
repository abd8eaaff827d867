#include "scenelab/vocabulary.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>

#include "scenelab/errors.hpp"

namespace scenelab {

namespace {

double squared_distance(const float* a, const float* b, int dim) {
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = double(a[i]) - double(b[i]);
        acc += d * d;
    }
    return acc;
}

// Uniform double in [0, 1), independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t limit, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i)
        idx[i] = i;
    // Partial Fisher-Yates: the first `limit` entries are a uniform sample.
    for (std::size_t i = 0; i < limit; ++i) {
        const std::size_t j = i + std::size_t(rng() % (n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(limit);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

Vocabulary train_vocabulary(const std::vector<Descriptor>& descriptors, int k, std::uint64_t seed,
                            int max_iters) {
    if (k < 1)
        throw InsufficientData("vocabulary size must be at least 1");
    if (descriptors.size() < std::size_t(k))
        throw InsufficientData("need at least k=" + std::to_string(k) + " descriptors, got " +
                               std::to_string(descriptors.size()));
    const int dim = int(descriptors.front().values.size());
    for (const Descriptor& d : descriptors) {
        if (int(d.values.size()) != dim)
            throw DimensionMismatch("descriptors have inconsistent dimensions");
    }

    std::mt19937_64 rng(seed);

    std::vector<const float*> points;
    if (descriptors.size() > kDescriptorSubsampleLimit) {
        for (std::size_t i : subsample_indices(descriptors.size(), kDescriptorSubsampleLimit, rng))
            points.push_back(descriptors[i].values.data());
    } else {
        points.reserve(descriptors.size());
        for (const Descriptor& d : descriptors)
            points.push_back(d.values.data());
    }
    const std::size_t n = points.size();

    // k-means++ seeding.
    std::vector<std::vector<double>> centers(k, std::vector<double>(dim));
    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    {
        const std::size_t first = std::size_t(uniform01(rng) * double(n));
        const float* c0 = points[std::min(first, n - 1)];
        for (int j = 0; j < dim; ++j)
            centers[0][j] = c0[j];

        std::vector<float> prev(c0, c0 + dim);
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                min_d2[i] = std::min(min_d2[i], squared_distance(points[i], prev.data(), dim));
                total += min_d2[i];
            }
            if (total <= 0.0)
                throw InsufficientData("fewer than k distinct descriptors");
            const double r = uniform01(rng) * total;
            double cum = 0.0;
            std::size_t chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += min_d2[i];
                if (cum > r) {
                    chosen = i;
                    break;
                }
            }
            for (int j = 0; j < dim; ++j)
                centers[c][j] = points[chosen][j];
            prev.assign(points[chosen], points[chosen] + dim);
        }
    }

    std::vector<std::vector<float>> centers_f(k, std::vector<float>(dim));
    const auto sync_centers_f = [&] {
        for (int c = 0; c < k; ++c)
            for (int j = 0; j < dim; ++j)
                centers_f[c][j] = float(centers[c][j]);
    };
    sync_centers_f();

    std::vector<int> assignment(n, 0);
    std::vector<double> point_d2(n, 0.0);
    const auto assign_all = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d2 = squared_distance(points[i], centers_f[0].data(), dim);
            for (int c = 1; c < k; ++c) {
                const double d2 = squared_distance(points[i], centers_f[c].data(), dim);
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = c;
                }
            }
            assignment[i] = best;
            point_d2[i] = best_d2;
        }
    };

#ifndef NDEBUG
    double prev_wcss = std::numeric_limits<double>::infinity();
#endif
    for (int iter = 0; iter < max_iters; ++iter) {
        assign_all();

        // Reseed empty clusters with the point farthest from its center.
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i)
            ++counts[assignment[i]];
        bool reseeded = false;
        std::vector<bool> taken(n, false);
        for (int c = 0; c < k; ++c) {
            if (counts[c] != 0)
                continue;
            std::size_t far = 0;
            double far_d2 = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!taken[i] && point_d2[i] > far_d2) {
                    far_d2 = point_d2[i];
                    far = i;
                }
            }
            taken[far] = true;
            for (int j = 0; j < dim; ++j)
                centers[c][j] = points[far][j];
            reseeded = true;
        }
        if (reseeded) {
            sync_centers_f();
            assign_all();
        }

#ifndef NDEBUG
        {
            double wcss = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                wcss += point_d2[i];
            assert(wcss <= prev_wcss * (1.0 + 1e-12) + 1e-9);
            prev_wcss = wcss;
        }
#endif

        // Update step: component-wise means in double.
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const int c = assignment[i];
            const float* p = points[i];
            double* s = sums[c].data();
            for (int j = 0; j < dim; ++j)
                s[j] += p[j];
            ++sizes[c];
        }

        double max_move2 = 0.0;
        for (int c = 0; c < k; ++c) {
            if (sizes[c] == 0)
                continue;  // duplicate-heavy data can leave a reseeded cluster empty
            double move2 = 0.0;
            for (int j = 0; j < dim; ++j) {
                const double mean = sums[c][j] / double(sizes[c]);
                const double d = mean - centers[c][j];
                move2 += d * d;
                centers[c][j] = mean;
            }
            max_move2 = std::max(max_move2, move2);
        }
        sync_centers_f();
        if (std::sqrt(max_move2) < 1e-4)
            break;
    }

    Vocabulary vocab;
    vocab.words = std::move(centers_f);
    return vocab;
}

}  // namespace scenelab
