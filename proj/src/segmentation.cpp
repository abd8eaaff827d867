#include "scenelab/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scenelab {

namespace {

// 1-D Gaussian kernel, radius ceil(3*sigma), normalized to sum 1.
std::vector<double> gaussian_kernel(double sigma) {
    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
        kernel[i + radius] = v;
        sum += v;
    }
    for (double& v : kernel)
        v /= sum;
    return kernel;
}

inline std::uint8_t round_to_byte(double v) {
    const long r = std::lround(v);
    return std::uint8_t(std::clamp(r, 0L, 255L));
}

}  // namespace

RgbImage gaussian_smooth(const RgbImage& img, double sigma) {
    if (sigma < 0.0)
        throw std::invalid_argument("gaussian_smooth: sigma must be >= 0");
    if (sigma == 0.0)
        return img;

    const int w = img.width();
    const int h = img.height();
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = int(kernel.size() / 2);

    RgbImage out(w, h);
    std::vector<double> tmp(std::size_t(w) * h);
    for (int c = 0; c < 3; ++c) {
        // horizontal pass, replicated borders
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    const int xi = std::clamp(x + i, 0, w - 1);
                    acc += kernel[i + radius] * img.data()[3 * (std::size_t(y) * w + xi) + c];
                }
                tmp[std::size_t(y) * w + x] = acc;
            }
        }
        // vertical pass
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    const int yi = std::clamp(y + i, 0, h - 1);
                    acc += kernel[i + radius] * tmp[std::size_t(yi) * w + x];
                }
                out.data()[3 * (std::size_t(y) * w + x) + c] = round_to_byte(acc);
            }
        }
    }
    return out;
}

namespace {

inline float rgb_distance(const RgbImage& img, std::int32_t a, std::int32_t b) {
    const std::uint8_t* pa = &img.data()[3 * std::size_t(a)];
    const std::uint8_t* pb = &img.data()[3 * std::size_t(b)];
    const float dr = float(pa[0]) - float(pb[0]);
    const float dg = float(pa[1]) - float(pb[1]);
    const float db = float(pa[2]) - float(pb[2]);
    return std::sqrt(dr * dr + dg * dg + db * db);
}

}  // namespace

std::vector<WeightedEdge> build_grid_graph(const RgbImage& img) {
    const int w = img.width();
    const int h = img.height();
    std::vector<WeightedEdge> edges;
    edges.reserve(4 * std::size_t(w) * h);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t idx = y * w + x;
            if (x < w - 1)
                edges.push_back({idx, idx + 1, rgb_distance(img, idx, idx + 1)});
            if (y < h - 1)
                edges.push_back({idx, idx + w, rgb_distance(img, idx, idx + w)});
            if (x < w - 1 && y < h - 1)
                edges.push_back({idx, idx + w + 1, rgb_distance(img, idx, idx + w + 1)});
            if (x > 0 && y < h - 1)
                edges.push_back({idx, idx + w - 1, rgb_distance(img, idx, idx + w - 1)});
        }
    }
    return edges;
}

ComponentForest::ComponentForest(std::int32_t n)
    : parent_(n), rank_(n, 0), size_(n, 1), int_diff_(n, 0.0f), count_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
}

std::int32_t ComponentForest::find(std::int32_t x) {
    std::int32_t root = x;
    while (parent_[root] != root)
        root = parent_[root];
    while (parent_[x] != root) {
        std::int32_t next = parent_[x];
        parent_[x] = root;
        x = next;
    }
    return root;
}

std::int32_t ComponentForest::merge(std::int32_t a, std::int32_t b, float edge_weight) {
    if (rank_[a] < rank_[b])
        std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b])
        ++rank_[a];
    size_[a] += size_[b];
    int_diff_[a] = edge_weight;
    --count_;
    return a;
}

SegmentMap segment_image(const RgbImage& img, const SegParams& params) {
    if (params.sigma < 0.0 || params.k_threshold <= 0.0 || params.min_size < 1)
        throw std::invalid_argument("segment_image: invalid parameters");

    const RgbImage smoothed = gaussian_smooth(img, params.sigma);
    std::vector<WeightedEdge> edges = build_grid_graph(smoothed);
    std::stable_sort(edges.begin(), edges.end(),
                     [](const WeightedEdge& a, const WeightedEdge& b) { return a.w < b.w; });

    const std::int32_t n = std::int32_t(img.pixel_count());
    ComponentForest forest(n);
    const double k = params.k_threshold;

    for (const WeightedEdge& e : edges) {
        const std::int32_t a = forest.find(e.a);
        const std::int32_t b = forest.find(e.b);
        if (a == b)
            continue;
        const double ta = double(forest.internal_diff(a)) + k / forest.size(a);
        const double tb = double(forest.internal_diff(b)) + k / forest.size(b);
        if (double(e.w) <= ta && double(e.w) <= tb)
            forest.merge(a, b, e.w);
    }

    // Absorb small components. Edges are visited in ascending weight order, so
    // each undersized component merges through its lowest-weight boundary edge.
    for (const WeightedEdge& e : edges) {
        const std::int32_t a = forest.find(e.a);
        const std::int32_t b = forest.find(e.b);
        if (a != b && (forest.size(a) < params.min_size || forest.size(b) < params.min_size))
            forest.merge(a, b, e.w);
    }

    SegmentMap out;
    out.width = img.width();
    out.height = img.height();
    out.ids.assign(std::size_t(n), -1);
    std::vector<std::int32_t> root_to_id(std::size_t(n), -1);
    std::int32_t next_id = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        const std::int32_t root = forest.find(i);
        if (root_to_id[root] < 0)
            root_to_id[root] = next_id++;
        out.ids[i] = root_to_id[root];
    }
    return out;
}

}  // namespace scenelab
