#pragma once

#include <cstdint>
#include <vector>

#include "scenelab/image.hpp"

namespace scenelab {

/// Parameters of the graph-based color segmenter. Defaults target slight
/// over-segmentation of 320x240 inputs.
struct SegParams {
    double sigma = 0.8;        // Gaussian pre-smoothing std-dev, pixels
    double k_threshold = 300;  // scale-of-observation constant, color-distance units
    int min_size = 100;        // minimum component size, pixels
};

struct WeightedEdge {
    std::int32_t a = 0;
    std::int32_t b = 0;
    float w = 0.0f;  // Euclidean RGB distance
};

/// Union-find forest that tracks, per component, its size and the maximum
/// MST edge weight accepted so far (the internal difference Int(C)).
class ComponentForest {
public:
    explicit ComponentForest(std::int32_t n);

    std::int32_t find(std::int32_t x);
    /// Joins two distinct roots and records the merging edge weight as the
    /// new component's internal difference. Returns the surviving root.
    std::int32_t merge(std::int32_t root_a, std::int32_t root_b, float edge_weight);

    std::int32_t size(std::int32_t root) const { return size_[root]; }
    float internal_diff(std::int32_t root) const { return int_diff_[root]; }
    std::int32_t component_count() const { return count_; }

private:
    std::vector<std::int32_t> parent_;
    std::vector<std::int8_t> rank_;
    std::vector<std::int32_t> size_;
    std::vector<float> int_diff_;
    std::int32_t count_;
};

/// Per-channel separable Gaussian smoothing, kernel radius ceil(3*sigma),
/// replicated edges. sigma = 0 returns the input unchanged.
RgbImage gaussian_smooth(const RgbImage& img, double sigma);

/// 8-connected grid graph. Edges are emitted per pixel in raster order as
/// (right, down, down-right, down-left), weighted by Euclidean RGB distance.
std::vector<WeightedEdge> build_grid_graph(const RgbImage& img);

/// Felzenszwalb-Huttenlocher segmentation: smooth, sort edges ascending
/// (stable, so equal weights keep construction order), merge when the edge
/// weight is within both components' internal difference plus k/|C|, then
/// absorb components below min_size through their lowest-weight boundary
/// edge. Ids are dense, assigned in raster-scan first-touch order.
SegmentMap segment_image(const RgbImage& img, const SegParams& params);

}  // namespace scenelab
