#pragma once

#include <utility>
#include <vector>

#include "scenelab/image.hpp"

namespace scenelab {

struct Keypoint {
    double x = 0.0;  // sub-pixel image coords
    double y = 0.0;
    double scale = 0.0;        // std-dev of the detection scale
    double orientation = 0.0;  // radians in [0, 2pi)
};

/// Local gradient-orientation descriptor; 128 values for SIFT.
struct Descriptor {
    std::vector<float> values;
};

using KeypointList = std::vector<std::pair<Keypoint, Descriptor>>;

/// Pluggable detector: the rest of the pipeline only sees (Keypoint,
/// Descriptor) pairs and the descriptor dimension.
class KeypointDetector {
public:
    virtual ~KeypointDetector() = default;
    virtual int descriptor_size() const = 0;
    virtual KeypointList detect_and_describe(const RgbImage& img) const = 0;
};

struct SiftParams {
    int octaves = 4;
    int scales_per_octave = 3;
    double initial_sigma = 1.6;
    double contrast_threshold = 0.03;  // on [0,1] intensities
    double edge_ratio = 10.0;
};

/// Difference-of-Gaussians detector with 4x4x8 gradient-orientation
/// descriptors. Output is ordered by (y, x, scale, orientation) and fully
/// deterministic. Images smaller than 16x16 yield no keypoints. Keypoints
/// with several dominant orientations emit one entry per orientation.
class SiftDetector : public KeypointDetector {
public:
    SiftDetector() = default;
    explicit SiftDetector(const SiftParams& params) : params_(params) {}

    int descriptor_size() const override { return 128; }
    KeypointList detect_and_describe(const RgbImage& img) const override;

    const SiftParams& params() const { return params_; }

private:
    SiftParams params_;
};

/// SIFT with default parameters.
KeypointList detect_and_describe(const RgbImage& img);

/// Buckets descriptors by the segment containing (round(x), round(y)).
/// Result is indexed by segment id; throws OutOfBounds for keypoints
/// outside the map.
std::vector<std::vector<Descriptor>> assign_keypoints(const KeypointList& kps, const SegmentMap& map);

}  // namespace scenelab
