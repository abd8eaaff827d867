#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenelab/errors.hpp"

namespace scenelab {

/// The five semantic classes. Void marks unlabelled/excluded pixels and
/// never appears as a prediction.
enum class ClassId : std::uint8_t {
    Sky = 0,
    Tree = 1,
    Road = 2,
    Grass = 3,
    Building = 4,
    Void = 5,
};

inline constexpr int kNumClasses = 5;

const char* class_name(ClassId c);
ClassId class_from_name(const std::string& name);  // throws ParseError

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

/// 8-bit RGB raster, row-major, interleaved.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = Rgb{});

    int width() const { return width_; }
    int height() const { return height_; }
    std::int64_t pixel_count() const { return std::int64_t(width_) * height_; }
    bool empty() const { return data_.empty(); }

    Rgb at(int x, int y) const {
        const std::uint8_t* p = &data_[3 * (std::size_t(y) * width_ + x)];
        return Rgb{p[0], p[1], p[2]};
    }
    void set(int x, int y, Rgb v) {
        std::uint8_t* p = &data_[3 * (std::size_t(y) * width_ + x)];
        p[0] = v.r;
        p[1] = v.g;
        p[2] = v.b;
    }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    bool operator==(const RgbImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;  // 3 * width * height bytes
};

/// Per-pixel segment identifiers. Ids are dense: every integer in
/// [0, max_id] occurs at least once.
struct SegmentMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> ids;

    std::int32_t at(int x, int y) const { return ids[std::size_t(y) * width + x]; }

    /// max id + 1; 0 for an empty map.
    std::int32_t segment_count() const;

    bool operator==(const SegmentMap&) const = default;
};

/// Per-pixel class labels, same layout as SegmentMap.
struct ClassGrid {
    int width = 0;
    int height = 0;
    std::vector<ClassId> labels;

    ClassId at(int x, int y) const { return labels[std::size_t(y) * width + x]; }

    bool operator==(const ClassGrid&) const = default;
};

struct Box {
    int min_x = 0;
    int min_y = 0;
    int max_x = 0;
    int max_y = 0;

    bool operator==(const Box&) const = default;
};

struct Pixel {
    int x = 0;
    int y = 0;

    bool operator==(const Pixel&) const = default;
};

/// One segment's pixels. Pixels are stored in raster order; ids alone define
/// membership, spatial connectivity is not required.
struct Region {
    std::int32_t id = 0;
    std::vector<Pixel> pixels;
    Box bbox;
};

/// Materializes one Region per segment id, in ascending id order.
std::vector<Region> extract_regions(const SegmentMap& map);

/// 4-connected components of equal-class pixels. Segment ids are assigned in
/// raster-scan first-touch order. Void pixels form components like any other
/// label; callers may discard them.
SegmentMap connected_components(const ClassGrid& labels);

}  // namespace scenelab
