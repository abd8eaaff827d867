#include "scenelab/image.hpp"

#include <algorithm>
#include <array>

#include "scenelab/disjoint_set.hpp"

namespace scenelab {

namespace {

constexpr std::array<const char*, 6> kClassNames = {"sky", "tree", "road", "grass", "building", "void"};

}  // namespace

const char* class_name(ClassId c) {
    return kClassNames[static_cast<std::size_t>(c)];
}

ClassId class_from_name(const std::string& name) {
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (name == kClassNames[i])
            return static_cast<ClassId>(i);
    }
    throw ParseError("unknown class name: '" + name + "'");
}

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw DimensionMismatch("image dimensions must be at least 1x1");
    data_.resize(3 * std::size_t(width) * height);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

std::int32_t SegmentMap::segment_count() const {
    if (ids.empty())
        return 0;
    return *std::max_element(ids.begin(), ids.end()) + 1;
}

std::vector<Region> extract_regions(const SegmentMap& map) {
    const std::int32_t n = map.segment_count();
    std::vector<Region> regions(n);
    for (std::int32_t i = 0; i < n; ++i)
        regions[i].id = i;

    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            Region& r = regions[map.at(x, y)];
            if (r.pixels.empty()) {
                r.bbox = Box{x, y, x, y};
            } else {
                r.bbox.min_x = std::min(r.bbox.min_x, x);
                r.bbox.min_y = std::min(r.bbox.min_y, y);
                r.bbox.max_x = std::max(r.bbox.max_x, x);
                r.bbox.max_y = std::max(r.bbox.max_y, y);
            }
            r.pixels.push_back(Pixel{x, y});
        }
    }
    return regions;
}

SegmentMap connected_components(const ClassGrid& grid) {
    if (grid.width < 1 || grid.height < 1)
        throw DimensionMismatch("label grid must be at least 1x1");

    const int w = grid.width;
    const int h = grid.height;
    DisjointSet ds(w * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t idx = y * w + x;
            if (x > 0 && grid.labels[idx] == grid.labels[idx - 1])
                ds.unite(idx, idx - 1);
            if (y > 0 && grid.labels[idx] == grid.labels[idx - w])
                ds.unite(idx, idx - w);
        }
    }

    SegmentMap out;
    out.width = w;
    out.height = h;
    out.ids.assign(std::size_t(w) * h, -1);
    std::vector<std::int32_t> root_to_id(std::size_t(w) * h, -1);
    std::int32_t next_id = 0;
    for (std::int32_t i = 0; i < w * h; ++i) {
        const std::int32_t root = ds.find(i);
        if (root_to_id[root] < 0)
            root_to_id[root] = next_id++;
        out.ids[i] = root_to_id[root];
    }
    return out;
}

}  // namespace scenelab
