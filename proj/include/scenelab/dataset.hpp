#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "scenelab/image.hpp"

namespace scenelab {

/// Raw per-pixel labels as shipped with a dataset. Negative values mean
/// unknown; dimensions must match the paired image.
struct LabelGrid {
    int width = 0;
    int height = 0;
    std::vector<int> labels;

    int at(int x, int y) const { return labels[std::size_t(y) * width + x]; }
};

/// Maps dataset-native integer labels to the five semantic classes (or Void).
/// Raw labels missing from the mapping are an error at lookup time, so that
/// mapping-config mistakes surface instead of silently becoming Void.
class ClassMapping {
public:
    void set(int raw_label, ClassId c) { map_[raw_label] = c; }
    bool contains(int raw_label) const { return map_.count(raw_label) != 0; }
    ClassId map(int raw_label) const;  // throws UnknownLabel

    /// True when at least one raw label maps to each of the 5 classes.
    bool covers_all_classes() const;

    /// Parses the line-oriented config: `<raw_int> <class_name|void>` per
    /// line, `#` comments and blank lines allowed.
    static ClassMapping parse(std::istream& in);
    static ClassMapping load(const std::filesystem::path& path);

    const std::map<int, ClassId>& entries() const { return map_; }

private:
    std::map<int, ClassId> map_;
};

enum class Split : std::uint8_t { Train = 0, Eval = 1 };

struct DatasetSample {
    std::string name;  // shared basename
    std::filesystem::path image_path;
    std::filesystem::path label_path;
    Split split = Split::Train;
};

struct DatasetIndex {
    std::vector<DatasetSample> samples;

    std::size_t train_count() const;
    std::size_t eval_count() const;
};

/// Parses `height` lines of `width` whitespace-separated integers.
LabelGrid parse_label_grid(std::istream& text, int width, int height);
LabelGrid load_label_grid(const std::filesystem::path& path, int width, int height);

/// Indexes `<root>/images/<name>.<ext>` against `<root>/labels/<name>.txt`,
/// shuffles deterministically under split_seed and tags the first
/// train_count samples Train, the rest Eval.
DatasetIndex load_dataset(const std::filesystem::path& root_dir, const ClassMapping& mapping,
                          std::uint64_t split_seed, std::size_t train_count);

/// Ground-truth components and the regions they induce. `map` covers every
/// pixel (Void components included); `regions` carries only non-Void
/// components, paired with their class.
struct GtSegmentation {
    SegmentMap map;
    std::vector<std::pair<Region, ClassId>> regions;
};

GtSegmentation ground_truth_segmentation(const RgbImage& image, const LabelGrid& grid,
                                         const ClassMapping& mapping);

/// Connected components of the mapped label grid, Void components dropped.
std::vector<std::pair<Region, ClassId>> ground_truth_regions(const RgbImage& image,
                                                             const LabelGrid& grid,
                                                             const ClassMapping& mapping);

}  // namespace scenelab
