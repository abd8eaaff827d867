#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scenelab/dataset.hpp"
#include "scenelab/keypoints.hpp"
#include "scenelab/model_io.hpp"
#include "scenelab/segmentation.hpp"

namespace scenelab {

/// 5x5 confusion counts; rows are true classes, columns predictions.
class ConfusionMatrix {
public:
    void add(ClassId truth, ClassId predicted);
    void merge(const ConfusionMatrix& other);

    std::int64_t count(ClassId truth, ClassId predicted) const {
        return counts_[int(truth)][int(predicted)];
    }
    std::int64_t row_total(ClassId truth) const;
    std::int64_t total() const;

    /// 100 * count / row_total; 0 for an empty row.
    double row_percentage(ClassId truth, ClassId predicted) const;

    /// Mean of the diagonal percentages over classes with at least one
    /// region (the per-class classification rate).
    double average_rate() const;

private:
    std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts_{};
};

struct PipelineParams {
    SegParams seg;
    int vocab_size = 60;
    double fuzziness = 2.0;
    bool normalize_bow = true;
    bool bow_only = false;
    std::uint64_t seed = 1;
    std::size_t train_count = 400;
    int jobs = 0;  // 0 = hardware concurrency
};

struct TrainResult {
    ModelFile model;
    std::array<std::size_t, kNumClasses> region_counts{};
    std::size_t train_images = 0;
    std::size_t descriptor_count = 0;
};

/// Full training protocol: ground-truth regions of the train split,
/// keypoints per region, vocabulary, signatures, Naive Bayes fit.
TrainResult train_pipeline(const std::filesystem::path& dataset_root, const ClassMapping& mapping,
                           const PipelineParams& params, std::ostream* log = nullptr);

struct PredictResult {
    SegmentMap segments;
    std::vector<ClassId> segment_labels;  // indexed by segment id
    ClassGrid labels;                     // per pixel
};

/// Classifies each region of a pre-computed segmentation.
std::vector<ClassId> classify_segments(const ModelFile& model, const RgbImage& img, const SegmentMap& map,
                                       const KeypointList& keypoints);

/// Segment, describe, classify, rasterize.
PredictResult predict_image(const ModelFile& model, const RgbImage& img, const SegParams& seg);

struct EvalResult {
    /// Automatic segments, scored against the pixel-majority ground-truth
    /// class; segments whose majority is Void are excluded.
    ConfusionMatrix auto_segments;
    /// Ground-truth connected components classified directly.
    ConfusionMatrix gt_regions;
    std::size_t images = 0;
};

EvalResult eval_pipeline(const ModelFile& model, const std::filesystem::path& dataset_root,
                         const ClassMapping& mapping, std::uint64_t split_seed, std::size_t train_count,
                         const SegParams& seg, int jobs = 0, std::ostream* log = nullptr);

/// Fixed palette per class.
Rgb class_color(ClassId c);

/// 0.5 alpha blend of the class palette over the input; Void pixels pass
/// the input through unchanged.
RgbImage render_overlay(const RgbImage& img, const ClassGrid& labels);

/// Deterministic id -> color hash for segment visualizations.
Rgb segment_color(std::int32_t id);
RgbImage render_segments(const SegmentMap& map);

/// Aligned text report with both evaluation modes.
std::string format_report(const EvalResult& result);

/// Machine-readable rows: mode,true_class,<5 percentages>,regions.
std::string report_csv(const EvalResult& result);

/// Space-separated integers, one row per line (same schema the dataset
/// label grids use).
void write_text_grid(const std::filesystem::path& path, int width, int height,
                     const std::vector<std::int32_t>& values);

}  // namespace scenelab
