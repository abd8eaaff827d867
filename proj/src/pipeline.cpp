#include "scenelab/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "scenelab/classifier.hpp"
#include "scenelab/image_io.hpp"
#include "scenelab/parallel.hpp"
#include "scenelab/signature.hpp"

namespace scenelab {

void ConfusionMatrix::add(ClassId truth, ClassId predicted) {
    ++counts_[int(truth)][int(predicted)];
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    for (int t = 0; t < kNumClasses; ++t)
        for (int p = 0; p < kNumClasses; ++p)
            counts_[t][p] += other.counts_[t][p];
}

std::int64_t ConfusionMatrix::row_total(ClassId truth) const {
    std::int64_t sum = 0;
    for (int p = 0; p < kNumClasses; ++p)
        sum += counts_[int(truth)][p];
    return sum;
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t sum = 0;
    for (int t = 0; t < kNumClasses; ++t)
        sum += row_total(ClassId(t));
    return sum;
}

double ConfusionMatrix::row_percentage(ClassId truth, ClassId predicted) const {
    const std::int64_t row = row_total(truth);
    if (row == 0)
        return 0.0;
    return 100.0 * double(count(truth, predicted)) / double(row);
}

double ConfusionMatrix::average_rate() const {
    double sum = 0.0;
    int rows = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        if (row_total(ClassId(c)) > 0) {
            sum += row_percentage(ClassId(c), ClassId(c));
            ++rows;
        }
    }
    return rows == 0 ? 0.0 : sum / rows;
}

namespace {

struct TrainRegion {
    ClassId cls = ClassId::Void;
    std::vector<Descriptor> descriptors;
    std::array<double, 6> color{};
};

std::vector<double> signature_features(const std::vector<Descriptor>& descriptors,
                                       const std::array<double, 6>& color, const Vocabulary& vocab,
                                       const SignatureConfig& cfg, bool bow_only) {
    std::vector<double> x = bow_weights(descriptors, vocab, cfg);
    if (!bow_only)
        x.insert(x.end(), color.begin(), color.end());
    return x;
}

std::string format_double(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

}  // namespace

TrainResult train_pipeline(const std::filesystem::path& dataset_root, const ClassMapping& mapping,
                           const PipelineParams& params, std::ostream* log) {
    const DatasetIndex index = load_dataset(dataset_root, mapping, params.seed, params.train_count);
    std::vector<const DatasetSample*> train;
    for (const DatasetSample& s : index.samples)
        if (s.split == Split::Train)
            train.push_back(&s);
    if (train.empty())
        throw EmptyDataset("train split is empty");

    const SiftDetector detector;
    std::vector<std::vector<TrainRegion>> per_image(train.size());
    parallel_for(train.size(), params.jobs, [&](std::size_t i) {
        const DatasetSample& sample = *train[i];
        const RgbImage img = load_image(sample.image_path);
        const LabelGrid grid = load_label_grid(sample.label_path, img.width(), img.height());
        const GtSegmentation gt = ground_truth_segmentation(img, grid, mapping);
        const KeypointList kps = detector.detect_and_describe(img);
        std::vector<std::vector<Descriptor>> by_segment = assign_keypoints(kps, gt.map);

        std::vector<TrainRegion> regions;
        regions.reserve(gt.regions.size());
        for (const auto& [region, cls] : gt.regions) {
            TrainRegion tr;
            tr.cls = cls;
            tr.descriptors = std::move(by_segment[region.id]);
            tr.color = color_stats(img, region);
            regions.push_back(std::move(tr));
        }
        per_image[i] = std::move(regions);
    });

    // Vocabulary over the train split's descriptors, in sample order.
    std::vector<Descriptor> corpus;
    for (const auto& regions : per_image)
        for (const TrainRegion& r : regions)
            corpus.insert(corpus.end(), r.descriptors.begin(), r.descriptors.end());
    const std::size_t corpus_size = corpus.size();
    if (corpus_size < std::size_t(params.vocab_size))
        throw InsufficientData("train split yields " + std::to_string(corpus_size) +
                               " descriptors, need at least vocab_size=" + std::to_string(params.vocab_size));

    TrainResult result;
    result.train_images = train.size();
    result.descriptor_count = corpus_size;

    ModelFile& model = result.model;
    model.sig_cfg.fuzziness = params.fuzziness;
    model.sig_cfg.normalize_bow = params.normalize_bow;
    model.sig_cfg.vocab_size = params.vocab_size;
    model.bow_only = params.bow_only;
    model.vocab = train_vocabulary(corpus, params.vocab_size, params.seed);
    corpus.clear();
    corpus.shrink_to_fit();

    std::vector<std::vector<double>> features;
    std::vector<ClassId> labels;
    for (const auto& regions : per_image) {
        for (const TrainRegion& r : regions) {
            features.push_back(
                signature_features(r.descriptors, r.color, model.vocab, model.sig_cfg, model.bow_only));
            labels.push_back(r.cls);
            ++result.region_counts[int(r.cls)];
        }
    }
    model.nb = fit(features, labels);

    model.provenance.push_back("dataset_root=" + dataset_root.string());
    model.provenance.push_back("seed=" + std::to_string(params.seed));
    model.provenance.push_back("train_count=" + std::to_string(train.size()) +
                               " eval_count=" + std::to_string(index.samples.size() - train.size()));
    model.provenance.push_back("vocab_size=" + std::to_string(params.vocab_size) +
                               " fuzziness=" + format_double(params.fuzziness) +
                               " normalize_bow=" + (params.normalize_bow ? std::string("1") : std::string("0")) +
                               " bow_only=" + (params.bow_only ? std::string("1") : std::string("0")));
    model.provenance.push_back("seg sigma=" + format_double(params.seg.sigma) +
                               " k=" + format_double(params.seg.k_threshold) +
                               " min_size=" + std::to_string(params.seg.min_size));
    model.provenance.push_back("descriptors=" + std::to_string(corpus_size) +
                               (corpus_size > kDescriptorSubsampleLimit
                                    ? " subsampled_to=" + std::to_string(kDescriptorSubsampleLimit)
                                    : std::string()));

    if (log) {
        *log << "trained on " << train.size() << " images, " << features.size() << " regions, "
             << corpus_size << " descriptors\n";
        for (int c = 0; c < kNumClasses; ++c)
            *log << "  " << class_name(ClassId(c)) << ": " << result.region_counts[c] << " regions\n";
    }
    return result;
}

std::vector<ClassId> classify_segments(const ModelFile& model, const RgbImage& img, const SegmentMap& map,
                                       const KeypointList& keypoints) {
    const std::vector<std::vector<Descriptor>> by_segment = assign_keypoints(keypoints, map);
    const std::vector<Region> regions = extract_regions(map);

    std::vector<ClassId> out(regions.size(), ClassId::Void);
    for (const Region& region : regions) {
        const std::vector<double> x = signature_features(by_segment[region.id], color_stats(img, region),
                                                         model.vocab, model.sig_cfg, model.bow_only);
        out[region.id] = predict(model.nb, x);
    }
    return out;
}

PredictResult predict_image(const ModelFile& model, const RgbImage& img, const SegParams& seg) {
    PredictResult result;
    result.segments = segment_image(img, seg);
    const KeypointList kps = SiftDetector().detect_and_describe(img);
    result.segment_labels = classify_segments(model, img, result.segments, kps);

    result.labels.width = img.width();
    result.labels.height = img.height();
    result.labels.labels.resize(img.pixel_count());
    for (std::size_t i = 0; i < result.labels.labels.size(); ++i)
        result.labels.labels[i] = result.segment_labels[result.segments.ids[i]];
    return result;
}

EvalResult eval_pipeline(const ModelFile& model, const std::filesystem::path& dataset_root,
                         const ClassMapping& mapping, std::uint64_t split_seed, std::size_t train_count,
                         const SegParams& seg, int jobs, std::ostream* log) {
    const DatasetIndex index = load_dataset(dataset_root, mapping, split_seed, train_count);
    std::vector<const DatasetSample*> eval;
    for (const DatasetSample& s : index.samples)
        if (s.split == Split::Eval)
            eval.push_back(&s);
    if (eval.empty())
        throw EmptyEvalSet("eval split is empty (train_count covers the whole dataset)");

    const SiftDetector detector;
    std::vector<EvalResult> partial(eval.size());
    parallel_for(eval.size(), jobs, [&](std::size_t i) {
        const DatasetSample& sample = *eval[i];
        const RgbImage img = load_image(sample.image_path);
        const LabelGrid grid = load_label_grid(sample.label_path, img.width(), img.height());
        const KeypointList kps = detector.detect_and_describe(img);

        ClassGrid mapped;
        mapped.width = grid.width;
        mapped.height = grid.height;
        mapped.labels.reserve(grid.labels.size());
        for (int raw : grid.labels)
            mapped.labels.push_back(mapping.map(raw));

        EvalResult& local = partial[i];

        // Automatic segments against pixel-majority ground truth.
        const SegmentMap segments = segment_image(img, seg);
        const std::vector<ClassId> seg_pred = classify_segments(model, img, segments, kps);
        std::vector<std::array<std::int64_t, kNumClasses + 1>> votes(seg_pred.size());
        for (auto& v : votes)
            v.fill(0);
        for (std::size_t p = 0; p < mapped.labels.size(); ++p)
            ++votes[segments.ids[p]][int(mapped.labels[p])];
        for (std::size_t s = 0; s < seg_pred.size(); ++s) {
            int majority = 0;
            for (int c = 1; c <= kNumClasses; ++c)
                if (votes[s][c] > votes[s][majority])
                    majority = c;
            if (majority == kNumClasses)
                continue;  // Void-majority segment
            local.auto_segments.add(ClassId(majority), seg_pred[s]);
        }

        // Ground-truth components classified directly.
        const GtSegmentation gt = ground_truth_segmentation(img, grid, mapping);
        const std::vector<ClassId> gt_pred = classify_segments(model, img, gt.map, kps);
        for (const auto& [region, cls] : gt.regions)
            local.gt_regions.add(cls, gt_pred[region.id]);
    });

    EvalResult result;
    result.images = eval.size();
    for (const EvalResult& local : partial) {
        result.auto_segments.merge(local.auto_segments);
        result.gt_regions.merge(local.gt_regions);
    }
    if (log)
        *log << "evaluated " << result.images << " images: auto-segment average rate "
             << format_double(result.auto_segments.average_rate()) << "%, GT-region average rate "
             << format_double(result.gt_regions.average_rate()) << "%\n";
    return result;
}

Rgb class_color(ClassId c) {
    switch (c) {
        case ClassId::Sky: return Rgb{0, 0, 255};
        case ClassId::Tree: return Rgb{0, 128, 0};
        case ClassId::Road: return Rgb{128, 128, 128};
        case ClassId::Grass: return Rgb{154, 205, 50};
        case ClassId::Building: return Rgb{255, 0, 0};
        case ClassId::Void: break;
    }
    return Rgb{0, 0, 0};
}

RgbImage render_overlay(const RgbImage& img, const ClassGrid& labels) {
    if (img.width() != labels.width || img.height() != labels.height)
        throw DimensionMismatch("overlay label grid does not match the image");

    RgbImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const Rgb in = img.at(x, y);
            const ClassId c = labels.at(x, y);
            if (c == ClassId::Void) {
                out.set(x, y, in);
                continue;
            }
            const Rgb pal = class_color(c);
            out.set(x, y, Rgb{
                         std::uint8_t(std::lround(0.5 * in.r + 0.5 * pal.r)),
                         std::uint8_t(std::lround(0.5 * in.g + 0.5 * pal.g)),
                         std::uint8_t(std::lround(0.5 * in.b + 0.5 * pal.b)),
                     });
        }
    }
    return out;
}

Rgb segment_color(std::int32_t id) {
    // splitmix64 finalizer
    std::uint64_t z = std::uint64_t(id) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return Rgb{std::uint8_t(z & 0xff), std::uint8_t((z >> 8) & 0xff), std::uint8_t((z >> 16) & 0xff)};
}

RgbImage render_segments(const SegmentMap& map) {
    RgbImage out(map.width, map.height);
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x)
            out.set(x, y, segment_color(map.at(x, y)));
    return out;
}

namespace {

void append_matrix(std::string* out, const ConfusionMatrix& m, const char* title) {
    char buf[160];
    *out += title;
    *out += '\n';
    std::snprintf(buf, sizeof buf, "%-10s", "true \\ pred");
    *out += buf;
    for (int p = 0; p < kNumClasses; ++p) {
        std::snprintf(buf, sizeof buf, " %9s", class_name(ClassId(p)));
        *out += buf;
    }
    *out += "   regions\n";
    for (int t = 0; t < kNumClasses; ++t) {
        std::snprintf(buf, sizeof buf, "%-10s", class_name(ClassId(t)));
        *out += buf;
        for (int p = 0; p < kNumClasses; ++p) {
            std::snprintf(buf, sizeof buf, " %9.1f", m.row_percentage(ClassId(t), ClassId(p)));
            *out += buf;
        }
        std::snprintf(buf, sizeof buf, " %9lld\n", static_cast<long long>(m.row_total(ClassId(t))));
        *out += buf;
    }
    std::snprintf(buf, sizeof buf, "average classification rate: %.1f%% over %lld regions\n",
                  m.average_rate(), static_cast<long long>(m.total()));
    *out += buf;
}

}  // namespace

std::string format_report(const EvalResult& result) {
    std::string out;
    out += "evaluation over " + std::to_string(result.images) + " images (percentages per true class)\n";
    out += "auto mode: segments from the graph-based segmenter, scored against the pixel-majority\n";
    out += "ground-truth class; segments with a Void majority are excluded from scoring.\n\n";
    append_matrix(&out, result.auto_segments, "[auto segments]");
    out += '\n';
    append_matrix(&out, result.gt_regions, "[ground-truth regions]");
    return out;
}

std::string report_csv(const EvalResult& result) {
    std::string out = "mode,true_class";
    for (int p = 0; p < kNumClasses; ++p)
        out += std::string(",") + class_name(ClassId(p));
    out += ",regions\n";
    const auto rows = [&out](const ConfusionMatrix& m, const char* mode) {
        for (int t = 0; t < kNumClasses; ++t) {
            char buf[64];
            out += mode;
            out += ',';
            out += class_name(ClassId(t));
            for (int p = 0; p < kNumClasses; ++p) {
                std::snprintf(buf, sizeof buf, ",%.4f", m.row_percentage(ClassId(t), ClassId(p)));
                out += buf;
            }
            std::snprintf(buf, sizeof buf, ",%lld\n", static_cast<long long>(m.row_total(ClassId(t))));
            out += buf;
        }
    };
    rows(result.auto_segments, "auto");
    rows(result.gt_regions, "gt");
    return out;
}

void write_text_grid(const std::filesystem::path& path, int width, int height,
                     const std::vector<std::int32_t>& values) {
    if (int(values.size()) != width * height)
        throw DimensionMismatch("grid value count does not match dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (x)
                out << ' ';
            out << values[std::size_t(y) * width + x];
        }
        out << '\n';
    }
    if (!out.flush())
        throw IoError("failed writing: " + path.string());
}

}  // namespace scenelab
