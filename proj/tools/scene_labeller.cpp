#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scenelab/classifier.hpp"
#include "scenelab/dataset.hpp"
#include "scenelab/image_io.hpp"
#include "scenelab/keypoints.hpp"
#include "scenelab/model_io.hpp"
#include "scenelab/pipeline.hpp"
#include "scenelab/signature.hpp"

namespace fs = std::filesystem;
using namespace scenelab;

namespace {

struct CommonOpts {
    std::string dataset;
    std::string mapping;
    std::string model = "scene.model";
    std::uint64_t seed = 1;
    int vocab_size = 60;
    double fuzziness = 2.0;
    double sigma = 0.8;
    double k_threshold = 300.0;
    int min_size = 100;
    bool bow_only = false;
    std::size_t train_count = 400;
    int jobs = 0;
};

void add_seg_flags(CLI::App* cmd, CommonOpts* o) {
    cmd->add_option("--sigma", o->sigma, "Gaussian pre-smoothing std-dev")->capture_default_str();
    cmd->add_option("--k", o->k_threshold, "segmentation scale constant")->capture_default_str();
    cmd->add_option("--min-size", o->min_size, "minimum segment size in pixels")->capture_default_str();
}

SegParams seg_params(const CommonOpts& o) {
    return SegParams{o.sigma, o.k_threshold, o.min_size};
}

PipelineParams pipeline_params(const CommonOpts& o) {
    PipelineParams p;
    p.seg = seg_params(o);
    p.vocab_size = o.vocab_size;
    p.fuzziness = o.fuzziness;
    p.bow_only = o.bow_only;
    p.seed = o.seed;
    p.train_count = o.train_count;
    p.jobs = o.jobs;
    return p;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out.flush())
        throw IoError("failed writing: " + path.string());
}

void dump_keypoints(const fs::path& path, const KeypointList& kps) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    for (const auto& [kp, desc] : kps) {
        out << kp.x << ' ' << kp.y << ' ' << kp.scale << ' ' << kp.orientation;
        for (float v : desc.values)
            out << ' ' << v;
        out << '\n';
    }
}

int cmd_train(const CommonOpts& o) {
    const ClassMapping mapping = ClassMapping::load(o.mapping);
    const TrainResult result = train_pipeline(o.dataset, mapping, pipeline_params(o), &std::cout);
    save_model(result.model, o.model);
    std::cout << "model written to " << o.model << "\n";
    return 0;
}

int cmd_predict(const CommonOpts& o, const std::string& image_path, const std::string& out_prefix,
                const std::string& keypoints_path, const std::string& signatures_path) {
    const ModelFile model = load_model(o.model);
    const RgbImage img = load_image(image_path);

    const KeypointList kps = detect_and_describe(img);
    const SegmentMap map = segment_image(img, seg_params(o));
    const std::vector<ClassId> seg_labels = classify_segments(model, img, map, kps);

    if (!keypoints_path.empty())
        dump_keypoints(keypoints_path, kps);
    if (!signatures_path.empty()) {
        const auto by_segment = assign_keypoints(kps, map);
        std::ostringstream out;
        const std::string image_id = fs::path(image_path).stem().string();
        for (const Region& region : extract_regions(map)) {
            const Signature s =
                region_signature(img, region, by_segment[region.id], model.vocab, model.sig_cfg);
            out << image_id << ' ' << region.id << ' ' << class_name(seg_labels[region.id]);
            for (double v : s.bow)
                out << ' ' << v;
            for (double v : s.color)
                out << ' ' << v;
            out << '\n';
        }
        write_file(signatures_path, out.str());
    }

    ClassGrid grid;
    grid.width = img.width();
    grid.height = img.height();
    grid.labels.resize(img.pixel_count());
    std::vector<std::int32_t> labels(grid.labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        grid.labels[i] = seg_labels[map.ids[i]];
        labels[i] = std::int32_t(grid.labels[i]);
    }
    write_text_grid(out_prefix + "_labels.txt", grid.width, grid.height, labels);
    save_image_png(render_overlay(img, grid), out_prefix + "_overlay.png");

    std::cout << map.segment_count() << " segments labelled; outputs " << out_prefix
              << "_labels.txt, " << out_prefix << "_overlay.png\n";
    return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& report_prefix) {
    const ClassMapping mapping = ClassMapping::load(o.mapping);
    const ModelFile model = load_model(o.model);
    const EvalResult result = eval_pipeline(model, o.dataset, mapping, o.seed, o.train_count,
                                            seg_params(o), o.jobs, &std::cout);
    const std::string report = format_report(result);
    std::cout << report;
    if (!report_prefix.empty()) {
        write_file(report_prefix + ".txt", report);
        write_file(report_prefix + ".csv", report_csv(result));
        std::cout << "report written to " << report_prefix << ".txt / .csv\n";
    }
    return 0;
}

int cmd_segment(const CommonOpts& o, const std::string& image_path, const std::string& out_prefix) {
    const RgbImage img = load_image(image_path);
    const SegmentMap map = segment_image(img, seg_params(o));
    write_text_grid(out_prefix + "_ids.txt", map.width, map.height, map.ids);
    save_image_png(render_segments(map), out_prefix + "_segments.png");
    std::cout << map.segment_count() << " segments; outputs " << out_prefix << "_ids.txt, "
              << out_prefix << "_segments.png\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic scene labelling: graph-based segmentation + fuzzy bag of visual words"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string image_path, out_prefix = "out", report_prefix, keypoints_path, signatures_path;

    CLI::App* train = app.add_subcommand("train", "train a model from a labelled dataset");
    train->add_option("--dataset", o.dataset, "dataset root (images/ + labels/)")->required();
    train->add_option("--mapping", o.mapping, "raw-label to class mapping file")->required();
    train->add_option("--model", o.model, "output model path")->capture_default_str();
    train->add_option("--seed", o.seed, "split/vocabulary seed")->capture_default_str();
    train->add_option("--vocab-size", o.vocab_size, "visual words")->capture_default_str();
    train->add_option("--fuzziness", o.fuzziness, "degree of fuzziness m")->capture_default_str();
    train->add_option("--train-count", o.train_count, "samples tagged Train")->capture_default_str();
    train->add_flag("--bow-only", o.bow_only, "drop the 6 color features");
    train->add_option("--jobs", o.jobs, "worker threads (0 = auto)")->capture_default_str();
    add_seg_flags(train, &o);

    CLI::App* predict = app.add_subcommand("predict", "label one image with a trained model");
    predict->add_option("image", image_path, "input image")->required();
    predict->add_option("--model", o.model, "model path")->capture_default_str();
    predict->add_option("--out", out_prefix, "output prefix")->capture_default_str();
    predict->add_option("--dump-keypoints", keypoints_path, "write 'x y scale orientation d0..d127' lines");
    predict->add_option("--dump-signatures", signatures_path, "write per-segment signature lines");
    add_seg_flags(predict, &o);

    CLI::App* eval = app.add_subcommand("eval", "confusion matrices over the eval split");
    eval->add_option("--dataset", o.dataset, "dataset root")->required();
    eval->add_option("--mapping", o.mapping, "mapping file")->required();
    eval->add_option("--model", o.model, "model path")->capture_default_str();
    eval->add_option("--seed", o.seed, "split seed used at training time")->capture_default_str();
    eval->add_option("--train-count", o.train_count, "train count used at training time")->capture_default_str();
    eval->add_option("--report", report_prefix, "also write <prefix>.txt and <prefix>.csv");
    eval->add_option("--jobs", o.jobs, "worker threads (0 = auto)")->capture_default_str();
    add_seg_flags(eval, &o);

    CLI::App* segment = app.add_subcommand("segment", "color segmentation only");
    segment->add_option("image", image_path, "input image")->required();
    segment->add_option("--out", out_prefix, "output prefix")->capture_default_str();
    add_seg_flags(segment, &o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed())
            return cmd_train(o);
        if (predict->parsed())
            return cmd_predict(o, image_path, out_prefix, keypoints_path, signatures_path);
        if (eval->parsed())
            return cmd_eval(o, report_prefix);
        if (segment->parsed())
            return cmd_segment(o, image_path, out_prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
