#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "scenelab/classifier.hpp"
#include "scenelab/dataset.hpp"
#include "scenelab/image_io.hpp"
#include "scenelab/keypoints.hpp"
#include "scenelab/model_io.hpp"
#include "scenelab/pipeline.hpp"
#include "scenelab/segmentation.hpp"
#include "scenelab/signature.hpp"
#include "scenelab/synthetic.hpp"
#include "scenelab/vocabulary.hpp"

namespace py = pybind11;
using namespace scenelab;

namespace {

RgbImage image_from_array(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3)
        throw py::value_error("expected an (H, W, 3) uint8 array");
    RgbImage img(int(arr.shape(1)), int(arr.shape(0)));
    std::memcpy(img.data().data(), arr.data(), img.data().size());
    return img;
}

py::array_t<std::uint8_t> image_to_array(const RgbImage& img) {
    py::array_t<std::uint8_t> arr({img.height(), img.width(), 3});
    std::memcpy(arr.mutable_data(), img.data().data(), img.data().size());
    return arr;
}

py::array_t<std::int32_t> ids_to_array(const SegmentMap& map) {
    py::array_t<std::int32_t> arr({map.height, map.width});
    std::memcpy(arr.mutable_data(), map.ids.data(), map.ids.size() * sizeof(std::int32_t));
    return arr;
}

ClassGrid class_grid_from_array(const py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2)
        throw py::value_error("expected an (H, W) integer array");
    ClassGrid grid;
    grid.height = int(arr.shape(0));
    grid.width = int(arr.shape(1));
    grid.labels.reserve(std::size_t(grid.width) * grid.height);
    const std::int32_t* p = arr.data();
    for (py::ssize_t i = 0; i < arr.size(); ++i) {
        if (p[i] < 0 || p[i] > int(ClassId::Void))
            throw py::value_error("class labels must be in [0, 5]");
        grid.labels.push_back(ClassId(p[i]));
    }
    return grid;
}

std::vector<double> vector_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 1)
        throw py::value_error("expected a 1-D array");
    return std::vector<double>(arr.data(), arr.data() + arr.size());
}

Vocabulary vocab_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2)
        throw py::value_error("expected a (K, D) float array");
    Vocabulary vocab;
    vocab.words.resize(arr.shape(0));
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        vocab.words[i].assign(arr.data() + i * arr.shape(1), arr.data() + (i + 1) * arr.shape(1));
    return vocab;
}

py::array_t<float> vocab_to_array(const Vocabulary& vocab) {
    py::array_t<float> arr({vocab.size(), vocab.dim()});
    for (int i = 0; i < vocab.size(); ++i)
        std::memcpy(arr.mutable_data() + std::size_t(i) * vocab.dim(), vocab.words[i].data(),
                    std::size_t(vocab.dim()) * sizeof(float));
    return arr;
}

py::dict matrix_to_dict(const ConfusionMatrix& m) {
    py::array_t<std::int64_t> counts({kNumClasses, kNumClasses});
    for (int t = 0; t < kNumClasses; ++t)
        for (int p = 0; p < kNumClasses; ++p)
            counts.mutable_at(t, p) = m.count(ClassId(t), ClassId(p));
    py::dict d;
    d["counts"] = counts;
    d["average_rate"] = m.average_rate();
    return d;
}

}  // namespace

PYBIND11_MODULE(_scenelab, m) {
    m.doc() = "Semantic scene labelling: graph segmentation, fuzzy bag of visual words, Gaussian NB";

    m.def(
        "segment",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img, double sigma,
           double k, int min_size) {
            return ids_to_array(segment_image(image_from_array(img), SegParams{sigma, k, min_size}));
        },
        py::arg("image"), py::arg("sigma") = 0.8, py::arg("k") = 300.0, py::arg("min_size") = 100,
        "Graph-based color segmentation; returns an (H, W) int32 id map.");

    m.def(
        "gaussian_smooth",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img, double sigma) {
            return image_to_array(gaussian_smooth(image_from_array(img), sigma));
        },
        py::arg("image"), py::arg("sigma"));

    m.def(
        "connected_components",
        [](const py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>& labels) {
            return ids_to_array(connected_components(class_grid_from_array(labels)));
        },
        py::arg("labels"), "4-connected components of equal labels; (H, W) int32 ids.");

    m.def(
        "detect_and_describe",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img) {
            const KeypointList kps = detect_and_describe(image_from_array(img));
            py::array_t<double> pts({py::ssize_t(kps.size()), py::ssize_t(4)});
            py::array_t<float> descs({py::ssize_t(kps.size()), py::ssize_t(128)});
            for (std::size_t i = 0; i < kps.size(); ++i) {
                pts.mutable_at(i, 0) = kps[i].first.x;
                pts.mutable_at(i, 1) = kps[i].first.y;
                pts.mutable_at(i, 2) = kps[i].first.scale;
                pts.mutable_at(i, 3) = kps[i].first.orientation;
                std::memcpy(descs.mutable_data() + i * 128, kps[i].second.values.data(),
                            128 * sizeof(float));
            }
            return py::make_tuple(pts, descs);
        },
        py::arg("image"),
        "SIFT keypoints: returns (N, 4) [x, y, scale, orientation] and (N, 128) descriptors.");

    m.def(
        "train_vocabulary",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& descriptors, int k,
           std::uint64_t seed, int max_iters) {
            if (descriptors.ndim() != 2)
                throw py::value_error("expected an (N, D) float array");
            std::vector<Descriptor> descs(descriptors.shape(0));
            for (py::ssize_t i = 0; i < descriptors.shape(0); ++i)
                descs[i].values.assign(descriptors.data() + i * descriptors.shape(1),
                                       descriptors.data() + (i + 1) * descriptors.shape(1));
            return vocab_to_array(train_vocabulary(descs, k, seed, max_iters));
        },
        py::arg("descriptors"), py::arg("k"), py::arg("seed") = 1, py::arg("max_iters") = 100);

    m.def(
        "fuzzy_memberships",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& descriptor,
           const py::array_t<float, py::array::c_style | py::array::forcecast>& words, double m_) {
            if (descriptor.ndim() != 1)
                throw py::value_error("expected a 1-D descriptor");
            Descriptor d;
            d.values.assign(descriptor.data(), descriptor.data() + descriptor.size());
            const std::vector<double> u = fuzzy_memberships(d, vocab_from_array(words), m_);
            return py::array_t<double>(py::ssize_t(u.size()), u.data());
        },
        py::arg("descriptor"), py::arg("words"), py::arg("m") = 2.0,
        "Fuzzy visual-word memberships; non-negative, sums to 1.");

    m.def(
        "render_overlay",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
           const py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>& labels) {
            return image_to_array(render_overlay(image_from_array(img), class_grid_from_array(labels)));
        },
        py::arg("image"), py::arg("labels"));

    py::class_<GaussianNbModel>(m, "GaussianNB")
        .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
                         const py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>& labels,
                         double variance_floor) {
                 if (features.ndim() != 2 || labels.ndim() != 1 || features.shape(0) != labels.size())
                     throw py::value_error("expected (N, F) features and (N,) labels");
                 std::vector<std::vector<double>> x(features.shape(0));
                 std::vector<ClassId> y(labels.size());
                 for (py::ssize_t i = 0; i < features.shape(0); ++i) {
                     x[i].assign(features.data() + i * features.shape(1),
                                 features.data() + (i + 1) * features.shape(1));
                     y[i] = ClassId(labels.at(i));
                 }
                 return fit(x, y, variance_floor);
             }),
             py::arg("features"), py::arg("labels"), py::arg("variance_floor") = 1e-6)
        .def_property_readonly("feature_dim", [](const GaussianNbModel& nb) { return nb.feature_dim; })
        .def_property_readonly("priors",
                               [](const GaussianNbModel& nb) {
                                   return py::array_t<double>(kNumClasses, nb.priors.data());
                               })
        .def("log_posterior_scores",
             [](const GaussianNbModel& nb,
                const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
                 const auto scores = log_posterior_scores(nb, vector_from_array(x));
                 return py::array_t<double>(kNumClasses, scores.data());
             })
        .def("predict",
             [](const GaussianNbModel& nb,
                const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
                 return int(predict(nb, vector_from_array(x)));
             });

    py::class_<ModelFile>(m, "Model")
        .def_static("load", [](const std::string& path) { return load_model(path); }, py::arg("path"))
        .def("save", [](const ModelFile& mf, const std::string& path) { save_model(mf, path); },
             py::arg("path"))
        .def_property_readonly("vocab_size", [](const ModelFile& mf) { return mf.vocab.size(); })
        .def_property_readonly("fuzziness", [](const ModelFile& mf) { return mf.sig_cfg.fuzziness; })
        .def_property_readonly("bow_only", [](const ModelFile& mf) { return mf.bow_only; })
        .def_property_readonly("provenance", [](const ModelFile& mf) { return mf.provenance; })
        .def(
            "predict_image",
            [](const ModelFile& mf,
               const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
               double sigma, double k, int min_size) {
                const PredictResult r =
                    predict_image(mf, image_from_array(img), SegParams{sigma, k, min_size});
                py::array_t<std::int32_t> labels({r.labels.height, r.labels.width});
                for (py::ssize_t i = 0; i < labels.size(); ++i)
                    labels.mutable_data()[i] = std::int32_t(r.labels.labels[i]);
                return py::make_tuple(labels, ids_to_array(r.segments));
            },
            py::arg("image"), py::arg("sigma") = 0.8, py::arg("k") = 300.0, py::arg("min_size") = 100,
            "Returns (per-pixel class labels, segment id map).");

    m.def(
        "train",
        [](const std::string& dataset_root, const std::string& mapping_path, std::uint64_t seed,
           int vocab_size, double fuzziness, bool bow_only, std::size_t train_count, double sigma,
           double k, int min_size, int jobs) {
            PipelineParams p;
            p.seed = seed;
            p.vocab_size = vocab_size;
            p.fuzziness = fuzziness;
            p.bow_only = bow_only;
            p.train_count = train_count;
            p.seg = SegParams{sigma, k, min_size};
            p.jobs = jobs;
            return train_pipeline(dataset_root, ClassMapping::load(mapping_path), p).model;
        },
        py::arg("dataset_root"), py::arg("mapping"), py::arg("seed") = 1, py::arg("vocab_size") = 60,
        py::arg("fuzziness") = 2.0, py::arg("bow_only") = false, py::arg("train_count") = 400,
        py::arg("sigma") = 0.8, py::arg("k") = 300.0, py::arg("min_size") = 100, py::arg("jobs") = 0);

    m.def(
        "evaluate",
        [](const ModelFile& model, const std::string& dataset_root, const std::string& mapping_path,
           std::uint64_t seed, std::size_t train_count, double sigma, double k, int min_size, int jobs) {
            const EvalResult r = eval_pipeline(model, dataset_root, ClassMapping::load(mapping_path),
                                               seed, train_count, SegParams{sigma, k, min_size}, jobs);
            py::dict d;
            d["auto_segments"] = matrix_to_dict(r.auto_segments);
            d["gt_regions"] = matrix_to_dict(r.gt_regions);
            d["images"] = r.images;
            d["report"] = format_report(r);
            return d;
        },
        py::arg("model"), py::arg("dataset_root"), py::arg("mapping"), py::arg("seed") = 1,
        py::arg("train_count") = 400, py::arg("sigma") = 0.8, py::arg("k") = 300.0,
        py::arg("min_size") = 100, py::arg("jobs") = 0);

    m.def(
        "write_fixtures",
        [](const std::string& out_dir, int count, int width, int height, std::uint64_t seed) {
            write_synthetic_dataset(make_synthetic_dataset(count, width, height, seed), out_dir);
        },
        py::arg("out_dir"), py::arg("count") = 60, py::arg("width") = 128, py::arg("height") = 96,
        py::arg("seed") = 7, "Writes the synthetic fixture dataset (images/, labels/, mapping.txt).");

    m.attr("CLASS_NAMES") = py::make_tuple("sky", "tree", "road", "grass", "building");

    py::register_exception<Error>(m, "SceneLabError", PyExc_RuntimeError);
}
