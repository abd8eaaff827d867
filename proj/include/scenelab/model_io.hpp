#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scenelab/classifier.hpp"
#include "scenelab/signature.hpp"
#include "scenelab/vocabulary.hpp"

namespace scenelab {

inline constexpr int kModelFormatVersion = 1;

/// Everything needed to label new images: vocabulary, signature config and
/// the fitted Naive Bayes parameters, plus free-text provenance lines
/// (seed, dataset root, parameter values).
struct ModelFile {
    int format_version = kModelFormatVersion;
    Vocabulary vocab;
    SignatureConfig sig_cfg;
    bool bow_only = false;  // color statistics disabled end-to-end
    GaussianNbModel nb;
    std::vector<std::string> provenance;
};

/// Line-oriented sectioned text format ([header], [vocab], [nb],
/// [provenance]); floats are written as lossless hexadecimal literals and
/// the file ends with a checksum line over everything before it.
/// save -> load -> save is byte-identical.
void save_model(const ModelFile& m, std::ostream& out);
void save_model(const ModelFile& m, const std::filesystem::path& path);

ModelFile load_model(std::istream& in);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace scenelab
