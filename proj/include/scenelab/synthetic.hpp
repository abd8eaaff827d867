#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scenelab/dataset.hpp"
#include "scenelab/image.hpp"

namespace scenelab {

struct SyntheticSample {
    std::string name;
    RgbImage image;
    LabelGrid labels;
};

/// Deterministic 5-class textured dataset for tests and demos. Each image
/// stacks four horizontal class bands (classes cycle with the image index,
/// so any >=13-image split contains every class), separated by 1-px strips
/// of raw label 7 which the mapping sends to Void.
std::vector<SyntheticSample> make_synthetic_dataset(int count, int width, int height,
                                                    std::uint64_t seed);

/// Raw labels 0..4 onto the five classes, 7 onto void.
ClassMapping synthetic_mapping();

/// Writes images/<name>.png, labels/<name>.txt and mapping.txt under root.
void write_synthetic_dataset(const std::vector<SyntheticSample>& samples,
                             const std::filesystem::path& root);

}  // namespace scenelab
