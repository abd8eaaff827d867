#pragma once

#include <filesystem>

#include "scenelab/image.hpp"

namespace scenelab {

/// Decodes a PNG/JPEG/... file into an RGB raster. Throws IoError.
RgbImage load_image(const std::filesystem::path& path);

/// Encodes to PNG.
void save_image_png(const RgbImage& img, const std::filesystem::path& path);

}  // namespace scenelab
