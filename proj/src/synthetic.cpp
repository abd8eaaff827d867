#include "scenelab/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <random>

#include "scenelab/image_io.hpp"
#include "scenelab/pipeline.hpp"

namespace scenelab {

namespace {

constexpr int kBandsPerImage = 4;
constexpr int kVoidRawLabel = 7;

inline std::uint8_t clamp_byte(int v) {
    return std::uint8_t(std::clamp(v, 0, 255));
}

inline int jitter(std::mt19937_64& rng, int amplitude) {
    return int(rng() % (2 * amplitude + 1)) - amplitude;
}

Rgb sky_pixel(int /*x*/, int y, int band_top, int band_h, std::mt19937_64& rng) {
    const int t = 40 * (y - band_top) / std::max(band_h, 1);
    return Rgb{clamp_byte(70 + t / 2 + jitter(rng, 2)), clamp_byte(130 + t / 2 + jitter(rng, 2)),
               clamp_byte(215 + jitter(rng, 2))};
}

Rgb tree_pixel(int /*x*/, int /*y*/, int /*band_top*/, int /*band_h*/, std::mt19937_64& rng) {
    const int n = jitter(rng, 40);
    return Rgb{clamp_byte(30 + n / 2 + jitter(rng, 10)), clamp_byte(100 + n), clamp_byte(40 + n / 3)};
}

Rgb road_pixel(int x, int y, int band_top, int /*band_h*/, std::mt19937_64& rng) {
    const int n = jitter(rng, 8);
    // dashed lane marking halfway down the band
    const bool dash = (y - band_top) % 24 == 12 && (x / 10) % 2 == 0;
    const int base = dash ? 205 : 122;
    return Rgb{clamp_byte(base + n), clamp_byte(base + n), clamp_byte(base + 5 + n)};
}

Rgb grass_pixel(int x, int /*y*/, int /*band_top*/, int /*band_h*/, std::mt19937_64& rng) {
    const int n = jitter(rng, 18);
    const int streak = (x % 7 < 2) ? -14 : 0;
    return Rgb{clamp_byte(130 + n + streak), clamp_byte(185 + n + streak), clamp_byte(60 + n / 2)};
}

Rgb building_pixel(int x, int y, int band_top, int /*band_h*/, std::mt19937_64& rng) {
    const int lx = x % 14;
    const int ly = (y - band_top) % 12;
    const bool window = lx >= 4 && lx < 10 && ly >= 3 && ly < 9;
    const int n = jitter(rng, 5);
    if (window)
        return Rgb{clamp_byte(40 + n), clamp_byte(45 + n), clamp_byte(65 + n)};
    return Rgb{clamp_byte(175 + n), clamp_byte(65 + n), clamp_byte(55 + n)};
}

Rgb class_pixel(ClassId c, int x, int y, int band_top, int band_h, std::mt19937_64& rng) {
    switch (c) {
        case ClassId::Sky: return sky_pixel(x, y, band_top, band_h, rng);
        case ClassId::Tree: return tree_pixel(x, y, band_top, band_h, rng);
        case ClassId::Road: return road_pixel(x, y, band_top, band_h, rng);
        case ClassId::Grass: return grass_pixel(x, y, band_top, band_h, rng);
        case ClassId::Building: return building_pixel(x, y, band_top, band_h, rng);
        case ClassId::Void: break;
    }
    return Rgb{};
}

}  // namespace

std::vector<SyntheticSample> make_synthetic_dataset(int count, int width, int height,
                                                    std::uint64_t seed) {
    std::vector<SyntheticSample> samples;
    samples.reserve(count);

    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * std::uint64_t(i + 1)));

        SyntheticSample sample;
        char name[32];
        std::snprintf(name, sizeof name, "fix_%04d", i);
        sample.name = name;
        sample.image = RgbImage(width, height);
        sample.labels.width = width;
        sample.labels.height = height;
        sample.labels.labels.assign(std::size_t(width) * height, kVoidRawLabel);

        // Band boundaries: roughly equal quarters with a little jitter.
        std::array<int, kBandsPerImage + 1> bounds;
        bounds[0] = 0;
        bounds[kBandsPerImage] = height;
        for (int b = 1; b < kBandsPerImage; ++b)
            bounds[b] = b * height / kBandsPerImage + jitter(rng, height / 24);

        for (int b = 0; b < kBandsPerImage; ++b) {
            const ClassId cls = ClassId((i + b) % kNumClasses);
            const int top = bounds[b];
            const int bottom = bounds[b + 1];
            // keep a 1-px Void strip between bands
            const int fill_bottom = (b + 1 < kBandsPerImage) ? bottom - 1 : bottom;
            for (int y = top; y < bottom; ++y) {
                for (int x = 0; x < width; ++x) {
                    sample.image.set(x, y, class_pixel(cls, x, y, top, bottom - top, rng));
                    if (y < fill_bottom)
                        sample.labels.labels[std::size_t(y) * width + x] = int(cls);
                }
            }
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

ClassMapping synthetic_mapping() {
    ClassMapping mapping;
    for (int c = 0; c < kNumClasses; ++c)
        mapping.set(c, ClassId(c));
    mapping.set(kVoidRawLabel, ClassId::Void);
    return mapping;
}

void write_synthetic_dataset(const std::vector<SyntheticSample>& samples,
                             const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    fs::create_directories(root / "images");
    fs::create_directories(root / "labels");

    for (const SyntheticSample& s : samples) {
        save_image_png(s.image, root / "images" / (s.name + ".png"));
        write_text_grid(root / "labels" / (s.name + ".txt"), s.labels.width, s.labels.height,
                        std::vector<std::int32_t>(s.labels.labels.begin(), s.labels.labels.end()));
    }

    std::ofstream mapping(root / "mapping.txt", std::ios::binary);
    mapping << "# synthetic fixture classes\n";
    for (int c = 0; c < kNumClasses; ++c)
        mapping << c << ' ' << class_name(ClassId(c)) << '\n';
    mapping << kVoidRawLabel << " void\n";
    if (!mapping.flush())
        throw IoError("failed writing mapping file under " + root.string());
}

}  // namespace scenelab
