#include "scenelab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace scenelab {

namespace fs = std::filesystem;

ClassId ClassMapping::map(int raw_label) const {
    auto it = map_.find(raw_label);
    if (it == map_.end())
        throw UnknownLabel("raw label " + std::to_string(raw_label) + " missing from class mapping");
    return it->second;
}

bool ClassMapping::covers_all_classes() const {
    bool seen[kNumClasses] = {};
    for (const auto& [raw, c] : map_) {
        if (c != ClassId::Void)
            seen[static_cast<int>(c)] = true;
    }
    return std::all_of(seen, seen + kNumClasses, [](bool b) { return b; });
}

ClassMapping ClassMapping::parse(std::istream& in) {
    ClassMapping mapping;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string raw_tok, name_tok;
        if (!(ls >> raw_tok))
            continue;  // blank or comment-only line
        if (!(ls >> name_tok))
            throw ParseError("mapping line " + std::to_string(line_no) + ": expected '<raw_int> <class|void>'");
        std::string extra;
        if (ls >> extra)
            throw ParseError("mapping line " + std::to_string(line_no) + ": trailing token '" + extra + "'");

        int raw = 0;
        const auto [ptr, ec] = std::from_chars(raw_tok.data(), raw_tok.data() + raw_tok.size(), raw);
        if (ec != std::errc{} || ptr != raw_tok.data() + raw_tok.size())
            throw ParseError("mapping line " + std::to_string(line_no) + ": bad raw label '" + raw_tok + "'");
        mapping.set(raw, class_from_name(name_tok));
    }
    return mapping;
}

ClassMapping ClassMapping::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open mapping file: " + path.string());
    return parse(in);
}

std::size_t DatasetIndex::train_count() const {
    return std::size_t(std::count_if(samples.begin(), samples.end(),
                                     [](const DatasetSample& s) { return s.split == Split::Train; }));
}

std::size_t DatasetIndex::eval_count() const {
    return samples.size() - train_count();
}

LabelGrid parse_label_grid(std::istream& text, int width, int height) {
    if (width < 1 || height < 1)
        throw DimensionMismatch("label grid dimensions must be at least 1x1");

    LabelGrid grid;
    grid.width = width;
    grid.height = height;
    grid.labels.reserve(std::size_t(width) * height);

    std::string line;
    int rows = 0;
    while (std::getline(text, line)) {
        std::istringstream ls(line);
        std::string tok;
        int cols = 0;
        while (ls >> tok) {
            if (cols == 0 && rows == height)
                throw DimensionMismatch("label grid has more than " + std::to_string(height) + " rows");
            int value = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                throw ParseError("label grid row " + std::to_string(rows + 1) + ": non-integer token '" + tok + "'");
            if (cols == width)
                throw DimensionMismatch("label grid row " + std::to_string(rows + 1) + " has more than " +
                                        std::to_string(width) + " columns");
            grid.labels.push_back(value);
            ++cols;
        }
        if (cols == 0)
            continue;  // blank line
        if (cols != width)
            throw DimensionMismatch("label grid row " + std::to_string(rows + 1) + " has " + std::to_string(cols) +
                                    " columns, expected " + std::to_string(width));
        ++rows;
    }
    if (rows != height)
        throw DimensionMismatch("label grid has " + std::to_string(rows) + " rows, expected " +
                                std::to_string(height));
    return grid;
}

LabelGrid load_label_grid(const fs::path& path, int width, int height) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open label grid: " + path.string());
    try {
        return parse_label_grid(in, width, height);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

DatasetIndex load_dataset(const fs::path& root_dir, const ClassMapping& mapping, std::uint64_t split_seed,
                          std::size_t train_count) {
    if (!mapping.covers_all_classes())
        throw UnknownLabel("class mapping does not cover all 5 semantic classes");

    const fs::path image_dir = root_dir / "images";
    const fs::path label_dir = root_dir / "labels";
    if (!fs::is_directory(image_dir) || !fs::is_directory(label_dir))
        throw EmptyDataset("dataset root must contain images/ and labels/: " + root_dir.string());

    DatasetIndex index;
    std::vector<std::string> label_stems;
    for (const auto& entry : fs::directory_iterator(label_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            label_stems.push_back(entry.path().stem().string());
    }

    for (const auto& entry : fs::directory_iterator(image_dir)) {
        if (!entry.is_regular_file())
            continue;
        DatasetSample sample;
        sample.name = entry.path().stem().string();
        sample.image_path = entry.path();
        sample.label_path = label_dir / (sample.name + ".txt");
        if (!fs::exists(sample.label_path))
            throw MissingPair("image without label grid: " + entry.path().string());
        index.samples.push_back(std::move(sample));
    }
    if (index.samples.empty())
        throw EmptyDataset("no image/label pairs under " + root_dir.string());

    std::sort(index.samples.begin(), index.samples.end(),
              [](const DatasetSample& a, const DatasetSample& b) { return a.name < b.name; });

    std::vector<std::string> image_stems;
    image_stems.reserve(index.samples.size());
    for (const DatasetSample& s : index.samples)
        image_stems.push_back(s.name);
    for (const std::string& stem : label_stems) {
        if (!std::binary_search(image_stems.begin(), image_stems.end(), stem))
            throw MissingPair("label grid without image: " + (label_dir / (stem + ".txt")).string());
    }

    // Hand-rolled Fisher-Yates so the split does not depend on the standard
    // library's std::shuffle implementation.
    std::mt19937_64 rng(split_seed);
    for (std::size_t i = index.samples.size() - 1; i > 0; --i) {
        const std::size_t j = std::size_t(rng() % (i + 1));
        std::swap(index.samples[i], index.samples[j]);
    }

    const std::size_t n_train = std::min(train_count, index.samples.size());
    for (std::size_t i = 0; i < index.samples.size(); ++i)
        index.samples[i].split = i < n_train ? Split::Train : Split::Eval;
    return index;
}

GtSegmentation ground_truth_segmentation(const RgbImage& image, const LabelGrid& grid,
                                         const ClassMapping& mapping) {
    if (image.width() != grid.width || image.height() != grid.height)
        throw DimensionMismatch("image is " + std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                                " but label grid is " + std::to_string(grid.width) + "x" +
                                std::to_string(grid.height));

    ClassGrid classes;
    classes.width = grid.width;
    classes.height = grid.height;
    classes.labels.reserve(grid.labels.size());
    for (int raw : grid.labels)
        classes.labels.push_back(mapping.map(raw));

    GtSegmentation out;
    out.map = connected_components(classes);
    for (Region& region : extract_regions(out.map)) {
        const Pixel p0 = region.pixels.front();
        const ClassId c = classes.at(p0.x, p0.y);
        if (c != ClassId::Void)
            out.regions.emplace_back(std::move(region), c);
    }
    return out;
}

std::vector<std::pair<Region, ClassId>> ground_truth_regions(const RgbImage& image, const LabelGrid& grid,
                                                             const ClassMapping& mapping) {
    return ground_truth_segmentation(image, grid, mapping).regions;
}

}  // namespace scenelab
