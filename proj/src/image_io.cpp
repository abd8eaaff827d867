#include "scenelab/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace scenelab {

RgbImage load_image(const std::filesystem::path& path) {
    const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty())
        throw IoError("cannot decode image: " + path.string());

    RgbImage img(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x)
            img.set(x, y, Rgb{row[x][2], row[x][1], row[x][0]});
    }
    return img;
}

void save_image_png(const RgbImage& img, const std::filesystem::path& path) {
    cv::Mat bgr(img.height(), img.width(), CV_8UC3);
    for (int y = 0; y < img.height(); ++y) {
        cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width(); ++x) {
            const Rgb c = img.at(x, y);
            row[x] = cv::Vec3b(c.b, c.g, c.r);
        }
    }
    if (!cv::imwrite(path.string(), bgr))
        throw IoError("cannot write image: " + path.string());
}

}  // namespace scenelab
