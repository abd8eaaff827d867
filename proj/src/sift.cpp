#include "scenelab/keypoints.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace scenelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInherentBlur = 0.5;  // blur assumed present in the input

struct FloatImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    FloatImage() = default;
    FloatImage(int w, int h) : width(w), height(h), data(std::size_t(w) * h, 0.0f) {}

    float at(int x, int y) const { return data[std::size_t(y) * width + x]; }
    float& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    float at(std::size_t idx) const { return data[idx]; }
};

FloatImage to_gray(const RgbImage& img) {
    FloatImage gray(img.width(), img.height());
    const std::uint8_t* p = img.data().data();
    for (std::size_t i = 0; i < gray.data.size(); ++i, p += 3)
        gray.data[i] = float((0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0);
    return gray;
}

// Separable Gaussian with replicated borders, radius ceil(3*sigma).
FloatImage blur(const FloatImage& img, double sigma) {
    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& v : kernel)
        v /= sum;

    const int w = img.width;
    const int h = img.height;
    FloatImage tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * img.at(std::clamp(x + i, 0, w - 1), y);
            tmp.at(x, y) = float(acc);
        }
    }
    FloatImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * tmp.at(x, std::clamp(y + i, 0, h - 1));
            out.at(x, y) = float(acc);
        }
    }
    return out;
}

FloatImage half_size(const FloatImage& img) {
    FloatImage out(img.width / 2, img.height / 2);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = img.at(2 * x, 2 * y);
    return out;
}

FloatImage subtract(const FloatImage& a, const FloatImage& b) {
    FloatImage out(a.width, a.height);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = a.data[i] - b.data[i];
    return out;
}

struct Octave {
    std::vector<FloatImage> imgs;  // S+3 Gaussian images
    std::vector<FloatImage> dogs;  // S+2 difference images
    std::vector<FloatImage> grad;  // gradient magnitude per Gaussian image
    std::vector<FloatImage> ori;   // gradient orientation in [0, 2pi)
};

Octave build_octave(FloatImage base, double has_sigma, const SiftParams& p) {
    Octave oct;
    if (has_sigma < p.initial_sigma)
        base = blur(base, std::sqrt(p.initial_sigma * p.initial_sigma - has_sigma * has_sigma));
    oct.imgs.push_back(std::move(base));

    const double k = std::pow(2.0, 1.0 / p.scales_per_octave);
    double sigma = p.initial_sigma;
    for (int i = 1; i < p.scales_per_octave + 3; ++i) {
        const double sigma_next = sigma * k;
        const double inc = std::sqrt(sigma_next * sigma_next - sigma * sigma);
        oct.imgs.push_back(blur(oct.imgs.back(), inc));
        oct.dogs.push_back(subtract(oct.imgs[oct.imgs.size() - 1], oct.imgs[oct.imgs.size() - 2]));
        sigma = sigma_next;
    }

    oct.grad.reserve(oct.imgs.size());
    oct.ori.reserve(oct.imgs.size());
    const int w = oct.imgs[0].width;
    const int h = oct.imgs[0].height;
    for (const FloatImage& img : oct.imgs) {
        FloatImage grad(w, h);
        FloatImage ori(w, h);
        for (int y = 1; y < h - 1; ++y) {
            for (int x = 1; x < w - 1; ++x) {
                const float dx = 0.5f * (img.at(x + 1, y) - img.at(x - 1, y));
                const float dy = 0.5f * (img.at(x, y + 1) - img.at(x, y - 1));
                grad.at(x, y) = std::sqrt(dx * dx + dy * dy);
                const float a = std::atan2(dy, dx);
                ori.at(x, y) = a < 0.0f ? a + float(kTwoPi) : a;
            }
        }
        oct.grad.push_back(std::move(grad));
        oct.ori.push_back(std::move(ori));
    }
    return oct;
}

struct Candidate {
    int octave = 0;
    float x = 0.0f;
    float y = 0.0f;
    float sample = 0.0f;  // refined scale index, in [-1, S+1]
    float dxx = 0.0f, dyy = 0.0f, dxy = 0.0f;
};

// Strict 26-neighborhood extremum test on DoG triple (s-1, s, s+1).
bool is_extremum(const Octave& oct, int s, int x, int y) {
    const int w = oct.dogs[s].width;
    const std::size_t idx = std::size_t(y) * w + x;
    const float center = oct.dogs[s].at(idx);
    const std::array<int, 9> noff = {-1 - w, -w, 1 - w, -1, 0, 1, -1 + w, w, 1 + w};

    bool largest = true;
    bool smallest = true;
    for (int l = -1; (largest || smallest) && l <= 1; ++l) {
        for (int i = 0; (largest || smallest) && i < 9; ++i) {
            if (l == 0 && i == 4)
                continue;
            const float v = oct.dogs[s + l].at(idx + noff[i]);
            if (v >= center)
                largest = false;
            if (v <= center)
                smallest = false;
        }
    }
    return largest || smallest;
}

// Quadratic 3-D Taylor refinement with contrast and edge-response filtering.
bool localize(const Octave& oct, const SiftParams& p, int s, int x, int y, Candidate* out) {
    const int w = oct.dogs[0].width;
    const int h = oct.dogs[0].height;
    const int S = p.scales_per_octave;

    int ix = x;
    int iy = y;
    float fx = 0.0f, fy = 0.0f, fs = 0.0f;
    float Dx = 0, Dy = 0, Ds = 0, Dxx = 0, Dyy = 0, Dss = 0, Dxy = 0, Dxs = 0, Dys = 0;

    for (int attempt = 0; attempt < 5; ++attempt) {
        const std::size_t px = std::size_t(iy) * w + ix;
        const auto at = [&](int ds, int off) { return oct.dogs[s + ds].at(px + off); };

        Dx = 0.5f * (at(0, 1) - at(0, -1));
        Dy = 0.5f * (at(0, w) - at(0, -w));
        Ds = 0.5f * (at(1, 0) - at(-1, 0));

        Dxx = at(0, 1) + at(0, -1) - 2.0f * at(0, 0);
        Dyy = at(0, w) + at(0, -w) - 2.0f * at(0, 0);
        Dss = at(1, 0) + at(-1, 0) - 2.0f * at(0, 0);

        Dxy = 0.25f * (at(0, 1 + w) + at(0, -1 - w) - at(0, -1 + w) - at(0, 1 - w));
        Dxs = 0.25f * (at(1, 1) + at(-1, -1) - at(1, -1) - at(-1, 1));
        Dys = 0.25f * (at(1, w) + at(-1, -w) - at(1, -w) - at(-1, w));

        // Solve H * d = -grad by Cramer's rule.
        const double det = double(Dxx) * (double(Dyy) * Dss - double(Dys) * Dys) -
                           double(Dxy) * (double(Dxy) * Dss - double(Dys) * Dxs) +
                           double(Dxs) * (double(Dxy) * Dys - double(Dyy) * Dxs);
        if (std::abs(det) < 1e-15)
            return false;

        const double bx = -Dx, by = -Dy, bs = -Ds;
        fx = float((bx * (double(Dyy) * Dss - double(Dys) * Dys) -
                    double(Dxy) * (by * Dss - double(Dys) * bs) +
                    double(Dxs) * (by * Dys - double(Dyy) * bs)) / det);
        fy = float((double(Dxx) * (by * Dss - double(Dys) * bs) -
                    bx * (double(Dxy) * Dss - double(Dys) * Dxs) +
                    double(Dxs) * (double(Dxy) * bs - by * Dxs)) / det);
        fs = float((double(Dxx) * (double(Dyy) * bs - by * Dys) -
                    double(Dxy) * (double(Dxy) * bs - by * Dxs) +
                    bx * (double(Dxy) * Dys - double(Dyy) * Dxs)) / det);

        const int dx = (fx > 0.6f && ix < w - 2) ? 1 : ((fx < -0.6f && ix > 1) ? -1 : 0);
        const int dy = (fy > 0.6f && iy < h - 2) ? 1 : ((fy < -0.6f && iy > 1) ? -1 : 0);
        if (dx == 0 && dy == 0)
            break;
        ix += dx;
        iy += dy;
    }

    const float value = oct.dogs[s].at(std::size_t(iy) * w + ix) + 0.5f * (Dx * fx + Dy * fy + Ds * fs);

    const float trace = Dxx + Dyy;
    const float det2 = Dxx * Dyy - Dxy * Dxy;
    const float edge_score = trace * trace / det2;
    const float edge_limit =
        float((p.edge_ratio + 1.0) * (p.edge_ratio + 1.0) / p.edge_ratio);

    const float rx = float(ix) + fx;
    const float ry = float(iy) + fy;
    const float rs = float(s - 1) + fs;  // sample index relative to the first DoG center

    if (std::abs(value) < float(p.contrast_threshold) || det2 <= 0.0f || edge_score > edge_limit ||
        std::abs(fx) > 1.5f || std::abs(fy) > 1.5f || std::abs(fs) > 1.0f || rs < -1.0f ||
        rs > float(S) || rx < 0.0f || rx > float(w - 1) || ry < 0.0f || ry > float(h - 1))
        return false;

    out->x = rx;
    out->y = ry;
    out->sample = rs;
    out->dxx = Dxx;
    out->dyy = Dyy;
    out->dxy = Dxy;
    return true;
}

double relative_scale(const SiftParams& p, float sample) {
    return p.initial_sigma * std::pow(2.0, (sample + 1.0) / p.scales_per_octave);
}

void assign_orientations(const Octave& oct, const SiftParams& p, const Candidate& c,
                         std::vector<double>* orientations) {
    constexpr int kBins = 36;
    std::array<double, kBins> hist{};

    const int ix = int(c.x + 0.5f);
    const int iy = int(c.y + 0.5f);
    const int is = int(std::lround(c.sample));
    const double sigma = relative_scale(p, c.sample);

    const FloatImage& grad = oct.grad[is + 1];
    const FloatImage& ori = oct.ori[is + 1];
    const int w = grad.width;
    const int h = grad.height;

    const double win_sigma = 1.5 * sigma;
    const int win = int(win_sigma * 3.0);
    if (ix < win || ix + win >= w || iy < win || iy + win >= h)
        return;

    const double dxf = c.x - ix;
    const double dyf = c.y - iy;
    const double maxdist = double(win) * win + 0.5;

    for (int dy = -win; dy <= win; ++dy) {
        for (int dx = -win; dx <= win; ++dx) {
            const double dist = (dx - dxf) * (dx - dxf) + (dy - dyf) * (dy - dyf);
            if (dist > maxdist)
                continue;
            const double gm = grad.at(ix + dx, iy + dy);
            const double go = ori.at(ix + dx, iy + dy);
            const double weight = std::exp(-dist / (2.0 * win_sigma * win_sigma));
            int bin = int(kBins * go / kTwoPi);
            bin = std::clamp(bin, 0, kBins - 1);
            hist[bin] += gm * weight;
        }
    }

    for (int iter = 0; iter < 6; ++iter) {
        const double first = hist[0];
        double prev = hist[kBins - 1];
        for (int j = 0; j < kBins - 1; ++j) {
            const double cur = hist[j];
            hist[j] = (prev + cur + hist[j + 1]) / 3.0;
            prev = cur;
        }
        hist[kBins - 1] = (prev + hist[kBins - 1] + first) / 3.0;
    }

    const double maxh = *std::max_element(hist.begin(), hist.end());
    for (int i = 0; i < kBins; ++i) {
        const double h0 = hist[(i + kBins - 1) % kBins];
        const double h1 = hist[i];
        const double h2 = hist[(i + 1) % kBins];
        if (h1 <= 0.8 * maxh || h1 <= h0 || h1 <= h2)
            continue;
        const double offset = -0.5 * (h2 - h0) / (h0 - 2.0 * h1 + h2);
        double o = kTwoPi * (i + offset + 0.5) / kBins;
        if (o < 0.0)
            o += kTwoPi;
        if (o >= kTwoPi)
            o -= kTwoPi;
        orientations->push_back(o);
    }
}

// 4x4 spatial bins x 8 orientation bins with trilinear interpolation,
// normalized, clamped at 0.2, renormalized.
bool compute_descriptor(const Octave& oct, const SiftParams& p, const Candidate& c,
                        double orientation, Descriptor* desc) {
    constexpr int kSpatialBins = 4;
    constexpr int kOriBins = 8;

    const int ix = int(c.x + 0.5f);
    const int iy = int(c.y + 0.5f);
    const int is = int(std::lround(c.sample));
    const double dxf = c.x - ix;
    const double dyf = c.y - iy;
    const double sigma = relative_scale(p, c.sample);

    const FloatImage& grad = oct.grad[is + 1];
    const FloatImage& ori = oct.ori[is + 1];
    const int w = grad.width;
    const int h = grad.height;

    desc->values.assign(kSpatialBins * kSpatialBins * kOriBins, 0.0f);

    const double sino = std::sin(orientation);
    const double coso = std::cos(orientation);

    const double binsize = 3.0 * sigma;
    const int win = int(std::numbers::sqrt2 * binsize * (kSpatialBins + 1) * 0.5);
    if (ix < win || ix + win >= w || iy < win || iy + win >= h)
        return false;

    std::vector<double> acc(kSpatialBins * kSpatialBins * kOriBins, 0.0);
    const double binoff = (kSpatialBins - 1) / 2.0;
    const double gauss_sigma = 0.5 * kSpatialBins;

    for (int dy = -win; dy <= win; ++dy) {
        for (int dx = -win; dx <= win; ++dx) {
            const double mod = grad.at(ix + dx, iy + dy);
            double theta = ori.at(ix + dx, iy + dy) - orientation;
            if (theta < 0.0)
                theta += kTwoPi;

            const double winx = dx - dxf;
            const double winy = dy - dyf;
            const double binx = (coso * winx + sino * winy) / binsize + binoff;
            const double biny = (-sino * winx + coso * winy) / binsize + binoff;
            const double bint = theta * kOriBins / kTwoPi - 0.5;

            const double r2 = (binx - binoff) * (binx - binoff) + (biny - binoff) * (biny - binoff);
            const double contrib = mod * std::exp(-r2 / (2.0 * gauss_sigma * gauss_sigma));

            const int bxi[2] = {int(std::floor(binx)), int(std::floor(binx)) + 1};
            const int byi[2] = {int(std::floor(biny)), int(std::floor(biny)) + 1};
            int bti[2] = {int(std::floor(bint)), int(std::floor(bint)) + 1};

            const double wx[2] = {bxi[1] - binx, 1.0 - (bxi[1] - binx)};
            const double wy[2] = {byi[1] - biny, 1.0 - (byi[1] - biny)};
            const double wt[2] = {bti[1] - bint, 1.0 - (bti[1] - bint)};

            if (bti[0] < 0)
                bti[0] += kOriBins;
            if (bti[1] >= kOriBins)
                bti[1] -= kOriBins;

            for (int yy = 0; yy < 2; ++yy) {
                for (int xx = 0; xx < 2; ++xx) {
                    if (bxi[xx] < 0 || bxi[xx] >= kSpatialBins || byi[yy] < 0 || byi[yy] >= kSpatialBins)
                        continue;
                    for (int tt = 0; tt < 2; ++tt) {
                        const int idx = bti[tt] + bxi[xx] * kOriBins + byi[yy] * kOriBins * kSpatialBins;
                        acc[idx] += contrib * wx[xx] * wy[yy] * wt[tt];
                    }
                }
            }
        }
    }

    const auto normalize = [&] {
        double norm2 = 0.0;
        for (double v : acc)
            norm2 += v * v;
        if (norm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& v : acc)
                v *= inv;
        }
    };
    normalize();
    for (double& v : acc)
        v = std::min(v, 0.2);
    normalize();

    for (std::size_t i = 0; i < acc.size(); ++i)
        desc->values[i] = float(acc[i]);
    return true;
}

}  // namespace

KeypointList SiftDetector::detect_and_describe(const RgbImage& img) const {
    KeypointList out;
    if (img.width() < 16 || img.height() < 16)
        return out;

    std::vector<Octave> octaves;
    {
        FloatImage base = to_gray(img);
        double has_sigma = kInherentBlur;
        for (int o = 0; o < params_.octaves; ++o) {
            if (base.width < 8 || base.height < 8)
                break;
            octaves.push_back(build_octave(std::move(base), has_sigma, params_));
            base = half_size(octaves.back().imgs[params_.scales_per_octave]);
            has_sigma = params_.initial_sigma;
        }
    }

    for (std::size_t o = 0; o < octaves.size(); ++o) {
        const Octave& oct = octaves[o];
        const int w = oct.dogs[0].width;
        const int h = oct.dogs[0].height;
        const double scale_factor = std::pow(2.0, double(o));

        for (int s = 1; s + 1 < int(oct.dogs.size()); ++s) {
            for (int y = 1; y < h - 1; ++y) {
                for (int x = 1; x < w - 1; ++x) {
                    if (!is_extremum(oct, s, x, y))
                        continue;
                    Candidate c;
                    c.octave = int(o);
                    if (!localize(oct, params_, s, x, y, &c))
                        continue;

                    std::vector<double> orientations;
                    assign_orientations(oct, params_, c, &orientations);
                    for (double orientation : orientations) {
                        Descriptor desc;
                        if (!compute_descriptor(oct, params_, c, orientation, &desc))
                            continue;
                        Keypoint kp;
                        kp.x = scale_factor * (c.x + 0.5) - 0.5;
                        kp.y = scale_factor * (c.y + 0.5) - 0.5;
                        kp.scale = params_.initial_sigma *
                                   std::pow(2.0, double(o) + (c.sample + 1.0) / params_.scales_per_octave);
                        kp.orientation = orientation;
                        if (kp.x < 0.0 || kp.x > img.width() - 1 || kp.y < 0.0 || kp.y > img.height() - 1)
                            continue;
                        out.emplace_back(kp, std::move(desc));
                    }
                }
            }
        }
    }

    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const Keypoint& ka = a.first;
        const Keypoint& kb = b.first;
        if (ka.y != kb.y)
            return ka.y < kb.y;
        if (ka.x != kb.x)
            return ka.x < kb.x;
        if (ka.scale != kb.scale)
            return ka.scale < kb.scale;
        return ka.orientation < kb.orientation;
    });
    return out;
}

KeypointList detect_and_describe(const RgbImage& img) {
    return SiftDetector().detect_and_describe(img);
}

std::vector<std::vector<Descriptor>> assign_keypoints(const KeypointList& kps, const SegmentMap& map) {
    std::vector<std::vector<Descriptor>> out(map.segment_count());
    for (const auto& [kp, desc] : kps) {
        const int x = int(std::lround(kp.x));
        const int y = int(std::lround(kp.y));
        if (x < 0 || x >= map.width || y < 0 || y >= map.height)
            throw OutOfBounds("keypoint (" + std::to_string(kp.x) + ", " + std::to_string(kp.y) +
                              ") lies outside the segment map");
        out[map.at(x, y)].push_back(desc);
    }
    return out;
}

}  // namespace scenelab
