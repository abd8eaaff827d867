#pragma once

#include <array>
#include <vector>

#include "scenelab/image.hpp"
#include "scenelab/keypoints.hpp"
#include "scenelab/vocabulary.hpp"

namespace scenelab {

struct SignatureConfig {
    double fuzziness = 2.0;    // degree of fuzziness m, must be > 1
    bool normalize_bow = true; // divide summed memberships by keypoint count
    int vocab_size = 60;
};

/// Extended bag-of-words signature of one region: k fuzzy visual-word
/// weights plus per-channel mean and population variance of the region's
/// pixels on a [0,1] scale.
struct Signature {
    std::vector<double> bow;
    std::array<double, 6> color{};  // mean r,g,b then var r,g,b

    int dim() const { return int(bow.size()) + 6; }
};

/// Fuzzy membership of descriptor p in every visual word:
/// U_i = 1 / sum_n (||p - v_i|| / ||p - v_n||)^(2/(m-1)).
/// Memberships are non-negative and sum to 1. If p coincides with one or
/// more centers (distance < 1e-12), membership splits uniformly over the
/// coinciding centers.
std::vector<double> fuzzy_memberships(const Descriptor& p, const Vocabulary& vocab, double m);

/// Summed fuzzy memberships of the descriptors, divided by their count when
/// cfg.normalize_bow is on. No descriptors -> all zeros.
std::vector<double> bow_weights(const std::vector<Descriptor>& descriptors, const Vocabulary& vocab,
                                const SignatureConfig& cfg);

/// Per-channel mean and population variance of the region's pixels, [0,1].
std::array<double, 6> color_stats(const RgbImage& img, const Region& region);

/// Builds the region's signature from the descriptors assigned to it.
/// A region with no keypoints keeps an all-zero bow.
Signature region_signature(const RgbImage& img, const Region& region,
                           const std::vector<Descriptor>& descriptors, const Vocabulary& vocab,
                           const SignatureConfig& cfg);

/// Flattens a signature for the classifier; drops the 6 color statistics
/// when include_color is off.
std::vector<double> feature_vector(const Signature& s, bool include_color = true);

}  // namespace scenelab
