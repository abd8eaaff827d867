#pragma once

#include <cstdint>
#include <vector>

#include "scenelab/keypoints.hpp"

namespace scenelab {

/// Visual vocabulary: the k cluster centers of the training descriptors.
struct Vocabulary {
    std::vector<std::vector<float>> words;

    int size() const { return int(words.size()); }
    int dim() const { return words.empty() ? 0 : int(words.front().size()); }
};

/// Corpora larger than this are clustered on a seeded uniform subsample.
inline constexpr std::size_t kDescriptorSubsampleLimit = 500'000;

/// Seeded k-means++ followed by Lloyd iterations until the largest centroid
/// movement drops below 1e-4 or max_iters is hit. Empty clusters are
/// reseeded with the point farthest from its assigned center. Deterministic
/// for fixed (descriptors, k, seed).
Vocabulary train_vocabulary(const std::vector<Descriptor>& descriptors, int k, std::uint64_t seed,
                            int max_iters = 100);

}  // namespace scenelab
