#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace scenelab {

/// Union-find with path compression and union by rank.
class DisjointSet {
public:
    explicit DisjointSet(std::int32_t n) : parent_(n), rank_(n, 0), count_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::int32_t find(std::int32_t x) {
        std::int32_t root = x;
        while (parent_[root] != root)
            root = parent_[root];
        while (parent_[x] != root) {
            std::int32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    /// Joins the sets containing a and b; returns the surviving root.
    std::int32_t unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return a;
        if (rank_[a] < rank_[b])
            std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b])
            ++rank_[a];
        --count_;
        return a;
    }

    std::int32_t set_count() const { return count_; }
    std::int32_t element_count() const { return std::int32_t(parent_.size()); }

private:
    std::vector<std::int32_t> parent_;
    std::vector<std::int8_t> rank_;
    std::int32_t count_;
};

}  // namespace scenelab
