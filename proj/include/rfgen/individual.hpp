#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "rfgen/tree.hpp"

namespace rfgen {

/// Fitness statistics of one multi-tree individual. All MI values are
/// normalized by the baseline self-MI of the source feature.
struct FitnessRecord {
    double min_source_mi = 0.0;
    double max_shared_mi = 0.0;
    double mean_source_mi = 0.0;
    bool feasible = false;
    double fitness = 0.0;

    friend bool operator==(const FitnessRecord&, const FitnessRecord&) = default;
};

/// n trees mapping one source feature to n redundant features.
struct Individual {
    std::vector<GpTree> trees;
    /// Set once evaluated; nullopt fitness after evaluation means Invalid.
    bool evaluated = false;
    std::optional<FitnessRecord> fitness;

    std::size_t total_nodes() const noexcept
    {
        std::size_t n = 0;
        for (const auto& t : trees) {
            n += t.size();
        }
        return n;
    }

    int max_depth() const
    {
        int d = 0;
        for (const auto& t : trees) {
            d = std::max(d, t.depth());
        }
        return d;
    }
};

} // namespace rfgen
