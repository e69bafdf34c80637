#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "leaders/matrix.hpp"

namespace leaders::classify {

struct SmoteConfig {
    std::size_t k_neighbors = 5;
    std::uint64_t seed = 1;
};

/// How a synthetic row was made: row = X[base] + u * (X[neighbor] - X[base]).
struct SyntheticOrigin {
    std::size_t base;
    std::size_t neighbor;
    double u;
};

struct SmoteResult {
    /// Original rows first and unchanged, synthetic rows after them.
    Matrix X;
    std::vector<std::uint32_t> y;
    std::size_t original_rows = 0;
    std::vector<SyntheticOrigin> origins;  // one per synthetic row
};

/// Oversamples every class up to the majority count. Each synthetic row picks
/// a random sample of its class, one of its k nearest same-class neighbours
/// (Euclidean, ties by index) and a point uniformly along the segment between
/// them. Throws InvalidArgument("insufficient minority samples") when a class
/// that needs oversampling has a single sample.
SmoteResult smote_oversample(const Matrix& X, std::span<const std::uint32_t> y, const SmoteConfig& config = {});

}  // namespace leaders::classify
