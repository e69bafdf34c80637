#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leaders/matrix.hpp"

namespace leaders::classify {

struct ForestParams {
    std::size_t n_trees = 100;
    /// 0 means unlimited.
    std::size_t max_depth = 0;
    std::size_t min_leaf = 1;
    /// Features tried per split; floor(sqrt(F)) when unset.
    std::optional<std::size_t> max_features;
    std::uint64_t seed = 1;
};

/// Binary decision tree stored as parallel arrays; leaves have feature == -1
/// and carry a class distribution.
struct DecisionTree {
    std::vector<std::int32_t> feature;
    std::vector<double> threshold;
    std::vector<std::int32_t> left;
    std::vector<std::int32_t> right;
    std::vector<std::int32_t> leaf;               // index into distributions, -1 for splits
    std::vector<std::vector<double>> distributions;

    /// Class distribution of the leaf reached by `row` (x <= threshold goes left).
    std::span<const double> predict(std::span<const double> row) const;
    std::size_t node_count() const noexcept { return feature.size(); }
};

class ForestModel {
public:
    ForestModel() = default;
    ForestModel(std::vector<DecisionTree> trees, std::size_t n_classes, std::size_t n_features)
        : trees_(std::move(trees)), n_classes_(n_classes), n_features_(n_features) {}

    /// Mean of per-tree leaf distributions; each row sums to 1.
    Matrix predict_proba(const Matrix& X) const;

    std::size_t n_classes() const noexcept { return n_classes_; }
    std::size_t n_features() const noexcept { return n_features_; }
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

    /// Versioned JSON dump, see README "Model files".
    std::string to_json() const;
    static ForestModel from_json(const std::string& text);
    void save(const std::filesystem::path& path) const;
    static ForestModel load(const std::filesystem::path& path);

private:
    std::vector<DecisionTree> trees_;
    std::size_t n_classes_ = 0;
    std::size_t n_features_ = 0;
};

/// Bootstrap-aggregated Gini trees with per-node feature subsampling. If none
/// of the sampled features can split a node, further features are tried before
/// the node becomes a leaf. Trees are trained in parallel from per-tree seeds;
/// the result does not depend on the thread count. Throws InvalidArgument when
/// y holds fewer than two classes.
ForestModel train_random_forest(const Matrix& X, std::span<const std::uint32_t> y, const ForestParams& params = {});

}  // namespace leaders::classify
