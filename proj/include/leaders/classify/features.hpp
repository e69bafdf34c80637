#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "leaders/matrix.hpp"

namespace leaders::classify {

/// Per-column affine map fitted on a subset of rows: (x - mean) / sd with the
/// population standard deviation. Constant columns map to 0.
class Standardizer {
public:
    static Standardizer fit(const Matrix& block, std::span<const std::size_t> rows);
    static Standardizer fit(const Matrix& block);

    Matrix apply(const Matrix& block) const;

    const std::vector<double>& means() const noexcept { return means_; }
    const std::vector<double>& scales() const noexcept { return scales_; }

private:
    std::vector<double> means_;
    std::vector<double> scales_;  // 0 marks a constant column
};

struct FeatureLayout {
    std::size_t tfidf = 0;
    std::size_t emotion = 0;
    std::size_t concern = 0;

    std::size_t total() const noexcept { return tfidf + emotion + concern; }
};

/// Rows are tweets; columns are [tfidf | emotion shares | concern indicators].
struct FeatureMatrix {
    Matrix values;
    std::vector<std::uint32_t> labels;
    FeatureLayout layout;
};

/// The four ablation rows: text only, text+concerns, text+emotions, all.
enum class FeatureSet { text, text_concerns, text_emotions, text_emotions_concerns };

inline constexpr FeatureSet kAllFeatureSets[] = {FeatureSet::text, FeatureSet::text_concerns,
                                                 FeatureSet::text_emotions, FeatureSet::text_emotions_concerns};

std::string_view to_string(FeatureSet set);
bool uses_emotions(FeatureSet set);
bool uses_concerns(FeatureSet set);

struct DenseScaling {
    std::optional<Standardizer> emotion;
    std::optional<Standardizer> concern;
};

/// Concatenates the blocks selected by `set`. Emotion and concern blocks are
/// passed through the given standardizers when present. Empty blocks (zero
/// columns) are allowed. Throws InvalidArgument on row-count mismatch.
FeatureMatrix assemble_features(const Matrix& tfidf, const Matrix& emotions, const Matrix& concerns,
                                std::span<const std::uint32_t> labels, FeatureSet set,
                                const DenseScaling& scaling = {});

/// Convenience form: with `standardize` the dense blocks are standardized with
/// parameters fitted on all rows.
FeatureMatrix assemble_features(const Matrix& tfidf, const Matrix& emotions, const Matrix& concerns,
                                std::span<const std::uint32_t> labels, bool standardize);

}  // namespace leaders::classify
