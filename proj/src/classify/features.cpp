#include "leaders/classify/features.hpp"

#include <cmath>
#include <numeric>

#include "leaders/error.hpp"

namespace leaders::classify {

Standardizer Standardizer::fit(const Matrix& block, std::span<const std::size_t> rows) {
    Standardizer s;
    const std::size_t cols = block.cols();
    s.means_.assign(cols, 0.0);
    s.scales_.assign(cols, 0.0);
    if (rows.empty()) return s;
    const double n = static_cast<double>(rows.size());
    for (std::size_t r : rows)
        for (std::size_t c = 0; c < cols; ++c) s.means_[c] += block(r, c);
    for (double& m : s.means_) m /= n;
    for (std::size_t r : rows)
        for (std::size_t c = 0; c < cols; ++c) {
            const double d = block(r, c) - s.means_[c];
            s.scales_[c] += d * d;
        }
    for (double& v : s.scales_) {
        v = std::sqrt(v / n);
        if (!(v > 1e-12)) v = 0.0;
    }
    return s;
}

Standardizer Standardizer::fit(const Matrix& block) {
    std::vector<std::size_t> rows(block.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return fit(block, rows);
}

Matrix Standardizer::apply(const Matrix& block) const {
    if (block.cols() != means_.size()) throw InvalidArgument("Standardizer: column count mismatch");
    Matrix out(block.rows(), block.cols());
    for (std::size_t r = 0; r < block.rows(); ++r)
        for (std::size_t c = 0; c < block.cols(); ++c)
            out(r, c) = scales_[c] == 0.0 ? 0.0 : (block(r, c) - means_[c]) / scales_[c];
    return out;
}

std::string_view to_string(FeatureSet set) {
    switch (set) {
        case FeatureSet::text: return "text";
        case FeatureSet::text_concerns: return "text+concerns";
        case FeatureSet::text_emotions: return "text+emotions";
        case FeatureSet::text_emotions_concerns: return "text+emotions+concerns";
    }
    return "?";
}

bool uses_emotions(FeatureSet set) {
    return set == FeatureSet::text_emotions || set == FeatureSet::text_emotions_concerns;
}

bool uses_concerns(FeatureSet set) {
    return set == FeatureSet::text_concerns || set == FeatureSet::text_emotions_concerns;
}

FeatureMatrix assemble_features(const Matrix& tfidf, const Matrix& emotions, const Matrix& concerns,
                                std::span<const std::uint32_t> labels, FeatureSet set,
                                const DenseScaling& scaling) {
    const std::size_t n = tfidf.rows();
    if (labels.size() != n) throw InvalidArgument("assemble_features: label count mismatch");
    const bool emo = uses_emotions(set);
    const bool con = uses_concerns(set);
    if (emo && emotions.rows() != n && emotions.cols() != 0)
        throw InvalidArgument("assemble_features: emotion block row mismatch");
    if (con && concerns.rows() != n && concerns.cols() != 0)
        throw InvalidArgument("assemble_features: concern block row mismatch");

    Matrix emo_block, con_block;
    std::vector<const Matrix*> blocks{&tfidf};
    FeatureMatrix out;
    out.layout.tfidf = tfidf.cols();
    if (emo && emotions.cols() > 0) {
        emo_block = scaling.emotion ? scaling.emotion->apply(emotions) : emotions;
        blocks.push_back(&emo_block);
        out.layout.emotion = emotions.cols();
    }
    if (con && concerns.cols() > 0) {
        con_block = scaling.concern ? scaling.concern->apply(concerns) : concerns;
        blocks.push_back(&con_block);
        out.layout.concern = concerns.cols();
    }
    out.values = hconcat(blocks);
    out.labels.assign(labels.begin(), labels.end());
    return out;
}

FeatureMatrix assemble_features(const Matrix& tfidf, const Matrix& emotions, const Matrix& concerns,
                                std::span<const std::uint32_t> labels, bool standardize) {
    DenseScaling scaling;
    if (standardize) {
        if (emotions.rows() != tfidf.rows() || concerns.rows() != tfidf.rows())
            throw InvalidArgument("assemble_features: block row mismatch");
        scaling.emotion = Standardizer::fit(emotions);
        scaling.concern = Standardizer::fit(concerns);
    }
    return assemble_features(tfidf, emotions, concerns, labels, FeatureSet::text_emotions_concerns, scaling);
}

}  // namespace leaders::classify
