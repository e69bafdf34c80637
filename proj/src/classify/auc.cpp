#include "leaders/classify/auc.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include "leaders/error.hpp"

namespace leaders::classify {

std::optional<double> binary_auc(std::span<const double> scores, std::span<const bool> positive) {
    if (scores.size() != positive.size()) throw InvalidArgument("binary_auc: size mismatch");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Mann-Whitney U from average ranks (1-based).
    double rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (positive[order[k]]) {
                rank_sum += avg_rank;
                ++n_pos;
            }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) return std::nullopt;
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

MacroAuc macro_auc_ovr(std::span<const std::uint32_t> y_true, const Matrix& proba) {
    if (proba.rows() != y_true.size()) throw InvalidArgument("macro_auc_ovr: row count mismatch");
    if (proba.cols() < 2) throw InvalidArgument("macro_auc_ovr: need at least two classes");
    MacroAuc out;
    out.per_class.resize(proba.cols());
    std::vector<double> scores(proba.rows());
    std::unique_ptr<bool[]> positive(new bool[proba.rows()]);
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t c = 0; c < proba.cols(); ++c) {
        for (std::size_t r = 0; r < proba.rows(); ++r) {
            scores[r] = proba(r, c);
            positive[r] = y_true[r] == c;
        }
        out.per_class[c] = binary_auc(scores, std::span<const bool>(positive.get(), proba.rows()));
        if (out.per_class[c]) {
            sum += *out.per_class[c];
            ++used;
        } else {
            out.skipped.push_back(c);
        }
    }
    if (used == 0) throw InvalidArgument("macro_auc_ovr: every class lacks positives or negatives");
    out.macro = sum / static_cast<double>(used);
    return out;
}

}  // namespace leaders::classify
