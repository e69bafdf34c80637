#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "leaders/matrix.hpp"

namespace leaders::classify {

/// Rank-statistic ROC AUC; tied scores contribute one half. Returns nullopt
/// when either class is absent.
std::optional<double> binary_auc(std::span<const double> scores, std::span<const bool> positive);

struct MacroAuc {
    double macro = 0.0;
    /// Per-class AUC; nullopt for classes skipped for lack of positives or negatives.
    std::vector<std::optional<double>> per_class;
    std::vector<std::size_t> skipped;
};

/// One-vs-rest AUC per class (column c of `proba` vs y == c), unweighted mean.
/// Throws InvalidArgument when every class is skipped.
MacroAuc macro_auc_ovr(std::span<const std::uint32_t> y_true, const Matrix& proba);

}  // namespace leaders::classify
