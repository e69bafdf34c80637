#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "leaders/matrix.hpp"

namespace leaders::classify {

using Document = std::vector<std::string>;

struct TfidfOptions {
    std::size_t min_df = 2;
    std::size_t max_features = 20000;
};

/// Vocabulary (sorted) with smoothed idf(t) = ln((1 + N) / (1 + df_t)) + 1.
/// When more than max_features terms pass min_df, the most frequent terms
/// (corpus count, ties lexicographic) are kept.
struct TfidfModel {
    std::vector<std::string> vocab;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<double> idf;
    std::size_t documents = 0;

    std::size_t size() const noexcept { return vocab.size(); }
};

/// Throws InvalidArgument for an empty corpus or an empty pruned vocabulary.
TfidfModel fit_tfidf(std::span<const Document> docs, const TfidfOptions& options = {});

/// Raw term counts times idf, each row L2-normalized; out-of-vocabulary words
/// are ignored and a row without known words stays zero.
Matrix transform(const TfidfModel& model, std::span<const Document> docs);

}  // namespace leaders::classify
