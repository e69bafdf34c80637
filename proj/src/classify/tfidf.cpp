#include "leaders/classify/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "leaders/error.hpp"

namespace leaders::classify {

TfidfModel fit_tfidf(std::span<const Document> docs, const TfidfOptions& options) {
    if (docs.empty()) throw InvalidArgument("fit_tfidf: empty corpus");

    struct Stats {
        std::size_t df = 0;
        std::size_t count = 0;
        std::size_t last_doc = static_cast<std::size_t>(-1);
    };
    std::map<std::string, Stats> stats;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& w : docs[d]) {
            auto& s = stats[w];
            ++s.count;
            if (s.last_doc != d) {
                s.last_doc = d;
                ++s.df;
            }
        }
    }

    std::vector<std::pair<std::string, Stats>> kept;
    for (auto& [w, s] : stats)
        if (s.df >= options.min_df) kept.emplace_back(w, s);
    if (kept.size() > options.max_features) {
        std::stable_sort(kept.begin(), kept.end(),
                         [](const auto& a, const auto& b) { return a.second.count > b.second.count; });
        kept.resize(options.max_features);
        std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    if (kept.empty()) throw InvalidArgument("fit_tfidf: empty vocabulary after pruning");

    TfidfModel model;
    model.documents = docs.size();
    const double n = static_cast<double>(docs.size());
    for (auto& [w, s] : kept) {
        model.index.emplace(w, model.vocab.size());
        model.vocab.push_back(w);
        model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(s.df))) + 1.0);
    }
    return model;
}

Matrix transform(const TfidfModel& model, std::span<const Document> docs) {
    Matrix out(docs.size(), model.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto row = out.row(d);
        for (const auto& w : docs[d]) {
            auto it = model.index.find(w);
            if (it != model.index.end()) row[it->second] += 1.0;
        }
        double norm = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 0.0) continue;
            row[j] *= model.idf[j];
            norm += row[j] * row[j];
        }
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& v : row) v /= norm;
        }
    }
    return out;
}

}  // namespace leaders::classify
