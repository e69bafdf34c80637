#include "leaders/classify/smote.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "leaders/error.hpp"
#include "leaders/rng.hpp"

namespace leaders::classify {

namespace {

// Exact same-class kNN. Rows are mostly sparse (TF-IDF), so squared distances
// are computed as |a|^2 + |b|^2 - 2 a.b with dot products gathered through an
// inverted index over the class members.
class ClassNeighbours {
public:
    ClassNeighbours(const Matrix& X, std::vector<std::size_t> members, std::size_t k)
        : X_(X), members_(std::move(members)), k_(std::min(k, members_.size() - 1)),
          cache_(members_.size()) {
        postings_.resize(X.cols());
        norms_.resize(members_.size());
        for (std::size_t m = 0; m < members_.size(); ++m) {
            auto row = X.row(members_[m]);
            double sq = 0.0;
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (row[c] == 0.0) continue;
                postings_[c].push_back({m, row[c]});
                sq += row[c] * row[c];
            }
            norms_[m] = sq;
        }
    }

    std::size_t size() const noexcept { return members_.size(); }
    std::size_t member(std::size_t m) const noexcept { return members_[m]; }

    // Member positions of the k nearest neighbours of member m.
    const std::vector<std::size_t>& neighbours(std::size_t m) {
        auto& slot = cache_[m];
        if (slot) return *slot;
        std::vector<double> dot(members_.size(), 0.0);
        auto row = X_.row(members_[m]);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c] == 0.0) continue;
            for (const auto& p : postings_[c]) dot[p.member] += row[c] * p.value;
        }
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(members_.size() - 1);
        for (std::size_t o = 0; o < members_.size(); ++o) {
            if (o == m) continue;
            dist.emplace_back(std::max(0.0, norms_[m] + norms_[o] - 2.0 * dot[o]), o);
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
        std::vector<std::size_t> out;
        out.reserve(k_);
        for (std::size_t i = 0; i < k_; ++i) out.push_back(dist[i].second);
        slot = std::move(out);
        return *slot;
    }

private:
    struct Posting {
        std::size_t member;
        double value;
    };

    const Matrix& X_;
    std::vector<std::size_t> members_;
    std::size_t k_;
    std::vector<std::vector<Posting>> postings_;
    std::vector<double> norms_;
    std::vector<std::optional<std::vector<std::size_t>>> cache_;
};

}  // namespace

SmoteResult smote_oversample(const Matrix& X, std::span<const std::uint32_t> y, const SmoteConfig& config) {
    if (X.rows() != y.size()) throw InvalidArgument("smote_oversample: X/y size mismatch");
    if (config.k_neighbors == 0) throw InvalidArgument("smote_oversample: k_neighbors must be >= 1");

    std::map<std::uint32_t, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
    std::size_t majority = 0;
    for (const auto& [_, rows] : by_class) majority = std::max(majority, rows.size());
    for (const auto& [_, rows] : by_class)
        if (rows.size() < majority && rows.size() < 2) throw InvalidArgument("insufficient minority samples");

    SmoteResult out;
    out.X = X;
    out.y.assign(y.begin(), y.end());
    out.original_rows = X.rows();

    std::vector<double> synthetic(X.cols());
    for (auto& [label, rows] : by_class) {
        if (rows.size() == majority) continue;
        Rng rng(derive_seed(config.seed, label));
        ClassNeighbours knn(X, rows, config.k_neighbors);
        for (std::size_t made = rows.size(); made < majority; ++made) {
            const std::size_t m = rng.below(knn.size());
            const auto& nbrs = knn.neighbours(m);
            const std::size_t nb = nbrs[rng.below(nbrs.size())];
            const double u = rng.uniform();
            const std::size_t a = knn.member(m);
            const std::size_t b = knn.member(nb);
            auto xa = X.row(a);
            auto xb = X.row(b);
            for (std::size_t c = 0; c < synthetic.size(); ++c) synthetic[c] = xa[c] + u * (xb[c] - xa[c]);
            out.X.append_row(synthetic);
            out.y.push_back(label);
            out.origins.push_back({a, b, u});
        }
    }
    return out;
}

}  // namespace leaders::classify
