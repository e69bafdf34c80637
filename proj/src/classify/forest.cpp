#include "leaders/classify/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "leaders/error.hpp"
#include "leaders/rng.hpp"

namespace leaders::classify {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "leaders-forest";
constexpr int kVersion = 1;

struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = -1.0;  // sum over children of sum_c n_c^2 / n; larger is purer
};

class TreeBuilder {
public:
    TreeBuilder(const std::vector<double>& columns, std::size_t n_rows, std::size_t n_features,
                std::span<const std::uint32_t> y, std::size_t n_classes, const ForestParams& params,
                std::size_t mtry, std::uint64_t seed)
        : cols_(columns), n_rows_(n_rows), n_features_(n_features), y_(y), n_classes_(n_classes),
          params_(params), mtry_(mtry), rng_(seed), order_(n_features) {
        for (std::size_t f = 0; f < n_features; ++f) order_[f] = f;
    }

    DecisionTree build() {
        std::vector<std::size_t> idx(n_rows_);
        for (auto& i : idx) i = rng_.below(n_rows_);
        grow(idx, 0, idx.size(), 0);
        return std::move(tree_);
    }

private:
    double value(std::size_t feature, std::size_t row) const { return cols_[feature * n_rows_ + row]; }

    std::int32_t new_node() {
        tree_.feature.push_back(-1);
        tree_.threshold.push_back(0.0);
        tree_.left.push_back(-1);
        tree_.right.push_back(-1);
        tree_.leaf.push_back(-1);
        return static_cast<std::int32_t>(tree_.feature.size() - 1);
    }

    void make_leaf(std::int32_t node, const std::vector<std::size_t>& counts, std::size_t n) {
        std::vector<double> dist(n_classes_);
        for (std::size_t c = 0; c < n_classes_; ++c) dist[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
        tree_.leaf[static_cast<std::size_t>(node)] = static_cast<std::int32_t>(tree_.distributions.size());
        tree_.distributions.push_back(std::move(dist));
    }

    std::int32_t grow(std::vector<std::size_t>& idx, std::size_t begin, std::size_t end, std::size_t depth) {
        const std::int32_t node = new_node();
        const std::size_t n = end - begin;
        std::vector<std::size_t> counts(n_classes_, 0);
        for (std::size_t i = begin; i < end; ++i) ++counts[y_[idx[i]]];
        const bool pure = std::count(counts.begin(), counts.end(), std::size_t{0}) ==
                          static_cast<std::ptrdiff_t>(n_classes_ - 1);
        if (pure || n < 2 * params_.min_leaf || (params_.max_depth > 0 && depth >= params_.max_depth)) {
            make_leaf(node, counts, n);
            return node;
        }

        const Split split = find_split(idx, begin, end, counts);
        if (!split.found) {
            make_leaf(node, counts, n);
            return node;
        }
        auto mid_it = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                     idx.begin() + static_cast<std::ptrdiff_t>(end),
                                     [&](std::size_t r) { return value(split.feature, r) <= split.threshold; });
        const auto mid = static_cast<std::size_t>(mid_it - idx.begin());
        const auto u = static_cast<std::size_t>(node);
        tree_.feature[u] = static_cast<std::int32_t>(split.feature);
        tree_.threshold[u] = split.threshold;
        const std::int32_t l = grow(idx, begin, mid, depth + 1);
        tree_.left[u] = l;
        const std::int32_t r = grow(idx, mid, end, depth + 1);
        tree_.right[u] = r;
        return node;
    }

    Split find_split(const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
                     const std::vector<std::size_t>& counts) {
        Split best;
        std::size_t tried_valid = 0;
        // Partial Fisher-Yates: draw features without replacement until mtry
        // usable ones were evaluated, or keep going while none was usable.
        for (std::size_t k = 0; k < n_features_; ++k) {
            const std::size_t j = k + rng_.below(n_features_ - k);
            std::swap(order_[k], order_[j]);
            if (evaluate(order_[k], idx, begin, end, counts, best)) ++tried_valid;
            if (tried_valid >= mtry_ && best.found) break;
        }
        return best;
    }

    // Scans one feature; values are visited as sorted negatives, the zero
    // block, then sorted positives so only nonzeros need sorting.
    bool evaluate(std::size_t f, const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
                  const std::vector<std::size_t>& counts, Split& best) {
        neg_.clear();
        pos_.clear();
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t r = idx[i];
            const double v = value(f, r);
            if (v < 0.0) neg_.push_back({v, y_[r]});
            else if (v > 0.0) pos_.push_back({v, y_[r]});
        }
        const std::size_t n = end - begin;
        const std::size_t zeros = n - neg_.size() - pos_.size();
        if (zeros == n) return false;
        std::sort(neg_.begin(), neg_.end());
        std::sort(pos_.begin(), pos_.end());
        if (zeros == 0) {
            const double lo = neg_.empty() ? pos_.front().first : neg_.front().first;
            const double hi = pos_.empty() ? neg_.back().first : pos_.back().first;
            if (lo == hi) return false;
        }

        std::vector<std::size_t> zero_counts = counts;
        for (const auto& p : neg_) --zero_counts[p.second];
        for (const auto& p : pos_) --zero_counts[p.second];

        left_.assign(n_classes_, 0);
        std::size_t left_n = 0;
        auto consider = [&](double current, double next) {
            if (left_n < params_.min_leaf || n - left_n < params_.min_leaf) return;
            double score = 0.0;
            double sq_l = 0.0, sq_r = 0.0;
            for (std::size_t c = 0; c < n_classes_; ++c) {
                const double a = static_cast<double>(left_[c]);
                const double b = static_cast<double>(counts[c] - left_[c]);
                sq_l += a * a;
                sq_r += b * b;
            }
            score = sq_l / static_cast<double>(left_n) + sq_r / static_cast<double>(n - left_n);
            if (!best.found || score > best.score) {
                double t = current + (next - current) / 2.0;
                if (!(t < next)) t = current;
                best = {true, f, t, score};
            }
        };

        // Flatten the three segments into one ordered walk.
        const std::size_t total_groups = neg_.size() + (zeros > 0 ? 1 : 0) + pos_.size();
        auto item = [&](std::size_t g) -> double {
            if (g < neg_.size()) return neg_[g].first;
            g -= neg_.size();
            if (zeros > 0) {
                if (g == 0) return 0.0;
                --g;
            }
            return pos_[g].first;
        };
        for (std::size_t g = 0; g < total_groups; ++g) {
            if (g < neg_.size()) {
                ++left_[neg_[g].second];
                ++left_n;
            } else if (zeros > 0 && g == neg_.size()) {
                for (std::size_t c = 0; c < n_classes_; ++c) left_[c] += zero_counts[c];
                left_n += zeros;
            } else {
                ++left_[pos_[g - neg_.size() - (zeros > 0 ? 1 : 0)].second];
                ++left_n;
            }
            if (g + 1 < total_groups) {
                const double cur = item(g);
                const double nxt = item(g + 1);
                if (cur < nxt) consider(cur, nxt);
            }
        }
        return true;
    }

    const std::vector<double>& cols_;
    std::size_t n_rows_;
    std::size_t n_features_;
    std::span<const std::uint32_t> y_;
    std::size_t n_classes_;
    const ForestParams& params_;
    std::size_t mtry_;
    Rng rng_;
    std::vector<std::size_t> order_;
    std::vector<std::pair<double, std::uint32_t>> neg_, pos_;
    std::vector<std::size_t> left_;
    DecisionTree tree_;
};

json tree_to_json(const DecisionTree& t) {
    return json{{"feature", t.feature}, {"threshold", t.threshold},         {"left", t.left},
                {"right", t.right},     {"leaf", t.leaf},                   {"distributions", t.distributions}};
}

DecisionTree tree_from_json(const json& j, std::size_t n_classes, std::size_t n_features) {
    DecisionTree t;
    j.at("feature").get_to(t.feature);
    j.at("threshold").get_to(t.threshold);
    j.at("left").get_to(t.left);
    j.at("right").get_to(t.right);
    j.at("leaf").get_to(t.leaf);
    j.at("distributions").get_to(t.distributions);
    const std::size_t n = t.feature.size();
    if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n || t.leaf.size() != n)
        throw ParseError("forest model: inconsistent tree arrays");
    const auto in_range = [n](std::int32_t v) { return v >= 0 && static_cast<std::size_t>(v) < n; };
    for (std::size_t i = 0; i < n; ++i) {
        if (t.feature[i] < 0) {
            if (t.leaf[i] < 0 || static_cast<std::size_t>(t.leaf[i]) >= t.distributions.size())
                throw ParseError("forest model: bad leaf reference");
        } else if (static_cast<std::size_t>(t.feature[i]) >= n_features || !in_range(t.left[i]) ||
                   !in_range(t.right[i]) || static_cast<std::size_t>(t.left[i]) <= i ||
                   static_cast<std::size_t>(t.right[i]) <= i) {
            throw ParseError("forest model: bad split node");
        }
    }
    for (const auto& d : t.distributions)
        if (d.size() != n_classes) throw ParseError("forest model: bad distribution width");
    return t;
}

}  // namespace

std::span<const double> DecisionTree::predict(std::span<const double> row) const {
    std::size_t node = 0;
    while (feature[node] >= 0) {
        node = row[static_cast<std::size_t>(feature[node])] <= threshold[node] ? static_cast<std::size_t>(left[node])
                                                                                : static_cast<std::size_t>(right[node]);
    }
    return distributions[static_cast<std::size_t>(leaf[node])];
}

Matrix ForestModel::predict_proba(const Matrix& X) const {
    if (trees_.empty()) throw InvalidArgument("predict_proba: empty model");
    if (X.cols() != n_features_) throw InvalidArgument("predict_proba: feature count mismatch");
    Matrix out(X.rows(), n_classes_);
    const double w = 1.0 / static_cast<double>(trees_.size());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        auto dst = out.row(r);
        for (const auto& t : trees_) {
            auto d = t.predict(X.row(r));
            for (std::size_t c = 0; c < n_classes_; ++c) dst[c] += d[c];
        }
        for (double& v : dst) v *= w;
    }
    return out;
}

std::string ForestModel::to_json() const {
    json trees = json::array();
    for (const auto& t : trees_) trees.push_back(tree_to_json(t));
    json j{{"format", kFormat}, {"version", kVersion}, {"n_classes", n_classes_}, {"n_features", n_features_},
           {"trees", std::move(trees)}};
    return j.dump();
}

ForestModel ForestModel::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("forest model: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormat) throw ParseError("forest model: unknown format");
        if (j.at("version").get<int>() != kVersion) throw ParseError("forest model: unsupported version");
        const auto n_classes = j.at("n_classes").get<std::size_t>();
        const auto n_features = j.at("n_features").get<std::size_t>();
        std::vector<DecisionTree> trees;
        for (const auto& t : j.at("trees")) trees.push_back(tree_from_json(t, n_classes, n_features));
        return ForestModel(std::move(trees), n_classes, n_features);
    } catch (const json::exception& e) {
        throw ParseError(std::string("forest model: ") + e.what());
    }
}

void ForestModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_json() << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

ForestModel ForestModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

ForestModel train_random_forest(const Matrix& X, std::span<const std::uint32_t> y, const ForestParams& params) {
    if (X.rows() != y.size()) throw InvalidArgument("train_random_forest: X/y size mismatch");
    if (X.rows() == 0 || X.cols() == 0) throw InvalidArgument("train_random_forest: empty training data");
    if (params.n_trees == 0) throw InvalidArgument("train_random_forest: n_trees must be >= 1");
    if (params.min_leaf == 0) throw InvalidArgument("train_random_forest: min_leaf must be >= 1");
    const std::uint32_t max_label = *std::max_element(y.begin(), y.end());
    const std::size_t n_classes = static_cast<std::size_t>(max_label) + 1;
    if (std::all_of(y.begin(), y.end(), [&](std::uint32_t v) { return v == y.front(); }))
        throw InvalidArgument("train_random_forest: need at least two classes");

    const std::size_t n = X.rows();
    const std::size_t f = X.cols();
    std::vector<double> columns(n * f);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = X.row(r);
        for (std::size_t c = 0; c < f; ++c) columns[c * n + r] = row[c];
    }
    std::size_t mtry = params.max_features.value_or(
        static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(f)))));
    mtry = std::clamp<std::size_t>(mtry, 1, f);

    std::vector<DecisionTree> trees(params.n_trees);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < params.n_trees;) {
            TreeBuilder builder(columns, n, f, y, n_classes, params, mtry, derive_seed(params.seed, t));
            trees[t] = builder.build();
        }
    };
    const std::size_t workers =
        std::min<std::size_t>(params.n_trees, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return ForestModel(std::move(trees), n_classes, f);
}

}  // namespace leaders::classify
