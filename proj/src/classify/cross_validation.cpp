#include "leaders/classify/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "leaders/classify/auc.hpp"
#include "leaders/csv.hpp"
#include "leaders/error.hpp"
#include "leaders/rng.hpp"

namespace leaders::classify {

namespace {

std::vector<Document> pick_docs(std::span<const Document> docs, std::span<const std::size_t> rows) {
    std::vector<Document> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(docs[r]);
    return out;
}

Matrix pick(const Matrix* block, std::span<const std::size_t> rows) {
    if (block == nullptr || block->cols() == 0) return Matrix(rows.size(), 0);
    return block->select_rows(rows);
}

std::vector<std::uint32_t> pick_labels(std::span<const std::uint32_t> labels, std::span<const std::size_t> rows) {
    std::vector<std::uint32_t> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(labels[r]);
    return out;
}

void check_input(const CvInput& input) {
    const std::size_t n = input.labels.size();
    if (input.docs.size() != n) throw InvalidArgument("cross-validation: docs/labels size mismatch");
    if (input.emotions && input.emotions->cols() > 0 && input.emotions->rows() != n)
        throw InvalidArgument("cross-validation: emotion rows mismatch");
    if (input.concerns && input.concerns->cols() > 0 && input.concerns->rows() != n)
        throw InvalidArgument("cross-validation: concern rows mismatch");
}

}  // namespace

FoldModel train_fold(const CvInput& input, std::span<const std::size_t> train, FeatureSet set,
                     const CvOptions& options, std::uint64_t seed) {
    check_input(input);
    FoldModel model;
    model.set = set;
    const auto docs = pick_docs(input.docs, train);
    model.tfidf = fit_tfidf(docs, options.tfidf);
    const Matrix text = transform(model.tfidf, docs);
    const Matrix emotions = pick(input.emotions, train);
    const Matrix concerns = pick(input.concerns, train);
    if (options.standardize) {
        if (uses_emotions(set) && emotions.cols() > 0) model.scaling.emotion = Standardizer::fit(emotions);
        if (uses_concerns(set) && concerns.cols() > 0) model.scaling.concern = Standardizer::fit(concerns);
    }
    const auto labels = pick_labels(input.labels, train);
    const FeatureMatrix fm = assemble_features(text, emotions, concerns, labels, set, model.scaling);

    SmoteConfig smote = options.smote;
    smote.seed = derive_seed(seed, "smote");
    const SmoteResult balanced = smote_oversample(fm.values, fm.labels, smote);

    ForestParams forest = options.forest;
    forest.seed = derive_seed(seed, "forest");
    model.forest = train_random_forest(balanced.X, balanced.y, forest);
    return model;
}

Matrix predict_fold(const FoldModel& model, const CvInput& input, std::span<const std::size_t> rows) {
    check_input(input);
    const auto docs = pick_docs(input.docs, rows);
    const Matrix text = transform(model.tfidf, docs);
    const auto labels = pick_labels(input.labels, rows);
    const FeatureMatrix fm = assemble_features(text, pick(input.emotions, rows), pick(input.concerns, rows), labels,
                                               model.set, model.scaling);
    Matrix proba = model.forest.predict_proba(fm.values);
    return proba;
}

std::vector<std::size_t> stratified_folds(std::span<const std::uint32_t> labels, std::size_t folds,
                                          std::uint64_t seed) {
    if (folds < 2) throw InvalidArgument("stratified_folds: need at least 2 folds");
    std::map<std::uint32_t, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    std::vector<std::size_t> fold(labels.size(), 0);
    Rng rng(seed);
    std::size_t offset = 0;
    for (auto& [_, rows] : by_class) {
        rng.shuffle(rows.begin(), rows.end());
        // Continue dealing where the previous class stopped so fold sizes stay even.
        for (std::size_t i = 0; i < rows.size(); ++i) fold[rows[i]] = (offset + i) % folds;
        offset = (offset + rows.size()) % folds;
    }
    return fold;
}

std::string format_mean_sd(double mean_percent, double sd_percent) {
    return fmt::format("{:.1f}({})", mean_percent, static_cast<long long>(std::llround(sd_percent * 10.0)));
}

CvReport cross_validate_ablation(const CvInput& input, const CvOptions& options) {
    check_input(input);
    if (options.repeats == 0) throw InvalidArgument("cross-validation: repeats must be >= 1");

    CvReport report;
    for (FeatureSet set : kAllFeatureSets) report.rows.push_back({set, {}, 0.0, 0.0, {}});

    for (std::size_t rep = 0; rep < options.repeats; ++rep) {
        const std::uint64_t rep_seed = derive_seed(options.seed, rep);
        const auto fold = stratified_folds(input.labels, options.folds, derive_seed(rep_seed, "folds"));
        for (std::size_t k = 0; k < options.folds; ++k) {
            std::vector<std::size_t> train, valid;
            for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == k ? valid : train).push_back(i);
            if (valid.empty() || train.empty()) throw InvalidArgument("cross-validation: empty fold");
            const auto valid_labels = pick_labels(input.labels, valid);
            const std::uint64_t fold_seed = derive_seed(rep_seed, k);
            for (auto& row : report.rows) {
                const FoldModel model = train_fold(input, train, row.set, options, fold_seed);
                const Matrix proba = predict_fold(model, input, valid);
                row.aucs.push_back(macro_auc_ovr(valid_labels, proba).macro);
            }
        }
    }

    for (auto& row : report.rows) {
        const double n = static_cast<double>(row.aucs.size());
        double mean = 0.0;
        for (double a : row.aucs) mean += a;
        mean /= n;
        double var = 0.0;
        for (double a : row.aucs) var += (a - mean) * (a - mean);
        row.mean = mean;
        row.stddev = std::sqrt(var / n);
        row.formatted = format_mean_sd(row.mean * 100.0, row.stddev * 100.0);
    }
    return report;
}

void write_cv_report(const std::filesystem::path& path, const CvReport& report) {
    csv::Writer w(path);
    w.row({"feature_set", "mean_auc", "std_auc", "formatted"});
    for (const auto& row : report.rows)
        w.row({std::string(to_string(row.set)), csv::number(row.mean), csv::number(row.stddev), row.formatted});
}

}  // namespace leaders::classify
