#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "leaders/classify/features.hpp"
#include "leaders/classify/forest.hpp"
#include "leaders/classify/smote.hpp"
#include "leaders/classify/tfidf.hpp"

namespace leaders::classify {

/// Row-aligned inputs for the ablation: tweet i is docs[i], emotions.row(i),
/// concerns.row(i) and labels[i].
struct CvInput {
    std::span<const Document> docs;
    const Matrix* emotions = nullptr;  // N x 8 shares
    const Matrix* concerns = nullptr;  // N x C indicators
    std::span<const std::uint32_t> labels;
};

struct CvOptions {
    std::size_t folds = 5;
    std::size_t repeats = 3;
    TfidfOptions tfidf;
    bool standardize = true;
    SmoteConfig smote;
    ForestParams forest;
    std::uint64_t seed = 1;
};

/// Everything learned from one training split.
struct FoldModel {
    TfidfModel tfidf;
    DenseScaling scaling;
    ForestModel forest;
    FeatureSet set = FeatureSet::text_emotions_concerns;
};

/// Fits TF-IDF, standardization, SMOTE and the forest on `train` rows only.
FoldModel train_fold(const CvInput& input, std::span<const std::size_t> train, FeatureSet set,
                     const CvOptions& options, std::uint64_t seed);

/// Class probabilities for `rows`.
Matrix predict_fold(const FoldModel& model, const CvInput& input, std::span<const std::size_t> rows);

/// Fold id per row; each class is shuffled and dealt round-robin.
std::vector<std::size_t> stratified_folds(std::span<const std::uint32_t> labels, std::size_t folds,
                                          std::uint64_t seed);

struct CvCell {
    FeatureSet set;
    std::vector<double> aucs;  // folds x repeats, repeat-major
    double mean = 0.0;
    double stddev = 0.0;       // population
    std::string formatted;     // percent, "mean(sd in tenths)"
};

struct CvReport {
    std::vector<CvCell> rows;  // one per feature set in kAllFeatureSets order
};

/// "96.0(2)" style: mean to one decimal, standard deviation in units of the
/// last digit. Both arguments in percent.
std::string format_mean_sd(double mean_percent, double sd_percent);

/// Repeated stratified k-fold evaluation of the four feature sets. Every fit
/// (TF-IDF, scaling, SMOTE, forest) sees training rows only.
CvReport cross_validate_ablation(const CvInput& input, const CvOptions& options);

/// CSV `feature_set,mean_auc,std_auc,formatted`.
void write_cv_report(const std::filesystem::path& path, const CvReport& report);

}  // namespace leaders::classify
