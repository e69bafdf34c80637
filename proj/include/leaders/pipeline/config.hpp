#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace leaders::pipeline {

namespace fs = std::filesystem;

struct PreprocessSection {
    fs::path stopwords;
    fs::path slang;
    std::optional<fs::path> dictionary;
    bool spell_correction = false;
    bool stemming = true;
    std::size_t min_token_length = 2;
    /// Optional ingest-time keyword filter (case-insensitive substring).
    std::vector<std::string> keywords;
};

struct GraphSection {
    double damping = 0.85;
    double tol = 1e-10;
    std::size_t max_iter = 200;
    std::size_t leader_top_k = 1000;
    std::size_t max_communities = 10;
};

struct EmotionSection {
    fs::path lexicon;
};

struct LdaSection {
    std::vector<std::size_t> topic_counts{3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t iterations = 500;
    std::size_t burn_in = 200;
    double beta = 0.01;
    std::optional<double> alpha;
    std::size_t min_count = 2;
    std::size_t top_words = 10;
};

struct ConcernsSection {
    /// Built-in lexicon when unset.
    std::optional<fs::path> lexicon;
    double alpha = 0.05;
    std::size_t wordcloud_top = 50;
};

struct ClassifySection {
    std::size_t folds = 5;
    std::size_t repeats = 3;
    std::size_t n_trees = 100;
    std::size_t max_depth = 0;
    std::size_t min_leaf = 1;
    std::optional<std::size_t> max_features;
    std::size_t smote_k = 5;
    std::size_t min_df = 2;
    std::size_t tfidf_max_features = 20000;
    bool standardize = true;
    /// Derived from the global seed when unset.
    std::optional<std::uint64_t> seed;
};

struct PipelineConfig {
    fs::path input;
    fs::path out;
    std::uint64_t seed = 1;
    PreprocessSection preprocess;
    GraphSection graph;
    EmotionSection emotion;
    LdaSection lda;
    ConcernsSection concerns;
    ClassifySection classify;

    /// Throws InvalidArgument on out-of-range values and IoError when a
    /// referenced resource file (stopwords, lexicons, ...) does not exist.
    /// The input corpus is checked by the ingest stage instead.
    void validate() const;
};

/// Defaults pointing at the resource files in `data_dir`.
PipelineConfig default_config(const fs::path& data_dir);

/// Parses a TOML config. Relative paths are resolved against the config
/// file's directory. Unknown keys are rejected.
PipelineConfig load_config(const fs::path& path);

/// Canonical JSON of one section (or "global"), used for cache keys.
std::string section_json(const PipelineConfig& config, std::string_view section);

}  // namespace leaders::pipeline
