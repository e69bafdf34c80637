#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leaders/error.hpp"
#include "leaders/pipeline/config.hpp"

namespace leaders::pipeline {

enum class Stage { ingest, preprocess, graph, communities, emotions, topics, concerns, classify, report };

inline constexpr std::array<Stage, 9> kStages = {Stage::ingest,   Stage::preprocess, Stage::graph,
                                                 Stage::communities, Stage::emotions, Stage::topics,
                                                 Stage::concerns, Stage::classify,   Stage::report};

std::string_view stage_name(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

/// Wraps any failure inside a stage; what() reads "stage '<name>' failed: ...".
class StageError : public Error {
public:
    StageError(Stage stage, const std::string& cause);
    Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

/// Output layout under the --out directory.
namespace files {
inline constexpr const char* kIngestTweets = "ingest/tweets.jsonl";
inline constexpr const char* kIngestStats = "ingest/stats.json";
inline constexpr const char* kCleanTweets = "preprocess/tweets.jsonl";
inline constexpr const char* kPreprocessSummary = "preprocess/summary.json";
inline constexpr const char* kEdges = "graph/edges.csv";
inline constexpr const char* kPageRank = "graph/pagerank.csv";
inline constexpr const char* kLeaders = "graph/leaders.csv";
inline constexpr const char* kPartition = "communities/partition.csv";
inline constexpr const char* kCommunitySweep = "communities/sweep.csv";
inline constexpr const char* kEmotionProfiles = "emotions/profiles.csv";
inline constexpr const char* kTopicSweep = "topics/sweep.csv";
inline constexpr const char* kTopicWords = "topics/topics.csv";
inline constexpr const char* kConcernLabels = "concerns/labels.csv";
inline constexpr const char* kAlignment = "concerns/alignment.csv";
inline constexpr const char* kChiSquare = "concerns/chi_square.json";
inline constexpr const char* kAblation = "classify/ablation.csv";
inline constexpr const char* kClasses = "classify/classes.csv";
inline constexpr const char* kModel = "classify/model.json";
inline constexpr const char* kVocabulary = "classify/vocabulary.csv";

inline constexpr const char* kReportTable1 = "report/table1_ingest.csv";
inline constexpr const char* kReportEmotionCluster = "report/emotions_by_cluster.csv";
inline constexpr const char* kReportEmotionMonth = "report/emotions_by_month.csv";
inline constexpr const char* kReportWordcloud = "report/wordcloud_terms.csv";
inline constexpr const char* kReportAlignment = "report/alignment.csv";
inline constexpr const char* kReportChiSquare = "report/chi_square.json";
inline constexpr const char* kReportTopics = "report/lda_topics.csv";
inline constexpr const char* kReportSweep = "report/lda_sweep.csv";
inline constexpr const char* kReportAblation = "report/ablation_auc.csv";
}  // namespace files

/// Primary artifact of each stage (the file whose absence forces a rerun).
std::filesystem::path primary_artifact(Stage stage);
std::vector<std::filesystem::path> stage_outputs(Stage stage);
std::vector<std::filesystem::path> report_files();

struct RunOptions {
    /// Rerun stages even when their cache key matches.
    bool force = false;
    std::function<void(std::string_view)> log;
};

struct StageOutcome {
    Stage stage;
    bool ran;  // false when served from cache
};

struct RunSummary {
    std::vector<StageOutcome> stages;
    bool ran(Stage stage) const;
};

/// Runs the given stages in order. A stage is skipped when its manifest key
/// (config section, seed and content hash of every input) is unchanged and
/// all its outputs exist. Upstream artifacts must already exist; otherwise a
/// StageError names the stage to run first.
RunSummary run_stages(const PipelineConfig& config, std::span<const Stage> stages, const RunOptions& options = {});

/// All stages, ingest through report.
RunSummary run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

}  // namespace leaders::pipeline
