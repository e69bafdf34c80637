#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "leaders/corpus/tweet.hpp"

namespace leaders::pipeline {

struct FixtureCluster {
    std::string name;
    double proportion = 0.0;
    std::vector<std::string> vocabulary;
    /// Concern keywords this cluster mentions more often than others.
    std::vector<std::string> concern_words;
    /// Emotion-lexicon words skewed toward this cluster.
    std::vector<std::string> emotion_words;
};

struct FixtureSpec {
    std::vector<FixtureCluster> clusters;
    std::vector<std::string> shared_vocabulary;
    /// Original tweets; split across clusters by largest remainder.
    std::size_t originals = 4000;
    /// Retweet records per original.
    double retweet_ratio = 1.0;
    std::size_t hubs_per_cluster = 4;
    /// Ordinary accounts per original tweet of the cluster.
    double members_per_original = 0.12;
    /// Share of originals written by hubs.
    double hub_share = 0.5;
    /// Probability that a retweet stays inside the retweeter's cluster.
    double p_intra = 0.95;
    std::size_t min_words = 8;
    std::size_t max_words = 14;
    /// Per-word source mix; the remainder comes from the shared vocabulary.
    double p_cluster_word = 0.2;
    double p_concern_word = 0.2;
    double p_emotion_word = 0.2;
    /// Probability that a topical word is borrowed from another cluster.
    double p_cross_talk = 0.3;
    /// Probability that a concern or emotion word comes from the cluster's
    /// own skewed list rather than the pooled lists.
    double p_skew = 0.85;
    corpus::Timestamp start;
    corpus::Timestamp end;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Four clusters (news, health, research, politics) in proportions
/// 0.36/0.33/0.18/0.13 with hand-written vocabularies.
FixtureSpec default_fixture_spec(std::size_t originals = 4000, std::uint64_t seed = 1);

/// Largest-remainder apportionment of `total` by `proportions` (ties go to the
/// lower index).
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& proportions);

struct Fixture {
    std::vector<corpus::RawTweet> tweets;   // chronological
    std::map<std::string, std::size_t> author_cluster;
    std::map<std::string, std::size_t> tweet_cluster;  // originals only
    std::vector<std::string> hubs;          // all hub handles
    std::vector<std::size_t> original_counts;  // per cluster
    std::vector<std::string> cluster_names;
};

Fixture generate_fixture(const FixtureSpec& spec);

/// Writes `<stem>.jsonl` and the ground-truth sidecar `<stem>.truth.json`.
void write_fixture(const std::filesystem::path& jsonl_path, const Fixture& fixture);

std::filesystem::path truth_path_for(const std::filesystem::path& jsonl_path);

}  // namespace leaders::pipeline
