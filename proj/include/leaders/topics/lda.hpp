#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace leaders::topics {

using Document = std::vector<std::string>;

struct LdaConfig {
    std::size_t topics = 5;
    /// Symmetric document-topic prior; 50 / topics when unset.
    std::optional<double> alpha;
    double beta = 0.01;
    std::size_t iterations = 500;
    /// Sweeps discarded before the phi/theta estimates start averaging.
    std::size_t burn_in = 200;
    /// Words occurring fewer times across the corpus are dropped.
    std::size_t min_count = 2;
    std::uint64_t seed = 1;

    double effective_alpha() const { return alpha.value_or(50.0 / static_cast<double>(topics)); }
    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

/// Collapsed Gibbs state plus posterior-mean estimates.
///
/// The integer count arrays describe the final sweep and satisfy
///   sum_w topic_word(k, w) == topic_total(k)
///   sum_k doc_topic(d, k)  == docs[d].size()
/// phi and theta are averages of (n_kw + beta) / (n_k + V beta) and
/// (n_dk + alpha) / (n_d + K alpha) over the sweeps after burn-in.
struct TopicModel {
    std::size_t num_topics = 0;
    double alpha = 0.0;
    double beta = 0.0;

    std::vector<std::string> vocab;  // sorted
    std::unordered_map<std::string, std::uint32_t> word_index;

    /// Training documents as vocabulary ids (pruned words removed); aligned with the input.
    std::vector<std::vector<std::uint32_t>> docs;
    std::vector<std::vector<std::uint32_t>> assignments;

    std::vector<std::uint32_t> topic_word_counts;  // K x V
    std::vector<std::uint32_t> doc_topic_counts;   // D x K
    std::vector<std::uint32_t> topic_totals;       // K

    std::vector<double> phi;    // K x V
    std::vector<double> theta;  // D x K

    /// Joint log p(w, z) after every sweep.
    std::vector<double> log_likelihood;

    std::size_t vocab_size() const noexcept { return vocab.size(); }
    std::size_t doc_count() const noexcept { return docs.size(); }

    std::uint32_t topic_word(std::size_t k, std::size_t w) const { return topic_word_counts[k * vocab.size() + w]; }
    std::uint32_t doc_topic(std::size_t d, std::size_t k) const { return doc_topic_counts[d * num_topics + k]; }
    double phi_at(std::size_t k, std::size_t w) const { return phi[k * vocab.size() + w]; }
    double theta_at(std::size_t d, std::size_t k) const { return theta[d * num_topics + k]; }

    /// True when the count arrays agree with the assignments and each other.
    bool counts_consistent() const;
};

using SweepObserver = std::function<void(std::size_t sweep, const TopicModel& state)>;

/// Fits LDA by collapsed Gibbs sampling; deterministic for a given seed.
/// Throws InvalidArgument when no document keeps a token after pruning.
TopicModel fit_lda(std::span<const Document> docs, const LdaConfig& config,
                   const SweepObserver& observer = {});

/// Highest-phi words of topic k, ties in vocabulary (lexicographic) order.
std::vector<std::string> top_words(const TopicModel& model, std::size_t topic, std::size_t n = 10);

/// Training-set perplexity from the fitted theta and phi.
double perplexity(const TopicModel& model);

/// Held-out perplexity: theta for each document is folded in by `sweeps` Gibbs
/// sweeps with phi frozen. Out-of-vocabulary tokens are skipped. Throws
/// InvalidArgument when no token is scorable.
double held_out_perplexity(const TopicModel& model, std::span<const Document> docs,
                           std::size_t sweeps = 50, std::uint64_t seed = 1);

inline constexpr double kNoCoherence = -std::numeric_limits<double>::infinity();

/// UMass coherence per topic over the top-n words w_1..w_n (phi descending):
///   C = sum_{i<j} ln((D(w_i, w_j) + 1) / D(w_i))
/// with document frequencies taken from `docs`. A zero denominator yields
/// kNoCoherence for that topic.
std::vector<double> umass_coherence(const TopicModel& model, std::span<const Document> docs,
                                    std::size_t n = 10);

struct SweepRow {
    std::size_t topics = 0;
    double perplexity = 0.0;
    double mean_coherence = 0.0;
    /// Set when the fit for this topic count failed; other fields are then unused.
    std::optional<std::string> error;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ascending topic count
    std::vector<std::optional<TopicModel>> models;
    /// Row with the highest mean coherence (smallest K on ties); nullopt if every fit failed.
    std::optional<std::size_t> selected;
};

/// One fit per topic count with the template's seed; alpha follows 50 / K unless
/// the template fixes it. Failed fits are recorded and the sweep continues.
SweepResult sweep_topic_count(std::span<const Document> docs, std::span<const std::size_t> topic_counts,
                              const LdaConfig& config_template, std::size_t coherence_top_n = 10);

/// CSV `topic,rank,word,probability`.
void write_topic_report(const std::filesystem::path& path, const TopicModel& model, std::size_t n = 10);
/// CSV `K,perplexity,mean_coherence`.
void write_sweep_report(const std::filesystem::path& path, const SweepResult& sweep);

}  // namespace leaders::topics
