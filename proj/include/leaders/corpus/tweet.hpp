#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace leaders::corpus {

using Timestamp = std::chrono::sys_seconds;

struct RawTweet {
    std::string id;
    std::string author;
    Timestamp created_at{};
    std::string text;
    /// Handle of the retweeted account; empty optional for original tweets.
    std::optional<std::string> retweeted_author;

    bool is_retweet() const noexcept { return retweeted_author.has_value(); }

    friend bool operator==(const RawTweet&, const RawTweet&) = default;
};

struct CleanTweet {
    std::string id;
    std::string author;
    Timestamp created_at{};
    /// Lowercase stemmed tokens (stemming per PreprocessConfig).
    std::vector<std::string> tokens;
    /// The same tokens before stemming, for lexicon lookups.
    std::vector<std::string> unstemmed_tokens;
    bool is_retweet = false;

    /// Space-joined tokens.
    std::string clean_text() const;

    friend bool operator==(const CleanTweet&, const CleanTweet&) = default;
};

/// Counts in the layout of a dataset-description table.
struct IngestStats {
    std::size_t total = 0;
    std::size_t originals = 0;
    std::size_t retweets = 0;
    std::size_t distinct_users = 0;
    std::size_t malformed_skipped = 0;

    friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

/// Parses "YYYY-MM-DDTHH:MM:SS" with an optional fractional part and a "Z" or
/// "+HH:MM"/"-HH:MM" offset. A bare date is accepted as midnight UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Canonical "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

/// "YYYY-MM" of the UTC calendar month.
std::string month_key(Timestamp t);

}  // namespace leaders::corpus
