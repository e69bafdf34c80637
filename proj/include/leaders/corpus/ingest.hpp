#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "leaders/corpus/tweet.hpp"

namespace leaders::corpus {

struct IngestResult {
    std::vector<RawTweet> tweets;
    IngestStats stats;
};

/// Reads one JSON object per line. Lines that fail to parse, miss a required
/// field, carry an empty id/author/retweeted_author, or repeat an earlier id are
/// skipped and counted; blank lines are ignored. Throws IoError when the file
/// cannot be opened.
IngestResult ingest_jsonl(const std::filesystem::path& path);
IngestResult ingest_jsonl(std::istream& in);

/// Recomputes the counting fields of IngestStats for an already-ingested set.
IngestStats compute_stats(std::span<const RawTweet> tweets, std::size_t malformed_skipped = 0);

/// Keeps tweets whose text contains any keyword (ASCII case-insensitive).
/// An empty keyword list keeps everything.
std::vector<RawTweet> filter_by_keywords(std::vector<RawTweet> tweets,
                                         std::span<const std::string> keywords);

/// Writes tweets back as canonical JSONL (stable field order).
void write_jsonl(const std::filesystem::path& path, std::span<const RawTweet> tweets);

}  // namespace leaders::corpus
