#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "leaders/corpus/tweet.hpp"

namespace leaders::corpus {

struct PreprocessConfig {
    std::unordered_set<std::string> stopwords;
    /// Single lowercase token -> replacement phrase. Replacements must not
    /// themselves contain keys, otherwise normalization is not idempotent.
    std::unordered_map<std::string, std::string> slang;
    bool spell_correction = false;
    /// Lexicon for spell correction; unused when spell_correction is off.
    std::unordered_set<std::string> dictionary;
    bool stemming = true;
    std::size_t min_token_length = 2;
};

/// One word per line; blank lines and '#' comments ignored; lowercased.
std::unordered_set<std::string> load_word_list(const std::filesystem::path& path);

/// `key<TAB>replacement` rows. Throws ParseError on malformed rows.
std::unordered_map<std::string, std::string> load_slang_map(const std::filesystem::path& path);

/// Applies, in order: URL removal, ASCII lowercasing, emoji/emoticon removal,
/// @mention and #hashtag removal, slang expansion, then replacement of every
/// remaining non-letter (digits, punctuation, other non-ASCII) by a space.
/// Whitespace is collapsed and trimmed.
std::string normalize_text(std::string_view text, const PreprocessConfig& config);

/// Result of token reduction, keeping the unstemmed form of every kept token.
struct ReducedTokens {
    std::vector<std::string> stemmed;
    std::vector<std::string> unstemmed;
};

/// Whitespace split, stopword removal, optional spell correction, optional
/// Porter stemming, then the min-length filter (applied to the final form).
ReducedTokens reduce_tokens(std::string_view normalized, const PreprocessConfig& config);

/// Stemmed (or unstemmed when stemming is off) tokens only.
std::vector<std::string> tokenize_and_reduce(std::string_view normalized,
                                             const PreprocessConfig& config);

/// Edit-distance-1 correction against `dictionary`. Known words and words with
/// no or several candidates are returned unchanged.
std::string spell_correct(const std::string& word,
                          const std::unordered_set<std::string>& dictionary);

struct PreprocessResult {
    std::vector<CleanTweet> tweets;
    std::size_t dropped_empty = 0;
};

PreprocessResult preprocess_corpus(std::span<const RawTweet> tweets, const PreprocessConfig& config);

}  // namespace leaders::corpus
