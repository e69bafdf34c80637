#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace leaders::emotion {

enum class Emotion : std::uint8_t { anger, anticipation, disgust, fear, joy, sadness, surprise, trust };

inline constexpr std::size_t kEmotionCount = 8;
inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"};

std::optional<Emotion> parse_emotion(std::string_view name);
std::string_view to_string(Emotion e);

/// Bit i set <=> associated with Emotion(i).
using EmotionSet = std::uint8_t;

class EmotionLexicon {
public:
    /// Adds `emotion` to the set of `word` (lowercased).
    void add(std::string_view word, Emotion emotion);

    /// Emotion set of `word`, or 0 when absent.
    EmotionSet lookup(std::string_view word) const;

    std::size_t size() const noexcept { return entries_.size(); }
    const std::unordered_map<std::string, EmotionSet>& entries() const noexcept { return entries_; }

private:
    std::unordered_map<std::string, EmotionSet> entries_;
};

/// Reads `word<TAB>emotion` rows (an optional third 0/1 association column is
/// honoured, NRC word-level style). Rows for the polarity channels "positive"
/// and "negative" are skipped. Blank lines and '#' comments are ignored.
/// Throws ParseError naming the line for malformed rows or unknown emotions.
EmotionLexicon load_emotion_lexicon(const std::filesystem::path& path);

struct EmotionProfile {
    std::array<std::uint32_t, kEmotionCount> counts{};

    std::uint32_t operator[](Emotion e) const { return counts[static_cast<std::size_t>(e)]; }
    std::uint64_t total() const;

    EmotionProfile& operator+=(const EmotionProfile& other);
    friend bool operator==(const EmotionProfile&, const EmotionProfile&) = default;
};

/// Per-emotion shares; all zero when the underlying counts are all zero.
struct EmotionShares {
    std::array<double, kEmotionCount> shares{};

    double operator[](Emotion e) const { return shares[static_cast<std::size_t>(e)]; }
};

EmotionShares normalize(const EmotionProfile& profile);

/// Each distinct token found in the lexicon adds one to every emotion in its
/// set; repeated tokens are counted once. Expects unstemmed tokens.
EmotionProfile score_emotions(std::span<const std::string> tokens, const EmotionLexicon& lexicon);

/// Sums profiles per key and normalizes each group. Keys with no profiles do
/// not appear in the output.
std::map<std::string, EmotionShares> aggregate_emotions(std::span<const EmotionProfile> profiles,
                                                        std::span<const std::string> keys);

/// CSV `group,anger,...,trust` of normalized shares.
void write_aggregate(const std::filesystem::path& path, const std::map<std::string, EmotionShares>& groups);

}  // namespace leaders::emotion
