#include "leaders/emotion/emotion.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "leaders/csv.hpp"
#include "leaders/error.hpp"

namespace leaders::emotion {

namespace {

std::string lower_trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    std::string out(s.substr(first, last - first + 1));
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return out;
}

}  // namespace

std::optional<Emotion> parse_emotion(std::string_view name) {
    for (std::size_t i = 0; i < kEmotionCount; ++i)
        if (kEmotionNames[i] == name) return static_cast<Emotion>(i);
    return std::nullopt;
}

std::string_view to_string(Emotion e) { return kEmotionNames[static_cast<std::size_t>(e)]; }

void EmotionLexicon::add(std::string_view word, Emotion emotion) {
    entries_[lower_trim(word)] |= static_cast<EmotionSet>(1u << static_cast<unsigned>(emotion));
}

EmotionSet EmotionLexicon::lookup(std::string_view word) const {
    auto it = entries_.find(std::string(word));
    return it == entries_.end() ? EmotionSet{0} : it->second;
}

EmotionLexicon load_emotion_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open emotion lexicon: " + path.string());
    EmotionLexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lower_trim(line).empty() || line.front() == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError("expected word<TAB>emotion in " + path.string(), line_no);
        const std::string word = lower_trim(fields[0]);
        const std::string name = lower_trim(fields[1]);
        if (word.empty()) throw ParseError("empty word in " + path.string(), line_no);
        if (fields.size() == 3) {
            const std::string flag = lower_trim(fields[2]);
            if (flag != "0" && flag != "1")
                throw ParseError("association flag must be 0 or 1 in " + path.string(), line_no);
            if (flag == "0") continue;
        }
        if (name == "positive" || name == "negative") continue;
        const auto e = parse_emotion(name);
        if (!e) throw ParseError("unknown emotion '" + name + "' in " + path.string(), line_no);
        lexicon.add(word, *e);
    }
    return lexicon;
}

std::uint64_t EmotionProfile::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

EmotionProfile& EmotionProfile::operator+=(const EmotionProfile& other) {
    for (std::size_t i = 0; i < kEmotionCount; ++i) counts[i] += other.counts[i];
    return *this;
}

EmotionShares normalize(const EmotionProfile& profile) {
    EmotionShares out;
    const auto total = profile.total();
    if (total == 0) return out;
    for (std::size_t i = 0; i < kEmotionCount; ++i)
        out.shares[i] = static_cast<double>(profile.counts[i]) / static_cast<double>(total);
    return out;
}

EmotionProfile score_emotions(std::span<const std::string> tokens, const EmotionLexicon& lexicon) {
    EmotionProfile profile;
    std::unordered_set<std::string_view> seen;
    for (const auto& token : tokens) {
        if (!seen.insert(token).second) continue;
        const EmotionSet set = lexicon.lookup(token);
        for (std::size_t i = 0; i < kEmotionCount; ++i)
            if (set & (1u << i)) ++profile.counts[i];
    }
    return profile;
}

std::map<std::string, EmotionShares> aggregate_emotions(std::span<const EmotionProfile> profiles,
                                                        std::span<const std::string> keys) {
    if (profiles.size() != keys.size()) throw InvalidArgument("profiles and keys differ in length");
    std::map<std::string, EmotionProfile> sums;
    for (std::size_t i = 0; i < profiles.size(); ++i) sums[keys[i]] += profiles[i];
    std::map<std::string, EmotionShares> out;
    for (const auto& [key, sum] : sums) out.emplace(key, normalize(sum));
    return out;
}

void write_aggregate(const std::filesystem::path& path, const std::map<std::string, EmotionShares>& groups) {
    csv::Writer out(path);
    std::vector<std::string> header{"group"};
    for (auto name : kEmotionNames) header.emplace_back(name);
    out.row(header);
    for (const auto& [key, shares] : groups) {
        std::vector<std::string> row{key};
        for (double s : shares.shares) row.push_back(csv::number(s));
        out.row(row);
    }
}

}  // namespace leaders::emotion
