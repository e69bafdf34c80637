#include "leaders/corpus/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "leaders/corpus/porter_stemmer.hpp"
#include "leaders/error.hpp"

namespace leaders::corpus {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string to_lower_ascii(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

bool is_lower_alpha(char c) { return c >= 'a' && c <= 'z'; }
bool is_lower_alnum(char c) { return is_lower_alpha(c) || (c >= '0' && c <= '9'); }

// Decodes one UTF-8 sequence starting at s[i]; returns its length (at least 1)
// and the code point (U+FFFD for invalid bytes).
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
    const auto c0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (c0 < 0x80) { cp = c0; return 1; }
    if ((c0 >> 5) == 0x6) { len = 2; cp = c0 & 0x1F; }
    else if ((c0 >> 4) == 0xE) { len = 3; cp = c0 & 0x0F; }
    else if ((c0 >> 3) == 0x1E) { len = 4; cp = c0 & 0x07; }
    else { cp = 0xFFFD; return 1; }
    if (i + len > s.size()) { cp = 0xFFFD; return 1; }
    for (std::size_t k = 1; k < len; ++k) {
        const auto ck = static_cast<unsigned char>(s[i + k]);
        if ((ck >> 6) != 0x2) { cp = 0xFFFD; return 1; }
        cp = (cp << 6) | (ck & 0x3F);
    }
    return len;
}

bool is_emoji(char32_t cp) {
    return (cp >= 0x1F000 && cp <= 0x1FAFF)   // pictographs, emoticons, transport, flags
        || (cp >= 0x2600 && cp <= 0x27BF)     // misc symbols, dingbats
        || (cp >= 0x2300 && cp <= 0x23FF)     // misc technical (watch, hourglass)
        || (cp >= 0x2B00 && cp <= 0x2BFF)     // arrows, stars
        || (cp >= 0xFE00 && cp <= 0xFE0F)     // variation selectors
        || (cp >= 0xE0020 && cp <= 0xE007F)   // tag sequences
        || cp == 0x200D || cp == 0x20E3 || cp == 0x3030 || cp == 0x303D
        || cp == 0x3297 || cp == 0x3299 || cp == 0x00A9 || cp == 0x00AE || cp == 0x2122;
}

const std::regex& url_pattern() {
    static const std::regex re(R"((?:https?://|www\.)\S*)", std::regex::icase | std::regex::optimize);
    return re;
}

// Western emoticons after lowercasing, e.g. ":)", ";-(", ":d", "=p", "<3".
const std::regex& emoticon_pattern() {
    static const std::regex re(R"((?:[:;=][-'o*^]?[)(\]\[dpo/\\|*3@$x](?![a-z]))|<3+|</3)",
                               std::regex::optimize);
    return re;
}

const std::regex& mention_hashtag_pattern() {
    static const std::regex re(R"([@#][a-z0-9_]+)", std::regex::optimize);
    return re;
}

std::string remove_emoji(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        char32_t cp = 0;
        const std::size_t len = decode_utf8(s, i, cp);
        if (is_emoji(cp)) out += ' ';
        else out.append(s.substr(i, len));
        i += len;
    }
    return std::regex_replace(out, emoticon_pattern(), " ");
}

// Slang keys are matched against maximal [a-z0-9] runs. When a run containing a
// digit is not a key, its letter-only sub-runs are looked up as well, so a
// later digit-stripping pass cannot expose a new key.
std::string expand_slang(std::string_view s, const std::unordered_map<std::string, std::string>& slang) {
    if (slang.empty()) return std::string(s);
    auto lookup_letters = [&](std::string_view run, std::string& out) {
        std::size_t i = 0;
        while (i < run.size()) {
            if (!is_lower_alpha(run[i])) { out += run[i++]; continue; }
            std::size_t j = i;
            while (j < run.size() && is_lower_alpha(run[j])) ++j;
            const std::string word(run.substr(i, j - i));
            auto it = slang.find(word);
            out += it != slang.end() ? it->second : word;
            i = j;
        }
    };
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_lower_alnum(s[i])) { out += s[i++]; continue; }
        std::size_t j = i;
        while (j < s.size() && is_lower_alnum(s[j])) ++j;
        const std::string_view run = s.substr(i, j - i);
        auto it = slang.find(std::string(run));
        if (it != slang.end()) out += it->second;
        else lookup_letters(run, out);
        i = j;
    }
    return out;
}

std::string letters_only(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (is_lower_alpha(c)) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += c;
        } else {
            pending_space = true;
        }
    }
    return out;
}

}  // namespace

std::unordered_set<std::string> load_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open word list: " + path.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto word = trim(line);
        if (word.empty() || word.front() == '#') continue;
        words.insert(to_lower_ascii(std::move(word)));
    }
    return words;
}

std::unordered_map<std::string, std::string> load_slang_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open slang map: " + path.string());
    std::unordered_map<std::string, std::string> slang;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("slang row without a tab: " + path.string(), line_no);
        auto key = to_lower_ascii(trim(std::string_view(line).substr(0, tab)));
        auto value = to_lower_ascii(trim(std::string_view(line).substr(tab + 1)));
        if (key.empty() || key.find(' ') != std::string::npos ||
            !std::all_of(key.begin(), key.end(), is_lower_alnum))
            throw ParseError("slang key must be a single alphanumeric token: " + path.string(), line_no);
        slang[key] = value;
    }
    return slang;
}

std::string normalize_text(std::string_view text, const PreprocessConfig& config) {
    std::string s = std::regex_replace(std::string(text), url_pattern(), " ");
    s = to_lower_ascii(std::move(s));
    s = remove_emoji(s);
    s = std::regex_replace(s, mention_hashtag_pattern(), " ");
    s = expand_slang(s, config.slang);
    return letters_only(s);
}

std::string spell_correct(const std::string& word, const std::unordered_set<std::string>& dictionary) {
    if (dictionary.empty() || dictionary.contains(word)) return word;
    const std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz";
    std::string found;
    bool ambiguous = false;
    auto consider = [&](const std::string& candidate) {
        if (!dictionary.contains(candidate)) return;
        if (found.empty()) found = candidate;
        else if (found != candidate) ambiguous = true;
    };
    for (std::size_t i = 0; i < word.size(); ++i) {
        std::string deleted = word;
        deleted.erase(i, 1);
        consider(deleted);
        for (char c : alphabet) {
            if (c == word[i]) continue;
            std::string replaced = word;
            replaced[i] = c;
            consider(replaced);
        }
    }
    for (std::size_t i = 0; i <= word.size(); ++i) {
        for (char c : alphabet) {
            std::string inserted = word;
            inserted.insert(inserted.begin() + static_cast<std::ptrdiff_t>(i), c);
            consider(inserted);
        }
    }
    return (found.empty() || ambiguous) ? word : found;
}

ReducedTokens reduce_tokens(std::string_view normalized, const PreprocessConfig& config) {
    ReducedTokens out;
    std::size_t i = 0;
    while (i < normalized.size()) {
        while (i < normalized.size() && normalized[i] == ' ') ++i;
        std::size_t j = i;
        while (j < normalized.size() && normalized[j] != ' ') ++j;
        if (j == i) break;
        std::string token(normalized.substr(i, j - i));
        i = j;
        if (config.stopwords.contains(token)) continue;
        if (config.spell_correction) {
            token = spell_correct(token, config.dictionary);
            if (config.stopwords.contains(token)) continue;
        }
        std::string final_form = config.stemming ? porter_stem(token) : token;
        if (final_form.size() < config.min_token_length) continue;
        out.stemmed.push_back(std::move(final_form));
        out.unstemmed.push_back(std::move(token));
    }
    return out;
}

std::vector<std::string> tokenize_and_reduce(std::string_view normalized, const PreprocessConfig& config) {
    return reduce_tokens(normalized, config).stemmed;
}

PreprocessResult preprocess_corpus(std::span<const RawTweet> tweets, const PreprocessConfig& config) {
    PreprocessResult result;
    result.tweets.reserve(tweets.size());
    for (const auto& raw : tweets) {
        auto reduced = reduce_tokens(normalize_text(raw.text, config), config);
        if (reduced.stemmed.empty()) {
            ++result.dropped_empty;
            continue;
        }
        CleanTweet clean;
        clean.id = raw.id;
        clean.author = raw.author;
        clean.created_at = raw.created_at;
        clean.tokens = std::move(reduced.stemmed);
        clean.unstemmed_tokens = std::move(reduced.unstemmed);
        clean.is_retweet = raw.is_retweet();
        result.tweets.push_back(std::move(clean));
    }
    return result;
}

}  // namespace leaders::corpus
