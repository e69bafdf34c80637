#include "leaders/corpus/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <unordered_set>

#include "json.hpp"

#include "leaders/error.hpp"

namespace leaders::corpus {

namespace {

using nlohmann::json;

std::optional<std::string> string_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

std::optional<RawTweet> parse_record(const std::string& line) {
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!obj.is_object()) return std::nullopt;

    RawTweet tweet;
    auto id = string_field(obj, "id");
    // Numeric ids are common in exported tweet dumps.
    if (!id) {
        auto it = obj.find("id");
        if (it != obj.end() && it->is_number_integer()) id = std::to_string(it->get<long long>());
    }
    auto author = string_field(obj, "author");
    auto created = string_field(obj, "created_at");
    auto text = string_field(obj, "text");
    if (!id || id->empty() || !author || author->empty() || !created || !text) return std::nullopt;

    auto ts = parse_timestamp(*created);
    if (!ts) return std::nullopt;

    if (auto it = obj.find("retweeted_author"); it != obj.end() && !it->is_null()) {
        if (!it->is_string() || it->get_ref<const std::string&>().empty()) return std::nullopt;
        tweet.retweeted_author = it->get<std::string>();
    }
    tweet.id = std::move(*id);
    tweet.author = std::move(*author);
    tweet.created_at = *ts;
    tweet.text = std::move(*text);
    return tweet;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

IngestResult ingest_jsonl(std::istream& in) {
    IngestResult result;
    std::unordered_set<std::string> seen_ids;
    std::size_t malformed = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (is_blank(line)) continue;
        auto tweet = parse_record(line);
        if (!tweet || !seen_ids.insert(tweet->id).second) {
            ++malformed;
            continue;
        }
        result.tweets.push_back(std::move(*tweet));
    }
    if (in.bad()) throw IoError("read error while ingesting tweets");
    result.stats = compute_stats(result.tweets, malformed);
    return result;
}

IngestResult ingest_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tweet file: " + path.string());
    return ingest_jsonl(in);
}

IngestStats compute_stats(std::span<const RawTweet> tweets, std::size_t malformed_skipped) {
    IngestStats stats;
    std::set<std::string_view> users;
    for (const auto& t : tweets) {
        ++stats.total;
        if (t.is_retweet()) {
            ++stats.retweets;
            users.insert(*t.retweeted_author);
        } else {
            ++stats.originals;
        }
        users.insert(t.author);
    }
    stats.distinct_users = users.size();
    stats.malformed_skipped = malformed_skipped;
    return stats;
}

std::vector<RawTweet> filter_by_keywords(std::vector<RawTweet> tweets,
                                         std::span<const std::string> keywords) {
    if (keywords.empty()) return tweets;
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    std::vector<std::string> needles;
    for (const auto& k : keywords) needles.push_back(lower(k));
    std::erase_if(tweets, [&](const RawTweet& t) {
        const std::string hay = lower(t.text);
        return std::none_of(needles.begin(), needles.end(),
                            [&](const std::string& n) { return hay.find(n) != std::string::npos; });
    });
    return tweets;
}

void write_jsonl(const std::filesystem::path& path, std::span<const RawTweet> tweets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& t : tweets) {
        nlohmann::ordered_json obj;
        obj["id"] = t.id;
        obj["author"] = t.author;
        obj["created_at"] = format_timestamp(t.created_at);
        obj["text"] = t.text;
        if (t.retweeted_author) obj["retweeted_author"] = *t.retweeted_author;
        out << obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
}

}  // namespace leaders::corpus
