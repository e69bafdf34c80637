#include "leaders/pipeline/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "leaders/corpus/ingest.hpp"
#include "leaders/error.hpp"
#include "leaders/rng.hpp"

namespace leaders::pipeline {

namespace {

using namespace std::chrono;

std::vector<std::string> words(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[rng.below(items.size())];
}

constexpr const char* kHashtags[] = {"#covid19", "#coronavirus", "#stayhome", "#flattenthecurve", "#socialdistancing"};
constexpr const char* kEmoji[] = {"\xF0\x9F\x98\xB7", "\xF0\x9F\xA6\xA0", "\xF0\x9F\x99\x8F", "\xF0\x9F\x98\xA2", "\xE2\x9D\xA4\xEF\xB8\x8F"};
constexpr const char* kSlang[] = {"ppl", "pls", "govt", "btw", "imo", "2day"};

std::string random_url(Rng& rng) {
    static constexpr char kAlnum[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    std::string s = "https://t.co/";
    for (int i = 0; i < 10; ++i) s += kAlnum[rng.below(sizeof(kAlnum) - 1)];
    return s;
}

}  // namespace

void FixtureSpec::validate() const {
    if (clusters.empty()) throw InvalidArgument("fixture: no clusters");
    double total = 0.0;
    for (const auto& c : clusters) {
        if (!(c.proportion > 0.0)) throw InvalidArgument("fixture: empty cluster '" + c.name + "'");
        if (c.vocabulary.empty()) throw InvalidArgument("fixture: cluster '" + c.name + "' has no vocabulary");
        total += c.proportion;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("fixture: proportions must sum to 1");
    if (shared_vocabulary.empty()) throw InvalidArgument("fixture: empty shared vocabulary");
    if (hubs_per_cluster == 0) throw InvalidArgument("fixture: hubs_per_cluster must be >= 1");
    if (min_words == 0 || min_words > max_words) throw InvalidArgument("fixture: bad word-count range");
    if (!(start < end)) throw InvalidArgument("fixture: empty time span");
    if (retweet_ratio < 0.0 || members_per_original < 0.0) throw InvalidArgument("fixture: negative rate");
    for (double p : {hub_share, p_intra, p_skew, p_cluster_word, p_concern_word, p_emotion_word, p_cross_talk})
        if (p < 0.0 || p > 1.0) throw InvalidArgument("fixture: probability outside [0, 1]");
    if (p_cluster_word + p_concern_word + p_emotion_word > 1.0)
        throw InvalidArgument("fixture: word-source probabilities exceed 1");
    for (std::size_t n : apportion(originals, [&] {
             std::vector<double> p;
             for (const auto& c : clusters) p.push_back(c.proportion);
             return p;
         }()))
        if (n == 0) throw InvalidArgument("fixture: a cluster receives no tweets");
}

std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& proportions) {
    std::vector<std::size_t> out(proportions.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < proportions.size(); ++i) {
        const double exact = proportions[i] * static_cast<double>(total);
        // Guard against 0.36 * 4000 landing a hair below 1440.
        const double fl = std::floor(exact + 1e-9);
        out[i] = static_cast<std::size_t>(fl);
        assigned += out[i];
        remainders.emplace_back(std::max(0.0, exact - fl), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total && k < remainders.size(); ++k, ++assigned) ++out[remainders[k].second];
    return out;
}

FixtureSpec default_fixture_spec(std::size_t originals, std::uint64_t seed) {
    FixtureSpec spec;
    spec.originals = originals;
    spec.seed = seed;
    spec.start = sys_days{year{2020} / February / 1};
    spec.end = sys_days{year{2020} / May / 1};
    spec.shared_vocabulary = words(
        "people today week world time day country city home family work school life year month community "
        "number new case cases virus coronavirus covid spread everyone still need know think going");
    spec.clusters = {
        {"news", 0.36,
         words("breaking report update headline press story coverage journalist anchor broadcast editor newsroom "
               "bulletin announce statement briefing correspondent interview channel station radio television "
               "reporter article column exclusive confirmed developing"),
         words("travel flight trip airplane flying"),
         words("surprise shocking sudden unexpected wow stunned astonishing unbelievable")},
        {"health", 0.33,
         words("hospital patient nurse clinic ward icu ventilator treatment therapy medicine physician surgeon bed "
               "ambulance testing diagnosis caregiver pharmacy prescription infection immune fever cough "
               "respiratory intensive admitted discharge clinical"),
         words("symptom symptoms mask masks wash hands hygiene"),
         words("fear afraid scared worry panic sad grief suffering tears lonely")},
        {"research", 0.18,
         words("study researcher laboratory dataset analysis paper journal preprint genome sequencing trial "
               "experiment sample statistics hypothesis evidence peer university professor antibody protein "
               "virology epidemiology simulation findings publication method"),
         words("vaccine vaccination vaccines"),
         words("trust reliable confident science verified expert hope expect progress")},
        {"politics", 0.13,
         words("government president minister senator congress parliament election campaign policy legislation "
               "bill vote governor mayor party opposition administration federal budget stimulus debate cabinet "
               "lawmaker ballot coalition reform"),
         words("pandemic epidemic pandemics"),
         words("angry outrage furious hate blame disgrace scandal disgusting shameful vile")},
    };
    return spec;
}

Fixture generate_fixture(const FixtureSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, "fixture"));
    const std::size_t k = spec.clusters.size();
    std::vector<double> proportions;
    for (const auto& c : spec.clusters) proportions.push_back(c.proportion);
    const auto counts = apportion(spec.originals, proportions);

    std::vector<std::string> all_concern, all_emotion;
    for (const auto& c : spec.clusters) {
        all_concern.insert(all_concern.end(), c.concern_words.begin(), c.concern_words.end());
        all_emotion.insert(all_emotion.end(), c.emotion_words.begin(), c.emotion_words.end());
    }

    Fixture fx;
    fx.original_counts = counts;
    std::vector<std::vector<std::string>> hubs(k), members(k);
    for (std::size_t c = 0; c < k; ++c) {
        fx.cluster_names.push_back(spec.clusters[c].name);
        for (std::size_t h = 0; h < spec.hubs_per_cluster; ++h) {
            hubs[c].push_back(fmt::format("{}_hub_{}", spec.clusters[c].name, h + 1));
            fx.author_cluster[hubs[c].back()] = c;
            fx.hubs.push_back(hubs[c].back());
        }
        const auto m = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::llround(spec.members_per_original * static_cast<double>(counts[c]))));
        for (std::size_t i = 0; i < m; ++i) {
            members[c].push_back(fmt::format("{}_user_{:04}", spec.clusters[c].name, i + 1));
            fx.author_cluster[members[c].back()] = c;
        }
    }
    std::vector<std::string> every_handle;
    for (const auto& [h, _] : fx.author_cluster) every_handle.push_back(h);

    auto topical = [&](std::size_t c) -> const std::string& {
        if (k > 1 && rng.bernoulli(spec.p_cross_talk)) {
            std::size_t other = rng.below(k - 1);
            if (other >= c) ++other;
            return pick(rng, spec.clusters[other].vocabulary);
        }
        return pick(rng, spec.clusters[c].vocabulary);
    };
    auto skewed = [&](const std::vector<std::string>& own, const std::vector<std::string>& all) -> const std::string& {
        if (own.empty() || !rng.bernoulli(spec.p_skew)) return pick(rng, all);
        return pick(rng, own);
    };

    auto compose = [&](std::size_t c) {
        const auto& cl = spec.clusters[c];
        const std::size_t n = spec.min_words + rng.below(spec.max_words - spec.min_words + 1);
        std::vector<std::string> parts;
        if (rng.bernoulli(0.25)) parts.push_back("@" + pick(rng, every_handle));
        for (std::size_t i = 0; i < n; ++i) {
            const double r = rng.uniform();
            std::string w;
            if (r < spec.p_cluster_word) w = topical(c);
            else if (r < spec.p_cluster_word + spec.p_concern_word && !all_concern.empty())
                w = skewed(cl.concern_words, all_concern);
            else if (r < spec.p_cluster_word + spec.p_concern_word + spec.p_emotion_word && !all_emotion.empty())
                w = skewed(cl.emotion_words, all_emotion);
            else w = pick(rng, spec.shared_vocabulary);
            if (rng.bernoulli(0.05)) w = fmt::format("{}!", w);
            if (rng.bernoulli(0.04)) for (auto& ch : w) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            parts.push_back(std::move(w));
            if (rng.bernoulli(0.03)) parts.emplace_back(kSlang[rng.below(std::size(kSlang))]);
        }
        for (auto& p : parts) {
            if (p.front() == '@') continue;
            p[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(p[0])));
            break;
        }
        if (rng.bernoulli(0.15)) parts.push_back(fmt::format("{}", 2 + rng.below(998)));
        if (rng.bernoulli(0.3)) parts.emplace_back(kHashtags[rng.below(std::size(kHashtags))]);
        if (rng.bernoulli(0.2)) parts.emplace_back(kEmoji[rng.below(std::size(kEmoji))]);
        if (rng.bernoulli(0.35)) parts.push_back(random_url(rng));
        std::string text;
        for (const auto& p : parts) {
            if (!text.empty()) text += ' ';
            text += p;
        }
        return text;
    };

    const auto span_s = duration_cast<seconds>(spec.end - spec.start).count();
    struct Pending {
        corpus::RawTweet tweet;
        std::size_t cluster;
        bool original;
    };
    std::vector<Pending> pending;
    std::vector<std::vector<std::size_t>> originals_of(k);

    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            corpus::RawTweet t;
            t.author = rng.bernoulli(spec.hub_share) ? pick(rng, hubs[c]) : pick(rng, members[c]);
            t.created_at = spec.start + seconds(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span_s))));
            t.text = compose(c);
            originals_of[c].push_back(pending.size());
            pending.push_back({std::move(t), c, true});
        }
    }

    const auto retweets = static_cast<std::size_t>(std::llround(spec.retweet_ratio * static_cast<double>(spec.originals)));
    for (std::size_t i = 0; i < retweets; ++i) {
        // Cluster of the retweeter, drawn by proportion.
        double r = rng.uniform();
        std::size_t c = 0;
        while (c + 1 < k && r >= proportions[c]) r -= proportions[c++];
        const std::string& who = pick(rng, members[c]);
        std::size_t src_cluster = c;
        if (k > 1 && !rng.bernoulli(spec.p_intra)) {
            src_cluster = rng.below(k - 1);
            if (src_cluster >= c) ++src_cluster;
        }
        std::size_t src = 0;
        bool found = false;
        for (int attempt = 0; attempt < 8 && !found; ++attempt) {
            src = pick(rng, originals_of[src_cluster]);
            found = pending[src].tweet.author != who;
        }
        if (!found) continue;
        const auto& orig = pending[src].tweet;
        corpus::RawTweet t;
        t.author = who;
        t.retweeted_author = orig.author;
        const auto delay = seconds(static_cast<std::int64_t>(rng.below(2 * 86400)));
        t.created_at = std::min(orig.created_at + delay, spec.end - seconds(1));
        t.text = "RT @" + orig.author + ": " + orig.text;
        pending.push_back({std::move(t), src_cluster, false});
    }

    std::vector<std::size_t> order(pending.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pending[a].tweet.created_at < pending[b].tweet.created_at;
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& p = pending[order[i]];
        p.tweet.id = std::to_string(1'000'000 + i);
        if (p.original) fx.tweet_cluster[p.tweet.id] = p.cluster;
        fx.tweets.push_back(std::move(p.tweet));
    }
    return fx;
}

std::filesystem::path truth_path_for(const std::filesystem::path& jsonl_path) {
    auto p = jsonl_path;
    p.replace_extension(".truth.json");
    return p;
}

void write_fixture(const std::filesystem::path& jsonl_path, const Fixture& fixture) {
    if (jsonl_path.has_parent_path()) std::filesystem::create_directories(jsonl_path.parent_path());
    corpus::write_jsonl(jsonl_path, fixture.tweets);
    nlohmann::ordered_json truth;
    truth["clusters"] = fixture.cluster_names;
    truth["original_counts"] = fixture.original_counts;
    truth["hubs"] = fixture.hubs;
    truth["authors"] = nlohmann::ordered_json::object();
    for (const auto& [h, c] : fixture.author_cluster) truth["authors"][h] = c;
    truth["tweets"] = nlohmann::ordered_json::object();
    for (const auto& [id, c] : fixture.tweet_cluster) truth["tweets"][id] = c;
    const auto path = truth_path_for(jsonl_path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << truth.dump(1) << '\n';
}

}  // namespace leaders::pipeline
