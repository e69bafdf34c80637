#include <random>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "leaders/corpus/ingest.hpp"
#include "leaders/corpus/porter_stemmer.hpp"
#include "leaders/corpus/preprocess.hpp"
#include "leaders/error.hpp"
#include "support/temp_dir.hpp"

using namespace leaders;
using namespace leaders::corpus;

namespace {

PreprocessConfig bundled_config() {
    PreprocessConfig c;
    c.stopwords = load_word_list(LEADERS_TEST_DATA_DIR "/stopwords.txt");
    c.slang = load_slang_map(LEADERS_TEST_DATA_DIR "/slang.tsv");
    return c;
}

std::string record(std::string_view id, std::string_view author, std::string_view text,
                   std::string_view rt = {}) {
    std::string s = "{\"id\":\"" + std::string(id) + "\",\"author\":\"" + std::string(author) +
                    "\",\"created_at\":\"2020-03-01T12:00:00Z\",\"text\":\"" + std::string(text) + "\"";
    if (!rt.empty()) s += ",\"retweeted_author\":\"" + std::string(rt) + "\"";
    return s + "}";
}

// The eight-record corpus shared by several tests: three retweets.
std::string eight_records() {
    std::ostringstream s;
    s << record("1", "alice", "Stay home and WASH your hands! https://t.co/abc") << '\n'
      << record("2", "bob", "Flights cancelled, no traveling this month #covid") << '\n'
      << record("3", "carol", "RT @alice: Stay home and WASH your hands!", "alice") << '\n'
      << record("4", "dave", "@bob the vaccine trials look promising :)") << '\n'
      << record("5", "erin", "RT @alice: Stay home", "alice") << '\n'
      << record("6", "frank", "Symptoms: fever, cough, fatigue 😷") << '\n'
      << record("7", "gina", "RT @bob: Flights cancelled", "bob") << '\n'
      << record("8", "hank", "Masks work. Period. 100%") << '\n';
    return s.str();
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("ingest counts malformed lines without aborting") {
    std::ostringstream s;
    for (int i = 0; i < 8; ++i) s << record(std::to_string(i), "u" + std::to_string(i), "hello") << '\n';
    s << "{not json\n";
    s << "{\"id\":\"x\",\"author\":\"a\"}\n";  // missing fields
    std::istringstream in(s.str());
    const auto r = ingest_jsonl(in);
    CHECK(r.tweets.size() == 8);
    CHECK(r.stats.malformed_skipped == 2);
    CHECK(r.stats.total == 8);
}

TEST_CASE("ingest splits originals and retweets") {
    std::istringstream in(eight_records());
    const auto r = ingest_jsonl(in);
    CHECK(r.stats.total == 8);
    CHECK(r.stats.originals == 5);
    CHECK(r.stats.retweets == 3);
    CHECK(r.stats.total == r.stats.originals + r.stats.retweets);
    CHECK(r.stats.distinct_users == 8);
    CHECK(r.stats.malformed_skipped == 0);
}

TEST_CASE("ingest edge cases") {
    SUBCASE("empty input") {
        std::istringstream in("");
        const auto r = ingest_jsonl(in);
        CHECK(r.tweets.empty());
        CHECK(r.stats == IngestStats{});
    }
    SUBCASE("duplicate ids, bad timestamps and empty retweet targets are malformed") {
        std::istringstream in(record("1", "a", "x") + "\n" + record("1", "b", "y") + "\n" +
                              "{\"id\":\"2\",\"author\":\"a\",\"created_at\":\"yesterday\",\"text\":\"x\"}\n" +
                              record("3", "a", "x", "") + "\n" +
                              "{\"id\":\"4\",\"author\":\"a\",\"created_at\":\"2020-03-01\",\"text\":\"x\","
                              "\"retweeted_author\":\"\"}\n\n   \n");
        const auto r = ingest_jsonl(in);
        CHECK(r.tweets.size() == 2);
        CHECK(r.stats.malformed_skipped == 3);
    }
    SUBCASE("numeric ids and offsets") {
        std::istringstream in(
            "{\"id\":42,\"author\":\"a\",\"created_at\":\"2020-03-01T10:00:00+02:00\",\"text\":\"x\"}\n");
        const auto r = ingest_jsonl(in);
        REQUIRE(r.tweets.size() == 1);
        CHECK(r.tweets[0].id == "42");
        CHECK(format_timestamp(r.tweets[0].created_at) == "2020-03-01T08:00:00Z");
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(ingest_jsonl(std::filesystem::path("/nonexistent/x.jsonl")), IoError); }
}

TEST_CASE("jsonl round trip") {
    testing::TempDir dir("ingest");
    std::istringstream in(eight_records());
    const auto first = ingest_jsonl(in);
    write_jsonl(dir / "t.jsonl", first.tweets);
    const auto again = ingest_jsonl(dir / "t.jsonl");
    CHECK(again.tweets == first.tweets);
}

TEST_CASE("keyword filter is case-insensitive") {
    std::istringstream in(eight_records());
    auto tweets = ingest_jsonl(in).tweets;
    const std::vector<std::string> kw{"FLIGHTS"};
    const auto kept = filter_by_keywords(tweets, kw);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].id == "2");
    CHECK(kept[1].id == "7");
}

TEST_CASE("timestamps") {
    CHECK(parse_timestamp("2020-02-29"));
    CHECK_FALSE(parse_timestamp("2020-02-30"));
    CHECK_FALSE(parse_timestamp("2020-13-01T00:00:00Z"));
    CHECK(month_key(*parse_timestamp("2020-04-30T23:59:59Z")) == "2020-04");
}

TEST_CASE("porter stemmer reference outputs") {
    const std::pair<const char*, const char*> cases[] = {
        {"caresses", "caress"}, {"ponies", "poni"},        {"ties", "ti"},           {"caress", "caress"},
        {"cats", "cat"},        {"feed", "feed"},          {"agreed", "agre"},       {"plastered", "plaster"},
        {"bled", "bled"},       {"motoring", "motor"},     {"sing", "sing"},         {"conflated", "conflat"},
        {"troubled", "troubl"}, {"sized", "size"},         {"hopping", "hop"},       {"tanned", "tan"},
        {"falling", "fall"},    {"hissing", "hiss"},       {"fizzed", "fizz"},       {"failing", "fail"},
        {"filing", "file"},     {"happy", "happi"},        {"sky", "sky"},           {"relational", "relat"},
        {"conditional", "condit"}, {"rational", "ration"}, {"digitizer", "digit"},   {"operator", "oper"},
        {"feudalism", "feudal"}, {"decisiveness", "decis"}, {"hopefulness", "hope"}, {"callousness", "callous"},
        {"triplicate", "triplic"}, {"formative", "form"},  {"formalize", "formal"},  {"electrical", "electr"},
        {"hopeful", "hope"},    {"goodness", "good"},      {"revival", "reviv"},     {"allowance", "allow"},
        {"inference", "infer"}, {"airliner", "airlin"},    {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"},
        {"defensible", "defens"}, {"irritant", "irrit"},   {"replacement", "replac"}, {"adjustment", "adjust"},
        {"dependent", "depend"}, {"adoption", "adopt"},    {"communism", "commun"},  {"activate", "activ"},
        {"effective", "effect"}, {"bowdlerize", "bowdler"}, {"probate", "probat"},   {"rate", "rate"},
        {"cease", "ceas"},      {"controll", "control"},   {"roll", "roll"},         {"generalizations", "gener"},
        {"oscillators", "oscil"}, {"says", "sai"},         {"hands", "hand"},        {"flights", "flight"},
        {"traveling", "travel"}, {"vaccine", "vaccin"},    {"vaccination", "vaccin"}, {"is", "is"},
    };
    for (const auto& [word, stem] : cases) {
        CAPTURE(word);
        CHECK(porter_stem(word) == stem);
    }
}

TEST_CASE("normalize_text") {
    const auto cfg = bundled_config();
    CHECK(normalize_text("@WHO says WASH your hands!! https://t.co/x \xF0\x9F\x98\xB7", cfg) == "says wash your hands");
    CHECK(normalize_text("", cfg).empty());
    CHECK(normalize_text("www.example.com/page and more", cfg) == "and more");
    CHECK(normalize_text("great news :) :-( <3 #stayhome", cfg) == "great news");
    CHECK(normalize_text("covid19 cases: 1,204 today", cfg) == "covid cases today");
    CHECK(normalize_text("don't panic", cfg) == "don t panic");

    PreprocessConfig lol;
    lol.slang = {{"lol", "laughing out loud"}};
    CHECK(normalize_text("lol", lol) == "laughing out loud");
    CHECK(normalize_text("LOL, ok", lol) == "laughing out loud ok");
    CHECK(normalize_text("lolx", lol) == "lolx");
}

TEST_CASE("normalize_text is idempotent on random inputs") {
    const auto cfg = bundled_config();
    const std::vector<std::string> pieces = {
        "Hello",  "WORLD", "u",        "ppl",    "2day",  "b4",   "#tag",          "@user",      "https://t.co/Ab1",
        "www.x.org", ":)",  ";-(",     "<3",     "\xF0\x9F\x98\xB7", "42",  "a1b2", "don't", "...", "!!",
        "caf\xC3\xA9", "x_y", "(paren)", "--", "#", "@", "http", ":D", "\xE2\x9D\xA4\xEF\xB8\x8F", "\t", "lol"};
    std::mt19937 gen(7);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1), len(0, 12), glue(0, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        std::string text;
        for (std::size_t n = len(gen), i = 0; i < n; ++i) {
            text += pieces[pick(gen)];
            if (glue(gen) != 0) text += ' ';
        }
        const auto once = normalize_text(text, cfg);
        CAPTURE(text);
        CHECK(normalize_text(once, cfg) == once);
        CHECK(std::regex_match(once, std::regex("([a-z]+( [a-z]+)*)?")));
    }
}

TEST_CASE("tokenize_and_reduce") {
    auto cfg = bundled_config();
    CHECK(tokenize_and_reduce("says wash your hands", cfg) == std::vector<std::string>{"sai", "wash", "hand"});
    CHECK(tokenize_and_reduce("the and of your", cfg).empty());
    cfg.stemming = false;
    CHECK(tokenize_and_reduce("says wash your hands", cfg) == std::vector<std::string>{"says", "wash", "hands"});
    cfg.min_token_length = 5;
    CHECK(tokenize_and_reduce("says wash your hands", cfg) == std::vector<std::string>{"hands"});
}

TEST_CASE("spell correction") {
    const std::unordered_set<std::string> dict{"hospital", "mask", "masks", "cough", "vaccine"};
    CHECK(spell_correct("hospitl", dict) == "hospital");  // insert
    CHECK(spell_correct("vaccinne", dict) == "vaccine");  // delete
    CHECK(spell_correct("coigh", dict) == "cough");       // replace
    CHECK(spell_correct("mask", dict) == "mask");         // known
    CHECK(spell_correct("masj", dict) == "mask");
    CHECK(spell_correct("masts", dict) == "masks");
    CHECK(spell_correct("zebra", dict) == "zebra");  // nothing within distance 1
    // one deletion reaches "mask", one replacement reaches "masks": a tie, left alone
    CHECK(spell_correct("maskz", dict) == "maskz");

    PreprocessConfig cfg;
    cfg.spell_correction = true;
    cfg.dictionary = dict;
    cfg.stemming = false;
    CHECK(tokenize_and_reduce("hospitl coigh", cfg) == std::vector<std::string>{"hospital", "cough"});
}

namespace {

// plain Levenshtein, early exit once beyond 1
bool within_one_edit(const std::string& a, const std::string& b) {
    if (a.size() > b.size() + 1 || b.size() > a.size() + 1) return false;
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()] <= 1;
}

}  // namespace

TEST_CASE("spell correction against bundled dictionary") {
    auto dict = load_word_list(LEADERS_TEST_DATA_DIR "/dictionary.txt");
    REQUIRE(dict.size() > 10000);
    for (const char* w : {"coronavirus", "pandemic", "vaccine", "hospital", "lockdown", "mask"})
        CHECK(spell_correct(w, dict) == w);

    for (const std::string w : {"pandemik", "vacine", "hospitl", "quarantne", "lockdwn", "sanitizr", "symptms",
                                "doctr", "infectoin", "goverment", "maks", "qqqqzz"}) {
        std::vector<std::string> near;
        for (const auto& d : dict)
            if (within_one_edit(w, d)) near.push_back(d);
        std::string expected = near.size() == 1 ? near.front() : w;
        CAPTURE(w);
        CHECK(spell_correct(w, dict) == expected);
    }
    CHECK(spell_correct("pandemik", dict) == "pandemic");
    CHECK(spell_correct("qqqqzz", dict) == "qqqqzz");
}

TEST_CASE("word list and slang loading") {
    testing::TempDir dir("lists");
    const auto bad = dir.write("bad.tsv", "ok\tfine\ntwo words\tx\n");
    CHECK_THROWS_AS(load_slang_map(bad), ParseError);
    const auto notab = dir.write("notab.tsv", "# comment\nlol\n");
    CHECK_THROWS_AS(load_slang_map(notab), ParseError);
    const auto words = dir.write("w.txt", "# c\nThe\n\n and \n");
    CHECK(load_word_list(words) == std::unordered_set<std::string>{"the", "and"});
    CHECK(bundled_config().stopwords.contains("your"));
    CHECK(bundled_config().stopwords.size() > 100);
}

TEST_CASE("preprocess_corpus") {
    const auto cfg = bundled_config();
    std::istringstream in(eight_records() + record("9", "ivan", "the and of https://x.co/1 123") + "\n");
    const auto raw = ingest_jsonl(in).tweets;
    const auto out = preprocess_corpus(raw, cfg);

    CHECK(out.dropped_empty == 1);
    CHECK(out.tweets.size() + out.dropped_empty == raw.size());
    CHECK(out.tweets.size() == 8);
    const std::regex lower_alpha("[a-z]+");
    for (const auto& t : out.tweets) {
        REQUIRE_FALSE(t.tokens.empty());
        CHECK(t.tokens.size() == t.unstemmed_tokens.size());
        for (const auto& tok : t.tokens) {
            CHECK(std::regex_match(tok, lower_alpha));
            CHECK(tok.size() >= cfg.min_token_length);
            CHECK_FALSE(cfg.stopwords.contains(tok));
        }
    }
    CHECK(out.tweets[0].clean_text() == "stai home wash hand");
    CHECK(out.tweets[1].tokens == std::vector<std::string>{"flight", "cancel", "travel", "month"});
    CHECK(out.tweets[5].tokens == std::vector<std::string>{"symptom", "fever", "cough", "fatigu"});
    CHECK(out.tweets[2].is_retweet);

    const auto again = preprocess_corpus(raw, cfg);
    CHECK(again.tweets == out.tweets);
}

}  // TEST_SUITE
