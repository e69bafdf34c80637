#include "leaders/pipeline/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "leaders/classify/cross_validation.hpp"
#include "leaders/concerns/concerns.hpp"
#include "leaders/corpus/ingest.hpp"
#include "leaders/corpus/porter_stemmer.hpp"
#include "leaders/corpus/preprocess.hpp"
#include "leaders/csv.hpp"
#include "leaders/emotion/emotion.hpp"
#include "leaders/graph/community.hpp"
#include "leaders/graph/pagerank.hpp"
#include "leaders/rng.hpp"
#include "leaders/topics/lda.hpp"

namespace leaders::pipeline {

namespace {

using nlohmann::ordered_json;
using corpus::CleanTweet;

// ---------------------------------------------------------------- file helpers

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

void copy_artifact(const fs::path& from, const fs::path& to) { write_file(to, read_file(from)); }

// ---------------------------------------------------- intermediate artifacts

void write_clean_tweets(const fs::path& path, std::span<const CleanTweet> tweets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& t : tweets) {
        ordered_json j;
        j["id"] = t.id;
        j["author"] = t.author;
        j["created_at"] = corpus::format_timestamp(t.created_at);
        j["retweet"] = t.is_retweet;
        j["tokens"] = t.tokens;
        j["unstemmed"] = t.unstemmed_tokens;
        out << j.dump() << '\n';
    }
}

std::vector<CleanTweet> read_clean_tweets(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<CleanTweet> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            CleanTweet t;
            t.id = j.at("id").get<std::string>();
            t.author = j.at("author").get<std::string>();
            const auto ts = corpus::parse_timestamp(j.at("created_at").get<std::string>());
            if (!ts) throw ParseError("bad timestamp", line_no);
            t.created_at = *ts;
            t.is_retweet = j.at("retweet").get<bool>();
            t.tokens = j.at("tokens").get<std::vector<std::string>>();
            t.unstemmed_tokens = j.at("unstemmed").get<std::vector<std::string>>();
            out.push_back(std::move(t));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(fmt::format("{}: {}", path.string(), e.what()), line_no);
        }
    }
    return out;
}

std::string cluster_name(std::uint32_t c) { return fmt::format("C{}", c); }

/// Original tweets by community members, in file order.
struct AnalysisCorpus {
    std::vector<CleanTweet> tweets;
    std::vector<std::uint32_t> cluster;
    std::vector<std::string> cluster_names;  // index = community id
};

AnalysisCorpus analysis_corpus(const fs::path& out) {
    const auto partition = graph::read_partition(out / files::kPartition);
    AnalysisCorpus a;
    std::uint32_t max_c = 0;
    for (const auto& [_, c] : partition) max_c = std::max(max_c, c);
    for (std::uint32_t c = 0; c <= max_c; ++c) a.cluster_names.push_back(cluster_name(c));
    for (auto& t : read_clean_tweets(out / files::kCleanTweets)) {
        if (t.is_retweet) continue;
        auto it = partition.find(t.author);
        if (it == partition.end()) continue;
        a.cluster.push_back(it->second);
        a.tweets.push_back(std::move(t));
    }
    if (a.tweets.empty()) throw InvalidArgument("no original tweets authored by community members");
    return a;
}

concerns::ConcernLexicon concern_lexicon(const PipelineConfig& config) {
    return config.concerns.lexicon ? concerns::load_concern_lexicon(*config.concerns.lexicon)
                                   : concerns::ConcernLexicon::defaults();
}

std::vector<std::string> stems_of(const CleanTweet& t) {
    std::vector<std::string> out;
    out.reserve(t.unstemmed_tokens.size());
    for (const auto& w : t.unstemmed_tokens) out.push_back(corpus::porter_stem(w));
    return out;
}

// id -> (cluster, month, counts) rows of the emotion artifact
struct EmotionRow {
    std::string id;
    std::string cluster;
    std::string month;
    emotion::EmotionProfile profile;
};

std::vector<EmotionRow> read_emotion_rows(const fs::path& path) {
    std::vector<std::string_view> header{"id", "cluster", "month"};
    for (auto n : emotion::kEmotionNames) header.push_back(n);
    const auto rows = csv::read(path);
    if (rows.empty() || rows.front() != std::vector<std::string>(header.begin(), header.end()))
        throw ParseError("unexpected header in " + path.string(), 1);
    std::vector<EmotionRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != header.size()) throw ParseError("bad field count in " + path.string(), i + 1);
        EmotionRow e{r[0], r[1], r[2], {}};
        for (std::size_t k = 0; k < emotion::kEmotionCount; ++k) {
            try {
                e.profile.counts[k] = static_cast<std::uint32_t>(std::stoul(r[3 + k]));
            } catch (const std::exception&) {
                throw ParseError("bad count in " + path.string(), i + 1);
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

struct ConcernRow {
    std::string id;
    std::string cluster;
    concerns::ConcernLabels labels;
};

std::vector<ConcernRow> read_concern_rows(const fs::path& path, const concerns::ConcernLexicon& lexicon) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < lexicon.size(); ++i) index[lexicon[i].name] = i;
    const auto rows = csv::read_with_header(path, {"id", "cluster", "concerns"});
    std::vector<ConcernRow> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ConcernRow c{rows[i][0], rows[i][1], {}};
        std::istringstream names(rows[i][2]);
        for (std::string name; std::getline(names, name, ';');) {
            if (name.empty()) continue;
            auto it = index.find(name);
            if (it == index.end()) throw ParseError("unknown concern '" + name + "' in " + path.string(), i + 2);
            c.labels.concerns.push_back(it->second);
        }
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------- stages

struct Context {
    const PipelineConfig& config;
    fs::path out;
    fs::path at(const char* rel) const { return out / rel; }
};

void stage_ingest(const Context& ctx) {
    const auto& input = ctx.config.input;
    if (input.empty()) throw InvalidArgument("no input corpus configured");
    if (!fs::is_regular_file(input)) throw IoError("cannot read input corpus " + input.string());
    auto result = corpus::ingest_jsonl(input);
    auto tweets = std::move(result.tweets);
    if (!ctx.config.preprocess.keywords.empty())
        tweets = corpus::filter_by_keywords(std::move(tweets), ctx.config.preprocess.keywords);
    if (tweets.empty()) throw InvalidArgument("no valid tweets in " + input.string());
    const auto stats = corpus::compute_stats(tweets, result.stats.malformed_skipped);
    corpus::write_jsonl(ctx.at(files::kIngestTweets), tweets);
    ordered_json j;
    j["total"] = stats.total;
    j["originals"] = stats.originals;
    j["retweets"] = stats.retweets;
    j["distinct_users"] = stats.distinct_users;
    j["malformed_skipped"] = stats.malformed_skipped;
    write_file(ctx.at(files::kIngestStats), j.dump(2) + "\n");
}

void stage_preprocess(const Context& ctx) {
    const auto& s = ctx.config.preprocess;
    corpus::PreprocessConfig pc;
    pc.stopwords = corpus::load_word_list(s.stopwords);
    pc.slang = corpus::load_slang_map(s.slang);
    if (s.dictionary) pc.dictionary = corpus::load_word_list(*s.dictionary);
    pc.spell_correction = s.spell_correction;
    pc.stemming = s.stemming;
    pc.min_token_length = s.min_token_length;
    const auto raw = corpus::ingest_jsonl(ctx.at(files::kIngestTweets));
    const auto result = corpus::preprocess_corpus(raw.tweets, pc);
    write_clean_tweets(ctx.at(files::kCleanTweets), result.tweets);
    ordered_json j;
    j["input"] = raw.tweets.size();
    j["kept"] = result.tweets.size();
    j["dropped_empty"] = result.dropped_empty;
    write_file(ctx.at(files::kPreprocessSummary), j.dump(2) + "\n");
}

void stage_graph(const Context& ctx) {
    const auto& s = ctx.config.graph;
    const auto raw = corpus::ingest_jsonl(ctx.at(files::kIngestTweets));
    const auto g = graph::build_retweet_graph(raw.tweets);
    graph::write_edge_list(ctx.at(files::kEdges), g);
    const auto pr = graph::pagerank(g, {s.damping, s.tol, s.max_iter});
    graph::write_pagerank(ctx.at(files::kPageRank), pr);
    const auto top = graph::top_nodes(pr, s.leader_top_k);
    csv::Writer w(ctx.at(files::kLeaders));
    w.row({"rank", "handle", "score"});
    for (std::size_t i = 0; i < top.size(); ++i)
        w.row({std::to_string(i + 1), pr.handles[top[i]], csv::number(pr.scores[top[i]])});
}

void stage_communities(const Context& ctx) {
    const auto leaders = csv::read_with_header(ctx.at(files::kLeaders), {"rank", "handle", "score"});
    const auto g = graph::read_edge_list(ctx.at(files::kEdges));
    std::vector<graph::NodeId> ids;
    for (const auto& row : leaders)
        if (auto id = g.find(row[1])) ids.push_back(*id);
    std::sort(ids.begin(), ids.end());
    const auto leader_graph = g.induced_subgraph(ids);

    // Leaders without any retweet tie to another leader carry no community signal.
    const graph::UndirectedGraph und(leader_graph);
    std::vector<graph::NodeId> connected;
    for (graph::NodeId u = 0; u < und.node_count(); ++u)
        if (und.degree(u) > 0) connected.push_back(u);
    const auto sub = leader_graph.induced_subgraph(connected);
    if (sub.edge_count() == 0) throw InvalidArgument("leader subgraph has no edges");

    const auto sequence = graph::girvan_newman(sub, ctx.config.graph.max_communities);
    if (sequence.empty()) throw InvalidArgument("Girvan-Newman produced no partition");
    const auto best = graph::best_partition(sequence);
    graph::write_partition(ctx.at(files::kPartition), sub.handles(), sequence[best]);

    csv::Writer w(ctx.at(files::kCommunitySweep));
    w.row({"step", "communities", "modularity", "selected"});
    for (std::size_t i = 0; i < sequence.size(); ++i)
        w.row({std::to_string(i), std::to_string(sequence[i].community_count()), csv::number(sequence[i].modularity),
               i == best ? "1" : "0"});
}

void stage_emotions(const Context& ctx) {
    const auto lexicon = emotion::load_emotion_lexicon(ctx.config.emotion.lexicon);
    const auto a = analysis_corpus(ctx.out);
    csv::Writer w(ctx.at(files::kEmotionProfiles));
    std::vector<std::string> header{"id", "cluster", "month"};
    for (auto n : emotion::kEmotionNames) header.emplace_back(n);
    w.row(header);
    for (std::size_t i = 0; i < a.tweets.size(); ++i) {
        const auto p = emotion::score_emotions(a.tweets[i].unstemmed_tokens, lexicon);
        std::vector<std::string> row{a.tweets[i].id, a.cluster_names[a.cluster[i]],
                                     corpus::month_key(a.tweets[i].created_at)};
        for (auto c : p.counts) row.push_back(std::to_string(c));
        w.row(row);
    }
}

void stage_topics(const Context& ctx) {
    const auto& s = ctx.config.lda;
    const auto a = analysis_corpus(ctx.out);
    std::vector<topics::Document> docs;
    for (const auto& t : a.tweets) docs.push_back(t.tokens);
    topics::LdaConfig cfg;
    cfg.alpha = s.alpha;
    cfg.beta = s.beta;
    cfg.iterations = s.iterations;
    cfg.burn_in = s.burn_in;
    cfg.min_count = s.min_count;
    cfg.seed = derive_seed(ctx.config.seed, "lda");
    const auto sweep = topics::sweep_topic_count(docs, s.topic_counts, cfg, s.top_words);
    topics::write_sweep_report(ctx.at(files::kTopicSweep), sweep);
    if (!sweep.selected) {
        std::string why = "no topic count could be fitted";
        for (const auto& row : sweep.rows)
            if (row.error) why += fmt::format("; K={}: {}", row.topics, *row.error);
        throw InvalidArgument(why);
    }
    topics::write_topic_report(ctx.at(files::kTopicWords), *sweep.models[*sweep.selected], s.top_words);
}

void stage_concerns(const Context& ctx) {
    const auto lexicon = concern_lexicon(ctx.config);
    const auto a = analysis_corpus(ctx.out);
    std::vector<concerns::ConcernLabels> labels;
    csv::Writer w(ctx.at(files::kConcernLabels));
    w.row({"id", "cluster", "concerns"});
    for (std::size_t i = 0; i < a.tweets.size(); ++i) {
        labels.push_back(concerns::annotate_concerns(stems_of(a.tweets[i]), lexicon));
        std::string names;
        for (auto c : labels.back().concerns) {
            if (!names.empty()) names += ';';
            names += lexicon[c].name;
        }
        w.row({a.tweets[i].id, a.cluster_names[a.cluster[i]], names});
    }
    const auto alignment = concerns::concern_alignment(labels, a.cluster, a.cluster_names, lexicon);
    concerns::write_alignment(ctx.at(files::kAlignment), alignment);
    const auto chi = concerns::chi_square_independence(alignment.table.pruned(), ctx.config.concerns.alpha);
    concerns::write_chi_square(ctx.at(files::kChiSquare), chi);
}

void stage_classify(const Context& ctx) {
    const auto& s = ctx.config.classify;
    const auto lexicon = concern_lexicon(ctx.config);
    const auto a = analysis_corpus(ctx.out);
    const auto emotions = read_emotion_rows(ctx.at(files::kEmotionProfiles));
    const auto concern_rows = read_concern_rows(ctx.at(files::kConcernLabels), lexicon);
    if (emotions.size() != a.tweets.size() || concern_rows.size() != a.tweets.size())
        throw InvalidArgument("emotion/concern artifacts are out of step with the analysis corpus");

    // Clusters too small to appear in every validation fold are left out.
    std::map<std::uint32_t, std::size_t> sizes;
    for (auto c : a.cluster) ++sizes[c];
    std::map<std::uint32_t, std::uint32_t> label_of;
    for (const auto& [c, n] : sizes)
        if (n >= s.folds) label_of.emplace(c, static_cast<std::uint32_t>(label_of.size()));
    if (label_of.size() < 2)
        throw InvalidArgument(fmt::format("need at least two clusters with >= {} tweets to classify", s.folds));

    const std::size_t merged = lexicon.merged_names().size();
    std::vector<classify::Document> docs;
    std::vector<std::uint32_t> labels;
    Matrix emo(0, emotion::kEmotionCount);
    Matrix con(0, merged);
    for (std::size_t i = 0; i < a.tweets.size(); ++i) {
        if (emotions[i].id != a.tweets[i].id || concern_rows[i].id != a.tweets[i].id)
            throw InvalidArgument("artifact rows do not match tweet " + a.tweets[i].id);
        auto it = label_of.find(a.cluster[i]);
        if (it == label_of.end()) continue;
        docs.push_back(a.tweets[i].tokens);
        labels.push_back(it->second);
        const auto shares = emotion::normalize(emotions[i].profile).shares;
        emo.append_row(shares);
        con.append_row(concerns::merged_indicators(concern_rows[i].labels, lexicon));
    }

    classify::CvOptions opt;
    opt.folds = s.folds;
    opt.repeats = s.repeats;
    opt.tfidf = {s.min_df, s.tfidf_max_features};
    opt.standardize = s.standardize;
    opt.smote.k_neighbors = s.smote_k;
    opt.forest.n_trees = s.n_trees;
    opt.forest.max_depth = s.max_depth;
    opt.forest.min_leaf = s.min_leaf;
    opt.forest.max_features = s.max_features;
    opt.seed = s.seed.value_or(derive_seed(ctx.config.seed, "classify"));

    const classify::CvInput input{docs, &emo, &con, labels};
    const auto report = classify::cross_validate_ablation(input, opt);
    classify::write_cv_report(ctx.at(files::kAblation), report);

    {
        csv::Writer w(ctx.at(files::kClasses));
        w.row({"cluster", "label", "tweets"});
        for (const auto& [c, n] : sizes) {
            auto it = label_of.find(c);
            w.row({a.cluster_names[c], it == label_of.end() ? std::string("excluded") : std::to_string(it->second),
                   std::to_string(n)});
        }
    }

    // Final all-features model on every row, kept for inspection and reuse.
    std::vector<std::size_t> all(docs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto model = classify::train_fold(input, all, classify::FeatureSet::text_emotions_concerns, opt,
                                            derive_seed(opt.seed, "final"));
    model.forest.save(ctx.at(files::kModel));
    csv::Writer v(ctx.at(files::kVocabulary));
    v.row({"index", "term", "idf"});
    for (std::size_t i = 0; i < model.tfidf.vocab.size(); ++i)
        v.row({std::to_string(i), model.tfidf.vocab[i], csv::number(model.tfidf.idf[i])});
}

void stage_report(const Context& ctx) {
    const auto lexicon = concern_lexicon(ctx.config);

    {
        const auto stats = nlohmann::json::parse(read_file(ctx.at(files::kIngestStats)));
        const auto pre = nlohmann::json::parse(read_file(ctx.at(files::kPreprocessSummary)));
        const auto partition = graph::read_partition(ctx.at(files::kPartition));
        std::set<std::uint32_t> communities;
        for (const auto& [_, c] : partition) communities.insert(c);
        const auto emotion_rows = read_emotion_rows(ctx.at(files::kEmotionProfiles));
        csv::Writer w(ctx.at(files::kReportTable1));
        w.row({"metric", "value"});
        for (const char* key : {"total", "originals", "retweets", "distinct_users", "malformed_skipped"})
            w.row({key, stats.at(key).dump()});
        w.row({"preprocessed", pre.at("kept").dump()});
        w.row({"dropped_empty", pre.at("dropped_empty").dump()});
        w.row({"community_members", std::to_string(partition.size())});
        w.row({"communities", std::to_string(communities.size())});
        w.row({"analysis_tweets", std::to_string(emotion_rows.size())});
    }

    {
        const auto rows = read_emotion_rows(ctx.at(files::kEmotionProfiles));
        std::vector<emotion::EmotionProfile> profiles;
        std::vector<std::string> by_cluster, by_month;
        for (const auto& r : rows) {
            profiles.push_back(r.profile);
            by_cluster.push_back(r.cluster);
            by_month.push_back(r.month);
        }
        emotion::write_aggregate(ctx.at(files::kReportEmotionCluster),
                                 emotion::aggregate_emotions(profiles, by_cluster));
        emotion::write_aggregate(ctx.at(files::kReportEmotionMonth), emotion::aggregate_emotions(profiles, by_month));
    }

    {
        // Term frequencies of the words used alongside each merged concern.
        const auto rows = read_concern_rows(ctx.at(files::kConcernLabels), lexicon);
        std::map<std::string, const CleanTweet*> by_id;
        const auto tweets = read_clean_tweets(ctx.at(files::kCleanTweets));
        for (const auto& t : tweets) by_id[t.id] = &t;
        const auto names = lexicon.merged_names();
        std::vector<std::map<std::string, std::size_t>> freq(names.size());
        for (const auto& r : rows) {
            auto it = by_id.find(r.id);
            if (it == by_id.end()) throw InvalidArgument("concern label for unknown tweet " + r.id);
            std::set<std::size_t> merged;
            for (auto c : r.labels.concerns) merged.insert(lexicon.merged_index(c));
            for (auto m : merged)
                for (const auto& w : it->second->unstemmed_tokens) ++freq[m][w];
        }
        csv::Writer w(ctx.at(files::kReportWordcloud));
        w.row({"concern", "term", "frequency"});
        for (std::size_t m = 0; m < names.size(); ++m) {
            std::vector<std::pair<std::string, std::size_t>> terms(freq[m].begin(), freq[m].end());
            std::stable_sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
            if (terms.size() > ctx.config.concerns.wordcloud_top) terms.resize(ctx.config.concerns.wordcloud_top);
            for (const auto& [term, n] : terms) w.row({names[m], term, std::to_string(n)});
        }
    }

    copy_artifact(ctx.at(files::kAlignment), ctx.at(files::kReportAlignment));
    copy_artifact(ctx.at(files::kChiSquare), ctx.at(files::kReportChiSquare));
    copy_artifact(ctx.at(files::kTopicWords), ctx.at(files::kReportTopics));
    copy_artifact(ctx.at(files::kTopicSweep), ctx.at(files::kReportSweep));
    copy_artifact(ctx.at(files::kAblation), ctx.at(files::kReportAblation));
}

// ------------------------------------------------------------ orchestration

struct StageSpec {
    Stage stage;
    void (*run)(const Context&);
    std::vector<const char*> inputs;        // upstream artifacts
    std::vector<const char*> outputs;
    std::vector<std::string_view> sections; // config sections in the cache key
};

const std::vector<StageSpec>& specs() {
    using namespace files;
    static const std::vector<StageSpec> table = {
        {Stage::ingest, stage_ingest, {}, {kIngestTweets, kIngestStats}, {"preprocess"}},
        {Stage::preprocess, stage_preprocess, {kIngestTweets}, {kCleanTweets, kPreprocessSummary}, {"preprocess"}},
        {Stage::graph, stage_graph, {kIngestTweets}, {kEdges, kPageRank, kLeaders}, {"graph"}},
        {Stage::communities, stage_communities, {kEdges, kLeaders}, {kPartition, kCommunitySweep}, {"graph"}},
        {Stage::emotions, stage_emotions, {kCleanTweets, kPartition}, {kEmotionProfiles}, {}},
        {Stage::topics, stage_topics, {kCleanTweets, kPartition}, {kTopicWords, kTopicSweep}, {"global", "lda"}},
        {Stage::concerns, stage_concerns, {kCleanTweets, kPartition}, {kConcernLabels, kAlignment, kChiSquare},
         {"concerns"}},
        {Stage::classify, stage_classify, {kCleanTweets, kPartition, kEmotionProfiles, kConcernLabels},
         {kAblation, kClasses, kModel, kVocabulary}, {"global", "concerns", "classify"}},
        {Stage::report, stage_report,
         {kIngestStats, kPreprocessSummary, kCleanTweets, kPartition, kEmotionProfiles, kConcernLabels, kAlignment,
          kChiSquare, kTopicWords, kTopicSweep, kAblation},
         {kReportTable1, kReportEmotionCluster, kReportEmotionMonth, kReportWordcloud, kReportAlignment,
          kReportChiSquare, kReportTopics, kReportSweep, kReportAblation},
         {"concerns"}},
    };
    return table;
}

const StageSpec& spec_of(Stage s) {
    for (const auto& sp : specs())
        if (sp.stage == s) return sp;
    throw InvalidArgument("unknown stage");
}

Stage producer_of(const char* artifact) {
    for (const auto& sp : specs())
        for (const char* o : sp.outputs)
            if (std::string_view(o) == artifact) return sp.stage;
    throw InvalidArgument("no stage produces " + std::string(artifact));
}

// Resource files read by a stage; their content is part of the cache key.
std::vector<fs::path> resources(const PipelineConfig& c, Stage s) {
    switch (s) {
        case Stage::ingest: return {c.input};
        case Stage::preprocess: {
            std::vector<fs::path> r{c.preprocess.stopwords, c.preprocess.slang};
            if (c.preprocess.dictionary) r.push_back(*c.preprocess.dictionary);
            return r;
        }
        case Stage::emotions: return {c.emotion.lexicon};
        case Stage::concerns:
        case Stage::classify:
        case Stage::report:
            if (c.concerns.lexicon) return {*c.concerns.lexicon};
            return {};
        default: return {};
    }
}

std::string cache_key(const PipelineConfig& c, const StageSpec& sp, const fs::path& out) {
    std::uint64_t h = fnv1a(stage_name(sp.stage));
    for (auto section : sp.sections) h = fnv1a(section_json(c, section), fnv1a(section, h));
    for (const char* in : sp.inputs) h = fnv1a(read_file(out / in), fnv1a(in, h));
    for (const auto& r : resources(c, sp.stage)) h = fnv1a(read_file(r), h);
    return fmt::format("{:016x}", h);
}

fs::path manifest_path(const fs::path& out, Stage s) {
    return out / std::string(stage_name(s)) / "manifest.json";
}

bool cached(const fs::path& out, const StageSpec& sp, const std::string& key) {
    const auto mp = manifest_path(out, sp.stage);
    if (!fs::is_regular_file(mp)) return false;
    for (const char* o : sp.outputs)
        if (!fs::is_regular_file(out / o)) return false;
    try {
        return nlohmann::json::parse(read_file(mp)).at("key").get<std::string>() == key;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

std::string_view stage_name(Stage stage) {
    switch (stage) {
        case Stage::ingest: return "ingest";
        case Stage::preprocess: return "preprocess";
        case Stage::graph: return "graph";
        case Stage::communities: return "communities";
        case Stage::emotions: return "emotions";
        case Stage::topics: return "topics";
        case Stage::concerns: return "concerns";
        case Stage::classify: return "classify";
        case Stage::report: return "report";
    }
    return "?";
}

std::optional<Stage> parse_stage(std::string_view name) {
    for (Stage s : kStages)
        if (stage_name(s) == name) return s;
    return std::nullopt;
}

StageError::StageError(Stage stage, const std::string& cause)
    : Error(fmt::format("stage '{}' failed: {}", stage_name(stage), cause)), stage_(stage) {}

fs::path primary_artifact(Stage stage) { return spec_of(stage).outputs.front(); }

std::vector<fs::path> stage_outputs(Stage stage) {
    const auto& o = spec_of(stage).outputs;
    return {o.begin(), o.end()};
}

std::vector<fs::path> report_files() { return stage_outputs(Stage::report); }

bool RunSummary::ran(Stage stage) const {
    return std::any_of(stages.begin(), stages.end(), [&](const auto& o) { return o.stage == stage && o.ran; });
}

RunSummary run_stages(const PipelineConfig& config, std::span<const Stage> stages, const RunOptions& options) {
    if (config.out.empty()) throw InvalidArgument("no output directory configured");
    config.validate();
    const fs::path out = config.out;
    RunSummary summary;
    for (Stage s : stages) {
        const auto& sp = spec_of(s);
        const Context ctx{config, out};
        try {
            for (const char* in : sp.inputs)
                if (!fs::is_regular_file(out / in))
                    throw IoError(fmt::format("missing artifact {}; run stage '{}' first", in,
                                              stage_name(producer_of(in))));
            fs::create_directories(out / std::string(stage_name(s)));
            const auto key = cache_key(config, sp, out);
            if (!options.force && cached(out, sp, key)) {
                if (options.log) options.log(fmt::format("{}: up to date", stage_name(s)));
                summary.stages.push_back({s, false});
                continue;
            }
            if (options.log) options.log(fmt::format("{}: running", stage_name(s)));
            fs::remove(manifest_path(out, s));
            sp.run(ctx);
            ordered_json m;
            m["stage"] = stage_name(s);
            m["key"] = key;
            m["outputs"] = sp.outputs;
            write_file(manifest_path(out, s), m.dump(2) + "\n");
            summary.stages.push_back({s, true});
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(s, e.what());
        }
    }
    return summary;
}

RunSummary run_pipeline(const PipelineConfig& config, const RunOptions& options) {
    return run_stages(config, kStages, options);
}

}  // namespace leaders::pipeline
