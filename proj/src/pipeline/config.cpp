#include "leaders/pipeline/config.hpp"

#include <set>

#include <fmt/format.h>
#include <toml.hpp>

#include "json.hpp"
#include "leaders/error.hpp"

#ifndef LEADERS_DATA_DIR
#define LEADERS_DATA_DIR "data"
#endif

namespace leaders::pipeline {

namespace {

using nlohmann::ordered_json;

// Typed access to one TOML table that remembers which keys were read so
// leftovers can be reported as unknown.
class Section {
public:
    Section(const toml::table* table, std::string name, fs::path base)
        : table_(table), name_(std::move(name)), base_(std::move(base)) {}

    template <typename T>
    void get(std::string_view key, T& out) {
        const toml::node* node = find(key);
        if (!node) return;
        if constexpr (std::is_same_v<T, bool>) {
            out = require(node->value<bool>(), key, "a boolean");
        } else if constexpr (std::is_same_v<T, double>) {
            out = require(node->value<double>(), key, "a number");
        } else if constexpr (std::is_same_v<T, std::string>) {
            out = require(node->value<std::string>(), key, "a string");
        } else {
            static_assert(std::is_unsigned_v<T>);
            const auto v = require(node->value<std::int64_t>(), key, "an integer");
            if (v < 0) fail(key, "must be >= 0");
            out = static_cast<T>(v);
        }
    }

    template <typename T>
    void get(std::string_view key, std::optional<T>& out) {
        if (!find(key)) return;
        T v{};
        get(key, v);
        out = v;
    }

    void get_path(std::string_view key, fs::path& out) {
        std::string s;
        if (!find(key)) return;
        get(key, s);
        out = resolve(s);
    }

    void get_path(std::string_view key, std::optional<fs::path>& out) {
        if (!find(key)) return;
        fs::path p;
        get_path(key, p);
        out = p;
    }

    void get_strings(std::string_view key, std::vector<std::string>& out) {
        const toml::node* node = find(key);
        if (!node) return;
        const auto* arr = node->as_array();
        if (!arr) fail(key, "must be an array of strings");
        out.clear();
        for (const auto& item : *arr) out.push_back(require(item.value<std::string>(), key, "an array of strings"));
    }

    void get_sizes(std::string_view key, std::vector<std::size_t>& out) {
        const toml::node* node = find(key);
        if (!node) return;
        out.clear();
        if (const auto* arr = node->as_array()) {
            for (const auto& item : *arr) {
                const auto v = require(item.value<std::int64_t>(), key, "an integer or array of integers");
                if (v < 1) fail(key, "values must be >= 1");
                out.push_back(static_cast<std::size_t>(v));
            }
        } else {
            const auto v = require(node->value<std::int64_t>(), key, "an integer or array of integers");
            if (v < 1) fail(key, "must be >= 1");
            out.push_back(static_cast<std::size_t>(v));
        }
    }

    void finish(const std::set<std::string>& nested = {}) const {
        if (!table_) return;
        for (const auto& [key, _] : *table_) {
            const std::string k(key.str());
            if (!seen_.contains(k) && !nested.contains(k))
                throw InvalidArgument(fmt::format("config: unknown key '{}' in {}", k, name_));
        }
    }

private:
    const toml::node* find(std::string_view key) {
        if (!table_) return nullptr;
        seen_.insert(std::string(key));
        return table_->get(key);
    }

    template <typename T>
    T require(std::optional<T> v, std::string_view key, std::string_view what) const {
        if (!v) fail(key, fmt::format("must be {}", what));
        return *v;
    }

    [[noreturn]] void fail(std::string_view key, std::string_view what) const {
        throw InvalidArgument(fmt::format("config: {}.{} {}", name_, key, what));
    }

    fs::path resolve(const std::string& s) const {
        fs::path p(s);
        return p.is_absolute() ? p : (base_ / p).lexically_normal();
    }

    const toml::table* table_;
    std::string name_;
    fs::path base_;
    std::set<std::string> seen_;
};

void require_file(const fs::path& p, std::string_view what) {
    if (!fs::is_regular_file(p)) throw IoError(fmt::format("{} not found: {}", what, p.string()));
}

}  // namespace

PipelineConfig default_config(const fs::path& data_dir) {
    PipelineConfig c;
    c.preprocess.stopwords = data_dir / "stopwords.txt";
    c.preprocess.slang = data_dir / "slang.tsv";
    c.preprocess.dictionary = data_dir / "dictionary.txt";
    c.emotion.lexicon = data_dir / "emotion_lexicon.tsv";
    c.concerns.lexicon = data_dir / "concerns.toml";
    return c;
}

void PipelineConfig::validate() const {
    if (!(graph.damping > 0.0 && graph.damping < 1.0)) throw InvalidArgument("config: graph.damping must be in (0, 1)");
    if (!(graph.tol > 0.0)) throw InvalidArgument("config: graph.tol must be > 0");
    if (graph.max_iter == 0) throw InvalidArgument("config: graph.max_iter must be >= 1");
    if (graph.leader_top_k < 2) throw InvalidArgument("config: graph.leader_top_k must be >= 2");
    if (graph.max_communities < 2) throw InvalidArgument("config: graph.max_communities must be >= 2");
    if (lda.topic_counts.empty()) throw InvalidArgument("config: lda.topics must not be empty");
    if (lda.burn_in >= lda.iterations) throw InvalidArgument("config: lda.burn_in must be < lda.iterations");
    if (!(lda.beta > 0.0)) throw InvalidArgument("config: lda.beta must be > 0");
    if (lda.alpha && !(*lda.alpha > 0.0)) throw InvalidArgument("config: lda.alpha must be > 0");
    if (!(concerns.alpha > 0.0 && concerns.alpha < 1.0)) throw InvalidArgument("config: concerns.alpha must be in (0, 1)");
    if (classify.folds < 2) throw InvalidArgument("config: classify.folds must be >= 2");
    if (classify.repeats < 1) throw InvalidArgument("config: classify.repeats must be >= 1");
    if (classify.n_trees < 1) throw InvalidArgument("config: classify.n_trees must be >= 1");
    if (classify.min_leaf < 1) throw InvalidArgument("config: classify.min_leaf must be >= 1");
    if (classify.smote_k < 1) throw InvalidArgument("config: classify.smote_k must be >= 1");
    if (preprocess.spell_correction && !preprocess.dictionary)
        throw InvalidArgument("config: preprocess.spell_correction needs preprocess.dictionary");
    require_file(preprocess.stopwords, "stopword list");
    require_file(preprocess.slang, "slang map");
    if (preprocess.dictionary) require_file(*preprocess.dictionary, "dictionary");
    require_file(emotion.lexicon, "emotion lexicon");
    if (concerns.lexicon) require_file(*concerns.lexicon, "concern lexicon");
}

PipelineConfig load_config(const fs::path& path) {
    toml::table root;
    try {
        root = toml::parse_file(path.string());
    } catch (const toml::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.description()), e.source().begin.line);
    }
    const fs::path base = fs::absolute(path).parent_path();
    // Resource paths default to the bundled data directory.
    PipelineConfig c = default_config(LEADERS_DATA_DIR);

    Section top(&root, "config", base);
    top.get("seed", c.seed);
    top.get_path("input", c.input);
    top.get_path("out", c.out);

    auto sub = [&](std::string_view name) {
        const toml::node* node = root.get(name);
        if (node && !node->is_table()) throw InvalidArgument(fmt::format("config: [{}] must be a table", name));
        return Section(node ? node->as_table() : nullptr, std::string(name), base);
    };

    auto pre = sub("preprocess");
    pre.get_path("stopwords", c.preprocess.stopwords);
    pre.get_path("slang", c.preprocess.slang);
    pre.get_path("dictionary", c.preprocess.dictionary);
    pre.get("spell_correction", c.preprocess.spell_correction);
    pre.get("stemming", c.preprocess.stemming);
    pre.get("min_token_length", c.preprocess.min_token_length);
    pre.get_strings("keywords", c.preprocess.keywords);
    pre.finish();

    auto gr = sub("graph");
    gr.get("damping", c.graph.damping);
    gr.get("tol", c.graph.tol);
    gr.get("max_iter", c.graph.max_iter);
    gr.get("leader_top_k", c.graph.leader_top_k);
    gr.get("max_communities", c.graph.max_communities);
    gr.finish();

    auto em = sub("emotion");
    em.get_path("lexicon", c.emotion.lexicon);
    em.finish();

    auto lda = sub("lda");
    lda.get_sizes("topics", c.lda.topic_counts);
    lda.get("iterations", c.lda.iterations);
    lda.get("burn_in", c.lda.burn_in);
    lda.get("beta", c.lda.beta);
    lda.get("alpha", c.lda.alpha);
    lda.get("min_count", c.lda.min_count);
    lda.get("top_words", c.lda.top_words);
    lda.finish();

    auto con = sub("concerns");
    con.get_path("lexicon", c.concerns.lexicon);
    con.get("alpha", c.concerns.alpha);
    con.get("wordcloud_top", c.concerns.wordcloud_top);
    con.finish();

    auto cl = sub("classify");
    cl.get("folds", c.classify.folds);
    cl.get("repeats", c.classify.repeats);
    cl.get("n_trees", c.classify.n_trees);
    cl.get("max_depth", c.classify.max_depth);
    cl.get("min_leaf", c.classify.min_leaf);
    cl.get("max_features", c.classify.max_features);
    cl.get("smote_k", c.classify.smote_k);
    cl.get("min_df", c.classify.min_df);
    cl.get("tfidf_max_features", c.classify.tfidf_max_features);
    cl.get("standardize", c.classify.standardize);
    cl.get("seed", c.classify.seed);
    cl.finish();

    top.finish({"preprocess", "graph", "emotion", "lda", "concerns", "classify"});
    return c;
}

std::string section_json(const PipelineConfig& c, std::string_view section) {
    ordered_json j;
    if (section == "global") {
        j["seed"] = c.seed;
    } else if (section == "preprocess") {
        j["stemming"] = c.preprocess.stemming;
        j["spell_correction"] = c.preprocess.spell_correction;
        j["min_token_length"] = c.preprocess.min_token_length;
        j["keywords"] = c.preprocess.keywords;
    } else if (section == "graph") {
        j["damping"] = c.graph.damping;
        j["tol"] = c.graph.tol;
        j["max_iter"] = c.graph.max_iter;
        j["leader_top_k"] = c.graph.leader_top_k;
        j["max_communities"] = c.graph.max_communities;
    } else if (section == "lda") {
        j["topics"] = c.lda.topic_counts;
        j["iterations"] = c.lda.iterations;
        j["burn_in"] = c.lda.burn_in;
        j["beta"] = c.lda.beta;
        j["alpha"] = c.lda.alpha ? ordered_json(*c.lda.alpha) : ordered_json();
        j["min_count"] = c.lda.min_count;
        j["top_words"] = c.lda.top_words;
    } else if (section == "concerns") {
        j["alpha"] = c.concerns.alpha;
        j["wordcloud_top"] = c.concerns.wordcloud_top;
    } else if (section == "classify") {
        j["folds"] = c.classify.folds;
        j["repeats"] = c.classify.repeats;
        j["n_trees"] = c.classify.n_trees;
        j["max_depth"] = c.classify.max_depth;
        j["min_leaf"] = c.classify.min_leaf;
        j["max_features"] = c.classify.max_features ? ordered_json(*c.classify.max_features) : ordered_json();
        j["smote_k"] = c.classify.smote_k;
        j["min_df"] = c.classify.min_df;
        j["tfidf_max_features"] = c.classify.tfidf_max_features;
        j["standardize"] = c.classify.standardize;
        j["seed"] = c.classify.seed ? ordered_json(*c.classify.seed) : ordered_json();
    } else {
        throw InvalidArgument(fmt::format("section_json: unknown section '{}'", section));
    }
    return j.dump();
}

}  // namespace leaders::pipeline
