#include "leaders/topics/lda.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>

#include "leaders/csv.hpp"
#include "leaders/error.hpp"
#include "leaders/rng.hpp"

namespace leaders::topics {

void LdaConfig::validate() const {
    if (topics < 1) throw InvalidArgument("LDA needs at least one topic");
    if (!(effective_alpha() > 0.0)) throw InvalidArgument("alpha must be > 0");
    if (!(beta > 0.0)) throw InvalidArgument("beta must be > 0");
    if (iterations == 0) throw InvalidArgument("iterations must be > 0");
    if (burn_in >= iterations) throw InvalidArgument("burn_in must be < iterations");
}

bool TopicModel::counts_consistent() const {
    const std::size_t K = num_topics, V = vocab.size(), D = docs.size();
    std::vector<std::uint32_t> tw(K * V, 0), dt(D * K, 0), tt(K, 0);
    for (std::size_t d = 0; d < D; ++d) {
        if (assignments[d].size() != docs[d].size()) return false;
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            const auto k = assignments[d][i];
            if (k >= K) return false;
            ++tw[k * V + docs[d][i]];
            ++dt[d * K + k];
            ++tt[k];
        }
    }
    if (tw != topic_word_counts || dt != doc_topic_counts || tt != topic_totals) return false;
    for (std::size_t k = 0; k < K; ++k) {
        std::uint64_t row = 0;
        for (std::size_t w = 0; w < V; ++w) row += topic_word(k, w);
        if (row != topic_totals[k]) return false;
    }
    for (std::size_t d = 0; d < D; ++d) {
        std::uint64_t row = 0;
        for (std::size_t k = 0; k < K; ++k) row += doc_topic(d, k);
        if (row != docs[d].size()) return false;
    }
    return true;
}

namespace {

void build_vocabulary(std::span<const Document> docs, std::size_t min_count, TopicModel& model) {
    std::map<std::string, std::size_t> freq;
    for (const auto& doc : docs)
        for (const auto& w : doc) ++freq[w];
    for (const auto& [word, count] : freq) {
        if (count < min_count) continue;
        model.word_index.emplace(word, static_cast<std::uint32_t>(model.vocab.size()));
        model.vocab.push_back(word);
    }
    model.docs.reserve(docs.size());
    for (const auto& doc : docs) {
        std::vector<std::uint32_t> ids;
        for (const auto& w : doc)
            if (auto it = model.word_index.find(w); it != model.word_index.end()) ids.push_back(it->second);
        model.docs.push_back(std::move(ids));
    }
}

double joint_log_likelihood(const TopicModel& m) {
    const std::size_t K = m.num_topics, V = m.vocab.size(), D = m.docs.size();
    const double a = m.alpha, b = m.beta;
    const double vb = static_cast<double>(V) * b, ka = static_cast<double>(K) * a;
    const double lg_a = std::lgamma(a), lg_b = std::lgamma(b);
    // Zero-count cells contribute lgamma(x) - lgamma(x) = 0 and are skipped.
    double ll = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        ll += std::lgamma(vb) - std::lgamma(m.topic_totals[k] + vb);
        for (std::size_t w = 0; w < V; ++w)
            if (const auto c = m.topic_word(k, w)) ll += std::lgamma(c + b) - lg_b;
    }
    for (std::size_t d = 0; d < D; ++d) {
        ll += std::lgamma(ka) - std::lgamma(static_cast<double>(m.docs[d].size()) + ka);
        for (std::size_t k = 0; k < K; ++k)
            if (const auto c = m.doc_topic(d, k)) ll += std::lgamma(c + a) - lg_a;
    }
    return ll;
}

}  // namespace

TopicModel fit_lda(std::span<const Document> docs, const LdaConfig& config, const SweepObserver& observer) {
    config.validate();
    TopicModel m;
    m.num_topics = config.topics;
    m.alpha = config.effective_alpha();
    m.beta = config.beta;
    build_vocabulary(docs, config.min_count, m);

    const std::size_t K = m.num_topics, V = m.vocab.size(), D = m.docs.size();
    std::size_t tokens = 0;
    for (const auto& d : m.docs) tokens += d.size();
    if (tokens == 0) throw InvalidArgument("all documents are empty after vocabulary pruning");

    m.topic_word_counts.assign(K * V, 0);
    m.doc_topic_counts.assign(D * K, 0);
    m.topic_totals.assign(K, 0);
    m.assignments.resize(D);

    Rng rng(config.seed);
    for (std::size_t d = 0; d < D; ++d) {
        m.assignments[d].resize(m.docs[d].size());
        for (std::size_t i = 0; i < m.docs[d].size(); ++i) {
            const auto k = static_cast<std::uint32_t>(rng.below(K));
            m.assignments[d][i] = k;
            ++m.topic_word_counts[k * V + m.docs[d][i]];
            ++m.doc_topic_counts[d * K + k];
            ++m.topic_totals[k];
        }
    }

    std::vector<double> phi_sum(K * V, 0.0), theta_sum(D * K, 0.0);
    std::size_t samples = 0;
    std::vector<double> cumulative(K);
    const double vbeta = static_cast<double>(V) * m.beta;
    const double kalpha = static_cast<double>(K) * m.alpha;

    for (std::size_t sweep = 0; sweep < config.iterations; ++sweep) {
        for (std::size_t d = 0; d < D; ++d) {
            auto* dt = &m.doc_topic_counts[d * K];
            for (std::size_t i = 0; i < m.docs[d].size(); ++i) {
                const std::uint32_t w = m.docs[d][i];
                std::uint32_t k = m.assignments[d][i];
                --m.topic_word_counts[k * V + w];
                --dt[k];
                --m.topic_totals[k];

                double total = 0.0;
                for (std::size_t t = 0; t < K; ++t) {
                    total += (dt[t] + m.alpha) * (m.topic_word_counts[t * V + w] + m.beta) /
                             (m.topic_totals[t] + vbeta);
                    cumulative[t] = total;
                }
                const double u = rng.uniform() * total;
                k = static_cast<std::uint32_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                               cumulative.begin());
                if (k >= K) k = static_cast<std::uint32_t>(K - 1);

                m.assignments[d][i] = k;
                ++m.topic_word_counts[k * V + w];
                ++dt[k];
                ++m.topic_totals[k];
            }
        }
        m.log_likelihood.push_back(joint_log_likelihood(m));

        if (sweep >= config.burn_in) {
            ++samples;
            for (std::size_t k = 0; k < K; ++k) {
                const double denom = m.topic_totals[k] + vbeta;
                for (std::size_t w = 0; w < V; ++w)
                    phi_sum[k * V + w] += (m.topic_word_counts[k * V + w] + m.beta) / denom;
            }
            for (std::size_t d = 0; d < D; ++d) {
                const double denom = static_cast<double>(m.docs[d].size()) + kalpha;
                for (std::size_t k = 0; k < K; ++k) theta_sum[d * K + k] += (m.doc_topic_counts[d * K + k] + m.alpha) / denom;
            }
        }
        if (observer) observer(sweep, m);
    }

    for (double& v : phi_sum) v /= static_cast<double>(samples);
    for (double& v : theta_sum) v /= static_cast<double>(samples);
    m.phi = std::move(phi_sum);
    m.theta = std::move(theta_sum);
    return m;
}

std::vector<std::string> top_words(const TopicModel& model, std::size_t topic, std::size_t n) {
    if (topic >= model.num_topics) throw InvalidArgument("topic index out of range");
    std::vector<std::uint32_t> order(model.vocab_size());
    std::iota(order.begin(), order.end(), 0u);
    n = std::min(n, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                          const double pa = model.phi_at(topic, a), pb = model.phi_at(topic, b);
                          if (pa != pb) return pa > pb;
                          return a < b;
                      });
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(model.vocab[order[i]]);
    return out;
}

namespace {

double token_log_prob(const TopicModel& m, std::span<const double> theta_d, std::uint32_t w) {
    double p = 0.0;
    for (std::size_t k = 0; k < m.num_topics; ++k) p += theta_d[k] * m.phi_at(k, w);
    return std::log(p);
}

}  // namespace

double perplexity(const TopicModel& model) {
    double log_sum = 0.0;
    std::size_t tokens = 0;
    for (std::size_t d = 0; d < model.doc_count(); ++d) {
        std::span<const double> theta_d(model.theta.data() + d * model.num_topics, model.num_topics);
        for (std::uint32_t w : model.docs[d]) log_sum += token_log_prob(model, theta_d, w);
        tokens += model.docs[d].size();
    }
    if (tokens == 0) throw InvalidArgument("no scorable tokens");
    return std::exp(-log_sum / static_cast<double>(tokens));
}

double held_out_perplexity(const TopicModel& model, std::span<const Document> docs, std::size_t sweeps,
                           std::uint64_t seed) {
    const std::size_t K = model.num_topics;
    Rng rng(seed);
    std::vector<double> cumulative(K), theta_d(K);
    double log_sum = 0.0;
    std::size_t tokens = 0;
    for (const auto& doc : docs) {
        std::vector<std::uint32_t> ids;
        for (const auto& w : doc)
            if (auto it = model.word_index.find(w); it != model.word_index.end()) ids.push_back(it->second);
        if (ids.empty()) continue;

        std::vector<std::uint32_t> z(ids.size());
        std::vector<std::uint32_t> counts(K, 0);
        for (auto& k : z) {
            k = static_cast<std::uint32_t>(rng.below(K));
            ++counts[k];
        }
        for (std::size_t s = 0; s < sweeps; ++s) {
            for (std::size_t i = 0; i < ids.size(); ++i) {
                --counts[z[i]];
                double total = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    total += (counts[k] + model.alpha) * model.phi_at(k, ids[i]);
                    cumulative[k] = total;
                }
                const double u = rng.uniform() * total;
                auto k = static_cast<std::uint32_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                                    cumulative.begin());
                z[i] = std::min<std::uint32_t>(k, static_cast<std::uint32_t>(K - 1));
                ++counts[z[i]];
            }
        }
        const double denom = static_cast<double>(ids.size()) + K * model.alpha;
        for (std::size_t k = 0; k < K; ++k) theta_d[k] = (counts[k] + model.alpha) / denom;
        for (std::uint32_t w : ids) log_sum += token_log_prob(model, theta_d, w);
        tokens += ids.size();
    }
    if (tokens == 0) throw InvalidArgument("no scorable tokens");
    return std::exp(-log_sum / static_cast<double>(tokens));
}

std::vector<double> umass_coherence(const TopicModel& model, std::span<const Document> docs, std::size_t n) {
    std::vector<std::vector<std::string>> tops(model.num_topics);
    std::map<std::string, std::vector<std::uint32_t>> postings;  // word -> sorted doc ids
    for (std::size_t k = 0; k < model.num_topics; ++k) {
        tops[k] = top_words(model, k, n);
        for (const auto& w : tops[k]) postings.try_emplace(w);
    }
    for (std::uint32_t d = 0; d < docs.size(); ++d) {
        for (const auto& w : docs[d]) {
            auto it = postings.find(w);
            if (it != postings.end() && (it->second.empty() || it->second.back() != d)) it->second.push_back(d);
        }
    }
    auto co_count = [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        std::size_t i = 0, j = 0, c = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) ++i;
            else if (b[j] < a[i]) ++j;
            else { ++c; ++i; ++j; }
        }
        return c;
    };

    std::vector<double> out(model.num_topics, 0.0);
    for (std::size_t k = 0; k < model.num_topics; ++k) {
        const auto& words = tops[k];
        double c = 0.0;
        for (std::size_t j = 1; j < words.size() && c != kNoCoherence; ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                const auto& pi = postings[words[i]];
                if (pi.empty()) {
                    c = kNoCoherence;
                    break;
                }
                const auto& pj = postings[words[j]];
                c += std::log((static_cast<double>(co_count(pi, pj)) + 1.0) / static_cast<double>(pi.size()));
            }
        }
        out[k] = c;
    }
    return out;
}

SweepResult sweep_topic_count(std::span<const Document> docs, std::span<const std::size_t> topic_counts,
                              const LdaConfig& config_template, std::size_t coherence_top_n) {
    if (topic_counts.empty()) throw InvalidArgument("empty topic-count range");
    std::vector<std::size_t> ks(topic_counts.begin(), topic_counts.end());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    struct Outcome {
        SweepRow row;
        std::optional<TopicModel> model;
    };
    auto run_one = [&](std::size_t k) {
        Outcome o;
        o.row.topics = k;
        try {
            LdaConfig cfg = config_template;
            cfg.topics = k;
            TopicModel model = fit_lda(docs, cfg);
            o.row.perplexity = perplexity(model);
            const auto coherence = umass_coherence(model, docs, coherence_top_n);
            o.row.mean_coherence = std::accumulate(coherence.begin(), coherence.end(), 0.0) /
                                   static_cast<double>(coherence.size());
            o.model = std::move(model);
        } catch (const std::exception& e) {
            o.row.error = e.what();
        }
        return o;
    };

    std::vector<std::future<Outcome>> futures;
    for (std::size_t k : ks) futures.push_back(std::async(std::launch::async, run_one, k));

    SweepResult result;
    for (auto& f : futures) {
        auto o = f.get();
        result.rows.push_back(o.row);
        result.models.push_back(std::move(o.model));
    }
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (result.rows[i].error) continue;
        if (!result.selected || result.rows[i].mean_coherence > result.rows[*result.selected].mean_coherence)
            result.selected = i;
    }
    return result;
}

void write_topic_report(const std::filesystem::path& path, const TopicModel& model, std::size_t n) {
    csv::Writer out(path);
    out.row({"topic", "rank", "word", "probability"});
    for (std::size_t k = 0; k < model.num_topics; ++k) {
        const auto words = top_words(model, k, n);
        for (std::size_t r = 0; r < words.size(); ++r) {
            const double p = model.phi_at(k, model.word_index.at(words[r]));
            out.row({std::to_string(k), std::to_string(r + 1), words[r], csv::number(p)});
        }
    }
}

void write_sweep_report(const std::filesystem::path& path, const SweepResult& sweep) {
    csv::Writer out(path);
    out.row({"K", "perplexity", "mean_coherence"});
    for (const auto& row : sweep.rows) {
        if (row.error) {
            out.row({std::to_string(row.topics), "nan", "nan"});
            continue;
        }
        out.row({std::to_string(row.topics), csv::number(row.perplexity), csv::number(row.mean_coherence)});
    }
}

}  // namespace leaders::topics
