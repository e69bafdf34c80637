#include "leaders/concerns/concerns.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <toml.hpp>

#include "json.hpp"
#include "leaders/concerns/gamma.hpp"
#include "leaders/corpus/porter_stemmer.hpp"
#include "leaders/csv.hpp"
#include "leaders/error.hpp"

namespace leaders::concerns {

namespace {

std::string lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

std::string merged_name(const std::string& name) {
    const auto colon = name.find(':');
    return colon == std::string::npos ? name : name.substr(0, colon);
}

}  // namespace

ConcernLexicon::ConcernLexicon(std::vector<std::pair<std::string, std::vector<std::string>>> concerns) {
    std::set<std::string> names;
    for (auto& [name, keywords] : concerns) {
        if (name.empty()) throw InvalidArgument("empty concern name");
        if (!names.insert(name).second) throw InvalidArgument("duplicate concern name: " + name);
        Concern c;
        c.name = name;
        for (auto& k : keywords) {
            auto word = lower(k);
            if (word.empty()) continue;
            c.stemmed.push_back(corpus::porter_stem(word));
            c.keywords.push_back(std::move(word));
        }
        std::sort(c.stemmed.begin(), c.stemmed.end());
        c.stemmed.erase(std::unique(c.stemmed.begin(), c.stemmed.end()), c.stemmed.end());

        const auto group = merged_name(name);
        auto it = std::find(merged_.begin(), merged_.end(), group);
        if (it == merged_.end()) {
            merged_of_.push_back(merged_.size());
            merged_.push_back(group);
        } else {
            merged_of_.push_back(static_cast<std::size_t>(it - merged_.begin()));
        }
        concerns_.push_back(std::move(c));
    }
}

ConcernLexicon ConcernLexicon::defaults() {
    return ConcernLexicon({
        {"symptoms", {"symptom"}},
        {"vaccination", {"vaccine", "vaccination"}},
        {"countermeasures:hygiene", {"hygiene", "wash", "hand"}},
        {"countermeasures:mask", {"mask"}},
        {"travel", {"travel", "flying", "fly", "airplane", "flight", "trip"}},
        {"pandemic", {"pandemic", "epidemic"}},
    });
}

std::vector<std::string> ConcernLexicon::merged_names() const { return merged_; }

ConcernLexicon load_concern_lexicon(const std::filesystem::path& path) {
    toml::table root;
    try {
        root = toml::parse_file(path.string());
    } catch (const toml::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.description()),
                         e.source().begin.line);
    }
    const toml::table* table = root["concerns"].as_table();
    if (!table) throw ParseError("missing [concerns] table in " + path.string());

    struct Entry {
        toml::source_position pos;
        std::string name;
        std::vector<std::string> keywords;
    };
    std::vector<Entry> entries;
    for (const auto& [key, node] : *table) {
        const toml::array* arr = node.as_array();
        if (!arr) throw ParseError("concern '" + std::string(key.str()) + "' must be an array", key.source().begin.line);
        Entry e{key.source().begin, std::string(key.str()), {}};
        for (const auto& item : *arr) {
            const auto s = item.value<std::string>();
            if (!s) throw ParseError("keywords must be strings in " + path.string(), key.source().begin.line);
            e.keywords.push_back(*s);
        }
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.pos.line, a.pos.column) < std::tie(b.pos.line, b.pos.column);
    });
    std::vector<std::pair<std::string, std::vector<std::string>>> concerns;
    for (auto& e : entries) concerns.emplace_back(std::move(e.name), std::move(e.keywords));
    return ConcernLexicon(std::move(concerns));
}

ConcernLabels annotate_concerns(std::span<const std::string> tokens, const ConcernLexicon& lexicon) {
    ConcernLabels labels;
    for (std::size_t i = 0; i < lexicon.size(); ++i) {
        const auto& stems = lexicon[i].stemmed;
        const bool hit = std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
            return std::binary_search(stems.begin(), stems.end(), t);
        });
        if (hit) labels.concerns.push_back(i);
    }
    return labels;
}

std::vector<double> merged_indicators(const ConcernLabels& labels, const ConcernLexicon& lexicon) {
    std::vector<double> out(lexicon.merged_names().size(), 0.0);
    for (auto c : labels.concerns) out[lexicon.merged_index(c)] = 1.0;
    return out;
}

ContingencyTable ContingencyTable::pruned() const {
    std::vector<std::size_t> keep_rows, keep_cols;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::uint64_t t = 0;
        for (std::size_t c = 0; c < cols.size(); ++c) t += at(r, c);
        if (t) keep_rows.push_back(r);
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        std::uint64_t t = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) t += at(r, c);
        if (t) keep_cols.push_back(c);
    }
    ContingencyTable out;
    for (auto r : keep_rows) out.rows.push_back(rows[r]);
    for (auto c : keep_cols) out.cols.push_back(cols[c]);
    for (auto r : keep_rows)
        for (auto c : keep_cols) out.cells.push_back(at(r, c));
    return out;
}

Alignment concern_alignment(std::span<const ConcernLabels> labels, std::span<const std::uint32_t> cluster_of,
                            std::span<const std::string> cluster_names, const ConcernLexicon& lexicon) {
    if (labels.size() != cluster_of.size()) throw InvalidArgument("labels and clusters differ in length");
    const auto cols = lexicon.merged_names();
    std::vector<std::uint64_t> full(cluster_names.size() * cols.size(), 0);
    bool any = false;
    for (std::size_t t = 0; t < labels.size(); ++t) {
        if (cluster_of[t] >= cluster_names.size()) throw InvalidArgument("cluster id out of range");
        std::vector<char> hit(cols.size(), 0);
        for (auto c : labels[t].concerns) hit[lexicon.merged_index(c)] = 1;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (!hit[c]) continue;
            ++full[cluster_of[t] * cols.size() + c];
            any = true;
        }
    }
    if (!any) throw InvalidArgument("empty contingency");

    Alignment out;
    out.table.cols = cols;
    for (std::size_t r = 0; r < cluster_names.size(); ++r) {
        std::uint64_t total = 0;
        for (std::size_t c = 0; c < cols.size(); ++c) total += full[r * cols.size() + c];
        if (total == 0) continue;
        out.table.rows.push_back(cluster_names[r]);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto v = full[r * cols.size() + c];
            out.table.cells.push_back(v);
            out.shares.push_back(static_cast<double>(v) / static_cast<double>(total));
        }
    }
    return out;
}

void write_alignment(const std::filesystem::path& path, const Alignment& alignment) {
    csv::Writer out(path);
    out.row({"cluster", "concern", "count", "share"});
    const auto& t = alignment.table;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (std::size_t c = 0; c < t.cols.size(); ++c)
            out.row({t.rows[r], t.cols[c], std::to_string(t.at(r, c)),
                     csv::number(alignment.shares[r * t.cols.size() + c])});
}

ChiSquareResult chi_square_independence(const ContingencyTable& table, double alpha) {
    const std::size_t R = table.rows.size(), C = table.cols.size();
    if (R < 2 || C < 2) throw InvalidArgument("chi-square test needs at least a 2x2 table");
    if (table.cells.size() != R * C) throw InvalidArgument("contingency cell count mismatch");

    std::vector<double> row_tot(R, 0.0), col_tot(C, 0.0);
    double grand = 0.0;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            const double v = static_cast<double>(table.at(r, c));
            row_tot[r] += v;
            col_tot[c] += v;
            grand += v;
        }

    ChiSquareResult res;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            const double expected = row_tot[r] * col_tot[c] / (grand > 0 ? grand : 1.0);
            if (!(expected > 0.0)) throw InvalidArgument("degenerate table");
            const double diff = static_cast<double>(table.at(r, c)) - expected;
            res.statistic += diff * diff / expected;
        }
    res.df = static_cast<int>((R - 1) * (C - 1));
    res.p_value = chi_square_sf(res.statistic, res.df);
    res.alpha = alpha;
    res.reject_null = res.p_value < alpha;
    return res;
}

std::string to_json(const ChiSquareResult& result) {
    nlohmann::ordered_json j;
    j["statistic"] = result.statistic;
    j["df"] = result.df;
    j["p_value"] = result.p_value;
    j["alpha"] = result.alpha;
    j["reject_null"] = result.reject_null;
    return j.dump(2);
}

void write_chi_square(const std::filesystem::path& path, const ChiSquareResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_json(result) << '\n';
}

}  // namespace leaders::concerns
