#include "leaders/graph/retweet_graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>

#include "leaders/csv.hpp"
#include "leaders/error.hpp"

namespace leaders::graph {

RetweetGraph RetweetGraph::from_edges(std::span<const EdgeRecord> edges,
                                      std::span<const std::string> extra_nodes) {
    std::set<std::string> names(extra_nodes.begin(), extra_nodes.end());
    for (const auto& e : edges) {
        names.insert(e.source);
        names.insert(e.target);
    }

    RetweetGraph g;
    g.handles_.assign(names.begin(), names.end());
    g.index_.reserve(g.handles_.size());
    for (NodeId i = 0; i < g.handles_.size(); ++i) g.index_.emplace(g.handles_[i], i);

    std::map<std::pair<NodeId, NodeId>, std::uint64_t> weights;
    for (const auto& e : edges) {
        if (e.source == e.target) {
            ++g.self_loops_;
            continue;
        }
        if (e.weight == 0) continue;
        weights[{g.index_.at(e.source), g.index_.at(e.target)}] += e.weight;
    }

    g.out_.assign(g.handles_.size(), {});
    g.out_weight_.assign(g.handles_.size(), 0);
    for (const auto& [key, w] : weights) {
        g.out_[key.first].push_back({key.second, w});
        g.out_weight_[key.first] += w;
    }
    g.edge_count_ = weights.size();
    return g;
}

std::optional<NodeId> RetweetGraph::find(std::string_view handle) const {
    auto it = index_.find(std::string(handle));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<RetweetGraph::EdgeRecord> RetweetGraph::edges() const {
    std::vector<EdgeRecord> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < out_.size(); ++u)
        for (const auto& e : out_[u]) out.push_back({handles_[u], handles_[e.target], e.weight});
    return out;
}

RetweetGraph RetweetGraph::induced_subgraph(std::span<const NodeId> nodes) const {
    std::vector<char> keep(handles_.size(), 0);
    std::vector<std::string> names;
    for (NodeId n : nodes) {
        if (!keep.at(n)) names.push_back(handles_[n]);
        keep[n] = 1;
    }
    std::vector<EdgeRecord> edges;
    for (NodeId u = 0; u < out_.size(); ++u) {
        if (!keep[u]) continue;
        for (const auto& e : out_[u])
            if (keep[e.target]) edges.push_back({handles_[u], handles_[e.target], e.weight});
    }
    return from_edges(edges, names);
}

RetweetGraph build_retweet_graph(std::span<const corpus::RawTweet> tweets) {
    std::vector<RetweetGraph::EdgeRecord> edges;
    std::vector<std::string> authors;
    authors.reserve(tweets.size());
    for (const auto& t : tweets) {
        authors.push_back(t.author);
        if (t.retweeted_author) edges.push_back({t.author, *t.retweeted_author, 1});
    }
    return RetweetGraph::from_edges(edges, authors);
}

UndirectedGraph::UndirectedGraph(const RetweetGraph& g) : adj_(g.node_count()) {
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (const auto& e : g.out_edges(u)) add_edge(u, e.target);
}

void UndirectedGraph::add_edge(NodeId u, NodeId v) {
    if (u == v) return;
    auto& au = adj_.at(u);
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return;
    au.insert(it, v);
    auto& av = adj_.at(v);
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++edges_;
}

void UndirectedGraph::remove_edge(NodeId u, NodeId v) {
    auto& au = adj_.at(u);
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it == au.end() || *it != v) return;
    au.erase(it);
    auto& av = adj_.at(v);
    av.erase(std::lower_bound(av.begin(), av.end(), u));
    --edges_;
}

bool UndirectedGraph::has_edge(NodeId u, NodeId v) const {
    const auto& au = adj_.at(u);
    return std::binary_search(au.begin(), au.end(), v);
}

std::vector<std::uint32_t> UndirectedGraph::components(std::size_t* count) const {
    constexpr auto unset = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> label(adj_.size(), unset);
    std::uint32_t next = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < adj_.size(); ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : adj_[u]) {
                if (label[v] == unset) {
                    label[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    if (count) *count = next;
    return label;
}

void write_edge_list(const std::filesystem::path& path, const RetweetGraph& g) {
    csv::Writer out(path);
    out.row({"src", "dst", "weight"});
    for (const auto& e : g.edges()) out.row({e.source, e.target, std::to_string(e.weight)});
}

RetweetGraph read_edge_list(const std::filesystem::path& path, std::span<const std::string> extra_nodes) {
    const auto rows = csv::read_with_header(path, {"src", "dst", "weight"});
    std::vector<RetweetGraph::EdgeRecord> edges;
    edges.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::uint64_t w = 0;
        auto [ptr, ec] = std::from_chars(r[2].data(), r[2].data() + r[2].size(), w);
        if (ec != std::errc{} || ptr != r[2].data() + r[2].size() || r[0].empty() || r[1].empty())
            throw ParseError("bad edge row in " + path.string(), i + 2);
        edges.push_back({r[0], r[1], w});
    }
    return RetweetGraph::from_edges(edges, extra_nodes);
}

}  // namespace leaders::graph
