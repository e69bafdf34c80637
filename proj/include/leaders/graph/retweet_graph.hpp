#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "leaders/corpus/tweet.hpp"

namespace leaders::graph {

using NodeId = std::uint32_t;

struct WeightedEdge {
    NodeId target;
    std::uint64_t weight;

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Directed, weighted retweet network. An edge a -> b means "a retweeted b" and
/// its weight is the number of such retweets. Node ids are dense and follow the
/// lexicographic order of handles, so id order is handle order.
class RetweetGraph {
public:
    struct EdgeRecord {
        std::string source;
        std::string target;
        std::uint64_t weight = 1;
    };

    RetweetGraph() = default;

    /// Builds from edge records; parallel records are summed, self-loops are
    /// dropped (see self_loops_dropped()), `extra_nodes` become isolated nodes
    /// if they do not already appear in an edge.
    static RetweetGraph from_edges(std::span<const EdgeRecord> edges,
                                   std::span<const std::string> extra_nodes = {});

    std::size_t node_count() const noexcept { return handles_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::size_t self_loops_dropped() const noexcept { return self_loops_; }

    const std::string& handle(NodeId id) const { return handles_.at(id); }
    const std::vector<std::string>& handles() const noexcept { return handles_; }
    std::optional<NodeId> find(std::string_view handle) const;

    /// Out-edges sorted by target id.
    std::span<const WeightedEdge> out_edges(NodeId id) const { return out_[id]; }
    std::uint64_t out_weight(NodeId id) const { return out_weight_[id]; }

    /// All edges in (source, target) order.
    std::vector<EdgeRecord> edges() const;

    /// Subgraph induced on `nodes` (duplicates ignored); ids are re-densified.
    RetweetGraph induced_subgraph(std::span<const NodeId> nodes) const;

private:
    std::vector<std::string> handles_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::vector<WeightedEdge>> out_;
    std::vector<std::uint64_t> out_weight_;
    std::size_t edge_count_ = 0;
    std::size_t self_loops_ = 0;
};

/// Every author and retweeted account becomes a node; only retweet records
/// contribute edges.
RetweetGraph build_retweet_graph(std::span<const corpus::RawTweet> tweets);

/// Simple undirected view (weights and direction dropped) used for community
/// detection. Adjacency lists are sorted.
class UndirectedGraph {
public:
    explicit UndirectedGraph(std::size_t nodes = 0) : adj_(nodes) {}
    explicit UndirectedGraph(const RetweetGraph& g);

    /// Adds u-v if absent; self-loops are ignored.
    void add_edge(NodeId u, NodeId v);
    void remove_edge(NodeId u, NodeId v);
    bool has_edge(NodeId u, NodeId v) const;

    std::size_t node_count() const noexcept { return adj_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }
    std::size_t degree(NodeId u) const { return adj_[u].size(); }
    std::span<const NodeId> neighbors(NodeId u) const { return adj_[u]; }

    /// Connected-component label per node, labels numbered by smallest member.
    std::vector<std::uint32_t> components(std::size_t* count = nullptr) const;

private:
    std::vector<std::vector<NodeId>> adj_;
    std::size_t edges_ = 0;
};

/// CSV `src,dst,weight` with a header row.
void write_edge_list(const std::filesystem::path& path, const RetweetGraph& g);
RetweetGraph read_edge_list(const std::filesystem::path& path,
                            std::span<const std::string> extra_nodes = {});

}  // namespace leaders::graph
