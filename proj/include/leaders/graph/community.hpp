#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leaders/graph/retweet_graph.hpp"

namespace leaders::graph {

struct CommunityPartition {
    /// Community id per node, contiguous from 0.
    std::vector<std::uint32_t> assignment;
    double modularity = 0.0;

    std::size_t community_count() const;
};

using UndirectedEdge = std::pair<NodeId, NodeId>;  // first < second

/// Pair-dependency betweenness of every edge of the undirected view, counting
/// each unordered node pair once. Shortest-path credit is split fractionally.
/// The result is independent of the thread count.
std::map<UndirectedEdge, double> edge_betweenness(const UndirectedGraph& g);
std::map<UndirectedEdge, double> edge_betweenness(const RetweetGraph& g);

/// Newman modularity on the undirected view: sum over communities of
/// (internal edges / m) - (degree sum / 2m)^2. Community ids may be any
/// non-negative values. Throws InvalidArgument when the assignment does not
/// cover every node. A graph without edges has modularity 0.
double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> assignment);
double modularity(const RetweetGraph& g, std::span<const std::uint32_t> assignment);

/// Divisive Girvan-Newman. Repeatedly removes the edge of highest betweenness
/// (ties within 1e-9 relative go to the smallest (u, v) id pair; ids follow
/// handle order), recomputing betweenness in the affected component, and
/// records a partition each time the number of components grows. The starting
/// partition is recorded when it already has >= 2 components. Stops once
/// max_communities components exist or no edges remain.
std::vector<CommunityPartition> girvan_newman(const UndirectedGraph& g, std::size_t max_communities);
std::vector<CommunityPartition> girvan_newman(const RetweetGraph& g, std::size_t max_communities);

/// Index of the highest-modularity partition (first one on exact ties).
std::size_t best_partition(std::span<const CommunityPartition> sequence);

/// CSV `handle,community`.
void write_partition(const std::filesystem::path& path, std::span<const std::string> handles,
                     const CommunityPartition& partition);
/// Reads `handle,community` rows into a handle -> community map.
std::map<std::string, std::uint32_t> read_partition(const std::filesystem::path& path);

}  // namespace leaders::graph
