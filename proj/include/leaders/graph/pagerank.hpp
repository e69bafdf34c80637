#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "leaders/graph/retweet_graph.hpp"

namespace leaders::graph {

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-10;
    std::size_t max_iter = 200;
};

struct PageRankVector {
    std::vector<std::string> handles;
    std::vector<double> scores;
    double damping = 0.85;
    std::size_t iterations_used = 0;
    bool converged = false;
};

/// Weighted power iteration. Each node passes damping * score along its
/// out-edges in proportion to edge weight; dangling nodes spread their mass
/// uniformly; the teleport term is (1 - damping) / N. Iteration stops once the
/// L1 change drops below tol. Throws InvalidArgument on an empty graph or a
/// damping outside (0, 1).
PageRankVector pagerank(const RetweetGraph& g, const PageRankOptions& options = {});

/// Top-n handles by score, descending; equal scores (to 1e-12) ordered by handle.
std::vector<std::string> select_leaders(const PageRankVector& pr, std::size_t n);

/// Node ids of the top-n entries; same ordering as select_leaders.
std::vector<NodeId> top_nodes(const PageRankVector& pr, std::size_t n);

/// CSV `handle,score`, rows in descending-score order.
void write_pagerank(const std::filesystem::path& path, const PageRankVector& pr);
PageRankVector read_pagerank(const std::filesystem::path& path);

}  // namespace leaders::graph
