#include "leaders/graph/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "leaders/csv.hpp"
#include "leaders/error.hpp"

namespace leaders::graph {

PageRankVector pagerank(const RetweetGraph& g, const PageRankOptions& options) {
    const std::size_t n = g.node_count();
    if (n == 0) throw InvalidArgument("empty graph");
    if (!(options.damping > 0.0 && options.damping < 1.0))
        throw InvalidArgument("damping must lie in (0, 1)");

    const double d = options.damping;
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> score(n, inv_n);
    std::vector<double> next(n);

    PageRankVector result;
    result.damping = d;
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        double dangling = 0.0;
        for (NodeId u = 0; u < n; ++u)
            if (g.out_weight(u) == 0) dangling += score[u];

        const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
        std::fill(next.begin(), next.end(), base);
        for (NodeId u = 0; u < n; ++u) {
            const auto total = g.out_weight(u);
            if (total == 0) continue;
            const double share = d * score[u] / static_cast<double>(total);
            for (const auto& e : g.out_edges(u)) next[e.target] += share * static_cast<double>(e.weight);
        }

        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - score[i]);
        score.swap(next);
        result.iterations_used = iter + 1;
        if (change < options.tol) {
            result.converged = true;
            break;
        }
    }

    const double sum = std::accumulate(score.begin(), score.end(), 0.0);
    for (double& s : score) s /= sum;
    result.scores = std::move(score);
    result.handles = g.handles();
    return result;
}

std::vector<NodeId> top_nodes(const PageRankVector& pr, std::size_t n) {
    std::vector<NodeId> order(pr.scores.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    // Scores are compared on a 1e-12 grid so that round-off noise below the
    // convergence tolerance cannot reorder tied nodes.
    auto key = [&](NodeId i) { return std::llround(pr.scores[i] * 1e12); };
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        const auto ka = key(a), kb = key(b);
        if (ka != kb) return ka > kb;
        return pr.handles[a] < pr.handles[b];
    });
    order.resize(std::min(n, order.size()));
    return order;
}

std::vector<std::string> select_leaders(const PageRankVector& pr, std::size_t n) {
    std::vector<std::string> out;
    for (NodeId id : top_nodes(pr, n)) out.push_back(pr.handles[id]);
    return out;
}

void write_pagerank(const std::filesystem::path& path, const PageRankVector& pr) {
    csv::Writer out(path);
    out.row({"handle", "score"});
    for (NodeId id : top_nodes(pr, pr.scores.size()))
        out.row({pr.handles[id], csv::number(pr.scores[id])});
}

PageRankVector read_pagerank(const std::filesystem::path& path) {
    auto rows = csv::read_with_header(path, {"handle", "score"});
    std::sort(rows.begin(), rows.end(), [](const csv::Row& a, const csv::Row& b) { return a[0] < b[0]; });
    PageRankVector pr;
    pr.converged = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        pr.handles.push_back(rows[i][0]);
        try {
            pr.scores.push_back(std::stod(rows[i][1]));
        } catch (const std::exception&) {
            throw ParseError("bad score in " + path.string());
        }
    }
    return pr;
}

}  // namespace leaders::graph
