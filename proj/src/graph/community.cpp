#include "leaders/graph/community.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "leaders/csv.hpp"
#include "leaders/error.hpp"

namespace leaders::graph {

std::size_t CommunityPartition::community_count() const {
    if (assignment.empty()) return 0;
    return static_cast<std::size_t>(*std::max_element(assignment.begin(), assignment.end())) + 1;
}

namespace {

// Adjacency with the id of each incident edge, for the current edge set.
struct IndexedAdjacency {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> neighbors;
    std::vector<std::size_t> edge_ids;
};

class EdgeIndex {
public:
    explicit EdgeIndex(const UndirectedGraph& g) {
        for (NodeId u = 0; u < g.node_count(); ++u)
            for (NodeId v : g.neighbors(u))
                if (u < v) edges_.emplace_back(u, v);
    }

    std::size_t size() const noexcept { return edges_.size(); }
    const UndirectedEdge& operator[](std::size_t i) const { return edges_[i]; }

    std::size_t id(NodeId u, NodeId v) const {
        const UndirectedEdge key = u < v ? UndirectedEdge{u, v} : UndirectedEdge{v, u};
        return static_cast<std::size_t>(std::lower_bound(edges_.begin(), edges_.end(), key) - edges_.begin());
    }

    IndexedAdjacency adjacency(const UndirectedGraph& g) const {
        IndexedAdjacency a;
        a.offsets.reserve(g.node_count() + 1);
        a.offsets.push_back(0);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            for (NodeId v : g.neighbors(u)) {
                a.neighbors.push_back(v);
                a.edge_ids.push_back(id(u, v));
            }
            a.offsets.push_back(a.neighbors.size());
        }
        return a;
    }

private:
    std::vector<UndirectedEdge> edges_;
};

// Brandes accumulation from one source; adds ordered-pair dependencies to `acc`.
class BrandesWorker {
public:
    explicit BrandesWorker(std::size_t n) : sigma_(n, 0.0), dist_(n, -1), delta_(n, 0.0) { order_.reserve(n); }

    void run(const IndexedAdjacency& a, NodeId s, std::vector<double>& acc) {
        order_.clear();
        for (NodeId u : touched_) {
            sigma_[u] = 0.0;
            dist_[u] = -1;
            delta_[u] = 0.0;
        }
        touched_.clear();

        sigma_[s] = 1.0;
        dist_[s] = 0;
        touched_.push_back(s);
        order_.push_back(s);
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const NodeId u = order_[head];
            for (std::size_t k = a.offsets[u]; k < a.offsets[u + 1]; ++k) {
                const NodeId v = a.neighbors[k];
                if (dist_[v] < 0) {
                    dist_[v] = dist_[u] + 1;
                    order_.push_back(v);
                    touched_.push_back(v);
                }
                if (dist_[v] == dist_[u] + 1) sigma_[v] += sigma_[u];
            }
        }
        for (std::size_t idx = order_.size(); idx-- > 1;) {
            const NodeId w = order_[idx];
            for (std::size_t k = a.offsets[w]; k < a.offsets[w + 1]; ++k) {
                const NodeId v = a.neighbors[k];
                if (dist_[v] != dist_[w] - 1) continue;
                const double c = sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
                acc[a.edge_ids[k]] += c;
                delta_[v] += c;
            }
        }
    }

private:
    std::vector<double> sigma_;
    std::vector<int> dist_;
    std::vector<double> delta_;
    std::vector<NodeId> order_;
    std::vector<NodeId> touched_;
};

// Sums source contributions in a fixed number of contiguous blocks merged in
// block order, so the floating-point result does not depend on thread count.
std::vector<double> accumulate_betweenness(const UndirectedGraph& g, const EdgeIndex& index,
                                           std::span<const NodeId> sources) {
    constexpr std::size_t kBlocks = 64;
    const IndexedAdjacency adj = index.adjacency(g);
    const std::size_t blocks = std::min(kBlocks, std::max<std::size_t>(sources.size(), 1));
    std::vector<std::vector<double>> partial(blocks);

    auto process_block = [&](std::size_t b, BrandesWorker& worker) {
        const std::size_t lo = sources.size() * b / blocks;
        const std::size_t hi = sources.size() * (b + 1) / blocks;
        auto& acc = partial[b];
        acc.assign(index.size(), 0.0);
        for (std::size_t i = lo; i < hi; ++i) worker.run(adj, sources[i], acc);
    };

    const std::size_t threads =
        std::min<std::size_t>(blocks, std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        BrandesWorker worker(g.node_count());
        for (std::size_t b = next++; b < blocks; b = next++) process_block(b, worker);
    };
    if (threads <= 1 || sources.size() < 32) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }

    std::vector<double> total(index.size(), 0.0);
    for (const auto& acc : partial)
        for (std::size_t e = 0; e < total.size(); ++e) total[e] += acc[e];
    for (double& v : total) v *= 0.5;  // each unordered pair was seen from both ends
    return total;
}

std::vector<NodeId> all_nodes(std::size_t n) {
    std::vector<NodeId> v(n);
    for (NodeId i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

std::map<UndirectedEdge, double> edge_betweenness(const UndirectedGraph& g) {
    const EdgeIndex index(g);
    const auto values = accumulate_betweenness(g, index, all_nodes(g.node_count()));
    std::map<UndirectedEdge, double> out;
    for (std::size_t e = 0; e < index.size(); ++e) out.emplace(index[e], values[e]);
    return out;
}

std::map<UndirectedEdge, double> edge_betweenness(const RetweetGraph& g) {
    return edge_betweenness(UndirectedGraph(g));
}

double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> assignment) {
    if (assignment.size() != g.node_count())
        throw InvalidArgument("partition does not cover every node");
    const std::size_t m = g.edge_count();
    if (m == 0) return 0.0;

    std::vector<std::uint32_t> ids(assignment.begin(), assignment.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto dense = [&](std::uint32_t c) {
        return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), c) - ids.begin());
    };

    std::vector<double> internal(ids.size(), 0.0);
    std::vector<double> degree_sum(ids.size(), 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const std::size_t cu = dense(assignment[u]);
        degree_sum[cu] += static_cast<double>(g.degree(u));
        for (NodeId v : g.neighbors(u))
            if (u < v && assignment[v] == assignment[u]) internal[cu] += 1.0;
    }
    const double md = static_cast<double>(m);
    double q = 0.0;
    for (std::size_t c = 0; c < ids.size(); ++c) {
        const double a = degree_sum[c] / (2.0 * md);
        q += internal[c] / md - a * a;
    }
    return q;
}

double modularity(const RetweetGraph& g, std::span<const std::uint32_t> assignment) {
    return modularity(UndirectedGraph(g), assignment);
}

std::vector<CommunityPartition> girvan_newman(const UndirectedGraph& original, std::size_t max_communities) {
    if (original.node_count() < 2) throw InvalidArgument("girvan_newman needs at least 2 nodes");
    if (max_communities < 2) throw InvalidArgument("max_communities must be >= 2");

    std::vector<CommunityPartition> sequence;
    auto record = [&](std::vector<std::uint32_t> labels) {
        CommunityPartition p;
        p.modularity = modularity(original, labels);
        p.assignment = std::move(labels);
        sequence.push_back(std::move(p));
    };

    UndirectedGraph g = original;
    const EdgeIndex index(original);
    std::vector<char> alive(index.size(), 1);

    std::size_t count = 0;
    auto labels = g.components(&count);
    if (count >= 2) record(labels);

    std::vector<double> betweenness = accumulate_betweenness(g, index, all_nodes(g.node_count()));

    while (count < max_communities && g.edge_count() > 0) {
        double best = -1.0;
        for (std::size_t e = 0; e < index.size(); ++e)
            if (alive[e]) best = std::max(best, betweenness[e]);
        const double cutoff = best - 1e-9 * best;
        std::size_t chosen = index.size();
        for (std::size_t e = 0; e < index.size(); ++e) {
            if (alive[e] && betweenness[e] >= cutoff) {
                chosen = e;  // edges are stored in (u, v) order, so the first hit is the smallest pair
                break;
            }
        }
        const auto [u, v] = index[chosen];
        g.remove_edge(u, v);
        alive[chosen] = 0;
        betweenness[chosen] = 0.0;

        std::size_t new_count = 0;
        labels = g.components(&new_count);

        // Only pairs inside the component(s) that held the removed edge change.
        std::vector<NodeId> affected;
        for (NodeId x = 0; x < g.node_count(); ++x)
            if (labels[x] == labels[u] || labels[x] == labels[v]) affected.push_back(x);
        const auto partial = accumulate_betweenness(g, index, affected);
        for (std::size_t e = 0; e < index.size(); ++e) {
            if (!alive[e]) continue;
            const NodeId a = index[e].first;
            if (labels[a] == labels[u] || labels[a] == labels[v]) betweenness[e] = partial[e];
        }

        if (new_count > count) {
            count = new_count;
            record(labels);
        }
    }
    return sequence;
}

std::vector<CommunityPartition> girvan_newman(const RetweetGraph& g, std::size_t max_communities) {
    return girvan_newman(UndirectedGraph(g), max_communities);
}

std::size_t best_partition(std::span<const CommunityPartition> sequence) {
    if (sequence.empty()) throw InvalidArgument("empty partition sequence");
    std::size_t best = 0;
    for (std::size_t i = 1; i < sequence.size(); ++i)
        if (sequence[i].modularity > sequence[best].modularity) best = i;
    return best;
}

void write_partition(const std::filesystem::path& path, std::span<const std::string> handles,
                     const CommunityPartition& partition) {
    if (handles.size() != partition.assignment.size())
        throw InvalidArgument("partition/handle size mismatch");
    csv::Writer out(path);
    out.row({"handle", "community"});
    for (std::size_t i = 0; i < handles.size(); ++i)
        out.row({handles[i], std::to_string(partition.assignment[i])});
}

std::map<std::string, std::uint32_t> read_partition(const std::filesystem::path& path) {
    std::map<std::string, std::uint32_t> out;
    const auto rows = csv::read_with_header(path, {"handle", "community"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        try {
            out[rows[i][0]] = static_cast<std::uint32_t>(std::stoul(rows[i][1]));
        } catch (const std::exception&) {
            throw ParseError("bad community id in " + path.string(), i + 2);
        }
    }
    return out;
}

}  // namespace leaders::graph
