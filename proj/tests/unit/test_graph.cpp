#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "leaders/error.hpp"
#include "leaders/graph/community.hpp"
#include "leaders/graph/pagerank.hpp"
#include "leaders/graph/retweet_graph.hpp"
#include "support/oracles.hpp"
#include "support/planted.hpp"
#include "support/temp_dir.hpp"

using namespace leaders;
using namespace leaders::graph;
using testing::TempDir;
using Edge = std::pair<std::size_t, std::size_t>;

namespace {

corpus::RawTweet tweet(std::string id, std::string author, std::optional<std::string> rt = std::nullopt) {
    return {std::move(id), std::move(author), corpus::Timestamp{}, "text", std::move(rt)};
}

std::string node_name(std::size_t i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "n%03zu", i);
    return buf;
}

struct RandomDigraph {
    RetweetGraph graph;
    std::vector<oracle::DirectedEdge> edges;
};

RandomDigraph random_digraph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> w(1, 4);
    RandomDigraph out;
    std::vector<RetweetGraph::EdgeRecord> records;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(node_name(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && u(gen) < p) {
                const int weight = w(gen);
                records.push_back({names[i], names[j], static_cast<std::uint64_t>(weight)});
                out.edges.push_back({i, j, static_cast<double>(weight)});
            }
    out.graph = RetweetGraph::from_edges(records, names);
    return out;
}

UndirectedGraph undirected(std::size_t n, const std::vector<Edge>& edges) {
    UndirectedGraph g(n);
    for (auto [u, v] : edges) g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v));
    return g;
}

const std::vector<Edge> kTwoTriangles{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}};

RetweetGraph three_node() {
    std::vector<RetweetGraph::EdgeRecord> e{{"a", "c", 1}, {"b", "c", 1}, {"c", "a", 1}};
    return RetweetGraph::from_edges(e);
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("retweet graph collapses parallel edges and drops self-loops") {
    std::vector<corpus::RawTweet> t{
        tweet("1", "A", "B"), tweet("2", "A", "B"), tweet("3", "A", "A"), tweet("4", "C"),
    };
    auto g = build_retweet_graph(t);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 1);
    CHECK(g.self_loops_dropped() == 1);
    auto a = *g.find("A");
    REQUIRE(g.out_edges(a).size() == 1);
    CHECK(g.out_edges(a)[0].weight == 2);
    CHECK(g.handle(g.out_edges(a)[0].target) == "B");
    CHECK(g.out_edges(*g.find("C")).empty());
}

TEST_CASE("eight tweet fixture gives two edges with weights 2 and 1") {
    std::vector<corpus::RawTweet> t{
        tweet("1", "u1"), tweet("2", "u2"), tweet("3", "u3"), tweet("4", "u4"),
        tweet("5", "u5"), tweet("6", "u2", "u1"), tweet("7", "u2", "u1"), tweet("8", "u3", "u4"),
    };
    auto g = build_retweet_graph(t);
    CHECK(g.node_count() == 5);
    CHECK(g.edge_count() == 2);
    std::multiset<std::uint64_t> weights;
    for (const auto& e : g.edges()) weights.insert(e.weight);
    CHECK(weights == std::multiset<std::uint64_t>{1, 2});
}

TEST_CASE("node ids follow handle order and induced subgraphs re-densify") {
    std::vector<RetweetGraph::EdgeRecord> e{{"zed", "amy", 1}, {"amy", "mo", 3}, {"mo", "zed", 1}};
    auto g = RetweetGraph::from_edges(e, std::vector<std::string>{"bob"});
    CHECK(g.handles() == std::vector<std::string>{"amy", "bob", "mo", "zed"});
    std::vector<NodeId> keep{*g.find("mo"), *g.find("amy"), *g.find("amy")};
    auto sub = g.induced_subgraph(keep);
    CHECK(sub.handles() == std::vector<std::string>{"amy", "mo"});
    CHECK(sub.edge_count() == 1);
    CHECK(sub.out_edges(0)[0].weight == 3);
}

TEST_CASE("edge list csv round trip") {
    TempDir dir("graph");
    auto g = random_digraph(20, 0.15, 3).graph;
    write_edge_list(dir / "edges.csv", g);
    auto back = read_edge_list(dir / "edges.csv", g.handles());
    CHECK(back.handles() == g.handles());
    CHECK(back.edge_count() == g.edge_count());
    for (NodeId i = 0; i < g.node_count(); ++i)
        CHECK(std::ranges::equal(back.out_edges(i), g.out_edges(i)));
    dir.write("bad.csv", "src,dst,weight\na,b,zero\n");
    CHECK_THROWS_AS(read_edge_list(dir / "bad.csv"), ParseError);
}

TEST_CASE("pagerank three node example") {
    auto pr = pagerank(three_node());
    REQUIRE(pr.handles == std::vector<std::string>{"a", "b", "c"});
    CHECK(pr.converged);
    CHECK(pr.scores[0] == doctest::Approx(0.4635).epsilon(0.0002));
    CHECK(pr.scores[1] == doctest::Approx(0.0500).epsilon(0.0002));
    CHECK(pr.scores[2] == doctest::Approx(0.4865).epsilon(0.0002));
    auto exact = oracle::pagerank_linear(3, {{0, 2, 1}, {1, 2, 1}, {2, 0, 1}}, 0.85);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(pr.scores[i] - exact[i]) < 1e-9);
    CHECK(select_leaders(pr, 2) == std::vector<std::string>{"c", "a"});
}

TEST_CASE("pagerank on a cycle is uniform and ties go to the smallest handle") {
    std::vector<RetweetGraph::EdgeRecord> e{{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}};
    auto pr = pagerank(RetweetGraph::from_edges(e));
    for (double s : pr.scores) CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(select_leaders(pr, 1) == std::vector<std::string>{"a"});
    CHECK(select_leaders(pr, 10).size() == 3);
}

TEST_CASE("pagerank matches independent solvers on random digraphs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rg = random_digraph(50, 0.06, seed);
        auto pr = pagerank(rg.graph);
        auto power = oracle::pagerank_power(50, rg.edges, 0.85);
        auto linear = oracle::pagerank_linear(50, rg.edges, 0.85);
        double sum = 0.0;
        for (std::size_t i = 0; i < 50; ++i) {
            CHECK(std::abs(pr.scores[i] - power[i]) < 1e-8);
            CHECK(std::abs(power[i] - linear[i]) < 1e-10);
            CHECK(pr.scores[i] > 0.0);
            sum += pr.scores[i];
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("pagerank is invariant under relabeling") {
    auto rg = random_digraph(30, 0.1, 11);
    auto pr = pagerank(rg.graph);
    std::vector<RetweetGraph::EdgeRecord> renamed;
    auto rename = [](const std::string& h) { return "x" + std::string(h.rbegin(), h.rend()); };
    for (auto e : rg.graph.edges()) renamed.push_back({rename(e.source), rename(e.target), e.weight});
    std::vector<std::string> extra;
    for (const auto& h : rg.graph.handles()) extra.push_back(rename(h));
    auto g2 = RetweetGraph::from_edges(renamed, extra);
    auto pr2 = pagerank(g2);
    for (NodeId i = 0; i < rg.graph.node_count(); ++i) {
        auto j = *g2.find(rename(rg.graph.handle(i)));
        CHECK(std::abs(pr.scores[i] - pr2.scores[j]) < 1e-9);
    }
}

TEST_CASE("pagerank rejects bad input and reports non-convergence") {
    CHECK_THROWS_WITH_AS(pagerank(RetweetGraph{}), doctest::Contains("empty graph"), InvalidArgument);
    CHECK_THROWS_AS(pagerank(three_node(), {1.0, 1e-10, 200}), InvalidArgument);
    auto pr = pagerank(three_node(), {0.85, 1e-30, 3});
    CHECK_FALSE(pr.converged);
    CHECK(pr.iterations_used == 3);
}

TEST_CASE("select_leaders returns prefixes") {
    auto pr = pagerank(random_digraph(40, 0.08, 5).graph);
    for (std::size_t n = 1; n < 40; ++n) {
        auto a = select_leaders(pr, n), b = select_leaders(pr, n + 1);
        CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }
}

TEST_CASE("pagerank csv round trip") {
    TempDir dir("pagerank");
    auto pr = pagerank(random_digraph(15, 0.2, 2).graph);
    write_pagerank(dir / "pr.csv", pr);
    auto back = read_pagerank(dir / "pr.csv");
    REQUIRE(back.handles.size() == pr.handles.size());
    for (std::size_t i = 0; i < back.handles.size(); ++i) {
        auto it = std::ranges::find(pr.handles, back.handles[i]);
        CHECK(back.scores[i] == pr.scores[it - pr.handles.begin()]);
    }
}

TEST_CASE("edge betweenness examples") {
    auto single = edge_betweenness(undirected(2, {{0, 1}}));
    CHECK(single.at({0, 1}) == doctest::Approx(1.0));
    auto path = edge_betweenness(undirected(3, {{0, 1}, {1, 2}}));
    CHECK(path.at({0, 1}) == doctest::Approx(2.0));
    CHECK(path.at({1, 2}) == doctest::Approx(2.0));
    auto tri = edge_betweenness(undirected(6, kTwoTriangles));
    CHECK(tri.at({2, 3}) == doctest::Approx(9.0));
    for (const auto& [e, b] : tri) CHECK(b <= 9.0);
}

TEST_CASE("edge betweenness matches pair enumeration") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 6 + trial;
        std::vector<Edge> edges;
        std::bernoulli_distribution coin(0.3);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (coin(gen)) edges.emplace_back(i, j);
        auto got = edge_betweenness(undirected(n, edges));
        auto want = oracle::edge_betweenness(n, edges);
        REQUIRE(got.size() == want.size());
        for (const auto& [e, b] : want) CHECK(got.at({static_cast<NodeId>(e.first), static_cast<NodeId>(e.second)}) ==
                                              doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("modularity examples") {
    auto g = undirected(6, kTwoTriangles);
    std::vector<std::uint32_t> one(6, 0), split{0, 0, 0, 1, 1, 1};
    CHECK(std::abs(modularity(g, one)) < 1e-15);
    CHECK(std::abs(modularity(g, split) - 5.0 / 14.0) < 1e-12);
    std::vector<std::uint32_t> sparse_ids{7, 7, 7, 42, 42, 42};
    CHECK(std::abs(modularity(g, sparse_ids) - 5.0 / 14.0) < 1e-12);
    std::vector<std::uint32_t> partial{0, 0, 0};
    CHECK_THROWS_AS(modularity(g, partial), InvalidArgument);
    CHECK(modularity(UndirectedGraph(3), std::vector<std::uint32_t>{0, 1, 2}) == 0.0);
}

TEST_CASE("modularity matches the double-loop oracle") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 10; ++trial) {
        auto pg = testing::planted_blocks(3, 10 + trial, 0.5, 0.05, trial);
        std::vector<std::uint32_t> labels(pg.block.size());
        std::uniform_int_distribution<std::uint32_t> pick(0, 4);
        for (auto& l : labels) l = pick(gen);
        CHECK(std::abs(modularity(pg.graph, labels) - oracle::modularity(labels.size(), pg.edges, labels)) < 1e-12);
        auto comps = pg.graph.components();
        CHECK(std::abs(modularity(pg.graph, comps) - oracle::modularity(comps.size(), pg.edges, comps)) < 1e-12);
    }
}

TEST_CASE("girvan newman splits two triangles at the bridge") {
    auto seq = girvan_newman(undirected(6, kTwoTriangles), 6);
    REQUIRE(!seq.empty());
    CHECK(seq[0].assignment == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});
    CHECK(std::abs(seq[0].modularity - 5.0 / 14.0) < 1e-12);
    CHECK(best_partition(seq) == 0);
    for (std::size_t i = 1; i < seq.size(); ++i)
        CHECK(seq[i].community_count() > seq[i - 1].community_count());
}

TEST_CASE("girvan newman records existing components first") {
    auto g = undirected(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    auto seq = girvan_newman(g, 3);
    REQUIRE(!seq.empty());
    CHECK(seq[0].assignment == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});
    CHECK(seq.back().community_count() <= 3);
    CHECK_THROWS_AS(girvan_newman(UndirectedGraph(1), 2), InvalidArgument);
}

TEST_CASE("girvan newman recovers planted blocks") {
    auto pg = testing::planted_blocks(4, 10, 0.9, 0.02, 7);
    auto seq = girvan_newman(pg.graph, 10);
    const auto& best = seq[best_partition(seq)];
    CHECK(best.community_count() == 4);
    CHECK(testing::same_partition(best.assignment, pg.block));
    for (const auto& p : seq) {
        CHECK(std::abs(p.modularity - oracle::modularity(p.assignment.size(), pg.edges, p.assignment)) < 1e-12);
        const auto ids = std::set<std::uint32_t>(p.assignment.begin(), p.assignment.end());
        CHECK(*ids.rbegin() + 1 == ids.size());
    }
}

TEST_CASE("returned partitions agree with the exhaustive oracle on small graphs") {
    std::mt19937_64 gen(31);
    std::bernoulli_distribution coin(0.45);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 4 + trial % 5;
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (coin(gen)) edges.emplace_back(i, j);
        if (edges.empty()) continue;
        auto g = undirected(n, edges);
        auto seq = girvan_newman(g, n);
        double best_possible = -1.0;
        oracle::for_each_partition(n, [&](const std::vector<std::uint32_t>& a) {
            best_possible = std::max(best_possible, oracle::modularity(n, edges, a));
        });
        for (const auto& p : seq) {
            CHECK(std::abs(modularity(g, p.assignment) - oracle::modularity(n, edges, p.assignment)) < 1e-12);
            CHECK(p.modularity <= best_possible + 1e-12);
        }
    }
}

TEST_CASE("partition csv round trip") {
    TempDir dir("partition");
    std::vector<std::string> handles{"a", "b", "c"};
    CommunityPartition p{{0, 1, 0}, 0.1};
    write_partition(dir / "p.csv", handles, p);
    auto back = read_partition(dir / "p.csv");
    CHECK(back == std::map<std::string, std::uint32_t>{{"a", 0}, {"b", 1}, {"c", 0}});
}

}  // TEST_SUITE
