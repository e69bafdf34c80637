#pragma once
// Slow, independent reference computations used to pin expected values.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

namespace leaders::oracle {

struct DirectedEdge {
    std::size_t from;
    std::size_t to;
    double weight;
};

/// Solves (I - d M) x = (1 - d)/n with M the column-stochastic transition
/// (dangling columns uniform) by Gaussian elimination with partial pivoting.
inline std::vector<double> pagerank_linear(std::size_t n, const std::vector<DirectedEdge>& edges, double d) {
    std::vector<double> out_w(n, 0.0);
    for (const auto& e : edges) out_w[e.from] += e.weight;
    std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1, 0.0L));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0L;
    for (const auto& e : edges) a[e.to][e.from] -= static_cast<long double>(d) * e.weight / out_w[e.from];
    for (std::size_t j = 0; j < n; ++j)
        if (out_w[j] == 0.0)
            for (std::size_t i = 0; i < n; ++i) a[i][j] -= static_cast<long double>(d) / n;
    for (std::size_t i = 0; i < n; ++i) a[i][n] = (1.0L - d) / n;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double f = a[r][col] / a[col][col];
            if (f == 0.0L) continue;
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> x(n);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) sum += a[i][n] / a[i][i];
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(a[i][n] / a[i][i] / sum);
    return x;
}

/// Plain power iteration in long double until the L1 change is below 1e-15.
inline std::vector<double> pagerank_power(std::size_t n, const std::vector<DirectedEdge>& edges, double d) {
    std::vector<long double> out_w(n, 0.0L), x(n, 1.0L / n), next(n);
    for (const auto& e : edges) out_w[e.from] += e.weight;
    for (int it = 0; it < 100000; ++it) {
        long double dangling = 0.0L;
        for (std::size_t i = 0; i < n; ++i)
            if (out_w[i] == 0.0L) dangling += x[i];
        for (std::size_t i = 0; i < n; ++i) next[i] = (1.0L - d) / n + d * dangling / n;
        for (const auto& e : edges) next[e.to] += d * x[e.from] * e.weight / out_w[e.from];
        long double diff = 0.0L;
        for (std::size_t i = 0; i < n; ++i) diff += std::fabs(next[i] - x[i]);
        x.swap(next);
        if (diff < 1e-15L) break;
    }
    return {x.begin(), x.end()};
}

using Adjacency = std::vector<std::vector<std::size_t>>;

inline Adjacency adjacency(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Adjacency adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

/// Edge betweenness over unordered pairs from all-pairs BFS distances and
/// shortest-path counts: edge (u,v) carries sigma(s,u) sigma(v,t) / sigma(s,t)
/// whenever d(s,u) + 1 + d(v,t) = d(s,t), in either orientation.
inline std::map<std::pair<std::size_t, std::size_t>, double> edge_betweenness(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    const auto adj = adjacency(n, edges);
    std::vector<std::vector<long>> dist(n, std::vector<long>(n, -1));
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < n; ++s) {
        std::queue<std::size_t> q;
        dist[s][s] = 0;
        sigma[s][s] = 1.0;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (auto v : adj[u]) {
                if (dist[s][v] < 0) {
                    dist[s][v] = dist[s][u] + 1;
                    q.push(v);
                }
                if (dist[s][v] == dist[s][u] + 1) sigma[s][v] += sigma[s][u];
            }
        }
    }
    std::map<std::pair<std::size_t, std::size_t>, double> out;
    for (auto [a, b] : edges) {
        const auto key = std::minmax(a, b);
        double total = 0.0;
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = s + 1; t < n; ++t) {
                if (dist[s][t] <= 0) continue;
                for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}})
                    if (dist[s][u] >= 0 && dist[v][t] >= 0 && dist[s][u] + 1 + dist[v][t] == dist[s][t])
                        total += sigma[s][u] * sigma[v][t] / sigma[s][t];
            }
        out[{key.first, key.second}] = total;
    }
    return out;
}

/// Q = 1/(2m) sum_ij (A_ij - k_i k_j / 2m) delta(c_i, c_j), plain double loop.
inline double modularity(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                         const std::vector<std::uint32_t>& c) {
    if (edges.empty()) return 0.0;
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    std::vector<double> k(n, 0.0);
    for (auto [u, v] : edges) {
        A[u][v] += 1.0;
        A[v][u] += 1.0;
        k[u] += 1.0;
        k[v] += 1.0;
    }
    const double two_m = 2.0 * static_cast<double>(edges.size());
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (c[i] == c[j]) q += A[i][j] - k[i] * k[j] / two_m;
    return q / two_m;
}

/// Calls f on every set partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& f) {
    std::vector<std::uint32_t> a(n, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t max_label) {
        if (i == n) {
            f(a);
            return;
        }
        for (std::uint32_t l = 0; l <= max_label + 1; ++l) {
            a[i] = l;
            rec(i + 1, std::max(max_label, l));
        }
    };
    if (n == 0) return;
    a[0] = 0;
    if (n == 1) {
        f(a);
        return;
    }
    std::function<void(std::size_t, std::uint32_t)> go = [&](std::size_t i, std::uint32_t max_label) {
        if (i == n) {
            f(a);
            return;
        }
        for (std::uint32_t l = 0; l <= max_label + 1; ++l) {
            a[i] = l;
            go(i + 1, std::max(max_label, l));
        }
    };
    go(1, 0);
}

/// Regularized lower incomplete gamma by brute series with `terms` terms:
/// P(a, x) = sum_n x^(a+n) e^-x / Gamma(a+n+1).
inline double gamma_p_series(double a, double x, int terms = 10000) {
    long double sum = 0.0L;
    const long double lx = std::log(static_cast<long double>(x));
    for (int n = 0; n < terms; ++n) {
        const long double lt = (a + n) * lx - x - std::lgamma(static_cast<long double>(a + n + 1));
        sum += std::exp(lt);
    }
    return static_cast<double>(sum);
}

/// Upper chi-square tail for one degree of freedom via the normal tail.
inline double chi2_sf_df1(double x) { return std::erfc(std::sqrt(x / 2.0)); }

/// AUC by enumerating every (positive, negative) pair.
inline double auc_pairs(const std::vector<double>& score, const std::vector<bool>& pos) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < score.size(); ++i)
        for (std::size_t j = 0; j < score.size(); ++j) {
            if (!pos[i] || pos[j]) continue;
            den += 1.0;
            num += score[i] > score[j] ? 1.0 : score[i] == score[j] ? 0.5 : 0.0;
        }
    return num / den;
}

}  // namespace leaders::oracle
