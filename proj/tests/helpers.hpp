#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace testutil {

// Scratch directory removed at scope exit.
class TempDir {
public:
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "rapgen-XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
        path_ = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

// --- Regularized incomplete gamma, for chi-square p-values.

inline double gamma_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_cont_frac(double a, double x) {
    const double fpmin = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / fpmin, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// P(X > x) for X ~ chi-square with `dof` degrees of freedom.
inline double chi_square_pvalue(double stat, int dof) {
    if (stat <= 0) return 1.0;
    const double a = dof / 2.0, x = stat / 2.0;
    return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_cont_frac(a, x);
}

// --- Exact min-cost-flow transport solver (the Wasserstein oracle).
//
// Supplies and demands are integer unit counts on integer support
// points; returns the optimal transport cost in (units * distance).
inline long long min_cost_transport(const std::map<int, long>& supply,
                                    const std::map<int, long>& demand) {
    struct Edge {
        int to;
        long cap;
        long long cost;
        size_t rev;
    };
    std::vector<std::vector<Edge>> graph;
    auto add_edge = [&](int from, int to, long cap, long long cost) {
        graph[from].push_back({to, cap, cost, graph[to].size()});
        graph[to].push_back({from, 0, -cost, graph[from].size() - 1});
    };

    const int ns = static_cast<int>(supply.size());
    const int nd = static_cast<int>(demand.size());
    const int source = ns + nd, sink = source + 1;
    graph.resize(sink + 1);

    std::vector<int> sx, dx;
    {
        int i = 0;
        for (const auto& [x, c] : supply) {
            sx.push_back(x);
            add_edge(source, i, c, 0);
            ++i;
        }
        int j = 0;
        for (const auto& [x, c] : demand) {
            dx.push_back(x);
            add_edge(ns + j, sink, c, 0);
            ++j;
        }
    }
    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < nd; ++j) {
            add_edge(i, ns + j, std::numeric_limits<long>::max(),
                     std::llabs(static_cast<long long>(sx[i]) - dx[j]));
        }
    }

    long long total_cost = 0;
    while (true) {
        // Bellman-Ford shortest path in the residual graph.
        const long long inf = std::numeric_limits<long long>::max() / 4;
        std::vector<long long> dist(graph.size(), inf);
        std::vector<int> prev_node(graph.size(), -1);
        std::vector<size_t> prev_edge(graph.size(), 0);
        dist[source] = 0;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t u = 0; u < graph.size(); ++u) {
                if (dist[u] == inf) continue;
                for (size_t e = 0; e < graph[u].size(); ++e) {
                    const Edge& ed = graph[u][e];
                    if (ed.cap > 0 && dist[u] + ed.cost < dist[ed.to]) {
                        dist[ed.to] = dist[u] + ed.cost;
                        prev_node[ed.to] = static_cast<int>(u);
                        prev_edge[ed.to] = e;
                        changed = true;
                    }
                }
            }
        }
        if (dist[sink] == inf) break;
        long push = std::numeric_limits<long>::max();
        for (int v = sink; v != source; v = prev_node[v]) {
            push = std::min(push, graph[prev_node[v]][prev_edge[v]].cap);
        }
        for (int v = sink; v != source; v = prev_node[v]) {
            Edge& ed = graph[prev_node[v]][prev_edge[v]];
            ed.cap -= push;
            graph[v][ed.rev].cap += push;
        }
        total_cost += static_cast<long long>(push) * dist[sink];
    }
    return total_cost;
}

}  // namespace testutil
