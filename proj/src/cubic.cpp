#include "cubic.hpp"

#include <algorithm>
#include <set>

#include "error.hpp"
#include "rng.hpp"

namespace cim {

bool is_connected(const WeightedGraph& g) {
    if (g.n <= 1) return true;
    std::vector<std::vector<int>> adj(g.n);
    for (const auto& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
    }
    return count == g.n;
}

namespace {

// Permutation search for the lexicographically minimal adjacency bit string.
// Column i holds the adjacency bits of perm[i] against perm[0..i-1], packed
// so that integer comparison matches bit-string order.
struct CanonicalSearch {
    int n;
    std::vector<uint32_t> adj; // adjacency bitmasks
    std::vector<uint32_t> best_cols;
    std::vector<uint32_t> cur_cols;
    std::vector<int> perm;
    std::vector<char> used;
    bool have_best = false;

    explicit CanonicalSearch(const WeightedGraph& g) : n(g.n), adj(g.n, 0) {
        for (const auto& e : g.edges) {
            adj[e.u] |= 1u << e.v;
            adj[e.v] |= 1u << e.u;
        }
        best_cols.resize(n);
        cur_cols.resize(n);
        perm.resize(n);
        used.assign(n, 0);
    }

    uint32_t column(int pos, int vertex) const {
        uint32_t colbits = 0;
        for (int t = 0; t < pos; ++t)
            if (adj[vertex] & (1u << perm[t])) colbits |= 1u << (pos - 1 - t);
        return colbits;
    }

    // cmp: 0 while equal to best prefix, -1 once strictly below it (pruning
    // against the stale best is then impossible until a leaf refreshes it).
    void descend(int pos, int cmp) {
        if (pos == n) {
            if (!have_best || cur_cols < best_cols) {
                best_cols = cur_cols;
                have_best = true;
            }
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            uint32_t colbits = column(pos, v);
            int next_cmp = cmp;
            if (cmp == 0 && have_best) {
                if (colbits > best_cols[pos]) continue;
                if (colbits < best_cols[pos]) next_cmp = -1;
            }
            cur_cols[pos] = colbits;
            used[v] = 1;
            perm[pos] = v;
            descend(pos + 1, next_cmp);
            used[v] = 0;
        }
    }
};

} // namespace

std::vector<uint8_t> canonical_form(const WeightedGraph& g) {
    if (g.n < 1) fail(ErrorKind::validation, "empty graph");
    if (g.n > 16) fail(ErrorKind::capability, "canonical form capped at n <= 16");
    CanonicalSearch search(g);
    // Seed with the identity permutation so pruning starts immediately.
    for (int i = 0; i < g.n; ++i) {
        search.perm[i] = i;
        search.best_cols[i] = search.column(i, i);
    }
    search.have_best = true;
    search.descend(0, 0);

    // Pack columns into a byte string (upper triangle, row-major equivalent).
    std::vector<uint8_t> bits;
    bits.reserve(static_cast<size_t>(g.n) * (g.n - 1) / 2);
    for (int i = 0; i < g.n; ++i)
        for (int t = i - 1; t >= 0; --t)
            bits.push_back((search.best_cols[i] >> t) & 1);
    return bits;
}

namespace {

struct CubicEnumerator {
    int n;
    std::vector<uint32_t> adj;
    std::vector<int> deg;
    std::set<std::vector<uint8_t>> seen;
    std::vector<WeightedGraph> out;

    explicit CubicEnumerator(int n_) : n(n_), adj(n_, 0), deg(n_, 0) {}

    void emit() {
        WeightedGraph g;
        g.n = n;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (adj[u] & (1u << v)) g.edges.push_back({u, v, 1.0});
        if (!is_connected(g)) return;
        if (seen.insert(canonical_form(g)).second) out.push_back(std::move(g));
    }

    // Choose the remaining neighbors of v among higher-indexed vertices.
    // Degree-0 vertices are interchangeable at this point, so once one of
    // them is skipped all later ones are skipped too; isomorph dedup handles
    // whatever symmetry is left.
    void choose(int v, int need, int from, bool untouched_allowed) {
        if (need == 0) {
            advance(v + 1);
            return;
        }
        for (int u = from; u < n; ++u) {
            if (deg[u] >= 3) continue;
            bool u_untouched = deg[u] == 0;
            if (u_untouched && !untouched_allowed) continue;
            adj[v] |= 1u << u;
            adj[u] |= 1u << v;
            ++deg[v];
            ++deg[u];
            choose(v, need - 1, u + 1, untouched_allowed);
            --deg[v];
            --deg[u];
            adj[v] &= ~(1u << u);
            adj[u] &= ~(1u << v);
            if (u_untouched) untouched_allowed = false; // skipping it excludes its twins
        }
    }

    void advance(int v) {
        if (v == n) {
            emit();
            return;
        }
        int need = 3 - deg[v];
        if (need < 0) return;
        if (need == 0) {
            advance(v + 1);
            return;
        }
        // Feasibility: enough open slots among later vertices.
        int capacity = 0;
        for (int u = v + 1; u < n; ++u) capacity += 3 - deg[u];
        if (capacity < need) return;
        choose(v, need, v + 1, true);
    }
};

} // namespace

std::vector<WeightedGraph> enumerate_cubic_graphs(int n) {
    if (n % 2 != 0 || n < kCubicEnumMin || n > kCubicEnumMax)
        fail(ErrorKind::capability,
             "cubic enumeration supports even n in [" + std::to_string(kCubicEnumMin) + ", " +
                 std::to_string(kCubicEnumMax) + "]");
    CubicEnumerator enumerator(n);
    enumerator.advance(0);
    return enumerator.out;
}

WeightedGraph random_cubic_graph(int n, uint64_t seed) {
    if (n % 2 != 0 || n < 4)
        fail(ErrorKind::validation, "random cubic graph needs even n >= 4");
    Rng rng(seed, 0x63756269); // fixed stream tag

    std::vector<int> points(3 * n);
    while (true) {
        for (int i = 0; i < 3 * n; ++i) points[i] = i / 3;
        // Fisher-Yates pairing of half-edges.
        for (int i = 3 * n - 1; i > 0; --i) {
            int k = static_cast<int>(rng.next_u64() % static_cast<uint64_t>(i + 1));
            std::swap(points[i], points[k]);
        }
        std::set<std::pair<int, int>> pairs;
        bool ok = true;
        for (int i = 0; i < 3 * n && ok; i += 2) {
            int u = points[i], v = points[i + 1];
            if (u == v) ok = false; // self-loop
            else if (!pairs.insert(std::minmax(u, v)).second) ok = false; // multi-edge
        }
        if (!ok) continue;
        WeightedGraph g;
        g.n = n;
        for (const auto& [u, v] : pairs) g.edges.push_back({u, v, 1.0});
        if (is_connected(g)) return g;
    }
}

} // namespace cim
