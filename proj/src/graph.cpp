#include "graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "error.hpp"

namespace cim {

int WeightedGraph::negative_edge_count() const {
    int count = 0;
    for (const auto& e : edges)
        if (e.w < 0.0) ++count;
    return count;
}

void IsingProblem::finalize() {
    for (auto& c : couplings) {
        if (c.u > c.v) std::swap(c.u, c.v);
        if (c.u == c.v) fail(ErrorKind::validation, "coupling on the diagonal");
        if (c.u < 0 || c.v >= n) fail(ErrorKind::validation, "coupling index out of range");
    }
    std::sort(couplings.begin(), couplings.end(), [](const Coupling& a, const Coupling& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (size_t i = 1; i < couplings.size(); ++i)
        if (couplings[i].u == couplings[i - 1].u && couplings[i].v == couplings[i - 1].v)
            fail(ErrorKind::validation, "duplicate coupling pair");

    std::vector<int> degree(n, 0);
    for (const auto& c : couplings) {
        ++degree[c.u];
        ++degree[c.v];
    }
    row_ptr.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) row_ptr[i + 1] = row_ptr[i] + degree[i];
    col.assign(row_ptr[n], 0);
    val.assign(row_ptr[n], 0.0);
    std::vector<int> cursor(row_ptr.begin(), row_ptr.end() - 1);
    for (const auto& c : couplings) {
        col[cursor[c.u]] = c.v;
        val[cursor[c.u]++] = c.j;
        col[cursor[c.v]] = c.u;
        val[cursor[c.v]++] = c.j;
    }
}

double IsingProblem::j_at(int i, int k) const {
    if (i < 0 || k < 0 || i >= n || k >= n)
        fail(ErrorKind::dimension, "index out of range");
    if (i == k) return 0.0;
    for (int idx = row_ptr[i]; idx < row_ptr[i + 1]; ++idx)
        if (col[idx] == k) return val[idx];
    return 0.0;
}

namespace {

// Splits on spaces/tabs; carriage returns are stripped so Windows files parse.
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == '\r') continue;
        if (ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

long parse_int(const std::string& tok, int line_no, const char* what) {
    size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(tok, &pos);
    } catch (const std::exception&) {
        fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    }
    if (pos != tok.size())
        fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    return value;
}

double parse_real(const std::string& tok, int line_no, const char* what) {
    size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(tok, &pos);
    } catch (const std::exception&) {
        fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    }
    if (pos != tok.size() || !std::isfinite(value))
        fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    return value;
}

} // namespace

WeightedGraph parse_gset(std::istream& in) {
    WeightedGraph g;
    std::string line;
    int line_no = 0;
    long m = -1;

    // Header: "n m" on the first nonblank line.
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (tok.size() != 2)
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": header must be 'n m'");
        long n = parse_int(tok[0], line_no, "vertex count");
        m = parse_int(tok[1], line_no, "edge count");
        if (n < 1 || m < 0)
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": header out of range");
        g.n = static_cast<int>(n);
        break;
    }
    if (m < 0) fail(ErrorKind::parse, "empty input");

    std::set<std::pair<int, int>> seen;
    long edges_read = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (edges_read == m)
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": more than " +
                                       std::to_string(m) + " edge lines");
        if (tok.size() != 3)
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": edge line must be 'u v w'");
        long u = parse_int(tok[0], line_no, "vertex");
        long v = parse_int(tok[1], line_no, "vertex");
        double w = parse_real(tok[2], line_no, "weight");
        if (u < 1 || u > g.n || v < 1 || v > g.n)
            fail(ErrorKind::validation, "line " + std::to_string(line_no) + ": vertex out of range");
        if (u == v)
            fail(ErrorKind::validation, "line " + std::to_string(line_no) + ": self-loop");
        int a = static_cast<int>(std::min(u, v)) - 1;
        int b = static_cast<int>(std::max(u, v)) - 1;
        if (!seen.insert({a, b}).second)
            fail(ErrorKind::validation, "line " + std::to_string(line_no) + ": duplicate edge");
        g.edges.push_back({a, b, w});
        ++edges_read;
    }
    if (edges_read != m)
        fail(ErrorKind::parse, "expected " + std::to_string(m) + " edges, got " +
                                   std::to_string(edges_read));
    return g;
}

WeightedGraph parse_gset(const std::string& text) {
    std::istringstream in(text);
    return parse_gset(in);
}

WeightedGraph load_gset(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
    return parse_gset(in);
}

WeightedGraph complete_graph(int n, double weight) {
    if (n < 1) fail(ErrorKind::validation, "vertex count must be positive");
    WeightedGraph g;
    g.n = n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v, weight});
    return g;
}

IsingProblem graph_to_ising(const WeightedGraph& g) {
    IsingProblem p;
    p.n = g.n;
    p.couplings.reserve(g.edges.size());
    for (const auto& e : g.edges) p.couplings.push_back({e.u, e.v, -e.w});
    p.finalize();
    return p;
}

double ising_energy(const IsingProblem& p, const SpinConfig& s) {
    if (s.n() != p.n) fail(ErrorKind::dimension, "spin count does not match problem");
    double sum = 0.0;
    for (const auto& c : p.couplings) sum += c.j * s.sigma[c.u] * s.sigma[c.v];
    return -sum;
}

double cut_value(const WeightedGraph& g, const SpinConfig& s) {
    if (s.n() != g.n) fail(ErrorKind::dimension, "spin count does not match graph");
    double sum = 0.0;
    for (const auto& e : g.edges)
        if (s.sigma[e.u] != s.sigma[e.v]) sum += e.w;
    return sum;
}

GroundSet brute_force_ground(const IsingProblem& p) {
    if (p.n < 1) fail(ErrorKind::validation, "empty problem");
    if (p.n > kBruteForceCap)
        fail(ErrorKind::capability, "brute force capped at n <= " + std::to_string(kBruteForceCap));

    const int n = p.n;
    std::vector<int8_t> sigma(n, 1);
    double energy = ising_energy(p, SpinConfig{sigma});

    // Gray-code walk: flipping spin i changes the energy by
    // 2 * sigma_i * sum_k J_ik sigma_k.
    double min_energy = energy;
    std::vector<uint32_t> ground_masks{0};
    const double tol = 1e-9 * (1.0 + std::abs(energy));

    uint32_t mask = 0;
    const uint64_t total = 1ull << n;
    for (uint64_t g = 1; g < total; ++g) {
        uint32_t gray = static_cast<uint32_t>(g ^ (g >> 1));
        int bit = std::countr_zero(static_cast<uint32_t>(gray ^ mask));
        double row = 0.0;
        for (int idx = p.row_ptr[bit]; idx < p.row_ptr[bit + 1]; ++idx)
            row += p.val[idx] * sigma[p.col[idx]];
        energy += 2.0 * sigma[bit] * row;
        sigma[bit] = static_cast<int8_t>(-sigma[bit]);
        mask = gray;

        if (energy < min_energy - tol) {
            min_energy = energy;
            ground_masks.clear();
            ground_masks.push_back(mask);
        } else if (energy <= min_energy + tol) {
            ground_masks.push_back(mask);
        }
    }

    GroundSet out;
    out.min_energy = min_energy;
    out.configs.reserve(ground_masks.size());
    std::sort(ground_masks.begin(), ground_masks.end());
    for (uint32_t gm : ground_masks) {
        SpinConfig cfg;
        cfg.sigma.resize(n);
        for (int i = 0; i < n; ++i) cfg.sigma[i] = (gm >> i) & 1 ? -1 : 1;
        // Recompute directly to clean up incremental float error.
        double e = ising_energy(p, cfg);
        if (e < out.min_energy) out.min_energy = e;
        out.configs.push_back(std::move(cfg));
    }
    return out;
}

void validate(const DelaySpec& d) {
    if (d.n < 2) fail(ErrorKind::validation, "delay ring needs at least 2 slots");
    std::unordered_set<int> seen;
    for (const auto& line : d.lines) {
        if (line.m < 1 || line.m > d.n - 1)
            fail(ErrorKind::validation, "delay m out of range [1, n-1]");
        if (!seen.insert(line.m).second)
            fail(ErrorKind::validation, "duplicate delay " + std::to_string(line.m));
        if (line.amplitude < 0.0)
            fail(ErrorKind::validation, "delay amplitude must be nonnegative");
    }
}

void validate(const SpinConfig& s) {
    for (int8_t v : s.sigma)
        if (v != 1 && v != -1) fail(ErrorKind::validation, "spins must be +1 or -1");
}

IsingProblem delay_line_topology(const DelaySpec& d) {
    validate(d);
    const int n = d.n;
    std::map<std::pair<int, int>, double> acc;
    for (const auto& line : d.lines) {
        if (!line.enabled) continue;
        double j = line.phase_pi ? -line.amplitude : line.amplitude;
        for (int i = 0; i < n; ++i) {
            int k = (i + line.m) % n;
            if (i == k) continue; // m == n never happens, guarded by validate
            auto key = std::minmax(i, k);
            acc[{key.first, key.second}] += j;
        }
    }
    IsingProblem p;
    p.n = n;
    for (const auto& [pair, j] : acc)
        if (j != 0.0) p.couplings.push_back({pair.first, pair.second, j});
    p.finalize();
    return p;
}

SpinConfig local_improvement(const IsingProblem& p, SpinConfig s) {
    if (s.n() != p.n) fail(ErrorKind::dimension, "spin count does not match problem");
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < p.n; ++i) {
            double row = 0.0;
            for (int idx = p.row_ptr[i]; idx < p.row_ptr[i + 1]; ++idx)
                row += p.val[idx] * s.sigma[p.col[idx]];
            double delta = 2.0 * s.sigma[i] * row;
            if (delta < 0.0) {
                s.sigma[i] = static_cast<int8_t>(-s.sigma[i]);
                improved = true;
            }
        }
    }
    return s;
}

double normalized_cut_score(double o, double e_neg, double u_sdp) {
    if (e_neg < 0.0) fail(ErrorKind::domain, "E_neg must be nonnegative");
    double denom = u_sdp + e_neg;
    if (denom <= 0.0) fail(ErrorKind::domain, "U_SDP + E_neg must be positive");
    return (o + e_neg) / denom;
}

} // namespace cim
