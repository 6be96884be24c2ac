#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"
#include "ortho/search.hpp"
#include "ortho/util.hpp"

namespace ortho {

// A vertex/colour restriction of the complete coloured digraph on G. The
// edge (a, b) exists iff a != b, both endpoints are kept, and its colour
// a - b is kept.
struct ColoredDigraphView {
    Group group{std::vector<int>{1}};
    std::vector<int> vertices;  // sorted element indices
    std::vector<int> colors;    // sorted element indices

    static ColoredDigraphView full(const Group& g) {
        ColoredDigraphView v;
        v.group = g;
        v.vertices.resize(g.order());
        std::iota(v.vertices.begin(), v.vertices.end(), 0);
        v.colors = v.vertices;
        return v;
    }

    // Both sets equal to G \ {0}, the view behind the FGT reduction.
    static ColoredDigraphView punctured(const Group& g) {
        ColoredDigraphView v;
        v.group = g;
        v.vertices.resize(g.order() - 1);
        std::iota(v.vertices.begin(), v.vertices.end(), 1);
        v.colors = v.vertices;
        return v;
    }
};

inline int edge_color(const Group& g, int a, int b) {
    if (a == b) throw DomainError("no loops: endpoints must differ");
    return g.sub(a, b);
}

// One edge of the 2k-uniform hypergraph H_k: the vertex set and colour set
// of a rainbow directed k-cycle, with the witness cycle rotated so that the
// minimum vertex comes first.
struct HyperEdge {
    std::vector<int> vertex_set;     // sorted
    std::vector<int> color_set;      // sorted
    std::vector<int> witness_cycle;  // canonical rotation
};

// Builds the hyperedge for a given directed cycle if it is rainbow and fits
// inside the view; otherwise nullopt. Rotation-invariant.
inline std::optional<HyperEdge> cycle_to_hyperedge(const std::vector<int>& cycle,
                                                   const ColoredDigraphView& view) {
    const Group& g = view.group;
    const int k = static_cast<int>(cycle.size());
    if (k < 2) throw DomainError("cycle needs at least 2 vertices");
    std::vector<int> vs = cycle;
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
        throw DomainError("cycle vertices must be distinct");

    std::vector<int> colors(k);
    for (int i = 0; i < k; ++i) colors[i] = g.sub(cycle[i], cycle[(i + 1) % k]);
    std::vector<int> cs = colors;
    std::sort(cs.begin(), cs.end());
    if (std::adjacent_find(cs.begin(), cs.end()) != cs.end()) return std::nullopt;  // not rainbow

    for (int v : vs)
        if (!std::binary_search(view.vertices.begin(), view.vertices.end(), v)) return std::nullopt;
    for (int c : cs)
        if (!std::binary_search(view.colors.begin(), view.colors.end(), c)) return std::nullopt;

    // canonical rotation: minimum vertex first
    int pos = static_cast<int>(std::min_element(cycle.begin(), cycle.end()) - cycle.begin());
    std::vector<int> witness(k);
    for (int i = 0; i < k; ++i) witness[i] = cycle[(pos + i) % k];
    return HyperEdge{vs, cs, witness};
}

struct Matching {
    std::vector<HyperEdge> edges;
};

// Solver-independent re-verification: pairwise disjoint vertex and colour
// sets, each witness a genuine rainbow cycle realising exactly its sets.
inline bool validate_matching(const Matching& m, const ColoredDigraphView& view) {
    const Group& g = view.group;
    std::vector<int> all_v, all_c;
    for (const auto& e : m.edges) {
        auto rebuilt = cycle_to_hyperedge(e.witness_cycle, view);
        if (!rebuilt) return false;
        if (rebuilt->vertex_set != e.vertex_set || rebuilt->color_set != e.color_set) return false;
        (void)g;
        all_v.insert(all_v.end(), e.vertex_set.begin(), e.vertex_set.end());
        all_c.insert(all_c.end(), e.color_set.begin(), e.color_set.end());
    }
    std::sort(all_v.begin(), all_v.end());
    std::sort(all_c.begin(), all_c.end());
    return std::adjacent_find(all_v.begin(), all_v.end()) == all_v.end() &&
           std::adjacent_find(all_c.begin(), all_c.end()) == all_c.end();
}

inline bool matching_is_perfect(const Matching& m, const ColoredDigraphView& view) {
    std::vector<int> all_v, all_c;
    for (const auto& e : m.edges) {
        all_v.insert(all_v.end(), e.vertex_set.begin(), e.vertex_set.end());
        all_c.insert(all_c.end(), e.color_set.begin(), e.color_set.end());
    }
    std::sort(all_v.begin(), all_v.end());
    std::sort(all_c.begin(), all_c.end());
    return all_v == view.vertices && all_c == view.colors;
}

struct EnumerateResult {
    std::vector<HyperEdge> edges;
    bool truncated = false;
};

// All H_k edges within the view, each witness class once (canonical
// minimum-vertex-first rotation), stopping after `cap` edges.
inline EnumerateResult enumerate_hyperedges(const ColoredDigraphView& view, int k,
                                            std::size_t cap) {
    if (k < 2) throw DomainError("k must be >= 2");
    const Group& g = view.group;
    EnumerateResult out;
    const int n = g.order();
    std::vector<char> in_v(n, 0), in_c(n, 0);
    for (int v : view.vertices) in_v[v] = 1;
    for (int c : view.colors) in_c[c] = 1;
    std::vector<char> used_c(n, 0);
    std::vector<int> cycle;

    // start each cycle at its minimum vertex, extend with larger vertices
    auto extend = [&](auto&& self, int start) -> bool {
        int cur = cycle.back();
        if (static_cast<int>(cycle.size()) == k) {
            int closing = g.sub(cur, start);
            if (cur != start && in_c[closing] && !used_c[closing]) {
                if (out.edges.size() >= cap) {
                    out.truncated = true;
                    return false;
                }
                auto he = cycle_to_hyperedge(cycle, view);
                out.edges.push_back(*he);
            }
            return true;
        }
        for (int next = start + 1; next < n; ++next) {
            if (!in_v[next] || next == cur) continue;
            bool on_cycle = false;
            for (int v : cycle) on_cycle = on_cycle || v == next;
            if (on_cycle) continue;
            int color = g.sub(cur, next);
            if (!in_c[color] || used_c[color]) continue;
            used_c[color] = 1;
            cycle.push_back(next);
            bool keep_going = self(self, start);
            cycle.pop_back();
            used_c[color] = 0;
            if (!keep_going) return false;
        }
        return true;
    };

    for (int start : view.vertices) {
        cycle.assign(1, start);
        if (!extend(extend, start)) break;
    }
    return out;
}

// Perfect matching of H_k[view] by backtracking directly on the coloured
// digraph: one rainbow k-cycle at a time over unused vertices and colours,
// each cycle anchored at the lowest unused vertex. Nonexistent is only
// reported when the full tree was covered.
inline SearchResult<Matching> perfect_matching(const ColoredDigraphView& view, int k,
                                               const SearchBudget& budget = {}) {
    if (k < 2) throw DomainError("k must be >= 2");
    if (view.vertices.size() % k != 0)
        throw DivisibilityError("k must divide the number of vertices");
    if (view.vertices.size() != view.colors.size())
        throw DomainError("view needs equally many vertices and colours");

    const Group& g = view.group;
    const int n = g.order();

    // colour sets of vertex-disjoint cycles partition the colour view, and
    // every rainbow cycle's colours sum to zero
    if (element_sum(g, view.colors) != 0)
        return SearchResult<Matching>::nonexistent(0, "colour set does not sum to the identity");

    std::vector<char> in_v(n, 0), in_c(n, 0);
    for (int v : view.vertices) in_v[v] = 1;
    for (int c : view.colors) in_c[c] = 1;
    std::vector<char> used_v(n, 0), used_c(n, 0);

    BudgetGauge gauge(budget);
    bool truncated = false;
    std::vector<std::vector<int>> cycles;
    std::vector<int> cur;

    auto grow = [&](auto&& self, int anchor, std::size_t covered) -> bool {
        int at = cur.back();
        if (static_cast<int>(cur.size()) == k) {
            int closing = g.sub(at, anchor);
            if (!in_c[closing] || used_c[closing]) return false;
            used_c[closing] = 1;
            cycles.push_back(cur);
            if (covered + k == view.vertices.size()) return true;
            // next cycle: lowest unused vertex
            int next_anchor = -1;
            for (int v : view.vertices)
                if (!used_v[v]) {
                    next_anchor = v;
                    break;
                }
            std::vector<int> saved = cur;
            used_v[next_anchor] = 1;
            cur.assign(1, next_anchor);
            if (self(self, next_anchor, covered + k)) return true;
            used_v[next_anchor] = 0;
            cur = saved;
            cycles.pop_back();
            used_c[closing] = 0;
            return false;
        }
        for (int next = 0; next < n; ++next) {
            if (!in_v[next] || used_v[next] || next == anchor) continue;
            int color = g.sub(at, next);
            if (!in_c[color] || used_c[color]) continue;
            if (!gauge.tick()) {
                truncated = true;
                return false;
            }
            used_v[next] = 1;
            used_c[color] = 1;
            cur.push_back(next);
            if (self(self, anchor, covered)) return true;
            cur.pop_back();
            used_c[color] = 0;
            used_v[next] = 0;
            if (truncated) return false;
        }
        return false;
    };

    bool found = true;
    if (!view.vertices.empty()) {
        int anchor = view.vertices.front();
        used_v[anchor] = 1;
        cur.assign(1, anchor);
        found = grow(grow, anchor, 0);
    }
    if (found) {
        Matching m;
        for (const auto& c : cycles) m.edges.push_back(*cycle_to_hyperedge(c, view));
        return SearchResult<Matching>::found_with(std::move(m), gauge.nodes());
    }
    if (truncated) return SearchResult<Matching>::unknown(gauge.nodes());
    return SearchResult<Matching>::nonexistent(gauge.nodes());
}

struct NearMatchingReport {
    Matching matching;
    int leftover_vertices = 0;
    int leftover_colors = 0;
    std::uint64_t seed = 0;
};

// Randomised greedy heuristic: repeatedly attempts to close a rainbow
// k-cycle from a random unused vertex. No guarantee is claimed; the
// leftover counts are the point of the report.
inline NearMatchingReport near_perfect_matching(const ColoredDigraphView& view, int k,
                                                std::uint64_t seed, int attempts_per_vertex = 50) {
    if (k < 2) throw DomainError("k must be >= 2");
    const Group& g = view.group;
    const int n = g.order();
    Rng rng(seed);
    std::vector<char> in_v(n, 0), in_c(n, 0);
    for (int v : view.vertices) in_v[v] = 1;
    for (int c : view.colors) in_c[c] = 1;
    std::vector<char> used_v(n, 0), used_c(n, 0);

    NearMatchingReport report;
    report.seed = seed;
    std::vector<int> pool = view.vertices;

    while (!pool.empty()) {
        int pick = static_cast<int>(rng_below(rng, pool.size()));
        int anchor = pool[pick];
        pool.erase(pool.begin() + pick);
        if (used_v[anchor]) continue;

        bool closed = false;
        for (int attempt = 0; attempt < attempts_per_vertex && !closed; ++attempt) {
            std::vector<int> cyc{anchor};
            std::vector<int> cols;
            used_v[anchor] = 1;
            for (int step = 1; step < k; ++step) {
                // random feasible next vertex
                std::vector<int> feas;
                for (int v : view.vertices) {
                    if (used_v[v]) continue;
                    int col = g.sub(cyc.back(), v);
                    if (!in_c[col] || used_c[col]) continue;
                    if (step == k - 1) {
                        int closing = g.sub(v, anchor);
                        if (closing == col || !in_c[closing] || used_c[closing]) continue;
                    }
                    feas.push_back(v);
                }
                if (feas.empty()) break;
                int v = feas[rng_below(rng, feas.size())];
                used_v[v] = 1;
                used_c[g.sub(cyc.back(), v)] = 1;
                cols.push_back(g.sub(cyc.back(), v));
                cyc.push_back(v);
            }
            if (static_cast<int>(cyc.size()) == k) {
                int closing = g.sub(cyc.back(), anchor);
                used_c[closing] = 1;
                report.matching.edges.push_back(*cycle_to_hyperedge(
                    cyc, ColoredDigraphView{g, view.vertices, view.colors}));
                closed = true;
                break;
            }
            // unwind the failed attempt
            for (std::size_t i = 1; i < cyc.size(); ++i) used_v[cyc[i]] = 0;
            for (int c : cols) used_c[c] = 0;
            used_v[anchor] = 0;
        }
        if (!closed) used_v[anchor] = 0;  // leftover
    }

    int used_vertices = static_cast<int>(report.matching.edges.size()) * k;
    report.leftover_vertices = static_cast<int>(view.vertices.size()) - used_vertices;
    report.leftover_colors = static_cast<int>(view.colors.size()) - used_vertices;
    return report;
}

// ---- typicality statistics for tripartite equation hypergraphs ----

// The hypergraph on parts (A, B, C) whose edges are the solutions of
// s_a * a + s_b * b + s_c * c = 0 with signs in {-1, +1}.
struct TripartiteEquation {
    int sign_a = 1, sign_b = 1, sign_c = 1;

    // the third coordinate forced by fixing the other two
    int solve_c(const Group& g, int a, int b) const {
        int rhs = g.neg(g.add(g.scalar_mul(sign_a, a), g.scalar_mul(sign_b, b)));
        return sign_c == 1 ? rhs : g.neg(rhs);
    }
    int solve_b(const Group& g, int a, int c) const {
        int rhs = g.neg(g.add(g.scalar_mul(sign_a, a), g.scalar_mul(sign_c, c)));
        return sign_b == 1 ? rhs : g.neg(rhs);
    }
    int solve_a(const Group& g, int b, int c) const {
        int rhs = g.neg(g.add(g.scalar_mul(sign_b, b), g.scalar_mul(sign_c, c)));
        return sign_a == 1 ? rhs : g.neg(rhs);
    }
};

struct TypicalityReport {
    std::vector<int> part_sizes;
    long long min_degree = 0, max_degree = 0;
    long long min_pair_degree = 0, max_pair_degree = 0;
    bool verdict = false;  // (gamma, p, n)-typical for the supplied gamma, p
};

// Degree and same-part pair-degree statistics plus the typicality verdict:
// part sizes and vertex degrees within (1 +- gamma) p n, pair degrees of
// same-part pairs into every other part within (1 +- gamma) p^2 n.
inline TypicalityReport typicality_stats(const Group& g, const TripartiteEquation& eq,
                                         const std::vector<int>& A, const std::vector<int>& B,
                                         const std::vector<int>& C, double gamma, double p) {
    const int n = g.order();
    std::vector<char> inA(n, 0), inB(n, 0), inC(n, 0);
    for (int x : A) inA[x] = 1;
    for (int x : B) inB[x] = 1;
    for (int x : C) inC[x] = 1;

    TypicalityReport rep;
    rep.part_sizes = {static_cast<int>(A.size()), static_cast<int>(B.size()),
                      static_cast<int>(C.size())};

    auto adjAB = [&](int a, int b) { return inC[eq.solve_c(g, a, b)] != 0; };
    auto adjAC = [&](int a, int c) { return inB[eq.solve_b(g, a, c)] != 0; };
    auto adjBC = [&](int b, int c) { return inA[eq.solve_a(g, b, c)] != 0; };

    std::vector<long long> degrees;
    for (int a : A) {
        long long d = 0;
        for (int b : B) d += adjAB(a, b);
        degrees.push_back(d);
    }
    for (int b : B) {
        long long d = 0;
        for (int c : C) d += adjBC(b, c);
        degrees.push_back(d);
    }
    for (int c : C) {
        long long d = 0;
        for (int a : A) d += adjAC(a, c);
        degrees.push_back(d);
    }
    if (!degrees.empty()) {
        rep.min_degree = *std::min_element(degrees.begin(), degrees.end());
        rep.max_degree = *std::max_element(degrees.begin(), degrees.end());
    }

    std::vector<long long> pair_degrees;
    auto pair_deg = [&](const std::vector<int>& part, auto adj_u, const std::vector<int>& into) {
        for (std::size_t i = 0; i < part.size(); ++i)
            for (std::size_t j = i + 1; j < part.size(); ++j) {
                long long d = 0;
                for (int z : into) d += adj_u(part[i], z) && adj_u(part[j], z);
                pair_degrees.push_back(d);
            }
    };
    pair_deg(A, adjAB, B);
    pair_deg(A, adjAC, C);
    pair_deg(B, [&](int b, int a) { return adjAB(a, b); }, A);
    pair_deg(B, adjBC, C);
    pair_deg(C, [&](int c, int a) { return adjAC(a, c); }, A);
    pair_deg(C, [&](int c, int b) { return adjBC(b, c); }, B);
    if (!pair_degrees.empty()) {
        rep.min_pair_degree = *std::min_element(pair_degrees.begin(), pair_degrees.end());
        rep.max_pair_degree = *std::max_element(pair_degrees.begin(), pair_degrees.end());
    }

    auto within = [&](double lo, double hi, long long v) {
        return static_cast<double>(v) >= lo && static_cast<double>(v) <= hi;
    };
    bool ok = true;
    for (int s : rep.part_sizes) ok = ok && within((1 - gamma) * n, (1 + gamma) * n, s);
    for (long long d : degrees) ok = ok && within((1 - gamma) * p * n, (1 + gamma) * p * n, d);
    for (long long d : pair_degrees)
        ok = ok && within((1 - gamma) * p * p * n, (1 + gamma) * p * p * n, d);
    rep.verdict = ok;
    return rep;
}

}  // namespace ortho
