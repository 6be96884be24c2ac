#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"
#include "ortho/search.hpp"
#include "ortho/sequence.hpp"
#include "ortho/util.hpp"
#include "ortho/words.hpp"

namespace ortho {

// A labelled digraph over words: vertex labels injective, and for each edge
// (u, v) the label identity label(u) - label(v) = label(edge) holds. Copies
// of a pattern under separating projections are concrete edge-coloured
// subgraphs of the complete coloured digraph on G.
struct Pattern {
    Group group{std::vector<int>{1}};
    std::vector<Word> vertex_labels;
    std::vector<std::pair<int, int>> edges;  // directed (from, to)
    std::vector<Word> edge_labels;           // parallel to `edges`

    int vertex_count() const { return static_cast<int>(vertex_labels.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    // Number of free variables in scope: 1 + max variable id used.
    int variable_scope() const {
        int mx = -1;
        for (const auto& w : vertex_labels) mx = std::max(mx, w.max_variable());
        for (const auto& w : edge_labels) mx = std::max(mx, w.max_variable());
        return mx + 1;
    }
};

// The three pattern axioms: words over one group with a simple digraph,
// injective vertex labels, and the per-edge difference identity.
inline bool validate_pattern(const Pattern& p) {
    if (p.edges.size() != p.edge_labels.size()) return false;
    const int nv = p.vertex_count();
    for (const auto& w : p.vertex_labels)
        if (w.group != p.group) return false;
    for (const auto& w : p.edge_labels)
        if (w.group != p.group) return false;
    std::set<std::pair<int, int>> seen_edges;
    for (const auto& [u, v] : p.edges) {
        if (u < 0 || u >= nv || v < 0 || v >= nv || u == v) return false;
        if (!seen_edges.insert({u, v}).second) return false;
    }
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j)
            if (p.vertex_labels[i] == p.vertex_labels[j]) return false;
    for (std::size_t e = 0; e < p.edges.size(); ++e) {
        Word diff = word_sub(p.vertex_labels[p.edges[e].first], p.vertex_labels[p.edges[e].second]);
        if (!(diff == p.edge_labels[e])) return false;
    }
    return true;
}

// Vertex-label set and edge-label set each pairwise separable, and every
// label constant or linear in at least one free variable. Vertex-vs-edge
// pairs are not constrained.
inline bool is_well_distributed(const Pattern& p) {
    if (!validate_pattern(p)) return false;
    auto label_ok = [](const Word& w) { return w.is_constant() || w.linear_in_some_variable(); };
    for (const auto& w : p.vertex_labels)
        if (!label_ok(w)) return false;
    for (const auto& w : p.edge_labels)
        if (!label_ok(w)) return false;
    auto pairwise_separable = [](const std::vector<Word>& labels) {
        // label sets, not multisets: skip equal words
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j) {
                if (labels[i] == labels[j]) continue;
                if (!word_is_separable_pair(labels[i], labels[j])) return false;
            }
        return true;
    };
    return pairwise_separable(p.vertex_labels) && pairwise_separable(p.edge_labels);
}

// Directed path with constant edge labels from a rainbow path-candidate:
// first vertex labelled with free variable v_0, i-th vertex with
// v_0 - (c_1 + ... + c_i).
inline Pattern make_path_pattern(const ColorSequence& s) {
    if (!is_path_candidate(s) || !is_rainbow(s))
        throw DomainError("path pattern needs a rainbow path-candidate");
    const Group& g = s.group;
    Pattern p;
    p.group = g;
    Word v = word_variable(g, 0);
    int sum = 0;
    p.vertex_labels.push_back(v);
    for (int i = 0; i < s.length(); ++i) {
        sum = g.add(sum, s.entries[i]);
        p.vertex_labels.push_back(word_sub(v, word_constant(g, sum)));
        p.edges.push_back({i, i + 1});
        p.edge_labels.push_back(word_constant(g, s.entries[i]));
    }
    return p;
}

// Directed cycle with constant edge labels from a rainbow cycle-candidate.
inline Pattern make_cycle_pattern(const ColorSequence& s) {
    if (!is_cycle_candidate(s) || !is_rainbow(s))
        throw DomainError("cycle pattern needs a rainbow cycle-candidate");
    const Group& g = s.group;
    const int k = s.length();
    Pattern p;
    p.group = g;
    Word v = word_variable(g, 0);
    int sum = 0;
    for (int i = 0; i < k; ++i) {
        p.vertex_labels.push_back(word_sub(v, word_constant(g, sum)));
        sum = g.add(sum, s.entries[i]);
    }
    for (int i = 0; i < k; ++i) {
        p.edges.push_back({i, (i + 1) % k});
        p.edge_labels.push_back(word_constant(g, s.entries[i]));
    }
    return p;
}

// A concrete occurrence of a pattern: the witnessing projection plus the
// element sets it maps the labels onto.
struct PatternCopy {
    Pattern pattern;
    Projection projection;
    std::vector<int> image_vertices;  // sorted element indices
    std::vector<int> image_colors;    // sorted element indices
};

struct ColoredEdge {
    int from, to, color;
};

// The concrete subgraph of the coloured digraph: projected vertices and
// edges, with each edge coloured by the projected edge label.
struct ColoredSubgraph {
    Group group{std::vector<int>{1}};
    std::vector<int> vertices;
    std::vector<ColoredEdge> edges;
};

inline ColoredSubgraph copy_to_subgraph(const PatternCopy& c) {
    ColoredSubgraph out;
    out.group = c.pattern.group;
    std::vector<int> img(c.pattern.vertex_count());
    for (int i = 0; i < c.pattern.vertex_count(); ++i)
        img[i] = c.projection.apply(c.pattern.vertex_labels[i]);
    out.vertices = img;
    std::sort(out.vertices.begin(), out.vertices.end());
    for (std::size_t e = 0; e < c.pattern.edges.size(); ++e) {
        auto [u, v] = c.pattern.edges[e];
        out.edges.push_back({img[u], img[v], c.projection.apply(c.pattern.edge_labels[e])});
    }
    return out;
}

struct CopyPools {
    std::vector<char> vertex_pool;  // membership over element indices
    std::vector<char> color_pool;
    std::vector<char> forbidden;
};

namespace detail {

inline std::vector<char> membership(const Group& g, const std::vector<int>& xs) {
    std::vector<char> m(g.order(), 0);
    for (int x : xs) m[x] = 1;
    return m;
}

// Full copy re-validation, independent of how the projection was found.
inline bool copy_is_valid(const Pattern& p, const Projection& pi, const CopyPools& pools) {
    std::vector<int> vimg(p.vertex_count());
    for (int i = 0; i < p.vertex_count(); ++i) {
        vimg[i] = pi.apply(p.vertex_labels[i]);
        const bool constant = p.vertex_labels[i].is_constant();
        if (constant) {
            if (vimg[i] != p.vertex_labels[i].constant) return false;
        } else {
            if (!pools.vertex_pool[vimg[i]] || pools.forbidden[vimg[i]]) return false;
        }
    }
    // injectivity on vertex labels
    std::vector<int> sorted = vimg;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (!pi.separates(p.vertex_labels) || !pi.separates(p.edge_labels)) return false;
    for (std::size_t e = 0; e < p.edges.size(); ++e) {
        int color = pi.apply(p.edge_labels[e]);
        const bool constant = p.edge_labels[e].is_constant();
        if (constant) {
            if (color != p.edge_labels[e].constant) return false;
        } else {
            if (!pools.color_pool[color] || pools.forbidden[color]) return false;
        }
        auto [u, v] = p.edges[e];
        if (vimg[u] == vimg[v]) return false;  // no loops in the host digraph
        if (p.group.sub(vimg[u], vimg[v]) != color) return false;
    }
    return true;
}

inline PatternCopy make_copy(const Pattern& p, const Projection& pi) {
    PatternCopy out;
    out.pattern = p;
    out.projection = pi;
    std::set<int> vs, cs;
    for (const auto& w : p.vertex_labels) vs.insert(pi.apply(w));
    for (const auto& w : p.edge_labels) cs.insert(pi.apply(w));
    out.image_vertices.assign(vs.begin(), vs.end());
    out.image_colors.assign(cs.begin(), cs.end());
    return out;
}

}  // namespace detail

struct FindCopyOptions {
    std::uint64_t sample_attempts = 100'000;
    // exhaustive fallback permitted while n^k stays under this cap
    std::uint64_t exhaustive_limit = 2'000'000;
};

// Searches for a projection realising a copy of the pattern with all
// non-constant vertex labels landing in vertex_pool \ forbidden and all
// non-constant edge labels in color_pool \ forbidden. Seeded random
// sampling first, then exhaustive enumeration when n^k is small; absence
// is only proven in exhaustive mode.
inline SearchResult<PatternCopy> find_copy(const Pattern& p, const std::vector<int>& vertex_pool,
                                           const std::vector<int>& color_pool,
                                           const std::vector<int>& forbidden, std::uint64_t seed,
                                           const FindCopyOptions& opts = {}) {
    if (!is_well_distributed(p)) throw DomainError("pattern must be well-distributed");
    if (p.vertex_count() + p.edge_count() > 100)
        throw DomainError("pattern too large (|V| + |E| must be <= 100)");
    const Group& g = p.group;
    const int k = p.variable_scope();
    const int n = g.order();

    CopyPools pools;
    pools.vertex_pool = detail::membership(g, vertex_pool);
    pools.color_pool = detail::membership(g, color_pool);
    pools.forbidden = detail::membership(g, forbidden);

    std::uint64_t nodes = 0;
    if (k == 0) {
        Projection pi{g, {}};
        if (detail::copy_is_valid(p, pi, pools))
            return SearchResult<PatternCopy>::found_with(detail::make_copy(p, pi), 1);
        return SearchResult<PatternCopy>::nonexistent(1);
    }

    Rng rng(seed);
    Projection pi{g, std::vector<int>(k, 0)};
    for (std::uint64_t t = 0; t < opts.sample_attempts; ++t) {
        ++nodes;
        for (int i = 0; i < k; ++i) pi.assignment[i] = static_cast<int>(rng_below(rng, n));
        if (detail::copy_is_valid(p, pi, pools))
            return SearchResult<PatternCopy>::found_with(detail::make_copy(p, pi), nodes);
    }

    long long total = 1;
    bool exhaustible = true;
    for (int i = 0; i < k; ++i) {
        total *= n;
        if (total > static_cast<long long>(opts.exhaustive_limit)) {
            exhaustible = false;
            break;
        }
    }
    if (!exhaustible) return SearchResult<PatternCopy>::unknown(nodes);

    std::optional<PatternCopy> found;
    for_each_projection(g, k, [&](const Projection& cand) {
        if (found) return;
        ++nodes;
        if (detail::copy_is_valid(p, cand, pools)) found = detail::make_copy(p, cand);
    });
    if (found) return SearchResult<PatternCopy>::found_with(std::move(*found), nodes);
    return SearchResult<PatternCopy>::nonexistent(nodes);
}

// Empirical availability probe: samples p-random vertex/colour pools and a
// random forbidden set, reports the fraction of trials where a copy was
// found, with a 95% Wilson interval.
struct ProbeReport {
    int trials = 0;
    int successes = 0;
    std::uint64_t seed = 0;
    double rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
    double wilson_low() const;
    double wilson_high() const;
};

namespace detail {
inline std::pair<double, double> wilson_interval(int successes, int trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 95%
    double phat = static_cast<double>(successes) / trials;
    double z2 = z * z;
    double denom = 1.0 + z2 / trials;
    double centre = phat + z2 / (2.0 * trials);
    double margin = z * std::sqrt((phat * (1.0 - phat) + z2 / (4.0 * trials)) / trials);
    return {(centre - margin) / denom, (centre + margin) / denom};
}
}  // namespace detail

inline double ProbeReport::wilson_low() const {
    return detail::wilson_interval(successes, trials).first;
}
inline double ProbeReport::wilson_high() const {
    return detail::wilson_interval(successes, trials).second;
}

inline ProbeReport probe_gadget_availability(const Group& g, double p_random, const Pattern& pattern,
                                             int forbidden_size, int trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (p_random < 0.0 || p_random > 1.0) throw DomainError("p must lie in [0, 1]");
    if (forbidden_size < 0 || forbidden_size > g.order())
        throw DomainError("forbidden size out of range");
    ProbeReport report;
    report.trials = trials;
    report.seed = seed;
    const int n = g.order();
    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        std::vector<int> vpool, cpool;
        for (int x = 0; x < n; ++x)
            if (rng_unit(rng) < p_random) vpool.push_back(x);
        for (int x = 0; x < n; ++x)
            if (rng_unit(rng) < p_random) cpool.push_back(x);
        std::vector<int> forbidden = sample_subset(rng, n, forbidden_size);
        FindCopyOptions opts;
        opts.sample_attempts = 20'000;
        auto r = find_copy(pattern, vpool, cpool, forbidden, derive_seed(seed, 100'000 + t), opts);
        if (r.found()) ++report.successes;
    }
    return report;
}

}  // namespace ortho
