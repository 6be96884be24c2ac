#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"
#include "ortho/rainbow.hpp"
#include "ortho/search.hpp"
#include "ortho/util.hpp"

namespace ortho {

// A subset of the vertex set of H_k, which splits into digraph vertices
// and digraph colours.
struct HkSet {
    std::vector<int> vertices;  // sorted
    std::vector<int> colors;    // sorted

    int size() const { return static_cast<int>(vertices.size() + colors.size()); }

    static HkSet vertex(int v) { return HkSet{{v}, {}}; }
};

inline HkSet hkset_union(const HkSet& a, const HkSet& b) {
    HkSet out;
    out.vertices.reserve(a.vertices.size() + b.vertices.size());
    std::merge(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(),
               std::back_inserter(out.vertices));
    std::merge(a.colors.begin(), a.colors.end(), b.colors.begin(), b.colors.end(),
               std::back_inserter(out.colors));
    return out;
}

inline bool hkset_disjoint(const HkSet& a, const HkSet& b) {
    auto overlap = [](const std::vector<int>& x, const std::vector<int>& y) {
        for (int v : x)
            if (std::binary_search(y.begin(), y.end(), v)) return true;
        return false;
    };
    return !overlap(a.vertices, b.vertices) && !overlap(a.colors, b.colors);
}

// A reservoir claimed to m-absorb the family: together with any m family
// members, the reservoir spans a perfect matching of H_k.
struct AbsorberInstance {
    HkSet reservoir;
    std::vector<HkSet> family;
    int m = 0;
};

struct AbsorbVerdict {
    SearchStatus status = SearchStatus::Unknown;  // Found = Pass, Nonexistent = Fail
    std::vector<int> failing_subfamily;           // indices, set on Fail
    std::uint64_t nodes = 0;
    int subfamilies_checked = 0;

    bool pass() const { return status == SearchStatus::Found; }
};

// Checks every size-m subfamily: the reservoir plus the chosen members must
// induce a hypergraph whose vertex set is matched exactly. Subfamilies are
// visited in sorted index order.
inline AbsorbVerdict verify_m_absorbs(const AbsorberInstance& inst, const ColoredDigraphView& view,
                                      int k, const SearchBudget& budget = {}) {
    for (const auto& s : inst.family)
        if (!hkset_disjoint(inst.reservoir, s))
            throw DomainError("family members must be disjoint from the reservoir");
    if (inst.m < 0 || inst.m > static_cast<int>(inst.family.size()))
        throw DomainError("m out of range");

    AbsorbVerdict verdict;
    std::uint64_t used_nodes = 0;

    std::vector<int> pick(inst.m);
    for (int i = 0; i < inst.m; ++i) pick[i] = i;
    const int fam = static_cast<int>(inst.family.size());

    while (true) {
        HkSet target = inst.reservoir;
        for (int i : pick) target = hkset_union(target, inst.family[i]);

        ColoredDigraphView sub;
        sub.group = view.group;
        sub.vertices = target.vertices;
        sub.colors = target.colors;
        // members must also live inside the ambient view
        for (int v : sub.vertices)
            if (!std::binary_search(view.vertices.begin(), view.vertices.end(), v))
                throw DomainError("absorber instance leaves the view (vertex)");
        for (int c : sub.colors)
            if (!std::binary_search(view.colors.begin(), view.colors.end(), c))
                throw DomainError("absorber instance leaves the view (colour)");

        ++verdict.subfamilies_checked;
        if (sub.vertices.size() != sub.colors.size() || sub.vertices.size() % k != 0) {
            verdict.status = SearchStatus::Nonexistent;
            verdict.failing_subfamily = pick;
            verdict.nodes = used_nodes;
            return verdict;
        }
        SearchBudget rem = budget;
        rem.max_nodes = budget.max_nodes > used_nodes ? budget.max_nodes - used_nodes : 0;
        auto r = perfect_matching(sub, k, rem);
        used_nodes += r.nodes;
        if (r.status == SearchStatus::Unknown) {
            verdict.status = SearchStatus::Unknown;
            verdict.nodes = used_nodes;
            return verdict;
        }
        if (r.status == SearchStatus::Nonexistent) {
            verdict.status = SearchStatus::Nonexistent;
            verdict.failing_subfamily = pick;
            verdict.nodes = used_nodes;
            return verdict;
        }

        // next m-combination in lex order
        if (inst.m == 0) break;
        int i = inst.m - 1;
        while (i >= 0 && pick[i] == fam - inst.m + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < inst.m; ++j) pick[j] = pick[j - 1] + 1;
    }
    verdict.status = SearchStatus::Found;
    verdict.nodes = used_nodes;
    return verdict;
}

// Searches for a reservoir of at most 10k elements that 1-absorbs {x, z}:
// a rainbow k-cycle through x whose off-x vertices and colours can be
// re-closed into a rainbow k-cycle through z with the same colour set.
// Every candidate is confirmed by verify_m_absorbs before returning.
inline SearchResult<AbsorberInstance> find_pair_absorber(int x, int z,
                                                         const ColoredDigraphView& view, int k,
                                                         const SearchBudget& budget = {}) {
    if (x == z) throw DomainError("absorber endpoints must be distinct");
    if (k < 2) throw DomainError("k must be >= 2");
    const Group& g = view.group;
    const int n = g.order();
    if (!std::binary_search(view.vertices.begin(), view.vertices.end(), x) ||
        !std::binary_search(view.vertices.begin(), view.vertices.end(), z))
        throw DomainError("both endpoints must be view vertices");

    std::vector<char> in_v(n, 0), in_c(n, 0);
    for (int v : view.vertices) in_v[v] = 1;
    for (int c : view.colors) in_c[c] = 1;

    BudgetGauge gauge(budget);
    bool truncated = false;
    std::optional<AbsorberInstance> found;

    std::vector<int> cyc{x};
    std::vector<char> used_v(n, 0), used_c(n, 0);
    used_v[x] = 1;

    auto try_cycle = [&]() -> bool {
        // attempt to re-close the off-x part together with z using exactly
        // the same colours
        std::vector<int> verts;
        for (std::size_t i = 1; i < cyc.size(); ++i) verts.push_back(cyc[i]);
        if (std::find(verts.begin(), verts.end(), z) != verts.end()) return false;
        std::vector<int> colors;
        for (int c = 0; c < n; ++c)
            if (used_c[c]) colors.push_back(c);
        verts.push_back(z);
        std::sort(verts.begin(), verts.end());

        ColoredDigraphView sub;
        sub.group = g;
        sub.vertices = verts;
        sub.colors = colors;
        SearchBudget rem;
        rem.max_nodes = 200'000;
        auto r = perfect_matching(sub, k, rem);
        if (!r.found()) return false;

        AbsorberInstance inst;
        std::vector<int> reservoir_vs(cyc.begin() + 1, cyc.end());
        std::sort(reservoir_vs.begin(), reservoir_vs.end());
        inst.reservoir = HkSet{reservoir_vs, colors};
        inst.family = {HkSet::vertex(x), HkSet::vertex(z)};
        inst.m = 1;
        auto verdict = verify_m_absorbs(inst, view, k, SearchBudget::nodes(1'000'000));
        if (!verdict.pass()) return false;
        found = inst;
        return true;
    };

    auto dfs = [&](auto&& self) -> bool {
        int at = cyc.back();
        if (static_cast<int>(cyc.size()) == k) {
            int closing = g.sub(at, x);
            if (!in_c[closing] || used_c[closing]) return false;
            used_c[closing] = 1;
            bool done = try_cycle();
            used_c[closing] = 0;
            return done;
        }
        for (int next = 0; next < n; ++next) {
            if (!in_v[next] || used_v[next] || next == z) continue;
            int color = g.sub(at, next);
            if (!in_c[color] || used_c[color]) continue;
            if (!gauge.tick()) {
                truncated = true;
                return false;
            }
            used_v[next] = 1;
            used_c[color] = 1;
            cyc.push_back(next);
            if (self(self)) return true;
            cyc.pop_back();
            used_c[color] = 0;
            used_v[next] = 0;
            if (truncated) return false;
        }
        return false;
    };

    if (dfs(dfs) && found)
        return SearchResult<AbsorberInstance>::found_with(std::move(*found), gauge.nodes());
    if (truncated) return SearchResult<AbsorberInstance>::unknown(gauge.nodes());
    return SearchResult<AbsorberInstance>::nonexistent(gauge.nodes());
}

// The column-to-d-element schedule: for the system {a_1, d_l, d_1},
// {a_2, d_1, d_2}, ..., {a_{l-1}, d_{l-2}, d_{l-1}}, {a_l, d_{l-1}} with one
// column deleted, pick d_j from column j below the deleted index and
// d_{j-1} above it. The picks cover {d_1, ..., d_{l-1}} exactly once.
inline std::map<int, int> selection_schedule(int l, int deleted) {
    if (l < 2) throw DomainError("l must be >= 2");
    if (deleted < 1 || deleted > l) throw DomainError("deleted column out of range");
    std::map<int, int> choice;  // column (1-based) -> d index (1-based)
    for (int j = 1; j <= l; ++j) {
        if (j == deleted) continue;
        choice[j] = j < deleted ? j : j - 1;
    }
    return choice;
}

// ---- robustly matchable bipartite graphs ----

// Bipartite graph on X against Y + Y' with |X| = 3h, |Y| = 2h,
// |Y'| = h + beta h, max degree <= 100: X must match perfectly into
// Y + Y_0 for every h-subset Y_0 of Y'.
struct Rmbg {
    int h = 0;
    int beta_num = 0, beta_den = 1;
    std::vector<std::vector<int>> adj;  // adj[x] = sorted neighbours; 0..2h-1 = Y, rest = Y'

    int x_size() const { return 3 * h; }
    int y_size() const { return 2 * h; }
    int yp_size() const {
        return h + static_cast<int>(static_cast<long long>(h) * beta_num / beta_den);
    }
    int right_size() const { return y_size() + yp_size(); }

    int max_degree() const {
        int d = 0;
        std::vector<int> right(right_size(), 0);
        for (const auto& nb : adj) {
            d = std::max(d, static_cast<int>(nb.size()));
            for (int y : nb) ++right[y];
        }
        for (int rd : right) d = std::max(d, rd);
        return d;
    }
};

namespace detail {

// Kuhn's augmenting-path matching, X side into an allowed right subset.
inline bool bipartite_saturates_x(const std::vector<std::vector<int>>& adj, int right_size,
                                  const std::vector<char>& right_allowed) {
    const int nx = static_cast<int>(adj.size());
    std::vector<int> match_right(right_size, -1);
    std::vector<char> visited(right_size, 0);
    auto augment = [&](auto&& self, int x) -> bool {
        for (int y : adj[x]) {
            if (!right_allowed[y] || visited[y]) continue;
            visited[y] = 1;
            if (match_right[y] == -1 || self(self, match_right[y])) {
                match_right[y] = x;
                return true;
            }
        }
        return false;
    };
    for (int x = 0; x < nx; ++x) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!augment(augment, x)) return false;
    }
    return true;
}

}  // namespace detail

struct RmbgVerdict {
    bool pass = false;
    bool exhaustive = false;  // every Y_0 checked vs sampled
    long long subsets_checked = 0;
    std::uint64_t seed = 0;
    std::string reason;  // structural failure or the first failing Y_0
};

// Structural checks plus perfect-matching checks of X against Y + Y_0,
// exhaustively when C(|Y'|, h) is at most exhaustive_threshold, otherwise
// over `samples` random Y_0. The verdict records which evidence level it
// carries.
inline RmbgVerdict rmbg_verify(const Rmbg& rg, int samples, std::uint64_t seed,
                               long long exhaustive_threshold = 100'000) {
    RmbgVerdict verdict;
    verdict.seed = seed;
    if (static_cast<int>(rg.adj.size()) != rg.x_size()) {
        verdict.reason = "|X| != 3h";
        return verdict;
    }
    if (rg.h >= 1 && (static_cast<long long>(rg.h) * rg.beta_num) % rg.beta_den != 0) {
        verdict.reason = "beta h not integral";
        return verdict;
    }
    for (const auto& nb : rg.adj)
        for (int y : nb)
            if (y < 0 || y >= rg.right_size()) {
                verdict.reason = "edge endpoint out of range";
                return verdict;
            }
    if (rg.max_degree() > 100) {
        verdict.reason = "maximum degree exceeds 100";
        return verdict;
    }

    const int yp = rg.yp_size();
    const int h = rg.h;
    std::vector<char> allowed(rg.right_size(), 0);
    for (int y = 0; y < rg.y_size(); ++y) allowed[y] = 1;

    // C(yp, h), saturating at the threshold
    long long combos = 1;
    for (int i = 0; i < h; ++i) {
        combos = combos * (yp - i) / (i + 1);
        if (combos > exhaustive_threshold) break;
    }

    if (combos <= exhaustive_threshold) {
        verdict.exhaustive = true;
        std::vector<int> pick(h);
        for (int i = 0; i < h; ++i) pick[i] = i;
        while (true) {
            for (int i : pick) allowed[rg.y_size() + i] = 1;
            ++verdict.subsets_checked;
            bool ok = detail::bipartite_saturates_x(rg.adj, rg.right_size(), allowed);
            for (int i : pick) allowed[rg.y_size() + i] = 0;
            if (!ok) {
                verdict.reason = "matching failure on an exhaustively enumerated Y_0";
                return verdict;
            }
            int i = h - 1;
            while (i >= 0 && pick[i] == yp - h + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < h; ++j) pick[j] = pick[j - 1] + 1;
        }
    } else {
        Rng rng(seed);
        for (int t = 0; t < samples; ++t) {
            auto pick = sample_subset(rng, yp, h);
            for (int i : pick) allowed[rg.y_size() + i] = 1;
            ++verdict.subsets_checked;
            bool ok = detail::bipartite_saturates_x(rg.adj, rg.right_size(), allowed);
            for (int i : pick) allowed[rg.y_size() + i] = 0;
            if (!ok) {
                verdict.reason = "matching failure on a sampled Y_0";
                return verdict;
            }
        }
    }
    verdict.pass = true;
    return verdict;
}

// Randomised constructor: overlays left-regular rounds, each an injection
// of X into Y + Y' built from a shuffle, so both sides stay within the
// degree bound. Retries with derived seeds until the sampled verification
// passes.
inline std::optional<Rmbg> rmbg_build(int h, int beta_num, int beta_den, std::uint64_t seed,
                                      int retries = 10, int verify_samples = 1000) {
    if (h < 1) throw DomainError("h must be >= 1");
    if (beta_den < 1 || beta_num < 0) throw DomainError("beta must be a non-negative rational");
    if ((static_cast<long long>(h) * beta_num) % beta_den != 0)
        throw DomainError("beta h must be an integer");

    const int rounds = 16;
    for (int attempt = 0; attempt <= retries; ++attempt) {
        Rng rng(derive_seed(seed, attempt));
        Rmbg rg;
        rg.h = h;
        rg.beta_num = beta_num;
        rg.beta_den = beta_den;
        const int nx = rg.x_size();
        const int nr = rg.right_size();
        std::vector<std::vector<char>> has(nx, std::vector<char>(nr, 0));
        rg.adj.assign(nx, {});
        for (int r = 0; r < rounds; ++r) {
            // random injection X -> right side
            std::vector<int> perm(nr);
            for (int i = 0; i < nr; ++i) perm[i] = i;
            for (int i = nr - 1; i > 0; --i) {
                int j = static_cast<int>(rng_below(rng, i + 1));
                std::swap(perm[i], perm[j]);
            }
            for (int x = 0; x < nx; ++x) {
                if (!has[x][perm[x]]) {
                    has[x][perm[x]] = 1;
                    rg.adj[x].push_back(perm[x]);
                }
            }
        }
        for (auto& nb : rg.adj) std::sort(nb.begin(), nb.end());
        auto verdict = rmbg_verify(rg, verify_samples, derive_seed(seed, 1000 + attempt));
        if (verdict.pass) return rg;
    }
    return std::nullopt;
}

}  // namespace ortho
