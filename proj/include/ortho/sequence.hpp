#pragma once

#include <algorithm>
#include <optional>
#include <unordered_set>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"

namespace ortho {

// An ordered tuple of group elements, the colour sequence of a walk in the
// complete coloured digraph on G (edge (a,b) has colour a - b).
struct ColorSequence {
    Group group{std::vector<int>{1}};
    std::vector<int> entries;

    int length() const { return static_cast<int>(entries.size()); }

    // partial_sum(0) = identity, partial_sum(j) = c_1 + ... + c_j
    int partial_sum(int j) const {
        int s = 0;
        for (int i = 0; i < j; ++i) s = group.add(s, entries[i]);
        return s;
    }

    std::vector<int> partial_sums() const {
        std::vector<int> out(entries.size() + 1);
        out[0] = 0;
        for (std::size_t i = 0; i < entries.size(); ++i)
            out[i + 1] = group.add(out[i], entries[i]);
        return out;
    }

    int total() const { return partial_sum(length()); }

    // "Z7:[1,2,4]"
    std::string render() const {
        std::string out = group.render() + ":[";
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(entries[i]);
        }
        return out + "]";
    }
};

// Vertex sequence of the walk leaving v along out-edges coloured by c:
// (v, v - c_1, v - c_1 - c_2, ...).
inline std::vector<int> walk_out(const Group& g, int v, const ColorSequence& c) {
    std::vector<int> w{v};
    int cur = v;
    for (int e : c.entries) {
        cur = g.sub(cur, e);
        w.push_back(cur);
    }
    return w;
}

// Walk following in-edges: (v, v + c_1, v + c_1 + c_2, ...).
inline std::vector<int> walk_in(const Group& g, int v, const ColorSequence& c) {
    std::vector<int> w{v};
    int cur = v;
    for (int e : c.entries) {
        cur = g.add(cur, e);
        w.push_back(cur);
    }
    return w;
}

// All k+1 partial sums (including the empty one) pairwise distinct.
inline bool is_path_candidate(const ColorSequence& c) {
    std::unordered_set<int> seen;
    seen.insert(0);
    int s = 0;
    for (int e : c.entries) {
        s = c.group.add(s, e);
        if (!seen.insert(s).second) return false;
    }
    return true;
}

// Proper prefix is a path-candidate and the total sum is the identity.
inline bool is_cycle_candidate(const ColorSequence& c) {
    if (c.length() < 2) throw DomainError("cycle-candidate needs length >= 2");
    if (c.total() != 0) return false;
    ColorSequence prefix{c.group, {c.entries.begin(), c.entries.end() - 1}};
    return is_path_candidate(prefix);
}

inline bool is_rainbow(const ColorSequence& c) {
    std::unordered_set<int> seen;
    for (int e : c.entries)
        if (!seen.insert(e).second) return false;
    return true;
}

namespace detail {

// Depth-first ordering search over a set of elements in canonical index
// order with a partial-sum table for pruning. `free_tail` lets the last
// element skip the distinct-partial-sum check (cycle-candidate case: the
// total is the identity, which always collides with the empty sum).
inline bool order_dfs(const Group& g, std::vector<int>& elems, std::vector<bool>& used,
                      std::vector<int>& out, std::vector<bool>& sum_seen, int sum, int depth,
                      bool free_tail) {
    const int k = static_cast<int>(elems.size());
    if (depth == k) return true;
    const bool last_free = free_tail && depth == k - 1;
    for (int i = 0; i < k; ++i) {
        if (used[i]) continue;
        int ns = g.add(sum, elems[i]);
        if (!last_free && sum_seen[ns]) continue;
        used[i] = true;
        if (!last_free) sum_seen[ns] = true;
        out.push_back(elems[i]);
        if (order_dfs(g, elems, used, out, sum_seen, ns, depth + 1, free_tail)) return true;
        out.pop_back();
        if (!last_free) sum_seen[ns] = false;
        used[i] = false;
    }
    return false;
}

inline std::optional<ColorSequence> order_search(const Group& g, std::vector<int> elems,
                                                 bool cycle) {
    std::sort(elems.begin(), elems.end());
    if (std::adjacent_find(elems.begin(), elems.end()) != elems.end())
        throw DomainError("ordering search expects a set, got repeated elements");
    std::vector<bool> used(elems.size(), false);
    std::vector<bool> sum_seen(g.order(), false);
    sum_seen[0] = true;
    std::vector<int> out;
    out.reserve(elems.size());
    if (!order_dfs(g, elems, used, out, sum_seen, 0, 0, cycle)) return std::nullopt;
    return ColorSequence{g, out};
}

}  // namespace detail

// Searches for an ordering of S that is a rainbow cycle-candidate.
// Preconditions: identity not in S (an ordering containing 0 repeats a
// partial sum) and sum(S) = identity. First-found ordering in canonical
// depth-first order, so sequential output is deterministic.
inline std::optional<ColorSequence> order_as_cycle_candidate(const Group& g,
                                                             const std::vector<int>& S) {
    for (int x : S)
        if (x == 0) throw IdentityPresentError("identity element cannot appear in a cycle-candidate");
    if (element_sum(g, S) != 0) throw SumMismatchError("set must sum to the identity");
    if (S.size() < 2) return std::nullopt;
    return detail::order_search(g, S, /*cycle=*/true);
}

// Searches for an ordering of S that is a rainbow path-candidate.
inline std::optional<ColorSequence> order_as_path_candidate(const Group& g,
                                                            const std::vector<int>& S) {
    for (int x : S)
        if (x == 0) throw IdentityPresentError("identity element cannot appear in a path-candidate");
    return detail::order_search(g, S, /*cycle=*/false);
}

namespace detail {

// Collision of prefix sums (1..limit) across two distinct sequences.
inline bool prefix_sums_collide(const ColorSequence& a, const ColorSequence& b, int limit_a,
                                int limit_b) {
    std::unordered_set<int> sums_a;
    int s = 0;
    for (int j = 0; j < limit_a; ++j) {
        s = a.group.add(s, a.entries[j]);
        sums_a.insert(s);
    }
    s = 0;
    for (int j = 0; j < limit_b; ++j) {
        s = b.group.add(s, b.entries[j]);
        if (sums_a.count(s)) return true;
    }
    return false;
}

inline bool dissociable_family(const std::vector<ColorSequence>& fam, int drop_tail) {
    if (fam.empty()) return true;
    const int k = fam.front().length();
    for (const auto& c : fam) {
        if (c.length() != k) throw DomainError("dissociable family needs equal lengths");
        if (c.group != fam.front().group) throw GroupMismatchError("mixed groups in family");
    }
    const int limit = k - drop_tail;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j)
            if (prefix_sums_collide(fam[i], fam[j], limit, limit)) return false;
    return true;
}

}  // namespace detail

// Non-empty prefix sums never collide across two distinct sequences of the
// family (j, j' in [k]).
inline bool is_dissociable(const std::vector<ColorSequence>& fam) {
    return detail::dissociable_family(fam, 0);
}

// Same with j, j' in [k-1]: walks disjoint except possibly at endpoints.
inline bool is_near_dissociable(const std::vector<ColorSequence>& fam) {
    return detail::dissociable_family(fam, 1);
}

// For all non-empty prefixes, sum_c(j) + sum_b(j') avoids {-d, d}. With
// v - w = d this makes the out-walk from v and the in-walk from w disjoint
// except possibly at the endpoints.
inline bool separable_at_distance(const ColorSequence& c, const ColorSequence& b, int d) {
    if (c.group != b.group) throw GroupMismatchError("sequences from different groups");
    const Group& g = c.group;
    const int nd = g.neg(d);
    int sc = 0;
    for (int j = 0; j < c.length(); ++j) {
        sc = g.add(sc, c.entries[j]);
        int sb = 0;
        for (int jp = 0; jp < b.length(); ++jp) {
            sb = g.add(sb, b.entries[jp]);
            int mixed = g.add(sc, sb);
            if (mixed == d || mixed == nd) return false;
        }
    }
    return true;
}

}  // namespace ortho
