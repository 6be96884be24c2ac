#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"
#include "ortho/sequence.hpp"
#include "ortho/util.hpp"

namespace ortho {

// Exact count of k-tuples with sum s that are rainbow path-candidates
// disjoint from S_avoid, by enumerating the n^{k-1} tuples with the last
// coordinate forced.
inline long long count_good_tuples(const Group& g, int k, int s,
                                   const std::vector<int>& S_avoid) {
    if (s == 0) throw DomainError("target sum must be non-zero");
    if (k < 2) throw DomainError("k must be >= 2");
    const int n = g.order();
    long long total = 1;
    for (int i = 0; i < k - 1; ++i) {
        total *= n;
        if (total > 20'000'000) throw BudgetError("tuple enumeration exceeds the desk-scale cap");
    }
    std::vector<char> avoid(n, 0);
    for (int x : S_avoid) avoid[x] = 1;

    long long count = 0;
    std::vector<int> t(k, 0);
    std::vector<int> psum(k + 1, 0);  // psum[i] = t_1 + ... + t_i
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == k - 1) {
            t[pos] = g.sub(s, psum[pos]);
            // rainbow + path-candidate + avoidance, checked directly
            for (int i = 0; i < k; ++i) {
                if (avoid[t[i]]) return;
                for (int j = i + 1; j < k; ++j)
                    if (t[i] == t[j]) return;
            }
            std::vector<char> seen(n, 0);
            seen[0] = 1;
            int sum = 0;
            for (int i = 0; i < k; ++i) {
                sum = g.add(sum, t[i]);
                if (seen[sum]) return;
                seen[sum] = 1;
            }
            ++count;
            return;
        }
        for (int v = 0; v < n; ++v) {
            t[pos] = v;
            psum[pos + 1] = g.add(psum[pos], v);
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return count;
}

// The two families behind the large-k cover-down: F_G of 4-tuples with
// common sum f (each splitting into dissociable 2-tuple halves, separable
// at the distances q + m f) and S_G of z_S-tuples with common sum s.
struct GoodFamilies {
    Group group{std::vector<int>{1}};
    int k = 0;
    int z_S = 0;
    int f = 0;
    int s = 0;
    int q = 0;
    // F tuples ordered (f+_1, f+_2, f-_1, f-_2): the positive half is the
    // first two coordinates, the negative half the last two
    std::vector<std::array<int, 4>> F;
    std::vector<std::vector<int>> S;
};

// z_S is forced by k: the unique value in {2..5} making k - 4 - z_S
// positive and divisible by 4 (needs k >= 10).
inline int pick_z_s(int k) {
    for (int z = 2; z <= 5; ++z)
        if ((k - 4 - z) % 4 == 0 && k - 4 - z > 0) return z;
    throw DomainError("no valid z_S: k must be >= 10");
}

struct FamilyBuildResult {
    std::optional<GoodFamilies> families;
    std::string stage;  // where the greedy got stuck, on failure
};

namespace detail {

// Scan positions 0..n-1 starting at a seed-derived offset; seed 0 keeps
// canonical order.
struct ScanOrder {
    int n;
    int offset;
    int at(int i) const { return (i + offset) % n; }
};

}  // namespace detail

// Greedy construction following the extension proof: pick z_S, f, s with
// q + m f != 0, grow S_G tuple by tuple keeping near-dissociability, then
// grow F_G by choosing per round a fresh split f = f+ + f- avoiding all
// subset sums, a positive half keeping {F_i^+} dissociable and separable
// from (f-) at every distance q + m f, and a negative half completing all
// of property (5)/(6). Deterministic for a fixed seed.
inline FamilyBuildResult build_good_families(const Group& g, int k, int target_count,
                                             std::uint64_t seed = 0) {
    if (k < 10) throw DomainError("k must be >= 10");
    const int n = g.order();
    if (target_count < 0 || static_cast<long long>(target_count) * 64 * k > n)
        throw DomainError("target count must be at most n / (64 k)");

    FamilyBuildResult out;
    const int z_s = pick_z_s(k);
    const int M = (k - 4 - z_s) / 4;
    detail::ScanOrder scan{n, static_cast<int>(seed % static_cast<std::uint64_t>(n))};

    // distances q + m f, m in 0..k, must avoid 0 for m up to k+1, and the
    // total f = f+ + f- must avoid +-(q + m f)
    auto pick_f_s = [&](int& f, int& s, int& q) -> bool {
        for (int fi = 0; fi < n; ++fi) {
            int fc = scan.at(fi);
            if (fc == 0) continue;
            for (int si = 0; si < n; ++si) {
                int sc = scan.at(si);
                int qc = g.sub(g.neg(g.scalar_mul(M, fc)), sc);
                bool ok = true;
                for (int m = 0; m <= k + 1 && ok; ++m) {
                    int d = g.add(qc, g.scalar_mul(m, fc));
                    if (d == 0) ok = false;
                    if (fc == d || fc == g.neg(d)) ok = false;
                }
                if (ok) {
                    f = fc;
                    s = sc;
                    q = qc;
                    return true;
                }
            }
        }
        return false;
    };

    int f = 0, s = 0, q = 0;
    if (!pick_f_s(f, s, q)) {
        out.stage = "no (f, s) choice satisfies the distance conditions";
        return out;
    }

    GoodFamilies fam;
    fam.group = g;
    fam.k = k;
    fam.z_S = z_s;
    fam.f = f;
    fam.s = s;
    fam.q = q;

    std::vector<char> used(n, 0);
    std::unordered_set<int> s_prefix_sums;   // prefixes j in [z_S - 1] over S_G
    std::unordered_set<int> fplus_sums;      // prefixes of the positive halves
    std::unordered_set<int> fminus_sums;     // prefixes of the negative halves
    std::unordered_set<int> f_prefix_sums;   // prefixes j in [3] over F_G
    std::unordered_set<int> subset_sums;     // non-empty subset sums of F tuples

    std::vector<int> distances;  // q + m f for m in 0..k
    for (int m = 0; m <= k; ++m) distances.push_back(g.add(q, g.scalar_mul(m, f)));
    auto hits_distance = [&](int v) {
        for (int d : distances)
            if (v == d || v == g.neg(d)) return true;
        return false;
    };

    // ---- S_G ----
    long long attempts = 0;
    const long long attempt_cap = 20'000'000;
    std::vector<int> tuple(z_s, 0);
    for (int built = 0; built < target_count; ++built) {
        bool placed = false;
        std::vector<int> idx(z_s - 1, 0);
        while (!placed) {
            if (++attempts > attempt_cap) {
                out.stage = "S_G scan budget exhausted at tuple " + std::to_string(built);
                return out;
            }
            for (int i = 0; i < z_s - 1; ++i) tuple[i] = scan.at(idx[i]);
            int partial = element_sum(g, {tuple.begin(), tuple.begin() + (z_s - 1)});
            tuple[z_s - 1] = g.sub(s, partial);

            bool ok = true;
            for (int i = 0; i < z_s && ok; ++i) {
                if (tuple[i] == 0 || used[tuple[i]]) ok = false;
                for (int j = i + 1; j < z_s && ok; ++j)
                    if (tuple[i] == tuple[j]) ok = false;
            }
            if (ok) {
                // path-candidate and near-dissociability against S_G
                std::unordered_set<int> seen{0};
                int sum = 0;
                for (int i = 0; i < z_s && ok; ++i) {
                    sum = g.add(sum, tuple[i]);
                    if (!seen.insert(sum).second) ok = false;
                    if (i < z_s - 1 && s_prefix_sums.count(sum)) ok = false;
                }
            }
            if (ok) {
                fam.S.push_back(tuple);
                int sum = 0;
                for (int i = 0; i < z_s; ++i) {
                    used[tuple[i]] = 1;
                    sum = g.add(sum, tuple[i]);
                    if (i < z_s - 1) s_prefix_sums.insert(sum);
                }
                placed = true;
                break;
            }
            int i = z_s - 2;
            for (; i >= 0; --i) {
                if (++idx[i] < n) break;
                idx[i] = 0;
            }
            if (i < 0) {
                out.stage = "S_G scan exhausted at tuple " + std::to_string(built);
                return out;
            }
        }
    }

    // ---- F_G ----
    for (int built = 0; built < target_count; ++built) {
        // fresh split f = f+ + f-, both halves avoiding every subset sum
        int fplus = -1, fminus = -1;
        for (int ai = 0; ai < n; ++ai) {
            int a = scan.at(ai);
            int b = g.sub(f, a);
            if (a == 0 || b == 0) continue;
            if (subset_sums.count(a) || subset_sums.count(b)) continue;
            fplus = a;
            fminus = b;
            break;
        }
        if (fplus < 0) {
            out.stage = "no f+/f- split at tuple " + std::to_string(built);
            return out;
        }

        bool extended = false;
        for (int ai = 0; ai < n && !extended; ++ai) {
            if (++attempts > attempt_cap) {
                out.stage = "F_G scan budget exhausted at tuple " + std::to_string(built);
                return out;
            }
            int a = scan.at(ai);
            int b = g.sub(fplus, a);
            // rainbow path-candidate pair with sum f+
            if (a == 0 || b == 0 || a == b) continue;
            if (used[a] || used[b]) continue;
            // {F_i^+} stays dissociable
            if (fplus_sums.count(a) || fplus_sums.count(fplus)) continue;
            // F_G near-dissociability, prefixes contributed by the + half
            if (f_prefix_sums.count(a) || f_prefix_sums.count(fplus)) continue;
            // separable from the 1-tuple (f-): mixed sums a + f- and f
            if (hits_distance(g.add(a, fminus))) continue;

            for (int bi = 0; bi < n && !extended; ++bi) {
                if (++attempts > attempt_cap) {
                    out.stage = "F_G scan budget exhausted at tuple " + std::to_string(built);
                    return out;
                }
                int c = scan.at(bi);
                int d = g.sub(fminus, c);
                if (c == 0 || d == 0 || c == d) continue;
                if (used[c] || used[d] || c == a || c == b || d == a || d == b) continue;
                if (fminus_sums.count(c) || fminus_sums.count(fminus)) continue;

                ColorSequence plus{g, {a, b}};
                ColorSequence minus{g, {c, d}};
                bool sep = true;
                for (int dist : distances)
                    sep = sep && separable_at_distance(plus, minus, dist);
                if (!sep) continue;

                ColorSequence whole{g, {a, b, c, d}};
                if (!is_rainbow(whole) || !is_path_candidate(whole)) continue;
                int p3 = g.add(fplus, c);
                if (f_prefix_sums.count(p3)) continue;

                fam.F.push_back({a, b, c, d});
                used[a] = used[b] = used[c] = used[d] = 1;
                fplus_sums.insert(a);
                fplus_sums.insert(fplus);
                fminus_sums.insert(c);
                fminus_sums.insert(fminus);
                f_prefix_sums.insert(a);
                f_prefix_sums.insert(fplus);
                f_prefix_sums.insert(p3);
                const std::array<int, 4> t{a, b, c, d};
                for (int mask = 1; mask < 16; ++mask) {
                    int sum = 0;
                    for (int i = 0; i < 4; ++i)
                        if (mask >> i & 1) sum = g.add(sum, t[i]);
                    subset_sums.insert(sum);
                }
                extended = true;
            }
        }
        if (!extended) {
            out.stage = "F_G extension failed at tuple " + std::to_string(built);
            return out;
        }
    }

    out.families = std::move(fam);
    return out;
}

// Per-property verdicts for the six properties plus the global tuple
// disjointness. Independent of the builder.
struct FamilyCheckReport {
    bool disjoint = false;
    bool p1_f_sums = false;
    bool p2_s_sums = false;
    bool p3_s_candidates = false;
    bool p4_q = false;
    bool p5_f_candidates = false;
    bool p6_separable = false;

    bool pass() const {
        return disjoint && p1_f_sums && p2_s_sums && p3_s_candidates && p4_q && p5_f_candidates &&
               p6_separable;
    }
};

inline FamilyCheckReport check_good_families(const GoodFamilies& fam, const Group& g, int k) {
    FamilyCheckReport rep;

    // global disjointness of all tuples in F and S
    std::vector<int> all;
    for (const auto& t : fam.F) all.insert(all.end(), t.begin(), t.end());
    for (const auto& t : fam.S) all.insert(all.end(), t.begin(), t.end());
    std::vector<int> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    rep.disjoint = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();

    // (1) every F_i of size 4 with sum f
    rep.p1_f_sums = true;
    for (const auto& t : fam.F)
        rep.p1_f_sums =
            rep.p1_f_sums && element_sum(g, {t.begin(), t.end()}) == fam.f;

    // (2) every S_i of size z_S in {2..5} with sum s
    rep.p2_s_sums = fam.z_S >= 2 && fam.z_S <= 5 && fam.S.size() == fam.F.size();
    for (const auto& t : fam.S)
        rep.p2_s_sums = rep.p2_s_sums && static_cast<int>(t.size()) == fam.z_S &&
                        element_sum(g, t) == fam.s;

    // (3) S_i rainbow path-candidates, S_G near-dissociable
    rep.p3_s_candidates = true;
    std::vector<ColorSequence> s_seqs;
    for (const auto& t : fam.S) {
        ColorSequence c{g, t};
        rep.p3_s_candidates = rep.p3_s_candidates && is_rainbow(c) && is_path_candidate(c);
        s_seqs.push_back(c);
    }
    rep.p3_s_candidates = rep.p3_s_candidates && is_near_dissociable(s_seqs);

    // (4) divisibility and q = -((k - 4 - z_S)/4) f - s != 0
    const int gap = k - 4 - fam.z_S;
    rep.p4_q = gap > 0 && gap % 4 == 0;
    if (rep.p4_q) {
        int q = g.sub(g.neg(g.scalar_mul(gap / 4, fam.f)), fam.s);
        rep.p4_q = q == fam.q && q != 0;
    }

    // (5) halves rainbow path-candidates, half collections dissociable,
    //     whole tuples rainbow path-candidates, F_G near-dissociable
    rep.p5_f_candidates = true;
    std::vector<ColorSequence> plus, minus, whole;
    for (const auto& t : fam.F) {
        ColorSequence cp{g, {t[0], t[1]}};
        ColorSequence cm{g, {t[2], t[3]}};
        ColorSequence cw{g, {t[0], t[1], t[2], t[3]}};
        rep.p5_f_candidates = rep.p5_f_candidates && is_rainbow(cp) && is_path_candidate(cp) &&
                              is_rainbow(cm) && is_path_candidate(cm) && is_rainbow(cw) &&
                              is_path_candidate(cw);
        plus.push_back(cp);
        minus.push_back(cm);
        whole.push_back(cw);
    }
    rep.p5_f_candidates = rep.p5_f_candidates && is_dissociable(plus) && is_dissociable(minus) &&
                          is_near_dissociable(whole);

    // (6) halves separable at distance q + m f for every m in 0..k
    rep.p6_separable = true;
    for (std::size_t i = 0; i < fam.F.size(); ++i)
        for (int m = 0; m <= k; ++m) {
            int dist = g.add(fam.q, g.scalar_mul(m, fam.f));
            rep.p6_separable = rep.p6_separable && separable_at_distance(plus[i], minus[i], dist);
        }
    return rep;
}

}  // namespace ortho
