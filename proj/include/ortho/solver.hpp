#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"
#include "ortho/rainbow.hpp"
#include "ortho/search.hpp"
#include "ortho/util.hpp"
#include "ortho/zerosum.hpp"

namespace ortho {

// A bijection phi of G such that g -> phi(g) - g is also a bijection,
// stored as an image array over canonical indices.
struct Orthomorphism {
    Group group{std::vector<int>{1}};
    std::vector<int> perm;  // perm[g] = phi(g)
};

struct VerifyReport {
    bool ok = false;
    std::string reason;  // first violated invariant
};

inline VerifyReport verify_orthomorphism(const Group& g, const std::vector<int>& perm) {
    const int n = g.order();
    if (static_cast<int>(perm.size()) != n)
        return {false, "image array has wrong length"};
    std::vector<char> seen(n, 0);
    for (int x = 0; x < n; ++x) {
        if (perm[x] < 0 || perm[x] >= n) return {false, "image out of range at " + std::to_string(x)};
        if (seen[perm[x]])
            return {false, "phi not injective: value " + std::to_string(perm[x]) + " repeats"};
        seen[perm[x]] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int x = 0; x < n; ++x) {
        int d = g.sub(perm[x], x);
        if (seen[d])
            return {false, "difference map not injective: value " + std::to_string(d) + " repeats"};
        seen[d] = 1;
    }
    return {true, {}};
}

// Cycle lengths >= 2 (sorted descending) plus the fixed-point count.
struct CycleType {
    std::vector<int> lengths;
    int fixed_points = 0;

    bool operator==(const CycleType& o) const = default;

    int total() const {
        int t = fixed_points;
        for (int l : lengths) t += l;
        return t;
    }

    // "1+3^2" style: fixed points first, then lengths ascending with power
    // sugar for repeats.
    std::string render() const {
        std::string out;
        auto append = [&](int len, int count) {
            if (!out.empty()) out += '+';
            out += std::to_string(len);
            if (count > 1) out += '^' + std::to_string(count);
        };
        if (fixed_points > 0) append(1, fixed_points);
        std::vector<int> asc = lengths;
        std::sort(asc.begin(), asc.end());
        std::size_t i = 0;
        while (i < asc.size()) {
            std::size_t j = i;
            while (j < asc.size() && asc[j] == asc[i]) ++j;
            append(asc[i], static_cast<int>(j - i));
            i = j;
        }
        return out;
    }

    static CycleType parse(const std::string& text) {
        CycleType t;
        std::size_t i = 0;
        auto fail = [&]() -> void { throw DomainError("bad cycle type: '" + text + "'"); };
        auto num = [&]() -> int {
            if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) fail();
            long long v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + (text[i] - '0');
                if (v > (1 << 30)) fail();
                ++i;
            }
            return static_cast<int>(v);
        };
        while (i < text.size()) {
            int len = num();
            int count = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                count = num();
            }
            if (len < 1 || count < 1) fail();
            if (len == 1)
                t.fixed_points += count;
            else
                for (int c = 0; c < count; ++c) t.lengths.push_back(len);
            if (i < text.size()) {
                if (text[i] != '+') fail();
                ++i;
            }
        }
        std::sort(t.lengths.begin(), t.lengths.end(), std::greater<int>());
        return t;
    }
};

inline CycleType cycle_type(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    CycleType t;
    std::vector<char> seen(n, 0);
    for (int x = 0; x < n; ++x) {
        if (seen[x]) continue;
        int len = 0;
        int y = x;
        while (!seen[y]) {
            seen[y] = 1;
            y = perm[y];
            ++len;
        }
        if (len == 1)
            ++t.fixed_points;
        else
            t.lengths.push_back(len);
    }
    std::sort(t.lengths.begin(), t.lengths.end(), std::greater<int>());
    return t;
}

// Exhaustive backtracking for any orthomorphism at all: images assigned in
// index order with used-image and used-difference bitmasks. Exact for
// n <= 64.
inline SearchResult<Orthomorphism> exists_orthomorphism(const Group& g,
                                                        const SearchBudget& budget = {}) {
    const int n = g.order();
    if (n > 64) throw BudgetError("exhaustive orthomorphism search capped at order 64");
    BudgetGauge gauge(budget);
    std::vector<int> perm(n, -1);
    std::uint64_t used_img = 0, used_diff = 0;
    bool truncated = false;

    auto rec = [&](auto&& self, int x) -> bool {
        if (x == n) return true;
        for (int y = 0; y < n; ++y) {
            if (used_img >> y & 1) continue;
            int d = g.sub(y, x);
            if (used_diff >> d & 1) continue;
            if (!gauge.tick()) {
                truncated = true;
                return false;
            }
            used_img |= 1ULL << y;
            used_diff |= 1ULL << d;
            perm[x] = y;
            if (self(self, x + 1)) return true;
            used_img &= ~(1ULL << y);
            used_diff &= ~(1ULL << d);
            if (truncated) return false;
        }
        return false;
    };
    if (rec(rec, 0))
        return SearchResult<Orthomorphism>::found_with(Orthomorphism{g, perm}, gauge.nodes());
    if (truncated) return SearchResult<Orthomorphism>::unknown(gauge.nodes());
    return SearchResult<Orthomorphism>::nonexistent(gauge.nodes());
}

// A rainbow cycle factor of the punctured view turns into an orthomorphism
// by sending each vertex to its successor along its cycle (and fixing the
// identity). The verifier, not the convention, is the arbiter.
inline Orthomorphism factor_to_orthomorphism(const Group& g, const Matching& m) {
    std::vector<int> perm(g.order());
    std::iota(perm.begin(), perm.end(), 0);
    for (const auto& e : m.edges) {
        const auto& cyc = e.witness_cycle;
        for (std::size_t i = 0; i < cyc.size(); ++i)
            perm[cyc[i]] = cyc[(i + 1) % cyc.size()];
    }
    return {g, perm};
}

struct OrthoSearchResult {
    SearchResult<Orthomorphism> result;
    std::optional<Matching> factor;  // the witnessing rainbow cycle factor
};

// Orthomorphism fixing the identity with all other cycles of length k
// (the FGT cycle type), via a perfect matching search on the punctured
// view. Hall-Paige and the zero-sum partition condition act as fast
// refuters before any cycle search.
inline OrthoSearchResult find_fgt_orthomorphism(const Group& g, int k,
                                                const SearchBudget& budget = {}) {
    if (k < 2) throw DomainError("k must be >= 2");
    const int n = g.order();
    OrthoSearchResult out;
    if ((n - 1) % k != 0) {
        out.result =
            SearchResult<Orthomorphism>::nonexistent(0, "k does not divide |G| - 1");
        return out;
    }
    if (!hall_paige(g)) {
        out.result =
            SearchResult<Orthomorphism>::nonexistent(0, "Hall-Paige condition fails");
        return out;
    }
    if (n > 1) {
        // necessary: G \ {0} partitions into zero-sum k-sets
        std::vector<int> X(n - 1);
        std::iota(X.begin(), X.end(), 1);
        auto part = zero_sum_equipartition(g, X, k, SearchBudget::nodes(1'000'000));
        if (part.status == SearchStatus::Nonexistent) {
            out.result = SearchResult<Orthomorphism>::nonexistent(
                part.nodes, "no zero-sum partition of G \\ {0} into k-sets");
            return out;
        }
    }

    auto view = ColoredDigraphView::punctured(g);
    auto match = perfect_matching(view, k, budget);
    if (!match.found()) {
        out.result.status = match.status;
        out.result.nodes = match.nodes;
        out.result.reason = match.reason;
        return out;
    }
    Orthomorphism phi = factor_to_orthomorphism(g, *match.value);
    auto report = verify_orthomorphism(g, phi.perm);
    if (!report.ok) throw Error("internal: converted factor fails verification: " + report.reason);
    out.result = SearchResult<Orthomorphism>::found_with(std::move(phi), match.nodes);
    out.factor = std::move(match.value);
    return out;
}

// General cycle types: one fixed point (the identity) plus prescribed
// lengths. Exact backtracking directly on the coloured digraph, growing one
// cycle at a time; every completed cycle's colour set is a zero-sum block,
// so the search interleaves the partition and its rainbow realisation.
inline OrthoSearchResult find_cycle_type_orthomorphism(const Group& g, const CycleType& t,
                                                       const SearchBudget& budget = {}) {
    const int n = g.order();
    OrthoSearchResult out;
    if (t.fixed_points != 1) throw DomainError("cycle type must fix exactly the identity");
    for (int l : t.lengths)
        if (l < 2) throw DomainError("cycle lengths must be >= 2");
    if (t.total() != n) throw DomainError("cycle type must cover the group");

    if (!hall_paige(g)) {
        out.result = SearchResult<Orthomorphism>::nonexistent(0, "Hall-Paige condition fails");
        return out;
    }
    if (n > 1) {
        auto part = tannenbaum_partition(g, t.lengths, SearchBudget::nodes(1'000'000));
        if (part.status == SearchStatus::Nonexistent) {
            out.result = SearchResult<Orthomorphism>::nonexistent(
                part.nodes, "no zero-sum partition of G \\ {0} with the prescribed sizes");
            return out;
        }
    }

    const auto view = ColoredDigraphView::punctured(g);
    std::vector<char> used_v(n, 0), used_c(n, 0);
    BudgetGauge gauge(budget);
    bool truncated = false;
    std::vector<std::vector<int>> cycles;
    std::vector<int> cur;
    std::vector<int> sizes = t.lengths;  // multiset of remaining lengths
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
    std::vector<char> size_used(sizes.size(), 0);

    auto grow = [&](auto&& self, int anchor, int target, std::size_t covered) -> bool {
        int at = cur.back();
        if (static_cast<int>(cur.size()) == target) {
            int closing = g.sub(at, anchor);
            if (closing == 0 || used_c[closing]) return false;
            used_c[closing] = 1;
            cycles.push_back(cur);
            if (covered + target == static_cast<std::size_t>(n - 1)) return true;
            int next_anchor = -1;
            for (int v = 1; v < n; ++v)
                if (!used_v[v]) {
                    next_anchor = v;
                    break;
                }
            std::vector<int> saved = cur;
            used_v[next_anchor] = 1;
            // try each distinct remaining length for the next cycle
            int prev_len = -1;
            for (std::size_t si = 0; si < sizes.size(); ++si) {
                if (size_used[si] || sizes[si] == prev_len) continue;
                prev_len = sizes[si];
                size_used[si] = 1;
                cur.assign(1, next_anchor);
                if (self(self, next_anchor, sizes[si], covered + target)) return true;
                size_used[si] = 0;
                if (truncated) break;
            }
            used_v[next_anchor] = 0;
            cur = saved;
            cycles.pop_back();
            used_c[closing] = 0;
            return false;
        }
        for (int next = 1; next < n; ++next) {
            if (used_v[next] || next == anchor) continue;
            int color = g.sub(at, next);
            if (color == 0 || used_c[color]) continue;
            if (!gauge.tick()) {
                truncated = true;
                return false;
            }
            used_v[next] = 1;
            used_c[color] = 1;
            cur.push_back(next);
            if (self(self, anchor, target, covered)) return true;
            cur.pop_back();
            used_c[color] = 0;
            used_v[next] = 0;
            if (truncated) return false;
        }
        return false;
    };

    bool found = n == 1;
    if (!found) {
        used_v[1] = 1;
        int prev_len = -1;
        for (std::size_t si = 0; si < sizes.size(); ++si) {
            if (sizes[si] == prev_len) continue;
            prev_len = sizes[si];
            size_used[si] = 1;
            cur.assign(1, 1);
            if (grow(grow, 1, sizes[si], 0)) {
                found = true;
                break;
            }
            size_used[si] = 0;
            if (truncated) break;
        }
    }
    if (found) {
        Matching m;
        for (const auto& c : cycles) m.edges.push_back(*cycle_to_hyperedge(c, view));
        Orthomorphism phi = factor_to_orthomorphism(g, m);
        auto report = verify_orthomorphism(g, phi.perm);
        if (!report.ok)
            throw Error("internal: converted factor fails verification: " + report.reason);
        if (!(cycle_type(phi.perm) == t)) throw Error("internal: cycle type mismatch");
        out.result = SearchResult<Orthomorphism>::found_with(std::move(phi), gauge.nodes());
        out.factor = std::move(m);
        return out;
    }
    if (truncated)
        out.result = SearchResult<Orthomorphism>::unknown(gauge.nodes());
    else
        out.result = SearchResult<Orthomorphism>::nonexistent(gauge.nodes());
    return out;
}

// ---- (A, G)-matchability ----

struct EquationSystem {
    std::vector<std::vector<int>> rows;  // l x m integer matrix

    int cols() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }

    static EquationSystem parse(const std::string& text) {
        // "1,-1,-1;0,1,-1"
        EquationSystem out;
        std::vector<int> row;
        long long cur = 0;
        bool neg = false, have = false;
        auto push_num = [&]() {
            if (!have) throw DomainError("bad matrix literal");
            row.push_back(static_cast<int>(neg ? -cur : cur));
            cur = 0;
            neg = false;
            have = false;
        };
        for (char ch : text) {
            if (ch == ' ') continue;
            if (ch == '-') {
                neg = true;
            } else if (ch >= '0' && ch <= '9') {
                cur = cur * 10 + (ch - '0');
                have = true;
                if (cur > 1000) throw DomainError("matrix entry too large");
            } else if (ch == ',') {
                push_num();
            } else if (ch == ';') {
                push_num();
                out.rows.push_back(row);
                row.clear();
            } else {
                throw DomainError("bad matrix literal");
            }
        }
        push_num();
        out.rows.push_back(row);
        for (const auto& r : out.rows)
            if (r.size() != out.rows.front().size())
                throw DomainError("matrix rows must have equal length");
        return out;
    }
};

struct MatchableResult {
    SearchStatus status = SearchStatus::Unknown;
    std::vector<std::vector<int>> witness;  // n vectors in G^m when Found
    std::uint64_t nodes = 0;
    std::string reason;
};

inline bool matchable_witness_valid(const EquationSystem& A, const Group& g,
                                    const std::vector<std::vector<int>>& vectors) {
    const int n = g.order();
    const int m = A.cols();
    if (static_cast<int>(vectors.size()) != n) return false;
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != m) return false;
        for (const auto& row : A.rows) {
            int s = 0;
            for (int i = 0; i < m; ++i) s = g.add(s, g.scalar_mul(row[i], v[i]));
            if (s != 0) return false;
        }
    }
    for (int i = 0; i < m; ++i) {
        std::vector<char> seen(n, 0);
        for (const auto& v : vectors) {
            if (seen[v[i]]) return false;
            seen[v[i]] = 1;
        }
    }
    return true;
}

// Decides whether n vectors v in G^m with A v = 0 exist whose i-th
// coordinates are each a permutation of G. The kernel is enumerated via
// +-1-pivot elimination when possible (brute force over G^m as a fallback),
// then vectors are selected by backtracking over the first coordinate's
// values with per-coordinate used flags.
inline MatchableResult matchable(const EquationSystem& A, const Group& g,
                                 const SearchBudget& budget = {}) {
    const int n = g.order();
    const int m = A.cols();
    if (m < 1) throw DomainError("matrix needs at least one column");

    // integer elimination with +-1 pivots (row operations preserve the
    // solution set over any abelian group)
    std::vector<int> pivot_col_of_row;
    std::vector<char> col_is_pivot(m, 0);
    std::vector<std::vector<int>> reduced;
    bool eliminated = true;
    for (const auto& input_row : A.rows) {
        std::vector<int> row = input_row;
        for (std::size_t pr = 0; pr < reduced.size(); ++pr) {
            int pc = pivot_col_of_row[pr];
            int mult = row[pc] * reduced[pr][pc];  // pivot is +-1
            if (mult != 0)
                for (int c = 0; c < m; ++c) row[c] -= mult * reduced[pr][c];
        }
        int pc = -1;
        for (int c = 0; c < m; ++c)
            if (row[c] == 1 || row[c] == -1) {
                pc = c;
                break;
            }
        if (pc == -1) {
            bool zero = std::all_of(row.begin(), row.end(), [](int x) { return x == 0; });
            if (zero) continue;  // dependent row
            eliminated = false;  // no unit pivot available
            break;
        }
        pivot_col_of_row.push_back(pc);
        col_is_pivot[pc] = 1;
        reduced.push_back(row);
    }

    std::vector<std::vector<int>> kernel;
    BudgetGauge gauge(budget);
    if (eliminated) {
        // enumerate free columns and back-solve pivots in reverse row
        // order: row pr has zeros at all earlier pivot columns
        std::vector<int> free_cols;
        for (int c = 0; c < m; ++c)
            if (!col_is_pivot[c]) free_cols.push_back(c);
        long long total = 1;
        for (std::size_t i = 0; i < free_cols.size(); ++i) {
            total *= n;
            if (total > 20'000'000) {
                MatchableResult out;
                out.status = SearchStatus::Unknown;
                out.reason = "kernel enumeration exceeds the desk-scale cap";
                return out;
            }
        }
        std::vector<int> assign(free_cols.size(), 0);
        std::vector<int> vec(m, 0);
        while (true) {
            for (std::size_t i = 0; i < free_cols.size(); ++i) vec[free_cols[i]] = assign[i];
            for (int pr = static_cast<int>(reduced.size()) - 1; pr >= 0; --pr) {
                int pc = pivot_col_of_row[pr];
                int s = 0;
                for (int c = 0; c < m; ++c)
                    if (c != pc) s = g.add(s, g.scalar_mul(reduced[pr][c], vec[c]));
                // reduced[pr][pc] * x + s = 0
                vec[pc] = reduced[pr][pc] == 1 ? g.neg(s) : s;
            }
            kernel.push_back(vec);
            int i = static_cast<int>(free_cols.size()) - 1;
            for (; i >= 0; --i) {
                if (++assign[i] < n) break;
                assign[i] = 0;
            }
            if (i < 0) break;
        }
    } else {
        // brute force over G^m with row filtering
        long long total = 1;
        for (int i = 0; i < m; ++i) {
            total *= n;
            if (total > 20'000'000) {
                MatchableResult out;
                out.status = SearchStatus::Unknown;
                out.reason = "kernel enumeration exceeds the desk-scale cap";
                return out;
            }
        }
        std::vector<int> vec(m, 0);
        while (true) {
            bool ok = true;
            for (const auto& row : A.rows) {
                int s = 0;
                for (int c = 0; c < m; ++c) s = g.add(s, g.scalar_mul(row[c], vec[c]));
                ok = ok && s == 0;
            }
            if (ok) kernel.push_back(vec);
            int i = m - 1;
            for (; i >= 0; --i) {
                if (++vec[i] < n) break;
                vec[i] = 0;
            }
            if (i < 0) break;
        }
    }

    // bucket kernel vectors by first coordinate
    std::vector<std::vector<int>> bucket(n);
    for (std::size_t i = 0; i < kernel.size(); ++i) bucket[kernel[i][0]].push_back(i);
    for (int a = 0; a < n; ++a)
        if (bucket[a].empty()) {
            MatchableResult out;
            out.status = SearchStatus::Nonexistent;
            out.nodes = gauge.nodes();
            out.reason = "no kernel vector has first coordinate " + std::to_string(a);
            return out;
        }

    std::vector<std::vector<char>> used(m, std::vector<char>(n, 0));
    std::vector<int> chosen;
    bool truncated = false;
    auto rec = [&](auto&& self, int a) -> bool {
        if (a == n) return true;
        for (int idx : bucket[a]) {
            const auto& v = kernel[idx];
            bool free = true;
            for (int c = 0; c < m; ++c) free = free && !used[c][v[c]];
            if (!free) continue;
            if (!gauge.tick()) {
                truncated = true;
                return false;
            }
            for (int c = 0; c < m; ++c) used[c][v[c]] = 1;
            chosen.push_back(idx);
            if (self(self, a + 1)) return true;
            chosen.pop_back();
            for (int c = 0; c < m; ++c) used[c][v[c]] = 0;
            if (truncated) return false;
        }
        return false;
    };

    MatchableResult out;
    if (rec(rec, 0)) {
        out.status = SearchStatus::Found;
        for (int idx : chosen) out.witness.push_back(kernel[idx]);
        out.nodes = gauge.nodes();
        if (!matchable_witness_valid(A, g, out.witness))
            throw Error("internal: matchability witness fails validation");
        return out;
    }
    out.status = truncated ? SearchStatus::Unknown : SearchStatus::Nonexistent;
    out.nodes = gauge.nodes();
    return out;
}

// ---- FGT sweep ----

struct SweepRow {
    std::string group;
    int order = 0;
    int k = 0;
    std::string status;  // found | nonexistent | unknown | skipped_hall_paige
    std::string witness_hash;
    std::uint64_t nodes = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    bool all_found = true;  // over the non-skipped cells
};

inline std::string orthomorphism_hash(const Orthomorphism& phi) {
    return hex64(fnv1a(phi.perm.data(), phi.perm.size() * sizeof(int)));
}

// Re-verifies the FGT conjecture range: every Hall-Paige group of order up
// to max_order, every k >= 2 dividing n - 1. Cells may run on several
// threads; rows come back in deterministic (order, class, k) order either
// way.
inline SweepReport fgt_sweep(int max_order, const SearchBudget& budget = {}, int jobs = 1) {
    if (max_order < 2) throw DomainError("max order must be >= 2");
    struct Cell {
        Group g;
        int k;  // 0 marks a skipped group
    };
    std::vector<Cell> cells;
    for (int n = 2; n <= max_order; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            if (!hall_paige(g)) {
                cells.push_back({g, 0});
                continue;
            }
            for (int k = 2; k <= n - 1; ++k)
                if ((n - 1) % k == 0) cells.push_back({g, k});
        }
    }

    SweepReport report;
    report.rows.resize(cells.size());
    auto run_cell = [&](std::size_t i) {
        const Cell& c = cells[i];
        SweepRow row;
        row.group = c.g.render();
        row.order = c.g.order();
        row.k = c.k;
        if (c.k == 0) {
            row.status = "skipped_hall_paige";
        } else {
            auto r = find_fgt_orthomorphism(c.g, c.k, budget);
            row.status = to_string(r.result.status);
            row.nodes = r.result.nodes;
            if (r.result.found()) row.witness_hash = orthomorphism_hash(*r.result.value);
        }
        report.rows[i] = row;
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::vector<std::thread> workers;
        std::size_t stride = static_cast<std::size_t>(jobs);
        for (std::size_t w = 0; w < stride; ++w)
            workers.emplace_back([&, w] {
                for (std::size_t i = w; i < cells.size(); i += stride) run_cell(i);
            });
        for (auto& t : workers) t.join();
    }
    for (const auto& row : report.rows)
        if (row.k != 0 && row.status != "found") report.all_found = false;
    return report;
}

}  // namespace ortho
