// Acceptance suite: one criterion per runner, each printing a single
// [PASS]/[FAIL] line. Run with no arguments for the full battery or with a
// criterion number to run one (the ctest registration does the latter).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ortho/absorbers.hpp"
#include "ortho/certificate.hpp"
#include "ortho/families.hpp"
#include "ortho/group.hpp"
#include "ortho/rainbow.hpp"
#include "ortho/sequence.hpp"
#include "ortho/solver.hpp"
#include "ortho/util.hpp"
#include "ortho/words.hpp"
#include "ortho/zerosum.hpp"

using namespace ortho;

namespace {

// 1. FGT re-verification for orders 3..15: every Hall-Paige group, every
//    k >= 2 dividing n-1, Found with an independently verified certificate.
bool criterion_01(std::string& detail) {
    int cells = 0;
    for (int n = 3; n <= 15; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            if (!hall_paige(g)) continue;
            for (int k = 2; k <= n - 1; ++k) {
                if ((n - 1) % k != 0) continue;
                auto r = find_fgt_orthomorphism(g, k);
                if (!r.result.found()) {
                    detail = g.render() + " k=" + std::to_string(k) + " -> " +
                             to_string(r.result.status);
                    return false;
                }
                Json cert = orthomorphism_certificate(*r.result.value, 0, r.factor);
                auto verdict = verify_certificate(cert);
                if (!verdict.ok) {
                    detail = g.render() + " k=" + std::to_string(k) +
                             " certificate: " + verdict.reason;
                    return false;
                }
                CycleType expect;
                expect.fixed_points = 1;
                expect.lengths.assign((n - 1) / k, k);
                if (!(cycle_type(r.result.value->perm) == expect)) {
                    detail = g.render() + " k=" + std::to_string(k) + " wrong cycle type";
                    return false;
                }
                ++cells;
            }
        }
    }
    detail = std::to_string(cells) + " (group, k) cells";
    return true;
}

// 2. Hall-Paige <=> orthomorphism existence, exhaustive for orders <= 12.
bool criterion_02(std::string& detail) {
    int groups = 0;
    for (int n = 2; n <= 12; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            auto r = exists_orthomorphism(g);
            if (r.status == SearchStatus::Unknown) {
                detail = g.render() + " hit the budget";
                return false;
            }
            if (r.found() != hall_paige(g)) {
                detail = g.render() + " disagrees with the sum-of-elements check";
                return false;
            }
            if (r.found() && !verify_orthomorphism(g, r.value->perm).ok) {
                detail = g.render() + " witness fails verification";
                return false;
            }
            ++groups;
        }
    }
    detail = std::to_string(groups) + " groups, exhaustive both ways";
    return true;
}

// 3. Proposition equivalence at (Z_7, 3), (Z_13, 3), (Z_13, 2):
//    cycle-type orthomorphism search, rainbow factor backtracking, and
//    materialised-H_k exact cover all agree.
bool criterion_03(std::string& detail) {
    struct Case {
        int n, k;
    };
    for (Case c : {Case{7, 3}, Case{13, 3}, Case{13, 2}}) {
        Group g({c.n});

        CycleType t;
        t.fixed_points = 1;
        t.lengths.assign((c.n - 1) / c.k, c.k);
        auto route1 = find_cycle_type_orthomorphism(g, t);
        auto route2 = perfect_matching(ColoredDigraphView::punctured(g), c.k);

        // materialised H_k + exact cover over the 2(n-1) hypergraph vertices
        auto hes = enumerate_hyperedges(ColoredDigraphView::punctured(g), c.k, 1'000'000);
        if (hes.truncated) {
            detail = "H_k enumeration truncated";
            return false;
        }
        std::vector<char> used_v(c.n, 0), used_c(c.n, 0);
        int covered = 0;
        bool route3 = false;
        auto rec = [&](auto&& self, std::size_t from) -> void {
            if (route3) return;
            if (covered == c.n - 1) {
                route3 = true;
                return;
            }
            // smallest uncovered vertex drives the cover step
            int anchor = -1;
            for (int v = 1; v < c.n; ++v)
                if (!used_v[v]) {
                    anchor = v;
                    break;
                }
            for (std::size_t i = from; i < hes.edges.size() && !route3; ++i) {
                const auto& e = hes.edges[i];
                if (!std::binary_search(e.vertex_set.begin(), e.vertex_set.end(), anchor))
                    continue;
                bool ok = true;
                for (int v : e.vertex_set) ok = ok && !used_v[v];
                for (int col : e.color_set) ok = ok && !used_c[col];
                if (!ok) continue;
                for (int v : e.vertex_set) used_v[v] = 1;
                for (int col : e.color_set) used_c[col] = 1;
                covered += c.k;
                self(self, 0);
                covered -= c.k;
                for (int v : e.vertex_set) used_v[v] = 0;
                for (int col : e.color_set) used_c[col] = 0;
            }
        };
        rec(rec, 0);

        bool f1 = route1.result.found(), f2 = route2.found();
        if (f1 != f2 || f2 != route3) {
            detail = "Z" + std::to_string(c.n) + " k=" + std::to_string(c.k) + ": routes " +
                     std::to_string(f1) + "/" + std::to_string(f2) + "/" + std::to_string(route3);
            return false;
        }
        if (!f1) {
            detail = "Z" + std::to_string(c.n) + " k=" + std::to_string(c.k) +
                     " unexpectedly nonexistent";
            return false;
        }
        // cross-validate witnesses with the independent validators
        if (!verify_orthomorphism(g, route1.result.value->perm).ok ||
            !validate_matching(*route2.value, ColoredDigraphView::punctured(g)) ||
            !matching_is_perfect(*route2.value, ColoredDigraphView::punctured(g))) {
            detail = "witness cross-validation failed";
            return false;
        }
    }
    detail = "three routes agree on all three cases";
    return true;
}

// 4. Every fuzzed rainbow cycle's colour set sums to the identity:
//    10^4 cycles across groups of order <= 50, k <= 8.
bool criterion_04(std::string& detail) {
    Rng rng(20260810);
    int built = 0;
    while (built < 10'000) {
        int n = 3 + static_cast<int>(rng_below(rng, 48));
        auto classes = enumerate_abelian_groups(n);
        const Group& g = classes[rng_below(rng, classes.size())];
        int k = 2 + static_cast<int>(rng_below(rng, 7));
        if (k > n) continue;
        auto verts = sample_subset(rng, n, k);
        for (int i = k - 1; i > 0; --i) {
            int j = static_cast<int>(rng_below(rng, i + 1));
            std::swap(verts[i], verts[j]);
        }
        auto he = cycle_to_hyperedge(verts, ColoredDigraphView::full(g));
        if (!he) continue;
        if (element_sum(g, he->color_set) != 0) {
            detail = "counterexample in " + g.render();
            return false;
        }
        ++built;
    }
    detail = "10000 rainbow cycles, zero failures";
    return true;
}

// 5. max(|2G|, |3G|)^5 >= n for every abelian class of order <= 300.
bool criterion_05(std::string& detail) {
    int classes = 0;
    for (int n = 1; n <= 300; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            if (!check_two_three_lemma(g)) {
                detail = g.render() + " violates the image bound";
                return false;
            }
            ++classes;
        }
    }
    detail = std::to_string(classes) + " isomorphism classes";
    return true;
}

// 6. Projection counting: exactly n^k projections, and exactly n^{k-1}
//    fixing any image of a linear word; n in {2..5}, k <= 2, 20 random
//    linear words each.
bool criterion_06(std::string& detail) {
    Rng rng(6);
    for (int n = 2; n <= 5; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            for (int k = 1; k <= 2; ++k) {
                long long nk = 1;
                for (int i = 0; i < k; ++i) nk *= n;
                std::set<std::vector<int>> distinct;
                for_each_projection(g, k, [&](const Projection& p) {
                    distinct.insert(p.assignment);
                });
                if (static_cast<long long>(distinct.size()) != nk) {
                    detail = g.render() + " projection count mismatch";
                    return false;
                }
                for (int t = 0; t < 20; ++t) {
                    Word w = word_constant(g, static_cast<int>(rng_below(rng, n)));
                    int lin = static_cast<int>(rng_below(rng, k));
                    for (int v = 0; v < k; ++v) {
                        int coeff = v == lin ? (rng_below(rng, 2) ? 1 : -1)
                                             : static_cast<int>(rng_below(rng, 7)) - 3;
                        w = word_add(w, word_variable(g, v, coeff));
                    }
                    for (int target = 0; target < n; ++target) {
                        if (count_projections_fixing(w, target, g, k) != nk / n) {
                            detail = g.render() + " k=" + std::to_string(k) +
                                     " image count mismatch";
                            return false;
                        }
                    }
                }
            }
        }
    }
    detail = "all counts equal n^k and n^{k-1}";
    return true;
}

// 7. Ordering sweep over all abelian groups of order <= 13: zero-sum
//    identity-free subsets of size <= min(9, n-1) order as rainbow
//    cycle-candidates; non-zero-sum subsets of size <= 9 order as rainbow
//    path-candidates.
bool criterion_07(std::string& detail) {
    long long checked = 0;
    for (int n = 2; n <= 13; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            const int univ = g.order() - 1;
            std::vector<int> members;
            auto rec = [&](auto&& self, int next) -> bool {
                if (!members.empty()) {
                    std::vector<int> S = members;
                    int sum = element_sum(g, S);
                    ++checked;
                    if (sum == 0) {
                        if (S.size() >= 2 && static_cast<int>(S.size()) <= std::min(9, n - 1)) {
                            auto r = order_as_cycle_candidate(g, S);
                            if (!r || !is_cycle_candidate(*r) || !is_rainbow(*r)) return false;
                        }
                    } else {
                        auto r = order_as_path_candidate(g, S);
                        if (!r || !is_path_candidate(*r) || !is_rainbow(*r)) return false;
                    }
                }
                if (static_cast<int>(members.size()) >= 9) return true;
                for (int v = next; v <= univ; ++v) {
                    members.push_back(v);
                    if (!self(self, v + 1)) return false;
                    members.pop_back();
                }
                return true;
            };
            if (!rec(rec, 1)) {
                detail = "ordering failure in " + g.render();
                return false;
            }
        }
    }
    detail = std::to_string(checked) + " subsets ordered";
    return true;
}

// 8. Zero-sum equipartitions of Z_n \ {0} for (7,3), (13,3), (13,4), (13,6),
//    independently re-verified.
bool criterion_08(std::string& detail) {
    struct Case {
        int n, k;
    };
    for (Case c : {Case{7, 3}, Case{13, 3}, Case{13, 4}, Case{13, 6}}) {
        Group g({c.n});
        std::vector<int> X(c.n - 1);
        std::iota(X.begin(), X.end(), 1);
        auto r = zero_sum_equipartition(g, X, c.k);
        if (!r.found()) {
            detail = "Z" + std::to_string(c.n) + " k=" + std::to_string(c.k) + " not found";
            return false;
        }
        std::vector<int> targets(X.size() / c.k, 0);
        if (!validate_partition(*r.value, targets)) {
            detail = "Z" + std::to_string(c.n) + " k=" + std::to_string(c.k) +
                     " failed independent validation";
            return false;
        }
    }
    detail = "all four instances partitioned and validated";
    return true;
}

// 9. Good families for Z_503 and Z_1009, k in {10..13}, size n/(64k), all
//    six properties; plus the desk-scale Lemma 2.18 bound
//    4*count >= 3*n^{k-1} exhaustively for n <= 13, k in {2,3}.
bool criterion_09(std::string& detail) {
    for (int p : {503, 1009}) {
        Group g({p});
        for (int k = 10; k <= 13; ++k) {
            int target = p / (64 * k);
            auto built = build_good_families(g, k, target, 0);
            if (!built.families) {
                detail = "Z" + std::to_string(p) + " k=" + std::to_string(k) +
                         " build failed: " + built.stage;
                return false;
            }
            auto rep = check_good_families(*built.families, g, k);
            if (!rep.pass() || static_cast<int>(built.families->F.size()) != target) {
                detail = "Z" + std::to_string(p) + " k=" + std::to_string(k) +
                         " property check failed";
                return false;
            }
        }
    }
    std::cout << "  [ok] families built and checked for Z_503/Z_1009, k=10..13\n";

    // the counting bound, as stated: 4*count >= 3*n^{k-1} for every group
    // of order <= 13, every non-zero target sum, k in {2, 3}
    long long violations = 0;
    std::string first;
    for (int n = 2; n <= 13; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            for (int k = 2; k <= 3; ++k) {
                long long nk1 = 1;
                for (int i = 0; i < k - 1; ++i) nk1 *= n;
                for (int s = 1; s < n; ++s) {
                    long long count = count_good_tuples(g, k, s, {});
                    if (4 * count < 3 * nk1) {
                        if (violations == 0)
                            first = g.render() + " k=" + std::to_string(k) +
                                    " s=" + std::to_string(s) + ": count " +
                                    std::to_string(count) + " < 3/4 * " + std::to_string(nk1);
                        ++violations;
                    }
                }
            }
        }
    }
    if (violations > 0) {
        detail = "counting bound fails at desk scale (" + std::to_string(violations) +
                 " violations; first: " + first + ")";
        return false;
    }
    detail = "families and counting bound both hold";
    return true;
}

// 10. Matchability: the Hall-Paige matrix agrees with the sum check for all
//     groups of order <= 12; the toroidal queens matrix is matchable on
//     Z_5, Z_7, Z_11, Z_13 and not on Z_3, Z_9.
bool criterion_10(std::string& detail) {
    EquationSystem hp;
    hp.rows = {{1, -1, -1}};
    for (int n = 2; n <= 12; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            auto r = matchable(hp, g);
            if (r.status == SearchStatus::Unknown) {
                detail = g.render() + " hit the budget";
                return false;
            }
            if ((r.status == SearchStatus::Found) != hall_paige(g)) {
                detail = g.render() + " disagrees with hall_paige";
                return false;
            }
        }
    }
    EquationSystem queens = EquationSystem::parse("1,1,-1,0;1,-1,0,-1");
    for (int n : {5, 7, 11, 13}) {
        auto r = matchable(queens, Group({n}));
        if (r.status != SearchStatus::Found) {
            detail = "queens matrix should be matchable on Z" + std::to_string(n);
            return false;
        }
        if (!matchable_witness_valid(queens, Group({n}), r.witness)) {
            detail = "queens witness invalid on Z" + std::to_string(n);
            return false;
        }
    }
    for (int n : {3, 9}) {
        auto r = matchable(queens, Group({n}));
        if (r.status != SearchStatus::Nonexistent) {
            detail = "queens matrix should be non-matchable on Z" + std::to_string(n);
            return false;
        }
    }
    detail = "Hall-Paige matrix and queens matrix behave as required";
    return true;
}

// 11. Absorption: the selection schedule is a bijection onto
//     {d_1, ..., d_{l-1}} for every l <= 12; a pair absorber on (Z_11, 3)
//     has a reservoir of at most 10k elements and passes verification.
bool criterion_11(std::string& detail) {
    for (int l = 2; l <= 12; ++l) {
        for (int deleted = 1; deleted <= l; ++deleted) {
            auto sched = selection_schedule(l, deleted);
            if (sched.size() != static_cast<std::size_t>(l - 1)) {
                detail = "schedule size wrong";
                return false;
            }
            std::set<int> chosen;
            for (auto [col, d] : sched) {
                bool in_column = col == 1 ? (d == 1 || d == l) : (d == col || d == col - 1);
                if (col == deleted || !in_column) {
                    detail = "schedule picks outside the column sets";
                    return false;
                }
                chosen.insert(d);
            }
            if (static_cast<int>(chosen.size()) != l - 1 || *chosen.begin() != 1 ||
                *chosen.rbegin() != l - 1) {
                detail = "schedule is not a bijection onto {d_1..d_{l-1}}";
                return false;
            }
        }
    }

    Group z11({11});
    auto view = ColoredDigraphView::full(z11);
    const int k = 3;
    auto r = find_pair_absorber(1, 2, view, k);
    if (!r.found()) {
        detail = "no pair absorber found on Z_11";
        return false;
    }
    if (r.value->reservoir.size() > 10 * k) {
        detail = "reservoir too large";
        return false;
    }
    auto verdict = verify_m_absorbs(*r.value, view, k);
    if (!verdict.pass()) {
        detail = "reservoir fails verification";
        return false;
    }
    detail = "schedules exhaustively bijective; absorber verified";
    return true;
}

// 12. RMBG at h=20, beta=1/2: structural degree bound and zero matching
//     failures over exhaustive-or-10^3-sampled Y_0.
bool criterion_12(std::string& detail) {
    auto built = rmbg_build(20, 1, 2, 0);
    if (!built) {
        detail = "construction failed";
        return false;
    }
    if (built->max_degree() > 100) {
        detail = "degree bound violated";
        return false;
    }
    auto verdict = rmbg_verify(*built, 1000, 12);
    if (!verdict.pass) {
        detail = "matching failure: " + verdict.reason;
        return false;
    }
    detail = std::string("zero failures over ") + std::to_string(verdict.subsets_checked) +
             (verdict.exhaustive ? " exhaustive" : " sampled") + " subsets";
    return true;
}

// 13. Determinism: two identical sweep invocations produce byte-identical
//     output.
bool criterion_13(std::string& detail) {
    std::string base = std::string(ORTHO_CLI_PATH);
    std::string out1 = base + ".sweep1.csv";
    std::string out2 = base + ".sweep2.csv";
    std::string cmd1 = base + " sweep --max-order 11 --seed 0 --jobs 1 --out " + out1;
    std::string cmd2 = base + " sweep --max-order 11 --seed 0 --jobs 1 --out " + out2;
    if (std::system(cmd1.c_str()) != 0 || std::system(cmd2.c_str()) != 0) {
        detail = "sweep invocation failed";
        return false;
    }
    std::ifstream f1(out1, std::ios::binary), f2(out2, std::ios::binary);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    if (s1.str().empty() || s1.str() != s2.str()) {
        detail = "outputs differ";
        return false;
    }
    detail = "byte-identical across two runs";
    return true;
}

struct Criterion {
    int id;
    const char* title;
    bool (*run)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "FGT re-verification, orders 3..15", criterion_01},
    {2, "Hall-Paige <=> orthomorphism existence, orders <= 12", criterion_02},
    {3, "three-way equivalence of the reduction", criterion_03},
    {4, "rainbow cycle colour sets are zero-sum", criterion_04},
    {5, "2x/3x image bound, orders <= 300", criterion_05},
    {6, "projection counting lemmas", criterion_06},
    {7, "rainbow orderings of subsets, orders <= 13", criterion_07},
    {8, "zero-sum equipartitions", criterion_08},
    {9, "good families and the tuple-counting bound", criterion_09},
    {10, "matchability instances", criterion_10},
    {11, "selection schedule and pair absorber", criterion_11},
    {12, "robustly matchable bipartite graph", criterion_12},
    {13, "sweep determinism", criterion_13},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", c.id, c.title,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
