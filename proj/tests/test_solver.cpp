#include <catch_amalgamated.hpp>

#include <set>

#include "ortho/group.hpp"
#include "ortho/solver.hpp"

using namespace ortho;

TEST_CASE("orthomorphism verification") {
    Group z3({3});
    // identity map: differences are all zero, not bijective
    CHECK_FALSE(verify_orthomorphism(z3, {0, 1, 2}).ok);
    // (0)(1 2): differences 0, 1, 2
    CHECK(verify_orthomorphism(z3, {0, 2, 1}).ok);
    // non-permutation input fails with a collision witness
    auto rep = verify_orthomorphism(z3, {0, 0, 1});
    CHECK_FALSE(rep.ok);
    CHECK(rep.reason.find("injective") != std::string::npos);
    CHECK_FALSE(verify_orthomorphism(z3, {0, 1}).ok);
}

TEST_CASE("cycle types") {
    CycleType t = cycle_type({0, 2, 1});
    CHECK(t.fixed_points == 1);
    CHECK(t.lengths == std::vector<int>{2});
    CHECK(t.render() == "1+2");

    CycleType u = cycle_type({0, 3, 1, 2, 5, 4});
    CHECK(u.render() == "1+2+3");

    CHECK(CycleType::parse("1+3^2").lengths == std::vector<int>{3, 3});
    CHECK(CycleType::parse("1+3^2").fixed_points == 1);
    CHECK(CycleType::parse("1+3^2").render() == "1+3^2");
    CHECK(CycleType::parse("1^2+4") ==
          CycleType{std::vector<int>{4}, 2});
    CHECK_THROWS_AS(CycleType::parse("x"), DomainError);
    CHECK_THROWS_AS(CycleType::parse("3+"), DomainError);
}

TEST_CASE("exhaustive orthomorphism existence agrees with Hall-Paige") {
    for (int n = 2; n <= 10; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            auto r = exists_orthomorphism(g);
            REQUIRE(r.status != SearchStatus::Unknown);
            CHECK(r.found() == hall_paige(g));
            if (r.found()) CHECK(verify_orthomorphism(g, r.value->perm).ok);
        }
    }
}

TEST_CASE("FGT search on small cases") {
    Group z7({7});
    auto r = find_fgt_orthomorphism(z7, 3);
    REQUIRE(r.result.found());
    const auto& phi = *r.result.value;
    CHECK(verify_orthomorphism(z7, phi.perm).ok);
    CHECK(phi.perm[0] == 0);
    CHECK(cycle_type(phi.perm) == CycleType{{3, 3}, 1});
    REQUIRE(r.factor);
    CHECK(r.factor->edges.size() == 2);

    auto r2 = find_fgt_orthomorphism(z7, 2);
    REQUIRE(r2.result.found());
    CHECK(cycle_type(r2.result.value->perm) == CycleType{{2, 2, 2}, 1});

    // Hall-Paige failure reported without search
    Group z4({4});
    auto r4 = find_fgt_orthomorphism(z4, 3);
    CHECK(r4.result.status == SearchStatus::Nonexistent);
    CHECK(r4.result.reason == "Hall-Paige condition fails");

    auto r5 = find_fgt_orthomorphism(z7, 4);
    CHECK(r5.result.status == SearchStatus::Nonexistent);
    CHECK(r5.result.reason == "k does not divide |G| - 1");
}

TEST_CASE("general cycle types") {
    Group z7({7});
    auto r = find_cycle_type_orthomorphism(z7, CycleType{{3, 3}, 1});
    REQUIRE(r.result.found());
    CHECK(cycle_type(r.result.value->perm) == CycleType{{3, 3}, 1});

    auto r2 = find_cycle_type_orthomorphism(z7, CycleType{{4, 2}, 1});
    REQUIRE(r2.result.status != SearchStatus::Unknown);
    if (r2.result.found()) CHECK(cycle_type(r2.result.value->perm) == CycleType{{4, 2}, 1});

    Group z5({5});
    auto r3 = find_cycle_type_orthomorphism(z5, CycleType{{4}, 1});
    REQUIRE(r3.result.status != SearchStatus::Unknown);
    if (r3.result.found()) {
        CHECK(verify_orthomorphism(z5, r3.result.value->perm).ok);
        CHECK(cycle_type(r3.result.value->perm) == CycleType{{4}, 1});
    }

    CHECK_THROWS_AS(find_cycle_type_orthomorphism(z7, CycleType{{3, 3}, 0}), DomainError);
    CHECK_THROWS_AS(find_cycle_type_orthomorphism(z7, CycleType{{3, 2}, 1}), DomainError);
}

TEST_CASE("single-cycle orthomorphisms for odd cyclic groups") {
    // the n-1 cycle case (R-sequenceability instances)
    for (int n : {5, 7, 9, 11}) {
        Group g({n});
        auto r = find_cycle_type_orthomorphism(g, CycleType{{n - 1}, 1});
        REQUIRE(r.result.status != SearchStatus::Unknown);
        if (r.result.found())
            CHECK(cycle_type(r.result.value->perm) == CycleType{{n - 1}, 1});
    }
}

TEST_CASE("matchability of the Hall-Paige matrix") {
    EquationSystem hp;
    hp.rows = {{1, -1, -1}};
    for (int n = 2; n <= 9; ++n) {
        for (const auto& g : enumerate_abelian_groups(n)) {
            auto r = matchable(hp, g);
            REQUIRE(r.status != SearchStatus::Unknown);
            CHECK((r.status == SearchStatus::Found) == hall_paige(g));
            if (r.status == SearchStatus::Found)
                CHECK(matchable_witness_valid(hp, g, r.witness));
        }
    }
}

TEST_CASE("matchability of the toroidal queens matrix") {
    EquationSystem queens = EquationSystem::parse("1,1,-1,0;1,-1,0,-1");
    CHECK(queens.rows == std::vector<std::vector<int>>{{1, 1, -1, 0}, {1, -1, 0, -1}});

    auto r5 = matchable(queens, Group({5}));
    REQUIRE(r5.status == SearchStatus::Found);
    CHECK(matchable_witness_valid(queens, Group({5}), r5.witness));

    auto r3 = matchable(queens, Group({3}));
    CHECK(r3.status == SearchStatus::Nonexistent);

    auto r9 = matchable(queens, Group({9}));
    CHECK(r9.status == SearchStatus::Nonexistent);
}

TEST_CASE("matchability of the FGT k=3 matrix at Z_7") {
    EquationSystem fgt3 = EquationSystem::parse("1,-1,0,-1,0,0;0,1,-1,0,-1,0;-1,0,1,0,0,-1");
    auto r = matchable(fgt3, Group({7}));
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(matchable_witness_valid(fgt3, Group({7}), r.witness));
}

TEST_CASE("proposition equivalence: orthomorphism, factor, hypergraph matching") {
    // three-way agreement at (Z_7, k=3); the larger cases run in acceptance
    Group z7({7});
    const int k = 3;
    auto ortho_route = find_fgt_orthomorphism(z7, k);
    auto factor_route = perfect_matching(ColoredDigraphView::punctured(z7), k);
    CHECK(ortho_route.result.found() == factor_route.found());

    // materialised H_k exact cover
    auto hes = enumerate_hyperedges(ColoredDigraphView::punctured(z7), k, 100'000);
    REQUIRE_FALSE(hes.truncated);
    // pick edges greedily by exact cover over 12 hypergraph vertices
    const int n1 = 6;
    std::vector<char> used_v(7, 0), used_c(7, 0);
    int coverage = 0;
    bool found = false;
    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (found) return;
        if (coverage == 2 * n1) {
            found = true;
            return;
        }
        for (std::size_t i = from; i < hes.edges.size() && !found; ++i) {
            const auto& e = hes.edges[i];
            bool ok = true;
            for (int v : e.vertex_set) ok = ok && !used_v[v];
            for (int c : e.color_set) ok = ok && !used_c[c];
            if (!ok) continue;
            for (int v : e.vertex_set) used_v[v] = 1;
            for (int c : e.color_set) used_c[c] = 1;
            coverage += 2 * k;
            self(self, i + 1);
            coverage -= 2 * k;
            for (int v : e.vertex_set) used_v[v] = 0;
            for (int c : e.color_set) used_c[c] = 0;
        }
    };
    rec(rec, 0);
    CHECK(found == ortho_route.result.found());
}

TEST_CASE("FGT sweep") {
    auto report = fgt_sweep(7);
    CHECK(report.all_found);
    // Z_2 is skipped (fails Hall-Paige), Z_4 and Z_6 likewise
    int skipped = 0, cells = 0;
    for (const auto& row : report.rows) {
        if (row.k == 0) {
            ++skipped;
            CHECK(row.status == "skipped_hall_paige");
        } else {
            ++cells;
            CHECK(row.status == "found");
            CHECK_FALSE(row.witness_hash.empty());
        }
    }
    CHECK(skipped == 3);
    // Z_3: k=2; Z_2^2: k=3; Z_5: k ∈ {2,4}; Z_7: k ∈ {2,3,6}
    CHECK(cells == 7);

    // parallel execution returns identical rows
    auto par = fgt_sweep(7, SearchBudget{}, 4);
    REQUIRE(par.rows.size() == report.rows.size());
    for (std::size_t i = 0; i < par.rows.size(); ++i) {
        CHECK(par.rows[i].group == report.rows[i].group);
        CHECK(par.rows[i].k == report.rows[i].k);
        CHECK(par.rows[i].status == report.rows[i].status);
        CHECK(par.rows[i].witness_hash == report.rows[i].witness_hash);
    }
}
