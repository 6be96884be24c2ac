#pragma once

// Certificate emission and independent re-verification. Stored "verified"
// flags are never trusted: every load re-checks the witness from scratch.

#include <string>
#include <vector>

#include <json.hpp>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"
#include "ortho/rainbow.hpp"
#include "ortho/solver.hpp"
#include "ortho/zerosum.hpp"

namespace ortho {

using Json = nlohmann::json;

inline Json orthomorphism_certificate(const Orthomorphism& phi, std::uint64_t seed,
                                      const std::optional<Matching>& factor = std::nullopt) {
    Json j;
    j["kind"] = "orthomorphism";
    j["group"] = phi.group.render();
    j["perm"] = phi.perm;
    j["cycle_type"] = cycle_type(phi.perm).render();
    j["verified"] = verify_orthomorphism(phi.group, phi.perm).ok;
    j["seed"] = seed;
    if (factor) {
        Json edges = Json::array();
        for (const auto& e : factor->edges) {
            Json edge;
            edge["cycle"] = e.witness_cycle;
            edge["colors"] = e.color_set;
            edges.push_back(edge);
        }
        j["factor"] = edges;
    }
    return j;
}

inline Json partition_certificate(const Partition& p, const std::vector<int>& block_sums) {
    Json j;
    j["kind"] = "partition";
    j["group"] = p.group.render();
    j["blocks"] = p.blocks;
    j["block_sums"] = block_sums;
    j["universe"] = p.universe;
    return j;
}

inline Json matching_certificate(const Group& g, int k, const Matching& m,
                                 const ColoredDigraphView& view) {
    Json j;
    j["kind"] = "matching";
    j["group"] = g.render();
    j["k"] = k;
    Json edges = Json::array();
    for (const auto& e : m.edges) {
        Json edge;
        edge["cycle"] = e.witness_cycle;
        edge["colors"] = e.color_set;
        edges.push_back(edge);
    }
    j["edges"] = edges;
    j["vertices"] = view.vertices;
    j["colors"] = view.colors;
    return j;
}

inline Json matchable_certificate(const EquationSystem& A, const Group& g,
                                  const std::vector<std::vector<int>>& witness) {
    Json j;
    j["kind"] = "matchable";
    j["group"] = g.render();
    j["matrix"] = A.rows;
    j["vectors"] = witness;
    return j;
}

struct CertificateVerdict {
    bool ok = false;
    std::string reason;
};

namespace detail {

inline CertificateVerdict fail(const std::string& why) { return {false, why}; }

inline CertificateVerdict verify_orthomorphism_certificate(const Json& j) {
    Group g = parse_group(j.at("group").get<std::string>());
    std::vector<int> perm = j.at("perm").get<std::vector<int>>();
    auto rep = verify_orthomorphism(g, perm);
    if (!rep.ok) return fail(rep.reason);
    if (j.contains("cycle_type")) {
        CycleType stated = CycleType::parse(j.at("cycle_type").get<std::string>());
        if (!(cycle_type(perm) == stated)) return fail("stated cycle type does not match");
    }
    if (j.contains("factor")) {
        auto view = ColoredDigraphView::punctured(g);
        Matching m;
        for (const auto& edge : j.at("factor")) {
            auto cyc = edge.at("cycle").get<std::vector<int>>();
            auto he = cycle_to_hyperedge(cyc, view);
            if (!he) return fail("stored factor cycle is not a rainbow cycle in the view");
            if (edge.contains("colors") &&
                he->color_set != edge.at("colors").get<std::vector<int>>())
                return fail("stored factor colours do not match the witness cycle");
            m.edges.push_back(*he);
        }
        if (!validate_matching(m, view)) return fail("factor edges are not disjoint");
        if (!matching_is_perfect(m, view)) return fail("factor does not span the punctured view");
        auto converted = factor_to_orthomorphism(g, m);
        if (converted.perm != perm) return fail("factor does not induce the stated permutation");
    }
    return {true, {}};
}

inline CertificateVerdict verify_partition_certificate(const Json& j) {
    Group g = parse_group(j.at("group").get<std::string>());
    Partition p;
    p.group = g;
    p.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
    std::vector<int> sums = j.at("block_sums").get<std::vector<int>>();
    if (j.contains("universe")) {
        p.universe = j.at("universe").get<std::vector<int>>();
    } else {
        for (const auto& b : p.blocks) p.universe.insert(p.universe.end(), b.begin(), b.end());
        std::sort(p.universe.begin(), p.universe.end());
    }
    for (const auto& b : p.blocks)
        for (int x : b)
            if (x < 0 || x >= g.order()) return fail("element out of range");
    if (!validate_partition(p, sums))
        return fail("blocks are not disjoint, do not cover the universe, or miss a block sum");
    return {true, {}};
}

inline CertificateVerdict verify_matching_certificate(const Json& j) {
    Group g = parse_group(j.at("group").get<std::string>());
    ColoredDigraphView view;
    view.group = g;
    view.vertices = j.at("vertices").get<std::vector<int>>();
    view.colors = j.at("colors").get<std::vector<int>>();
    Matching m;
    for (const auto& edge : j.at("edges")) {
        auto cyc = edge.at("cycle").get<std::vector<int>>();
        auto he = cycle_to_hyperedge(cyc, view);
        if (!he) return fail("stored cycle is not a rainbow cycle inside the view");
        if (edge.contains("colors") && he->color_set != edge.at("colors").get<std::vector<int>>())
            return fail("stored colours do not match the witness cycle");
        m.edges.push_back(*he);
    }
    if (!validate_matching(m, view)) return fail("edges overlap");
    return {true, {}};
}

inline CertificateVerdict verify_matchable_certificate(const Json& j) {
    Group g = parse_group(j.at("group").get<std::string>());
    EquationSystem A;
    A.rows = j.at("matrix").get<std::vector<std::vector<int>>>();
    auto vectors = j.at("vectors").get<std::vector<std::vector<int>>>();
    for (const auto& v : vectors)
        for (int x : v)
            if (x < 0 || x >= g.order()) return fail("vector entry out of range");
    if (!matchable_witness_valid(A, g, vectors))
        return fail("vectors fail the equations or a coordinate is not a permutation");
    return {true, {}};
}

}  // namespace detail

// Dispatch on "kind". Unknown kinds and malformed JSON surface as thrown
// exceptions (schema errors); verification failures come back as verdicts.
inline CertificateVerdict verify_certificate(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "orthomorphism") return detail::verify_orthomorphism_certificate(j);
    if (kind == "partition") return detail::verify_partition_certificate(j);
    if (kind == "matching") return detail::verify_matching_certificate(j);
    if (kind == "matchable") return detail::verify_matchable_certificate(j);
    throw DomainError("unknown certificate kind: '" + kind + "'");
}

}  // namespace ortho
