#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"

namespace ortho {

// An element of the abelianised free product of G with the free abelian
// group on free variables v_0, v_1, ...: an integer combination of free
// variables plus a group constant. Zero coefficients are never stored, so
// the representation is unique.
struct Word {
    Group group{std::vector<int>{1}};
    std::map<int, int> coeffs;  // variable id -> non-zero integer coefficient
    int constant = 0;           // element index in `group`

    bool is_constant() const { return coeffs.empty(); }

    int coefficient(int var) const {
        auto it = coeffs.find(var);
        return it == coeffs.end() ? 0 : it->second;
    }

    bool linear_in(int var) const {
        int z = coefficient(var);
        return z == 1 || z == -1;
    }

    // Linear: every coefficient in {-1, +1} and at least one variable.
    bool is_linear() const {
        if (coeffs.empty()) return false;
        for (auto [v, z] : coeffs)
            if (z != 1 && z != -1) return false;
        return true;
    }

    bool linear_in_some_variable() const {
        for (auto [v, z] : coeffs)
            if (z == 1 || z == -1) return true;
        return false;
    }

    int max_variable() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }

    bool operator==(const Word& o) const {
        return group == o.group && coeffs == o.coeffs && constant == o.constant;
    }
    bool operator<(const Word& o) const {
        if (constant != o.constant) return constant < o.constant;
        return coeffs < o.coeffs;
    }
};

inline Word word_constant(const Group& g, int element) { return Word{g, {}, element}; }

inline Word word_variable(const Group& g, int var, int coeff = 1) {
    Word w{g, {}, 0};
    if (coeff != 0) w.coeffs[var] = coeff;
    return w;
}

inline Word word_add(const Word& a, const Word& b) {
    if (a.group != b.group) throw GroupMismatchError("words over different groups");
    Word out{a.group, a.coeffs, a.group.add(a.constant, b.constant)};
    for (auto [v, z] : b.coeffs) {
        int nz = out.coefficient(v) + z;
        if (nz == 0)
            out.coeffs.erase(v);
        else
            out.coeffs[v] = nz;
    }
    return out;
}

inline Word word_neg(const Word& a) {
    Word out{a.group, {}, a.group.neg(a.constant)};
    for (auto [v, z] : a.coeffs) out.coeffs[v] = -z;
    return out;
}

inline Word word_sub(const Word& a, const Word& b) { return word_add(a, word_neg(b)); }

// The three separability conditions, checked in the fixed order (a), (b),
// (c) on the difference word:
//   (a) some variable's coefficients differ by exactly 1,
//   (b) the difference is a non-zero constant,
//   (c) the difference's variable part is 3 v_i - 2 v_j up to sign.
enum class Separability { A, B, C };

inline std::optional<Separability> word_is_separable_pair(const Word& w, const Word& w2) {
    Word d = word_sub(w2, w);
    for (auto [v, z] : d.coeffs)
        if (z == 1 || z == -1) return Separability::A;
    if (d.coeffs.empty()) {
        if (d.constant != 0) return Separability::B;
        return std::nullopt;
    }
    if (d.coeffs.size() == 2) {
        auto it = d.coeffs.begin();
        int z1 = it->second;
        int z2 = std::next(it)->second;
        if ((z1 == 3 && z2 == -2) || (z1 == -3 && z2 == 2) || (z1 == -2 && z2 == 3) ||
            (z1 == 2 && z2 == -3))
            return Separability::C;
    }
    return std::nullopt;
}

// An assignment of all k free variables in scope, i.e. the unique
// homomorphism to G fixing G pointwise that extends it.
struct Projection {
    Group group{std::vector<int>{1}};
    std::vector<int> assignment;  // assignment[i] = image of v_i

    int apply(const Word& w) const {
        if (w.group != group) throw GroupMismatchError("word over a different group");
        int out = w.constant;
        for (auto [v, z] : w.coeffs) {
            if (v < 0 || v >= static_cast<int>(assignment.size()))
                throw DomainError("word uses a variable outside the projection's scope");
            out = group.add(out, group.scalar_mul(z, assignment[v]));
        }
        return out;
    }

    // No separable pair of S maps to equal images.
    bool separates(const std::vector<Word>& S) const {
        std::vector<int> img(S.size());
        for (std::size_t i = 0; i < S.size(); ++i) img[i] = apply(S[i]);
        for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t j = i + 1; j < S.size(); ++j)
                if (img[i] == img[j] && word_is_separable_pair(S[i], S[j])) return false;
        return true;
    }
};

// Iterate all n^k projections in odometer order (variable k-1 fastest).
template <typename Fn>
inline void for_each_projection(const Group& g, int k, Fn&& fn) {
    const int n = g.order();
    std::vector<int> a(k, 0);
    while (true) {
        fn(Projection{g, a});
        int i = k - 1;
        for (; i >= 0; --i) {
            if (++a[i] < n) break;
            a[i] = 0;
        }
        if (i < 0) break;
    }
}

namespace detail {

inline void check_projection_budget(const Group& g, int k) {
    long long total = 1;
    for (int i = 0; i < k; ++i) {
        total *= g.order();
        if (total > 10'000'000)
            throw BudgetError("projection enumeration over n^k exceeds the desk-scale cap");
    }
}

}  // namespace detail

// Exact count of projections with pi(w) = target, by full enumeration.
// For words linear in some variable this equals n^{k-1}.
inline long long count_projections_fixing(const Word& w, int target, const Group& g, int k) {
    if (!w.linear_in_some_variable())
        throw DomainError("word must be linear in at least one variable");
    if (w.max_variable() >= k) throw DomainError("word uses a variable outside scope");
    detail::check_projection_budget(g, k);
    long long count = 0;
    for_each_projection(g, k, [&](const Projection& p) {
        if (p.apply(w) == target) ++count;
    });
    return count;
}

// Exact count of projections that fail to separate some separable pair.
inline long long count_non_separating_projections(const std::vector<Word>& S, const Group& g,
                                                  int k) {
    if (S.size() > 1000) throw BudgetError("word set too large");
    for (const auto& w : S)
        if (w.max_variable() >= k) throw DomainError("word uses a variable outside scope");
    detail::check_projection_budget(g, k);
    long long count = 0;
    for_each_projection(g, k, [&](const Projection& p) {
        if (!p.separates(S)) ++count;
    });
    return count;
}

// ---- word literal grammar ----
// term  := [sign] [INT '*'] 'v' INT  |  [sign] '(' INT ')'
// word  := term (('+' | '-') term)*
// Example: "3*v1 - 2*v2 + (5)". Variables are 1-based in literals and
// 0-based internally: "v1" is variable id 0.

inline Word parse_word(const Group& g, const std::string& text) {
    Word out{g, {}, 0};
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&]() -> void { throw DomainError("bad word literal: '" + text + "'"); };
    auto parse_int = [&]() -> long long {
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) fail();
        long long v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + (text[i] - '0');
            if (v > (1LL << 40)) fail();
            ++i;
        }
        return v;
    };
    bool first = true;
    skip_ws();
    while (i < text.size()) {
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            if (text[i] == '-') sign = -1;
            ++i;
            skip_ws();
        } else if (!first) {
            fail();
        }
        first = false;
        if (i >= text.size()) fail();
        if (text[i] == '(') {
            ++i;
            skip_ws();
            int csign = 1;
            if (i < text.size() && text[i] == '-') {
                csign = -1;
                ++i;
            }
            long long c = parse_int();
            skip_ws();
            if (i >= text.size() || text[i] != ')') fail();
            ++i;
            long long val = csign * c % g.order();
            if (val < 0) val += g.order();
            out.constant = g.add(out.constant, static_cast<int>(val));
        } else {
            long long coeff = 1;
            if (std::isdigit(static_cast<unsigned char>(text[i]))) {
                coeff = parse_int();
                skip_ws();
                if (i >= text.size() || text[i] != '*') fail();
                ++i;
                skip_ws();
            }
            if (i >= text.size() || std::tolower(static_cast<unsigned char>(text[i])) != 'v')
                fail();
            ++i;
            long long var = parse_int();
            if (var < 1 || var > 64) fail();
            int id = static_cast<int>(var) - 1;
            long long nz = out.coefficient(id) + sign * coeff;
            if (nz == 0)
                out.coeffs.erase(id);
            else
                out.coeffs[id] = static_cast<int>(nz);
        }
        skip_ws();
    }
    return out;
}

inline std::string render_word(const Word& w) {
    std::string out;
    for (auto [v, z] : w.coeffs) {
        if (out.empty()) {
            if (z < 0) out += "-";
        } else {
            out += z < 0 ? " - " : " + ";
        }
        int a = z < 0 ? -z : z;
        if (a != 1) out += std::to_string(a) + "*";
        out += "v" + std::to_string(v + 1);
    }
    if (w.constant != 0 || out.empty()) {
        if (!out.empty()) out += " + ";
        out += "(" + std::to_string(w.constant) + ")";
    }
    return out;
}

}  // namespace ortho
