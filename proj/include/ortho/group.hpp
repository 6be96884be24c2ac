#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "ortho/errors.hpp"

namespace ortho {

// A finite abelian group presented as a product of cyclic factors
// Z_{n_1} x ... x Z_{n_r}. Elements are referred to by their canonical
// mixed-radix index in [0, n): index = sum_i coord_i * stride_i with the
// last factor varying fastest. Group is a cheap shared handle; all state
// is immutable after construction.
class Group {
  public:
    // Factors are canonicalised by sorting in descending order, so two
    // groups with the same multiset of factors compare equal and render
    // identically.
    explicit Group(std::vector<int> factors) {
        if (factors.empty()) factors.push_back(1);
        for (int f : factors)
            if (f < 1) throw DomainError("cyclic factor must be >= 1");
        std::sort(factors.begin(), factors.end(), std::greater<int>());
        // drop trivial factors unless the group itself is trivial
        while (factors.size() > 1 && factors.back() == 1) factors.pop_back();
        auto d = std::make_shared<Data>();
        d->factors = std::move(factors);
        d->strides.resize(d->factors.size());
        long long n = 1;
        for (int i = static_cast<int>(d->factors.size()) - 1; i >= 0; --i) {
            d->strides[i] = static_cast<int>(n);
            n *= d->factors[i];
            if (n > (1LL << 30)) throw DomainError("group order too large");
        }
        d->order = static_cast<int>(n);
        d_ = std::move(d);
    }

    int order() const { return d_->order; }
    const std::vector<int>& factors() const { return d_->factors; }
    int rank() const { return static_cast<int>(d_->factors.size()); }

    bool operator==(const Group& o) const {
        return d_ == o.d_ || d_->factors == o.d_->factors;
    }
    bool operator!=(const Group& o) const { return !(*this == o); }

    // ---- arithmetic on canonical indices ----

    int add(int a, int b) const {
        const auto& f = d_->factors;
        const auto& s = d_->strides;
        int out = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            int ca = (a / s[i]) % f[i];
            int cb = (b / s[i]) % f[i];
            int c = ca + cb;
            if (c >= f[i]) c -= f[i];
            out += c * s[i];
        }
        return out;
    }

    int sub(int a, int b) const { return add(a, neg(b)); }

    int neg(int a) const {
        const auto& f = d_->factors;
        const auto& s = d_->strides;
        int out = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            int ca = (a / s[i]) % f[i];
            out += (ca == 0 ? 0 : f[i] - ca) * s[i];
        }
        return out;
    }

    int scalar_mul(long long t, int a) const {
        const auto& f = d_->factors;
        const auto& s = d_->strides;
        int out = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            long long ca = (a / s[i]) % f[i];
            long long c = (t % f[i]) * ca % f[i];
            if (c < 0) c += f[i];
            out += static_cast<int>(c) * s[i];
        }
        return out;
    }

    std::vector<int> coords(int index) const {
        const auto& f = d_->factors;
        const auto& s = d_->strides;
        std::vector<int> c(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) c[i] = (index / s[i]) % f[i];
        return c;
    }

    int from_coords(const std::vector<int>& c) const {
        const auto& f = d_->factors;
        const auto& s = d_->strides;
        if (c.size() != f.size()) throw DomainError("coordinate count mismatch");
        int out = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (c[i] < 0 || c[i] >= f[i]) throw DomainError("coordinate out of range");
            out += c[i] * s[i];
        }
        return out;
    }

    // Canonical rendering, factors descending, repeats with power sugar:
    // {7} -> "Z7", {4,2} -> "Z4xZ2", {2,2,2} -> "Z2^3".
    std::string render() const {
        const auto& f = d_->factors;
        std::string out;
        std::size_t i = 0;
        while (i < f.size()) {
            std::size_t j = i;
            while (j < f.size() && f[j] == f[i]) ++j;
            if (!out.empty()) out += 'x';
            out += 'Z';
            out += std::to_string(f[i]);
            if (j - i > 1) {
                out += '^';
                out += std::to_string(j - i);
            }
            i = j;
        }
        return out;
    }

  private:
    struct Data {
        std::vector<int> factors;
        std::vector<int> strides;
        int order = 1;
    };
    std::shared_ptr<const Data> d_;
};

// A group element tagged with its group, for the checked public surface.
// Search internals work on raw indices via the Group methods.
struct Element {
    int index = 0;
    Group group{std::vector<int>{1}};

    std::vector<int> coords() const { return group.coords(index); }
    bool is_identity() const { return index == 0; }
    bool operator==(const Element& o) const { return index == o.index && group == o.group; }
};

inline void require_same_group(const Element& a, const Element& b) {
    if (a.group != b.group)
        throw GroupMismatchError("elements belong to different groups");
}

inline Element add(const Element& a, const Element& b) {
    require_same_group(a, b);
    return {a.group.add(a.index, b.index), a.group};
}

inline Element neg(const Element& a) { return {a.group.neg(a.index), a.group}; }

inline Element scalar_mul(long long t, const Element& a) {
    return {a.group.scalar_mul(t, a.index), a.group};
}

// Group sum of a collection of indices; empty collection sums to identity.
inline int element_sum(const Group& g, const std::vector<int>& xs) {
    int s = 0;
    for (int x : xs) s = g.add(s, x);
    return s;
}

inline Element element_sum(const std::vector<Element>& xs) {
    if (xs.empty()) throw DomainError("element_sum of empty Element list needs a group");
    Element s{0, xs.front().group};
    for (const auto& x : xs) s = add(s, x);
    return s;
}

// Hall-Paige condition for abelian groups: the sum of all group elements
// is the identity.
inline bool hall_paige(const Group& g) {
    int s = 0;
    for (int x = 0; x < g.order(); ++x) s = g.add(s, x);
    return s == 0;
}

// |{t*x : x in G}|. Image of multiplication-by-t on Z_m has size m/gcd(t,m);
// the map is a homomorphism so the product over factors is exact.
inline long long mult_image_size(long long t, const Group& g) {
    if (t < 1) throw DomainError("multiplier must be >= 1");
    long long out = 1;
    for (int m : g.factors()) out *= m / std::gcd(t % m, static_cast<long long>(m));
    return out;
}

// max(|2G|, |3G|)^5 >= n, in exact integers.
inline bool check_two_three_lemma(const Group& g) {
    long long m = std::max(mult_image_size(2, g), mult_image_size(3, g));
    // m <= n <= 2^30, so m^5 fits in unsigned 128-bit; cap the powering early
    unsigned __int128 p = 1;
    for (int i = 0; i < 5; ++i) {
        p *= static_cast<unsigned __int128>(m);
        if (p >= static_cast<unsigned __int128>(g.order())) return true;
    }
    return p >= static_cast<unsigned __int128>(g.order());
}

// N(G) = {identity} union {g : #{x : 2x = g} > sqrt(n)}, threshold tested
// as (#solutions)^2 > n in exact integers.
inline std::vector<int> non_generic_elements(const Group& g) {
    const int n = g.order();
    std::vector<int> solutions(n, 0);
    for (int x = 0; x < n; ++x) ++solutions[g.add(x, x)];
    std::vector<int> out;
    for (int e = 0; e < n; ++e) {
        long long s = solutions[e];
        if (e == 0 || s * s > n) out.push_back(e);
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<int>> partitions_desc(int e) {
    // partitions of e, parts descending, enumerated in reverse-lex order
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rem, int mx) -> void {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rem, mx); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, e, e);
    return out;
}

}  // namespace detail

// One Group per isomorphism class of abelian groups of the given order,
// via partitions of the prime exponents. Ordering is deterministic: the
// partition of the smallest prime varies fastest, largest parts first, so
// e.g. order 8 yields [Z8, Z4xZ2, Z2^3].
inline std::vector<Group> enumerate_abelian_groups(long long order) {
    if (order < 1) throw DomainError("order must be >= 1");
    std::vector<std::pair<long long, int>> pf;
    long long n = order;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) {
                ++e;
                n /= d;
            }
            pf.push_back({d, e});
        }
    }
    if (n > 1) pf.push_back({n, 1});
    std::sort(pf.begin(), pf.end(), [](auto& a, auto& b) { return a.first > b.first; });

    std::vector<std::vector<std::vector<int>>> choices;  // per prime: factor lists
    for (auto [p, e] : pf) {
        std::vector<std::vector<int>> lists;
        for (const auto& lam : detail::partitions_desc(e)) {
            std::vector<int> fac;
            long long pw = 1;
            for (int part : lam) {
                pw = 1;
                for (int i = 0; i < part; ++i) pw *= p;
                fac.push_back(static_cast<int>(pw));
            }
            lists.push_back(fac);
        }
        choices.push_back(lists);
    }

    std::vector<Group> out;
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
        std::vector<int> factors;
        for (std::size_t i = 0; i < choices.size(); ++i)
            for (int f : choices[i][idx[i]]) factors.push_back(f);
        if (factors.empty()) factors.push_back(1);
        out.emplace_back(factors);
        // odometer, last prime (the smallest) varies fastest
        int i = static_cast<int>(choices.size()) - 1;
        for (; i >= 0; --i) {
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

// Parses "Z7", "Z4xZ2", "Z2^3" and combinations, case-insensitive.
inline Group parse_group(const std::string& spec) {
    std::vector<int> factors;
    std::size_t i = 0;
    auto fail = [&]() -> void { throw DomainError("bad group spec: '" + spec + "'"); };
    while (i < spec.size()) {
        if (std::tolower(static_cast<unsigned char>(spec[i])) != 'z') fail();
        ++i;
        if (i >= spec.size() || !std::isdigit(static_cast<unsigned char>(spec[i]))) fail();
        long long m = 0;
        while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) {
            m = m * 10 + (spec[i] - '0');
            if (m > (1LL << 30)) fail();
            ++i;
        }
        long long reps = 1;
        if (i < spec.size() && spec[i] == '^') {
            ++i;
            if (i >= spec.size() || !std::isdigit(static_cast<unsigned char>(spec[i]))) fail();
            reps = 0;
            while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) {
                reps = reps * 10 + (spec[i] - '0');
                if (reps > 64) fail();
                ++i;
            }
        }
        if (m < 1 || reps < 1) fail();
        for (long long r = 0; r < reps; ++r) factors.push_back(static_cast<int>(m));
        if (i < spec.size()) {
            if (std::tolower(static_cast<unsigned char>(spec[i])) != 'x') fail();
            ++i;
            if (i >= spec.size()) fail();
        }
    }
    if (factors.empty()) fail();
    return Group(factors);
}

}  // namespace ortho
