#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/group.hpp"
#include "ortho/search.hpp"
#include "ortho/sequence.hpp"

namespace ortho {

// A block partition of a target set of group elements.
struct Partition {
    Group group{std::vector<int>{1}};
    std::vector<std::vector<int>> blocks;
    std::vector<int> universe;  // the set that was partitioned, sorted

    std::vector<int> block_sums() const {
        std::vector<int> out;
        out.reserve(blocks.size());
        for (const auto& b : blocks) out.push_back(element_sum(group, b));
        return out;
    }
};

// Independent re-check: blocks disjoint, union equals the universe, each
// block sum hits its target.
inline bool validate_partition(const Partition& p, const std::vector<int>& block_sum_targets) {
    if (p.blocks.size() != block_sum_targets.size()) return false;
    std::vector<int> all;
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        if (element_sum(p.group, p.blocks[i]) != block_sum_targets[i]) return false;
        all.insert(all.end(), p.blocks[i].begin(), p.blocks[i].end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
    std::vector<int> uni = p.universe;
    std::sort(uni.begin(), uni.end());
    return all == uni;
}

namespace detail {

// Exact-cover backtracking over blocks with prescribed (size, target sum)
// pairs. Each block is anchored at the smallest unused element; every
// distinct remaining (size, sum) shape is tried for that anchor, which
// keeps the search complete. Members are scanned in canonical index order
// so the first-found partition is deterministic.
struct BlockShape {
    int size;
    int sum;
    bool operator==(const BlockShape& o) const = default;
};

class PartitionSearch {
  public:
    PartitionSearch(const Group& g, std::vector<int> elems, std::vector<BlockShape> shapes,
                    BudgetGauge& gauge)
        : g_(g), elems_(std::move(elems)), shapes_(std::move(shapes)), gauge_(gauge) {
        std::sort(elems_.begin(), elems_.end());
        used_.assign(elems_.size(), false);
        shape_used_.assign(shapes_.size(), false);
    }

    // Returns Found/Nonexistent/Unknown; blocks_ holds the witness on Found.
    SearchStatus run() {
        status_ = SearchStatus::Nonexistent;
        if (place_block(0)) return SearchStatus::Found;
        return status_;
    }

    std::vector<std::vector<int>> blocks() const { return blocks_; }

  private:
    bool place_block(std::size_t filled) {
        if (filled == elems_.size()) return true;
        if (!gauge_.tick()) {
            status_ = SearchStatus::Unknown;
            return false;
        }
        // anchor = smallest unused element
        std::size_t anchor = 0;
        while (used_[anchor]) ++anchor;
        used_[anchor] = true;

        // try each distinct unused shape once for this anchor
        std::vector<BlockShape> tried;
        for (std::size_t si = 0; si < shapes_.size(); ++si) {
            if (shape_used_[si]) continue;
            bool seen = false;
            for (const auto& t : tried) seen = seen || t == shapes_[si];
            if (seen) continue;
            tried.push_back(shapes_[si]);
            shape_used_[si] = true;
            cur_.clear();
            cur_.push_back(elems_[anchor]);
            if (extend_block(si, anchor + 1, elems_[anchor], filled)) return true;
            shape_used_[si] = false;
            if (status_ == SearchStatus::Unknown) break;
        }
        used_[anchor] = false;
        return false;
    }

    bool extend_block(std::size_t shape_idx, std::size_t from, int sum, std::size_t filled) {
        const BlockShape& shape = shapes_[shape_idx];
        const int need = shape.size - static_cast<int>(cur_.size());
        if (need == 0) {
            if (sum != shape.sum) return false;
            blocks_.push_back(cur_);
            std::vector<int> saved = cur_;
            if (place_block(filled + shape.size)) return true;
            blocks_.pop_back();
            cur_ = saved;
            return false;
        }
        for (std::size_t i = from; i < elems_.size(); ++i) {
            if (elems_.size() - i < static_cast<std::size_t>(need)) break;
            if (used_[i]) continue;
            if (!gauge_.tick()) {
                status_ = SearchStatus::Unknown;
                return false;
            }
            used_[i] = true;
            cur_.push_back(elems_[i]);
            if (extend_block(shape_idx, i + 1, g_.add(sum, elems_[i]), filled)) return true;
            cur_.pop_back();
            used_[i] = false;
            if (status_ == SearchStatus::Unknown) return false;
        }
        return false;
    }

    const Group& g_;
    std::vector<int> elems_;
    std::vector<BlockShape> shapes_;
    BudgetGauge& gauge_;
    std::vector<bool> used_;
    std::vector<bool> shape_used_;
    std::vector<int> cur_;
    std::vector<std::vector<int>> blocks_;
    SearchStatus status_ = SearchStatus::Nonexistent;
};

inline void require_set(std::vector<int>& xs) {
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
        throw DomainError("expected a set, got repeated elements");
}

}  // namespace detail

// Partition X into |X|/k blocks of size k, each summing to the identity.
// Preconditions: identity not in X, sum(X) = 0, k >= 3 (k = 2 is allowed
// here as well; the lemma's regime starts at 3 but inverse pairs are fine),
// k divides |X|.
inline SearchResult<Partition> zero_sum_equipartition(const Group& g, std::vector<int> X, int k,
                                                      const SearchBudget& budget = {}) {
    detail::require_set(X);
    for (int x : X)
        if (x == 0) throw IdentityPresentError("identity element cannot join a zero-sum block");
    if (k < 2) throw DomainError("block size must be >= 2");
    if (X.size() % k != 0) throw DivisibilityError("block size must divide |X|");
    if (element_sum(g, X) != 0) throw SumMismatchError("set must sum to the identity");

    BudgetGauge gauge(budget);
    std::vector<detail::BlockShape> shapes(X.size() / k, {k, 0});
    detail::PartitionSearch search(g, X, shapes, gauge);
    auto status = search.run();
    if (status == SearchStatus::Found)
        return SearchResult<Partition>::found_with(Partition{g, search.blocks(), X}, gauge.nodes());
    if (status == SearchStatus::Nonexistent)
        return SearchResult<Partition>::nonexistent(gauge.nodes());
    return SearchResult<Partition>::unknown(gauge.nodes());
}

// Some m-subset of Z with the prescribed sum, or proven absence. Canonical
// lexicographic scan; first found wins.
inline SearchResult<std::vector<int>> subset_with_sum(const Group& g, std::vector<int> Z, int m,
                                                      int target, const SearchBudget& budget = {}) {
    detail::require_set(Z);
    if (m < 0 || m > static_cast<int>(Z.size()))
        throw DomainError("subset size out of range");

    BudgetGauge gauge(budget);
    std::vector<int> cur;
    bool truncated = false;
    auto rec = [&](auto&& self, std::size_t from, int sum) -> bool {
        if (static_cast<int>(cur.size()) == m) return sum == target;
        if (Z.size() - from < m - cur.size()) return false;
        for (std::size_t i = from; i < Z.size(); ++i) {
            if (!gauge.tick()) {
                truncated = true;
                return false;
            }
            cur.push_back(Z[i]);
            if (self(self, i + 1, g.add(sum, Z[i]))) return true;
            cur.pop_back();
            if (truncated) return false;
        }
        return false;
    };
    if (rec(rec, 0, 0))
        return SearchResult<std::vector<int>>::found_with(cur, gauge.nodes());
    if (truncated) return SearchResult<std::vector<int>>::unknown(gauge.nodes());
    return SearchResult<std::vector<int>>::nonexistent(gauge.nodes());
}

// Partition X into 4-blocks each summing to alpha. Requires
// sum(X) = (|X|/4) * alpha.
inline SearchResult<Partition> partition_fixed_sum_quads(const Group& g, std::vector<int> X,
                                                         int alpha,
                                                         const SearchBudget& budget = {}) {
    detail::require_set(X);
    for (int x : X)
        if (x == 0) throw IdentityPresentError("identity element cannot join a block");
    if (X.size() % 4 != 0) throw DivisibilityError("|X| must be divisible by 4");
    if (element_sum(g, X) != g.scalar_mul(static_cast<long long>(X.size()) / 4, alpha))
        throw SumMismatchError("sum(X) must equal (|X|/4) * alpha");

    BudgetGauge gauge(budget);
    std::vector<detail::BlockShape> shapes(X.size() / 4, {4, alpha});
    detail::PartitionSearch search(g, X, shapes, gauge);
    auto status = search.run();
    if (status == SearchStatus::Found)
        return SearchResult<Partition>::found_with(Partition{g, search.blocks(), X}, gauge.nodes());
    if (status == SearchStatus::Nonexistent)
        return SearchResult<Partition>::nonexistent(gauge.nodes());
    return SearchResult<Partition>::unknown(gauge.nodes());
}

// Partition G \ {0} into zero-sum blocks of the prescribed sizes, the
// necessary condition for an orthomorphism with those cycle lengths.
inline SearchResult<Partition> tannenbaum_partition(const Group& g, const std::vector<int>& sizes,
                                                    const SearchBudget& budget = {}) {
    long long total = 0;
    for (int s : sizes) {
        if (s < 2) throw DomainError("block sizes must be >= 2");
        total += s;
    }
    if (total != g.order() - 1)
        throw DivisibilityError("block sizes must sum to |G| - 1");

    std::vector<int> X(g.order() - 1);
    std::iota(X.begin(), X.end(), 1);

    BudgetGauge gauge(budget);
    std::vector<detail::BlockShape> shapes;
    shapes.reserve(sizes.size());
    for (int s : sizes) shapes.push_back({s, 0});
    detail::PartitionSearch search(g, X, shapes, gauge);
    auto status = search.run();
    if (status == SearchStatus::Found)
        return SearchResult<Partition>::found_with(Partition{g, search.blocks(), X}, gauge.nodes());
    if (status == SearchStatus::Nonexistent)
        return SearchResult<Partition>::nonexistent(gauge.nodes());
    return SearchResult<Partition>::unknown(gauge.nodes());
}

enum class TupleMode { Cycle, PathWithSum };

// Partition X into k-blocks and order each block as a rainbow
// cycle-candidate (mode Cycle, requires sum(X) = 0) or, for k = 4, as
// rainbow path-candidates with common sum alpha (mode PathWithSum,
// alpha != 0). Composition of the equipartition solvers with the ordering
// search; every returned tuple is re-verified.
inline SearchResult<std::vector<ColorSequence>> generalized_tannenbaum_candidates(
    const Group& g, std::vector<int> X, int k, TupleMode mode, int alpha = 0,
    const SearchBudget& budget = {}) {
    detail::require_set(X);
    for (int x : X)
        if (x == 0) throw IdentityPresentError("identity element cannot appear");
    if (X.size() % k != 0) throw DivisibilityError("k must divide |X|");

    SearchResult<Partition> part;
    if (mode == TupleMode::Cycle) {
        if (k < 3 || k > 9) throw DomainError("cycle mode supports 3 <= k <= 9");
        part = zero_sum_equipartition(g, X, k, budget);
    } else {
        if (k != 4) throw DomainError("path mode requires k = 4");
        if (alpha == 0) throw DomainError("path mode requires alpha != 0");
        part = partition_fixed_sum_quads(g, X, alpha, budget);
    }
    if (!part.found()) {
        SearchResult<std::vector<ColorSequence>> out;
        out.status = part.status;
        out.nodes = part.nodes;
        return out;
    }

    std::vector<ColorSequence> tuples;
    for (const auto& block : part.value->blocks) {
        std::optional<ColorSequence> seq = mode == TupleMode::Cycle
                                               ? order_as_cycle_candidate(g, block)
                                               : order_as_path_candidate(g, block);
        if (!seq) {
            // a block admits no ordering; report honestly rather than
            // searching alternative partitions (the lemma guarantees
            // orderings for k <= 9, so this is not expected to trigger)
            SearchResult<std::vector<ColorSequence>> out;
            out.status = SearchStatus::Unknown;
            out.nodes = part.nodes;
            out.reason = "block admits no candidate ordering";
            return out;
        }
        bool ok = is_rainbow(*seq) &&
                  (mode == TupleMode::Cycle
                       ? is_cycle_candidate(*seq)
                       : (is_path_candidate(*seq) && seq->total() == alpha));
        if (!ok) throw Error("internal: ordering search returned an invalid tuple");
        tuples.push_back(*seq);
    }
    return SearchResult<std::vector<ColorSequence>>::found_with(std::move(tuples), part.nodes);
}

}  // namespace ortho
