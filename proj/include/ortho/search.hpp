#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace ortho {

// Node/time caps for the exact searches. A result reached under budget is
// only "proven absent" when the full tree was covered; otherwise the search
// reports Unknown.
struct SearchBudget {
    std::uint64_t max_nodes = 100'000'000;
    std::chrono::milliseconds max_time{0};  // 0 = no wall-clock cap

    static SearchBudget nodes(std::uint64_t n) { return SearchBudget{n, std::chrono::milliseconds{0}}; }
};

enum class SearchStatus {
    Found,        // witness in hand
    Nonexistent,  // exhaustive search covered the whole tree, no witness
    Unknown,      // budget exhausted before either outcome
};

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Found: return "found";
        case SearchStatus::Nonexistent: return "nonexistent";
        case SearchStatus::Unknown: return "unknown";
    }
    return "?";
}

template <typename T>
struct SearchResult {
    SearchStatus status = SearchStatus::Unknown;
    std::optional<T> value;
    std::uint64_t nodes = 0;
    std::string reason;  // set for Nonexistent shortcuts (failed necessary condition)

    bool found() const { return status == SearchStatus::Found; }

    static SearchResult found_with(T v, std::uint64_t nodes) {
        SearchResult r;
        r.status = SearchStatus::Found;
        r.value = std::move(v);
        r.nodes = nodes;
        return r;
    }
    static SearchResult nonexistent(std::uint64_t nodes, std::string why = {}) {
        SearchResult r;
        r.status = SearchStatus::Nonexistent;
        r.nodes = nodes;
        r.reason = std::move(why);
        return r;
    }
    static SearchResult unknown(std::uint64_t nodes) {
        SearchResult r;
        r.status = SearchStatus::Unknown;
        r.nodes = nodes;
        return r;
    }
};

// Shared node counter passed down through recursive searches.
class BudgetGauge {
  public:
    explicit BudgetGauge(const SearchBudget& b)
        : budget_(b), start_(std::chrono::steady_clock::now()) {}

    // Returns false once the budget is exceeded.
    bool tick() {
        ++nodes_;
        if (nodes_ > budget_.max_nodes) return false;
        if (budget_.max_time.count() > 0 && (nodes_ & 0x3ff) == 0) {
            auto elapsed = std::chrono::steady_clock::now() - start_;
            if (elapsed > budget_.max_time) return false;
        }
        return true;
    }

    bool exceeded() const {
        if (nodes_ > budget_.max_nodes) return true;
        if (budget_.max_time.count() > 0) {
            auto elapsed = std::chrono::steady_clock::now() - start_;
            if (elapsed > budget_.max_time) return true;
        }
        return false;
    }

    std::uint64_t nodes() const { return nodes_; }

  private:
    SearchBudget budget_;
    std::uint64_t nodes_ = 0;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace ortho
