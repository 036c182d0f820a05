#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace cibn {

/// Dense index of a node inside one graph. Labels live on the graph.
struct NodeId {
    std::uint32_t index{};

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::uint32_t i) : index(i) {}
    constexpr explicit NodeId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
    constexpr explicit NodeId(int i) : index(static_cast<std::uint32_t>(i)) {}

    constexpr auto operator<=>(const NodeId&) const = default;
};

/// Sorted, duplicate-free set of nodes. Iteration is ascending.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<NodeId> ids) : items_(ids) { normalize(); }
    explicit NodeSet(std::vector<NodeId> ids) : items_(std::move(ids)) { normalize(); }

    bool contains(NodeId id) const { return std::binary_search(items_.begin(), items_.end(), id); }
    void insert(NodeId id) {
        auto it = std::lower_bound(items_.begin(), items_.end(), id);
        if (it == items_.end() || *it != id) items_.insert(it, id);
    }
    void erase(NodeId id) {
        auto it = std::lower_bound(items_.begin(), items_.end(), id);
        if (it != items_.end() && *it == id) items_.erase(it);
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<NodeId>& items() const { return items_; }

    bool operator==(const NodeSet&) const = default;
    // Smaller sets first, then lexicographic.
    bool operator<(const NodeSet& other) const {
        if (size() != other.size()) return size() < other.size();
        return items_ < other.items_;
    }

private:
    void normalize() {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    std::vector<NodeId> items_;
};

/// Visits subsets of `pool` in increasing cardinality, lexicographic by position within
/// one cardinality, up to `max_size` elements. Stops as soon as `visit` returns true and
/// reports whether it did.
inline bool for_each_subset(std::span<const NodeId> pool, std::size_t max_size,
                            const std::function<bool(const NodeSet&)>& visit) {
    const std::size_t n = pool.size();
    const std::size_t limit = std::min(max_size, n);
    std::vector<std::size_t> pick;
    for (std::size_t k = 0; k <= limit; ++k) {
        pick.resize(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::vector<NodeId> chosen;
            chosen.reserve(k);
            for (auto p : pick) chosen.push_back(pool[p]);
            if (visit(NodeSet(std::move(chosen)))) return true;
            // Advance to the next combination.
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return false;
}

inline constexpr std::size_t kUnlimited = static_cast<std::size_t>(-1);

}  // namespace cibn

template <>
struct std::hash<cibn::NodeId> {
    std::size_t operator()(cibn::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.index); }
};
