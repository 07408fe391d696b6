#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace manymatch {

// Implicit treap keyed by position, augmented with subtree size and value
// sum. Counting queries assume the stored values are non-decreasing in
// position order.
template <class Scalar>
class OrderTree {
public:
    std::size_t size() const { return root_ == kNil ? 0 : nodes_[root_].size; }
    bool empty() const { return size() == 0; }

    void insert_at(std::size_t pos, Scalar value) {
        if (pos > size()) throw std::out_of_range("OrderTree::insert_at");
        const int node = make_node(std::move(value));
        auto [l, r] = split(root_, pos);
        root_ = merge(merge(l, node), r);
    }

    Scalar erase_at(std::size_t pos) {
        if (pos >= size()) throw std::out_of_range("OrderTree::erase_at");
        auto [l, rest] = split(root_, pos);
        auto [mid, r] = split(rest, 1);
        Scalar v = nodes_[mid].value;
        free_.push_back(mid);
        root_ = merge(l, r);
        return v;
    }

    const Scalar& at(std::size_t pos) const {
        if (pos >= size()) throw std::out_of_range("OrderTree::at");
        int t = root_;
        for (;;) {
            const std::size_t ls = sz(nodes_[t].left);
            if (pos < ls) {
                t = nodes_[t].left;
            } else if (pos == ls) {
                return nodes_[t].value;
            } else {
                pos -= ls + 1;
                t = nodes_[t].right;
            }
        }
    }

    // Sum of the first `count` values.
    Scalar prefix_sum(std::size_t count) const {
        Scalar acc{};
        int t = root_;
        while (t != kNil && count > 0) {
            const auto& nd = nodes_[t];
            const std::size_t ls = sz(nd.left);
            if (count <= ls) {
                t = nd.left;
            } else {
                if (nd.left != kNil) acc += nodes_[nd.left].sum;
                acc += nd.value;
                count -= ls + 1;
                t = nd.right;
            }
        }
        return acc;
    }

    Scalar total() const { return root_ == kNil ? Scalar{} : nodes_[root_].sum; }
    Scalar suffix_sum(std::size_t count) const { return total() - prefix_sum(size() - count); }

    std::size_t count_less_equal(const Scalar& v) const {
        return count_if([&](const Scalar& x) { return x <= v; });
    }
    std::size_t count_less(const Scalar& v) const {
        return count_if([&](const Scalar& x) { return x < v; });
    }

    std::vector<Scalar> values() const {
        std::vector<Scalar> out;
        out.reserve(size());
        collect(root_, out);
        return out;
    }

private:
    static constexpr int kNil = -1;
    struct Node {
        Scalar value;
        Scalar sum;
        int left = kNil;
        int right = kNil;
        std::uint32_t prio = 0;
        std::size_t size = 1;
    };

    std::size_t sz(int t) const { return t == kNil ? 0 : nodes_[t].size; }

    void pull(int t) {
        auto& nd = nodes_[t];
        nd.size = 1 + sz(nd.left) + sz(nd.right);
        nd.sum = nd.value;
        if (nd.left != kNil) nd.sum += nodes_[nd.left].sum;
        if (nd.right != kNil) nd.sum += nodes_[nd.right].sum;
    }

    int make_node(Scalar value) {
        rng_ ^= rng_ << 13;
        rng_ ^= rng_ >> 7;
        rng_ ^= rng_ << 17;
        Node nd{value, value, kNil, kNil, static_cast<std::uint32_t>(rng_ >> 32), 1};
        if (!free_.empty()) {
            const int id = free_.back();
            free_.pop_back();
            nodes_[id] = std::move(nd);
            return id;
        }
        nodes_.push_back(std::move(nd));
        return static_cast<int>(nodes_.size() - 1);
    }

    // Left part receives the first `count` positions.
    std::pair<int, int> split(int t, std::size_t count) {
        if (t == kNil) return {kNil, kNil};
        const std::size_t ls = sz(nodes_[t].left);
        if (count <= ls) {
            auto [l, r] = split(nodes_[t].left, count);
            nodes_[t].left = r;
            pull(t);
            return {l, t};
        }
        auto [l, r] = split(nodes_[t].right, count - ls - 1);
        nodes_[t].right = l;
        pull(t);
        return {t, r};
    }

    int merge(int a, int b) {
        if (a == kNil) return b;
        if (b == kNil) return a;
        if (nodes_[a].prio > nodes_[b].prio) {
            nodes_[a].right = merge(nodes_[a].right, b);
            pull(a);
            return a;
        }
        nodes_[b].left = merge(a, nodes_[b].left);
        pull(b);
        return b;
    }

    template <class Pred>
    std::size_t count_if(Pred pred) const {
        std::size_t count = 0;
        int t = root_;
        while (t != kNil) {
            if (pred(nodes_[t].value)) {
                count += sz(nodes_[t].left) + 1;
                t = nodes_[t].right;
            } else {
                t = nodes_[t].left;
            }
        }
        return count;
    }

    void collect(int t, std::vector<Scalar>& out) const {
        if (t == kNil) return;
        collect(nodes_[t].left, out);
        out.push_back(nodes_[t].value);
        collect(nodes_[t].right, out);
    }

    std::vector<Node> nodes_;
    std::vector<int> free_;
    int root_ = kNil;
    std::uint64_t rng_ = 0x9e3779b97f4a7c15ull;
};

}  // namespace manymatch
