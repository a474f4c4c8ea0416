#pragma once
// Persistent (immutable, structurally shared) ordered map and set.
//
// Implemented as a treap with path copying: every update copies the
// O(log n) nodes on the search path and shares the rest with the previous
// version. Copying a PMap is a pointer copy, which is what makes database
// snapshots and transaction working states cheap.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <memory>
#include <random>
#include <utility>
#include <vector>

namespace tgdb {

struct Unit {
    bool operator==(const Unit&) const = default;
};

template <class K, class V, class Compare = std::less<K>>
class PMap {
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        K key;
        V value;
        std::uint64_t priority;
        NodePtr left;
        NodePtr right;
        std::size_t size;

        Node(K k, V v, std::uint64_t p, NodePtr l, NodePtr r)
            : key(std::move(k)), value(std::move(v)), priority(p), left(std::move(l)),
              right(std::move(r)), size(1 + count(left) + count(right)) {}
    };

public:
    using key_type = K;
    using mapped_type = V;

    class const_iterator {
    public:
        using value_type = std::pair<const K&, const V&>;

        const_iterator() = default;

        value_type operator*() const { return {stack_.back()->key, stack_.back()->value}; }
        const K& key() const { return stack_.back()->key; }
        const V& value() const { return stack_.back()->value; }

        const_iterator& operator++() {
            const Node* n = stack_.back();
            stack_.pop_back();
            push_left(n->right.get());
            return *this;
        }

        bool operator==(const const_iterator& o) const {
            if (stack_.empty() || o.stack_.empty()) return stack_.empty() == o.stack_.empty();
            return stack_.back() == o.stack_.back();
        }

    private:
        friend class PMap;
        void push_left(const Node* n) {
            for (; n; n = n->left.get()) stack_.push_back(n);
        }
        std::vector<const Node*> stack_;
    };

    PMap() = default;

    std::size_t size() const { return count(root_); }
    bool empty() const { return !root_; }

    const V* find(const K& key) const {
        const Node* n = root_.get();
        Compare less;
        while (n) {
            if (less(key, n->key))
                n = n->left.get();
            else if (less(n->key, key))
                n = n->right.get();
            else
                return &n->value;
        }
        return nullptr;
    }

    bool contains(const K& key) const { return find(key) != nullptr; }

    // Inserts or replaces.
    void set(K key, V value) {
        auto [lo, rest] = split_less(root_, key);
        auto [eq, hi] = split_leq(rest, key);
        (void)eq;
        auto node = std::make_shared<const Node>(std::move(key), std::move(value), next_priority(),
                                                 nullptr, nullptr);
        root_ = merge(merge(lo, node), hi);
    }

    bool erase(const K& key) {
        if (!contains(key)) return false;
        auto [lo, rest] = split_less(root_, key);
        auto [eq, hi] = split_leq(rest, key);
        (void)eq;
        root_ = merge(lo, hi);
        return true;
    }

    const_iterator begin() const {
        const_iterator it;
        it.push_left(root_.get());
        return it;
    }
    const_iterator end() const { return {}; }

    // First element whose key is not less than `key`.
    const_iterator lower_bound(const K& key) const {
        const_iterator it;
        Compare less;
        const Node* n = root_.get();
        while (n) {
            if (less(n->key, key)) {
                n = n->right.get();
            } else {
                it.stack_.push_back(n);
                n = n->left.get();
            }
        }
        // The stack holds exactly the ancestors still to be visited in order.
        return it;
    }

    friend bool operator==(const PMap& a, const PMap& b) {
        if (a.root_ == b.root_) return true;
        if (a.size() != b.size()) return false;
        auto i = a.begin();
        auto j = b.begin();
        Compare less;
        for (; i != a.end(); ++i, ++j) {
            if (less(i.key(), j.key()) || less(j.key(), i.key())) return false;
            if (!(i.value() == j.value())) return false;
        }
        return true;
    }

private:
    static std::size_t count(const NodePtr& n) { return n ? n->size : 0; }

    static std::uint64_t next_priority() {
        thread_local std::mt19937_64 rng{0x7467646275u};
        return rng();
    }

    static NodePtr with_children(const Node& n, NodePtr l, NodePtr r) {
        return std::make_shared<const Node>(n.key, n.value, n.priority, std::move(l), std::move(r));
    }

    // (keys < key, keys >= key)
    static std::pair<NodePtr, NodePtr> split_less(const NodePtr& n, const K& key) {
        if (!n) return {nullptr, nullptr};
        Compare less;
        if (less(n->key, key)) {
            auto [l, r] = split_less(n->right, key);
            return {with_children(*n, n->left, l), r};
        }
        auto [l, r] = split_less(n->left, key);
        return {l, with_children(*n, r, n->right)};
    }

    // (keys <= key, keys > key)
    static std::pair<NodePtr, NodePtr> split_leq(const NodePtr& n, const K& key) {
        if (!n) return {nullptr, nullptr};
        Compare less;
        if (!less(key, n->key)) {
            auto [l, r] = split_leq(n->right, key);
            return {with_children(*n, n->left, l), r};
        }
        auto [l, r] = split_leq(n->left, key);
        return {l, with_children(*n, r, n->right)};
    }

    static NodePtr merge(const NodePtr& a, const NodePtr& b) {
        if (!a) return b;
        if (!b) return a;
        if (a->priority > b->priority) return with_children(*a, a->left, merge(a->right, b));
        return with_children(*b, merge(a, b->left), b->right);
    }

    NodePtr root_;
};

template <class K, class Compare = std::less<K>>
class PSet {
public:
    using Map = PMap<K, Unit, Compare>;

    class const_iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = K;
        using difference_type = std::ptrdiff_t;
        using pointer = const K*;
        using reference = const K&;

        const_iterator() = default;
        explicit const_iterator(typename Map::const_iterator it) : it_(std::move(it)) {}
        const K& operator*() const { return it_.key(); }
        const K* operator->() const { return &it_.key(); }
        const_iterator& operator++() {
            ++it_;
            return *this;
        }
        const_iterator operator++(int) {
            const_iterator old = *this;
            ++it_;
            return old;
        }
        bool operator==(const const_iterator& o) const { return it_ == o.it_; }

    private:
        typename Map::const_iterator it_;
    };

    std::size_t size() const { return map_.size(); }
    bool empty() const { return map_.empty(); }
    bool contains(const K& k) const { return map_.contains(k); }
    void insert(K k) { map_.set(std::move(k), Unit{}); }
    bool erase(const K& k) { return map_.erase(k); }
    const_iterator begin() const { return const_iterator(map_.begin()); }
    const_iterator end() const { return const_iterator(map_.end()); }
    const_iterator lower_bound(const K& k) const { return const_iterator(map_.lower_bound(k)); }

    std::vector<K> to_vector() const {
        std::vector<K> out;
        out.reserve(size());
        for (const auto& k : *this) out.push_back(k);
        return out;
    }

    friend bool operator==(const PSet& a, const PSet& b) { return a.map_ == b.map_; }

private:
    Map map_;
};

}  // namespace tgdb
