#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hutchinf {

// Maximum hierarchy level held by a NestedSeq. Tile and iteration depths are
// bounded by the error budget, so deeper trees are never needed.
inline constexpr int kMaxNestedLevel = 6;

// Eventually-default nested tree: the finite representation of an element of
// the product hierarchy X_0, X_1 = prod X_0, X_2 = prod X_1, ...
// A level-0 tree is a leaf value; a level-k tree holds a sparse index -> child
// map (children at level k-1) plus a default child standing for every
// unspecified index. Canonical form: no explicit child equals the default.
// Handles are immutable and share structure.
template <class T>
class NestedSeq {
public:
    using ChildList = std::vector<std::pair<int, NestedSeq>>;

    NestedSeq() = default;

    static NestedSeq leaf(T value) {
        auto n = std::make_shared<Node>();
        n->level = 0;
        n->leaf = std::move(value);
        return NestedSeq(std::move(n));
    }

    static NestedSeq node(ChildList kids, NestedSeq def) {
        if (!def.n_) throw std::invalid_argument("NestedSeq: null default child");
        int lvl = def.level() + 1;
        if (lvl > kMaxNestedLevel)
            throw std::invalid_argument("NestedSeq: level cap exceeded");
        std::sort(kids.begin(), kids.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        ChildList canon;
        for (auto& [i, c] : kids) {
            if (i < 0) throw std::invalid_argument("NestedSeq: negative index");
            if (!canon.empty() && canon.back().first == i)
                throw std::invalid_argument("NestedSeq: duplicate child index");
            if (c.level() != lvl - 1)
                throw std::invalid_argument("NestedSeq: child level mismatch");
            if (!(c == def)) canon.emplace_back(i, std::move(c));
        }
        auto n = std::make_shared<Node>();
        n->level = lvl;
        n->kids = std::move(canon);
        n->def = std::move(def);
        return NestedSeq(std::move(n));
    }

    // Fully-default tree of the given level over one leaf value.
    static NestedSeq all_default(int level, T value) {
        NestedSeq t = leaf(std::move(value));
        for (int l = 0; l < level; ++l) t = node({}, t);
        return t;
    }

    bool valid() const { return static_cast<bool>(n_); }
    int level() const { return n_->level; }

    const T& leaf_value() const {
        if (n_->level != 0) throw std::invalid_argument("leaf_value on inner node");
        return n_->leaf;
    }

    const NestedSeq& default_child() const {
        if (n_->level == 0) throw std::invalid_argument("default_child on leaf");
        return n_->def;
    }

    const ChildList& explicit_children() const {
        if (n_->level == 0) throw std::invalid_argument("children of a leaf");
        return n_->kids;
    }

    const NestedSeq& child(int i) const {
        const auto& kids = explicit_children();
        auto it = std::lower_bound(
            kids.begin(), kids.end(), i,
            [](const auto& kv, int idx) { return kv.first < idx; });
        if (it != kids.end() && it->first == i) return it->second;
        return n_->def;
    }

    // Smallest index with no explicit child (where the default region starts).
    int min_default_index() const {
        int mex = 0;
        for (const auto& [i, c] : explicit_children()) {
            if (i == mex) ++mex;
            else if (i > mex) break;
        }
        return mex;
    }

    bool operator==(const NestedSeq& other) const {
        if (n_ == other.n_) return true;
        if (!n_ || !other.n_) return false;
        if (n_->level != other.n_->level) return false;
        if (n_->level == 0) return n_->leaf == other.n_->leaf;
        if (n_->kids.size() != other.n_->kids.size()) return false;
        for (std::size_t j = 0; j < n_->kids.size(); ++j) {
            if (n_->kids[j].first != other.n_->kids[j].first) return false;
            if (!(n_->kids[j].second == other.n_->kids[j].second)) return false;
        }
        return n_->def == other.n_->def;
    }

private:
    struct Node {
        int level = 0;
        T leaf{};
        ChildList kids;
        NestedSeq def;
    };

    explicit NestedSeq(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    std::shared_ptr<const Node> n_;
};

namespace detail {

// Union of explicit child indices of two sibling nodes, plus the smallest
// index outside it (start of the shared default region).
template <class T>
void merged_indices(const NestedSeq<T>& x, const NestedSeq<T>& y,
                    std::vector<int>& out, int& mex) {
    out.clear();
    const auto& a = x.explicit_children();
    const auto& b = y.explicit_children();
    constexpr int kNone = std::numeric_limits<int>::max();
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int ai = i < a.size() ? a[i].first : kNone;
        int bj = j < b.size() ? b[j].first : kNone;
        int v = std::min(ai, bj);
        out.push_back(v);
        if (ai == v) ++i;
        if (bj == v) ++j;
    }
    mex = 0;
    for (int v : out) {
        if (v == mex) ++mex;
        else if (v > mex) break;
    }
}

}  // namespace detail

// sup over all multi-indices (i_0,...,i_{k-1}) of q^{i_0+...+i_{k-1}} times
// the leaf distance; exact on eventually-default trees (the default region
// contributes at the smallest unexplored index).
template <class T, class LeafDist>
double nested_sup_dist(const NestedSeq<T>& x, const NestedSeq<T>& y, double q,
                       LeafDist&& ld) {
    if (x.level() != y.level())
        throw std::invalid_argument("nested_sup_dist: level mismatch");
    if (x.level() == 0) return ld(x.leaf_value(), y.leaf_value());
    std::vector<int> idx;
    int mex = 0;
    detail::merged_indices(x, y, idx, mex);
    double best = 0.0;
    for (int i : idx)
        best = std::max(best, std::pow(q, i) *
                                  nested_sup_dist(x.child(i), y.child(i), q, ld));
    double d_def = nested_sup_dist(x.default_child(), y.default_child(), q, ld);
    best = std::max(best, std::pow(q, mex) * d_def);
    return best;
}

// Structure-preserving leaf transform; the result is re-canonicalized level
// by level (children whose images coincide with the default image collapse).
template <class U, class T, class Fn>
NestedSeq<U> map_leaves(const NestedSeq<T>& t, Fn&& fn) {
    if (t.level() == 0) return NestedSeq<U>::leaf(fn(t.leaf_value()));
    typename NestedSeq<U>::ChildList kids;
    for (const auto& [i, c] : t.explicit_children())
        kids.emplace_back(i, map_leaves<U>(c, fn));
    return NestedSeq<U>::node(std::move(kids),
                              map_leaves<U>(t.default_child(), fn));
}

// Sum over all multi-indices of q^{i_0+...+i_{k-1}} * leaf_dist^p; caller
// takes the 1/p power. Requires q < 1.
template <class T, class LeafDist>
double nested_lp_pow(const NestedSeq<T>& x, const NestedSeq<T>& y, double q,
                     double p, LeafDist&& ld) {
    if (x.level() != y.level())
        throw std::invalid_argument("nested_lp_pow: level mismatch");
    if (x.level() == 0) return std::pow(ld(x.leaf_value(), y.leaf_value()), p);
    std::vector<int> idx;
    int mex = 0;
    detail::merged_indices(x, y, idx, mex);
    double acc = 0.0;
    double weight_explicit = 0.0;
    for (int i : idx) {
        double w = std::pow(q, i);
        acc += w * nested_lp_pow(x.child(i), y.child(i), q, p, ld);
        weight_explicit += w;
    }
    double def_pow = nested_lp_pow(x.default_child(), y.default_child(), q, p, ld);
    acc += def_pow * (1.0 / (1.0 - q) - weight_explicit);
    return acc;
}

}  // namespace hutchinf
