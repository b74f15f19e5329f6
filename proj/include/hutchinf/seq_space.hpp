#pragma once

#include "hutchinf/geometry.hpp"
#include "hutchinf/metrics.hpp"
#include "hutchinf/nested_seq.hpp"
#include "hutchinf/tail_seq.hpp"

#include <vector>

namespace hutchinf {

// Coordinate path (i_0,...,i_j) into the hierarchy; length >= 1.
using MultiIndex = std::vector<int>;

// Repeated child lookup x^{(i_0,...,i_j)}, falling through to defaults for
// unspecified indices. Returns a tree of level level(x) - length(ix); a
// level-0 result carries the extracted leaf.
template <class T>
NestedSeq<T> project(const NestedSeq<T>& x, const MultiIndex& ix) {
    if (ix.empty()) throw std::invalid_argument("project: empty multi-index");
    if (static_cast<int>(ix.size()) > x.level())
        throw std::invalid_argument("project: index path longer than level");
    NestedSeq<T> cur = x;
    for (int i : ix) cur = cur.child(i);
    return cur;
}

// Level-k metric d_{k,s,q} / d_{k,p,q}: the weighted sup/sum over all
// multi-indices, with default-vs-default tails in closed form.
double level_dist(const NestedSeq<Point>& x, const NestedSeq<Point>& y,
                  const MetricParams& mp, BaseMetric m);

// Closed-form diameter of the k-fold product hierarchy D_k over D:
// (1-q)^{-k/p} diam(D) for the lp metric, diam(D) for the sup metric.
double diam_level(const FiniteSet& d, int k, const MetricParams& mp, BaseMetric m);

// Diagonal sequences x_{k+1} = (x_k, x_k, ...): the level-k tree whose every
// path replays x. Level-1 result is x itself as a tree.
NestedSeq<Point> diagonal_embed(const TailSeq<Point>& x, int k);

// Conversions between tail sequences and level-1 trees (exact both ways).
NestedSeq<Point> tailseq_to_level1(const TailSeq<Point>& x);
TailSeq<Point> level1_to_tailseq(const NestedSeq<Point>& t);

}  // namespace hutchinf
