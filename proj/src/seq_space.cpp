#include "hutchinf/seq_space.hpp"

#include <cmath>
#include <stdexcept>

namespace hutchinf {

double level_dist(const NestedSeq<Point>& x, const NestedSeq<Point>& y,
                  const MetricParams& mp, BaseMetric m) {
    mp.validate();
    if (x.level() != y.level())
        throw std::invalid_argument("level_dist: level mismatch");
    auto leaf = [m](const Point& a, const Point& b) { return base_dist(a, b, m); };
    if (mp.kind == MetricParams::Kind::sup)
        return nested_sup_dist(x, y, mp.q, leaf);
    return std::pow(nested_lp_pow(x, y, mp.q, mp.p, leaf), 1.0 / mp.p);
}

double diam_level(const FiniteSet& d, int k, const MetricParams& mp,
                  BaseMetric m) {
    mp.validate();
    if (k < 0) throw std::invalid_argument("diam_level: negative level");
    double diam = diam_exact(d, m);
    if (mp.kind == MetricParams::Kind::sup) return diam;
    return std::pow(1.0 - mp.q, -static_cast<double>(k) / mp.p) * diam;
}

NestedSeq<Point> tailseq_to_level1(const TailSeq<Point>& x) {
    NestedSeq<Point>::ChildList kids;
    for (std::size_t i = 0; i < x.prefix_size(); ++i)
        kids.emplace_back(static_cast<int>(i), NestedSeq<Point>::leaf(x.prefix()[i]));
    return NestedSeq<Point>::node(std::move(kids), NestedSeq<Point>::leaf(x.anchor()));
}

TailSeq<Point> level1_to_tailseq(const NestedSeq<Point>& t) {
    if (t.level() != 1)
        throw std::invalid_argument("level1_to_tailseq: level must be 1");
    int width = 0;
    for (const auto& [i, c] : t.explicit_children()) width = std::max(width, i + 1);
    std::vector<Point> prefix;
    prefix.reserve(width);
    for (int i = 0; i < width; ++i) prefix.push_back(t.child(i).leaf_value());
    return TailSeq<Point>(std::move(prefix), t.default_child().leaf_value());
}

NestedSeq<Point> diagonal_embed(const TailSeq<Point>& x, int k) {
    if (k < 1) throw std::invalid_argument("diagonal_embed: k must be >= 1");
    NestedSeq<Point> t = tailseq_to_level1(x);
    for (int l = 2; l <= k; ++l) t = NestedSeq<Point>::node({}, t);
    return t;
}

}  // namespace hutchinf
