#include "hutchinf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hutchinf {

MetricParams MetricParams::sup(double q) {
    MetricParams mp{Kind::sup, q, 1.0};
    mp.validate();
    return mp;
}

MetricParams MetricParams::lp(double p, double q) {
    MetricParams mp{Kind::lp, q, p};
    mp.validate();
    return mp;
}

void MetricParams::validate() const {
    if (kind == Kind::sup) {
        if (!(q > 0.0 && q <= 1.0))
            throw std::invalid_argument("sup metric needs q in (0,1]");
    } else {
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("lp metric needs q in (0,1)");
        if (!(p >= 1.0))
            throw std::invalid_argument("lp metric needs p >= 1");
    }
}

double weighted_aggregate(const std::vector<double>& terms, double tail_value,
                          const MetricParams& mp) {
    mp.validate();
    const std::size_t M = terms.size();
    if (mp.kind == MetricParams::Kind::sup) {
        double best = 0.0;
        double w = 1.0;
        for (double t : terms) {
            best = std::max(best, w * t);
            w *= mp.q;
        }
        // sup_{k>=M} q^k * tail = q^M * tail for q < 1, tail for q = 1.
        double tail = mp.q < 1.0 ? w * tail_value : tail_value;
        return std::max(best, tail);
    }
    double acc = 0.0;
    double w = 1.0;
    for (double t : terms) {
        acc += w * std::pow(t, mp.p);
        w *= mp.q;
    }
    acc += std::pow(tail_value, mp.p) * w / (1.0 - mp.q);
    return std::pow(acc, 1.0 / mp.p);
}

double seq_dist(const TailSeq<Point>& x, const TailSeq<Point>& y,
                const MetricParams& mp, BaseMetric m) {
    std::size_t M = std::max(x.prefix_size(), y.prefix_size());
    std::vector<double> terms(M);
    for (std::size_t k = 0; k < M; ++k) terms[k] = base_dist(x.at(k), y.at(k), m);
    return weighted_aggregate(terms, base_dist(x.anchor(), y.anchor(), m), mp);
}

double hausdorff_seq(const TailSeq<FiniteSet>& ks, const TailSeq<FiniteSet>& ds,
                     const MetricParams& mp, BaseMetric m) {
    std::size_t M = std::max(ks.prefix_size(), ds.prefix_size());
    std::vector<double> terms(M);
    for (std::size_t k = 0; k < M; ++k)
        terms[k] = hausdorff(ks.at(k), ds.at(k), m);
    return weighted_aggregate(terms, hausdorff(ks.anchor(), ds.anchor(), m), mp);
}

}  // namespace hutchinf
