#pragma once

#include "hutchinf/geometry.hpp"
#include "hutchinf/tail_seq.hpp"

namespace hutchinf {

// Parameters of the weighted sequence metrics: sup-kind is
// sup_k q^k d(x_k,y_k) with q in (0,1]; lp-kind is (sum_k q^k d^p)^{1/p}
// with q in (0,1) and p >= 1 (q = 1 could be infinite and is rejected).
struct MetricParams {
    enum class Kind { sup, lp };
    Kind kind = Kind::sup;
    double q = 0.5;
    double p = 1.0;

    static MetricParams sup(double q);
    static MetricParams lp(double p, double q);
    void validate() const;
};

// Weighted distance between tail sequences of points; tail contributions are
// evaluated in closed form from the anchor pair.
double seq_dist(const TailSeq<Point>& x, const TailSeq<Point>& y,
                const MetricParams& mp, BaseMetric m);

// The induced metric on sequences of compact sets: per-index Hausdorff
// distances aggregated exactly like seq_dist.
double hausdorff_seq(const TailSeq<FiniteSet>& ks, const TailSeq<FiniteSet>& ds,
                     const MetricParams& mp, BaseMetric m);

// Shared aggregator: terms[k] for k < terms.size(), then the constant
// tail value from index terms.size() on.
double weighted_aggregate(const std::vector<double>& terms, double tail_value,
                          const MetricParams& mp);

}  // namespace hutchinf
