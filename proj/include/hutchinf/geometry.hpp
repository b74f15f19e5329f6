#pragma once

#include <cstddef>
#include <vector>

namespace hutchinf {

using Point = std::vector<double>;

enum class BaseMetric { euclidean, maximum, absolute_1d };

double base_dist(const Point& x, const Point& y, BaseMetric m);

// Comparable surrogate for base_dist: squared distance for the euclidean
// metric (so comparisons avoid sqrt rounding), the plain value otherwise.
double base_dist_cmp(const Point& x, const Point& y, BaseMetric m);
double cmp_to_dist(double c, BaseMetric m);

// Deduplicated finite point cloud standing for a compact set. Points are kept
// sorted lexicographically; construction drops points within dedup_tol of an
// already kept one (greedy, in lexicographic order).
class FiniteSet {
public:
    explicit FiniteSet(std::vector<Point> pts, double dedup_tol = 0.0,
                       BaseMetric m = BaseMetric::euclidean);

    static FiniteSet singleton(Point p) { return FiniteSet({std::move(p)}); }

    const std::vector<Point>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    int dim() const { return dim_; }
    double dedup_tol() const { return dedup_tol_; }

    bool operator==(const FiniteSet& other) const {
        return points_ == other.points_;
    }

private:
    std::vector<Point> points_;
    double dedup_tol_ = 0.0;
    int dim_ = 0;
};

// Hausdorff-Pompeiu distance between finite sets. hausdorff() picks the grid
// path for large inputs; both paths agree exactly (same pairwise values).
double hausdorff(const FiniteSet& a, const FiniteSet& b, BaseMetric m);
double hausdorff_bruteforce(const FiniteSet& a, const FiniteSet& b, BaseMetric m);
double hausdorff_grid(const FiniteSet& a, const FiniteSet& b, BaseMetric m);

// Greedy lexicographic eps-net: visits points in lexicographic order, keeps a
// point iff it is farther than eps from every kept point. The result S
// satisfies hausdorff(S, A) <= eps.
FiniteSet epsnet_prune(const FiniteSet& a, double eps,
                       BaseMetric m = BaseMetric::euclidean);

double diam_exact(const FiniteSet& a, BaseMetric m);
// Bounding-box upper bound for the diameter (cheap, never below diam_exact).
double diam_upper(const FiniteSet& a, BaseMetric m);

FiniteSet scale_set(const FiniteSet& a, double s);
FiniteSet translate_set(const FiniteSet& a, const Point& b);
FiniteSet union_sets(const std::vector<FiniteSet>& sets);
FiniteSet minkowski_sum(const FiniteSet& a, const FiniteSet& b);

}  // namespace hutchinf
