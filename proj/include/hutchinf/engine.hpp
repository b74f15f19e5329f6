#pragma once

#include "hutchinf/gifs.hpp"

#include <iosfwd>
#include <vector>

namespace hutchinf {

// Sequence of compact sets: prefix of finite sets plus an anchor set that
// repeats forever.
using SetSeq = TailSeq<FiniteSet>;

struct AttractorApprox {
    FiniteSet cloud;
    double err = 0.0;       // certified Hausdorff distance to the attractor
    int iterations = 0;
    double prune_eps = 0.0;
    int prefix_depth = 0;
};

// One application of the set-valued operator F(K_0, K_1, ...). Products are
// never materialized: affine maps use Minkowski accumulation over the first M
// coordinates (tail collapsed with a tail_error slack), sup maps use the
// exact achievable-maxima rule. Results are pruned to prune_eps after each
// partial sum.
FiniteSet hutchinson(const GifsSystem& sys, const SetSeq& ks, double prune_eps,
                     int M);

struct TrackedSet {
    FiniteSet set;
    double slack = 0.0;  // accumulated pruning + tail slack
};
TrackedSet hutchinson_tracked(const GifsSystem& sys, const SetSeq& ks,
                              double prune_eps, int M);

// Generalized iterates K^{j+1} = F(K^j, ..., K^1, K_0, K_1, ...), j < k.
std::vector<FiniteSet> gen_iterate_sets(const GifsSystem& sys, const SetSeq& ks,
                                        int k, double prune_eps, int M);
std::vector<TrackedSet> gen_iterate_sets_tracked(const GifsSystem& sys,
                                                 const SetSeq& ks, int k,
                                                 double prune_eps, int M);

// Y_k = F(F~^(k)(K_0), F~^(k)(K_1), ...) with F~(K) = F(K, K, ...).
FiniteSet secelean_iterate(const GifsSystem& sys, const SetSeq& ks, int k,
                           double prune_eps, int M);

// Order-m GIFS obtained by truncating every map at arity m.
struct OrderMGifs {
    std::vector<TruncatedMap> maps;
    int m = 1;
    BaseMetric base = BaseMetric::euclidean;
    double contraction = 0.0;  // Lipschitz bound in the maximum metric on X^m
};
OrderMGifs truncated_system(const GifsSystem& sys, int m, const Point& anchor);

// Backward-looking order-m iteration K_{j+m} = F(K_j, ..., K_{j+m-1});
// returns K_{k+m}.
FiniteSet gifs_iterate(const OrderMGifs& gifs, std::vector<FiniteSet> seeds,
                       int k, double prune_eps);

// A-priori error bound of the Hutchinson-Barnsley theorem after k
// generalized iterates, for initial displacement d0.
double error_bound(const MetricParams& mp, double L, int k, double d0);

// Attractor approximation with a certified error budget: analytic bound plus
// accumulated pruning and tail slack, all below tol. Systems with only a
// q = 1 certificate fall back to the Secelean iteration and its bound.
AttractorApprox attractor(const GifsSystem& sys, double tol);

struct ConvergenceRow {
    int k = 0;
    std::size_t size = 0;
    double h_prev = 0.0;   // H(K^k, K^{k-1})
    double bound = 0.0;    // analytic bound + slack for h_prev
    bool within = false;
};
std::vector<ConvergenceRow> convergence_table(const GifsSystem& sys,
                                              const SetSeq& seeds, int depth,
                                              double prune_eps, int M);

void write_cloud_csv(std::ostream& os, const FiniteSet& cloud);
void write_convergence_csv(std::ostream& os,
                           const std::vector<ConvergenceRow>& rows);

}  // namespace hutchinf
