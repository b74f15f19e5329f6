#pragma once

#include "hutchinf/engine.hpp"
#include "hutchinf/gifs.hpp"
#include "hutchinf/nested_seq.hpp"
#include "hutchinf/seq_space.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace hutchinf {

// Element of Omega_k: level-k tree with symbol leaves in 1..n.
using CodeTree = NestedSeq<int>;

// Element of the code space Omega = prod_k Omega_k. Entry k is a level-k
// tree; beyond the explicit prefix every entry is the all-default tree over
// default_symbol.
struct CodePoint {
    std::vector<CodeTree> entries;  // entries[k] has level k
    int default_symbol = 1;
    int alphabet = 2;

    CodeTree entry(int k) const;
    int prefix_depth() const { return static_cast<int>(entries.size()); }
    bool operator==(const CodePoint& o) const;
};

CodePoint make_code_point(std::vector<CodeTree> entries, int default_symbol,
                          int alphabet);

// Tuple (alpha_0, ..., alpha_k) addressing a tile; part j is a level-j tree.
struct Address {
    std::vector<CodeTree> parts;

    int depth() const { return static_cast<int>(parts.size()) - 1; }
    int head_symbol() const { return parts.front().leaf_value(); }
    bool operator==(const Address& o) const { return parts == o.parts; }
};

Address make_address(std::vector<CodeTree> parts);

// d_{(s,q)}(a,b) = sup_k q^k d_{k,s,q}(a_k,b_k);
// d_{(p,q)}(a,b) = (sum_k ((1-q)/2)^k d_{k,p,q}^p(a_k,b_k))^{1/p}.
// Tails are closed form: all-default entries contribute the discrete anchor
// distance with geometric weights.
double code_dist(const CodePoint& a, const CodePoint& b, const MetricParams& mp);

// The sequence metric induced by code_dist on tuples of code points.
double code_seq_dist(const TailSeq<CodePoint>& x, const TailSeq<CodePoint>& y,
                     const MetricParams& mp);

// Canonical shift tau_j: entry 0 of the output is j; entry k+1 collects the
// k-th entries of all the arguments (explicit ones as explicit children, the
// anchor as the default). All arguments must share default_symbol.
CodePoint shift(int j, const TailSeq<CodePoint>& args);

// alpha(i) = (alpha_1^{(i)}, alpha_2^{(i)}, ...): drop entry 0, take the i-th
// slice of each remaining level.
CodePoint slice(const CodePoint& a, int i);

// Width of the explicit region: slice(a, i) is the same for every i >= width.
int slice_width(const CodePoint& a);

Address slice_address(const Address& a, int i);
Address default_slice_address(const Address& a);

// f_alpha(x_0, x_1, ...) = f_{alpha_0}(f_{alpha(0)}(x_0), f_{alpha(1)}(x_1), ...)
// evaluated on an eventually-default tree of points of level depth(alpha)+1.
Point compose_address(const GifsSystem& sys, const Address& alpha,
                      const NestedSeq<Point>& x);

// Same composition for the shift family tau_alpha on trees of code points.
CodePoint tau_compose(const Address& alpha, const NestedSeq<CodePoint>& x);

struct Tile {
    Address address;
    FiniteSet cloud;
    double diam_bound = 0.0;
};

// A_alpha = closure f_alpha(A_{k+1}) approximated on a deterministic sample:
// diagonal embeddings of every cloud point plus `n_random` randomized trees
// with explicit entries drawn from the cloud under a fixed seed.
Tile tile(const GifsSystem& sys, const AttractorApprox& a, const Address& alpha,
          int n_random = 32, std::uint64_t seed = 12345);

// pi(alpha) at finite depth: a point of the depth-k tile, with err =
// tile diameter bound plus the cloud's own error.
struct PiResult {
    Point point;
    double err = 0.0;
};
PiResult pi_point(const GifsSystem& sys, const AttractorApprox& a,
                  const CodePoint& code, int depth);

// Evaluates f_alpha(pi_k(...)) and pi(tau_alpha(...)) on the same inputs and
// returns the distance together with the combined error budget.
struct ConjugacyResult {
    double residual = 0.0;
    double budget = 0.0;
};
ConjugacyResult conjugacy_check(const GifsSystem& sys, const AttractorApprox& a,
                                const Address& alpha,
                                const TailSeq<CodePoint>& codes, int depth);

// Displayed bound of the discrepancy lemma: A_diam times the aggregated
// weight of the multi-indices where the addresses disagree (A_diam itself
// when the head symbols differ).
double discrepancy_bound(const Address& alpha, const Address& beta,
                         double a_diam, const MetricParams& mp);

// Tile diameter decay factor per address level for the given certificate:
// L for sup certificates, L/(1-q)^{1/p} for lp ones.
double tile_decay_factor(const GifsSystem& sys);

// Nested bracketed serialization with a `*` default marker, e.g. [1,[2,*1]].
std::string format_tree(const CodeTree& t);
CodeTree parse_tree(const std::string& s);
std::string format_address(const Address& a);
Address parse_address(const std::string& s);

}  // namespace hutchinf
