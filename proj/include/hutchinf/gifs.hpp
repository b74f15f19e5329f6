#pragma once

#include "hutchinf/geometry.hpp"
#include "hutchinf/metrics.hpp"
#include "hutchinf/tail_seq.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hutchinf {

enum class MapKind { affine_sum, sup_scale, constant, code_index };

// Declared Lipschitz constant of a map with respect to a weighted sequence
// metric. Certificates are analytic; empirical sampling only ever provides
// lower-bound sanity checks.
struct LipCert {
    enum class Provenance { declared_analytic, empirical_lower_bound };
    MetricParams mp;
    double L = 0.0;
    Provenance provenance = Provenance::declared_analytic;
};

// Evaluable map from bounded sequences over X to X.
//  - affine_sum: offset + sum_k c*r^k * x_k (geometric coefficient family,
//    so every tail is closed form)
//  - sup_scale:  s * sup_k x_k + b, one-dimensional only; an optional value
//    floor snaps outputs in (0, floor) to 0, closing truncated grids under
//    the dynamics
//  - constant:   fixed value
//  - code_index: symbol-space map owned by the cantor module; it has no
//    direct point evaluation here
class GifsMap {
public:
    static GifsMap affine_sum(double c, double r, Point offset);
    static GifsMap sup_scale(double s, double b, double value_floor = 0.0);
    static GifsMap constant(Point value);
    static GifsMap code_index(int symbol);

    MapKind kind() const { return kind_; }
    int dim() const { return dim_; }

    double coef_c() const { return c_; }
    double coef_r() const { return r_; }
    const Point& offset() const { return offset_; }
    double scale() const { return s_; }
    double shift() const { return b_; }
    double value_floor() const { return floor_; }
    const Point& value() const { return value_; }
    int symbol() const { return symbol_; }

    GifsMap& with_cert(LipCert cert);
    const std::optional<LipCert>& cert() const { return cert_; }

private:
    GifsMap() = default;
    MapKind kind_ = MapKind::constant;
    int dim_ = 1;
    double c_ = 0.0, r_ = 0.0;  // affine_sum
    Point offset_;
    double s_ = 0.0, b_ = 0.0, floor_ = 0.0;  // sup_scale
    Point value_;                              // constant
    int symbol_ = 0;                           // code_index
    std::optional<LipCert> cert_;
};

Point eval(const GifsMap& f, const TailSeq<Point>& x);

// f~(x) = f(x, x, ...), evaluated with the full closed-form series.
Point tilde_eval(const GifsMap& f, const Point& x);

// Generalized iterates x^{k+1} = f(x^k,...,x^1, x_0, x_1, ...) run until the
// a-priori bound of the fixed point theorem falls below tol. Returns the last
// iterate together with the bound actually achieved. Requires a contractive
// certificate on f.
std::pair<Point, double> gen_fixed_point(const GifsMap& f,
                                         const TailSeq<Point>& seed, double tol,
                                         BaseMetric base);

// Upper bound on |f(x) - f(x')| when x, x' agree on coordinates < M and all
// entries live in a set of diameter diam.
double tail_error(const GifsMap& f, int M, double diam);

// Analytic certificate for a map under the given metric, when finite.
std::optional<LipCert> derive_cert(const GifsMap& f, const MetricParams& mp);

struct MapFlags {
    bool c1 = true;  // closure of product images compact
    bool c2 = true;  // product images compact without closure
};

enum class Condition { S1, S2, Q, P };

struct GifsSystem {
    std::string name;
    std::vector<GifsMap> maps;
    std::vector<MapFlags> flags;
    BaseMetric base = BaseMetric::euclidean;
    int dim = 1;
    Point seed_point;

    void validate() const;
    bool has_certs() const;
    const MetricParams& cert_params() const;
    double L_sys() const;
};

// Condition hierarchy: Q iff a sup-kind q<1 certificate with L_sys < 1;
// P iff an lp-kind certificate with L_sys < (1-q)^{1/p}; either implies
// (S2) and (S1). With only a q = 1 certificate, S2/S1 come from L_sys < 1
// plus the declared (C2)/(C1) flags.
std::set<Condition> classify(const GifsSystem& sys);

// Order-m truncation f_m(x_0,...,x_{m-1}) = f(x_0,...,x_{m-1}, a, a, ...).
struct TruncatedMap {
    GifsMap base;
    int m = 1;
    Point anchor;

    Point eval_tuple(const std::vector<Point>& xs) const;
};
TruncatedMap truncate(const GifsMap& f, int m, const Point& anchor);

// Built-in systems and spaces.
GifsSystem planar_ex5();
GifsSystem sup_pair_system(int jmax = 64);
GifsSystem half_sup_system(int jmax = 64);
GifsSystem sup_interval_system(int grid_n = 128);
FiniteSet reciprocal_grid(int jmax);
FiniteSet interval_grid(double a, double b, int n);

}  // namespace hutchinf
