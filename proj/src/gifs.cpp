#include "hutchinf/gifs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hutchinf {

GifsMap GifsMap::affine_sum(double c, double r, Point offset) {
    if (!(std::abs(r) < 1.0))
        throw std::invalid_argument("affine_sum: |r| < 1 required for a summable tail");
    GifsMap f;
    f.kind_ = MapKind::affine_sum;
    f.dim_ = static_cast<int>(offset.size());
    f.c_ = c;
    f.r_ = r;
    f.offset_ = std::move(offset);
    return f;
}

GifsMap GifsMap::sup_scale(double s, double b, double value_floor) {
    if (s < 0) throw std::invalid_argument("sup_scale: scale must be >= 0");
    GifsMap f;
    f.kind_ = MapKind::sup_scale;
    f.dim_ = 1;
    f.s_ = s;
    f.b_ = b;
    f.floor_ = value_floor;
    return f;
}

GifsMap GifsMap::constant(Point value) {
    GifsMap f;
    f.kind_ = MapKind::constant;
    f.dim_ = static_cast<int>(value.size());
    f.value_ = std::move(value);
    return f;
}

GifsMap GifsMap::code_index(int symbol) {
    if (symbol < 1 || symbol > 4)
        throw std::invalid_argument("code_index: symbol must be in 1..4");
    GifsMap f;
    f.kind_ = MapKind::code_index;
    f.dim_ = 2;
    f.symbol_ = symbol;
    return f;
}

GifsMap& GifsMap::with_cert(LipCert cert) {
    cert.mp.validate();
    cert_ = std::move(cert);
    return *this;
}

Point eval(const GifsMap& f, const TailSeq<Point>& x) {
    switch (f.kind()) {
        case MapKind::affine_sum: {
            if (static_cast<int>(x.anchor().size()) != f.dim())
                throw std::invalid_argument("eval: dimension mismatch");
            Point out = f.offset();
            double w = f.coef_c();
            for (std::size_t k = 0; k < x.prefix_size(); ++k) {
                const Point& xk = x.prefix()[k];
                for (int d = 0; d < f.dim(); ++d) out[d] += w * xk[d];
                w *= f.coef_r();
            }
            // tail: sum_{k>=M} c r^k = w / (1 - r) applied to the anchor
            double tail = w / (1.0 - f.coef_r());
            for (int d = 0; d < f.dim(); ++d) out[d] += tail * x.anchor()[d];
            return out;
        }
        case MapKind::sup_scale: {
            double mx = x.anchor()[0];
            for (const Point& p : x.prefix()) mx = std::max(mx, p[0]);
            double v = f.scale() * mx + f.shift();
            if (f.value_floor() > 0 && v > 0 && v < f.value_floor()) v = 0.0;
            return {v};
        }
        case MapKind::constant:
            return f.value();
        case MapKind::code_index:
            throw std::invalid_argument("eval: code_index maps have no direct point evaluation");
    }
    throw std::logic_error("unreachable");
}

Point tilde_eval(const GifsMap& f, const Point& x) {
    return eval(f, TailSeq<Point>::constant(x));
}

std::pair<Point, double> gen_fixed_point(const GifsMap& f,
                                         const TailSeq<Point>& seed, double tol,
                                         BaseMetric base) {
    if (!f.cert())
        throw std::invalid_argument("gen_fixed_point: map carries no certificate");
    const LipCert& cert = *f.cert();
    const MetricParams& mp = cert.mp;
    const double L = cert.L;
    double contraction;  // per-step factor in the a-priori bound
    if (mp.kind == MetricParams::Kind::sup) {
        if (!(L < 1.0 && mp.q < 1.0))
            throw std::invalid_argument("gen_fixed_point: certificate not contractive");
        contraction = std::max(L, mp.q);
    } else {
        double bpow = std::pow(L, mp.p) + mp.q;
        if (!(bpow < 1.0))
            throw std::invalid_argument("gen_fixed_point: certificate not contractive");
        contraction = std::pow(bpow, 1.0 / mp.p);
    }

    TailSeq<Point> args = seed;
    Point x = eval(f, args);
    double d0 = seq_dist(seed, seed.prepended(x), mp, base);
    double bound = L / (1.0 - contraction) * d0;
    int k = 1;
    const int kMaxIter = 1 << 20;
    while (bound > tol && k < kMaxIter) {
        args = args.prepended(x);
        x = eval(f, args);
        ++k;
        bound *= contraction;
    }
    if (bound > tol)
        throw std::runtime_error("gen_fixed_point: tolerance not reached");
    return {x, bound};
}

double tail_error(const GifsMap& f, int M, double diam) {
    if (M < 0) throw std::invalid_argument("tail_error: M must be >= 0");
    switch (f.kind()) {
        case MapKind::affine_sum:
            return diam * std::abs(f.coef_c()) *
                   std::pow(std::abs(f.coef_r()), M) /
                   (1.0 - std::abs(f.coef_r()));
        case MapKind::sup_scale:
            return f.scale() * diam;  // any coordinate can carry the sup
        case MapKind::constant:
            return 0.0;
        case MapKind::code_index:
            throw std::invalid_argument("tail_error: unsupported map kind");
    }
    throw std::logic_error("unreachable");
}

std::optional<LipCert> derive_cert(const GifsMap& f, const MetricParams& mp) {
    mp.validate();
    switch (f.kind()) {
        case MapKind::constant:
            return LipCert{mp, 0.0};
        case MapKind::affine_sum: {
            double ar = std::abs(f.coef_r());
            double ac = std::abs(f.coef_c());
            if (mp.kind == MetricParams::Kind::sup) {
                // sum_k |c_k| q^{-k}, finite when the decay beats q
                if (!(ar < mp.q)) return std::nullopt;
                return LipCert{mp, ac / (1.0 - ar / mp.q)};
            }
            // Hoelder bound against (sum q^k d^p)^{1/p}
            if (mp.p == 1.0) {
                if (ar > mp.q) return std::nullopt;
                return LipCert{mp, ac};  // sup_k |c| (|r|/q)^k attained at k=0
            }
            double pc = mp.p / (mp.p - 1.0);
            double rho = std::pow(ar * std::pow(mp.q, -1.0 / mp.p), pc);
            if (!(rho < 1.0)) return std::nullopt;
            return LipCert{mp, ac * std::pow(1.0 / (1.0 - rho), 1.0 / pc)};
        }
        case MapKind::sup_scale:
            // Only the unweighted sup metric gives a finite constant.
            if (mp.kind == MetricParams::Kind::sup && mp.q == 1.0)
                return LipCert{mp, f.scale()};
            return std::nullopt;
        case MapKind::code_index:
            return std::nullopt;  // certificate supplied by the cantor module
    }
    throw std::logic_error("unreachable");
}

void GifsSystem::validate() const {
    if (maps.empty()) throw std::invalid_argument("GifsSystem: no maps");
    if (flags.size() != maps.size())
        throw std::invalid_argument("GifsSystem: flags/maps size mismatch");
    for (const GifsMap& f : maps)
        if (f.dim() != dim) throw std::invalid_argument("GifsSystem: mixed dimensions");
    if (has_certs()) {
        const MetricParams& mp = maps.front().cert()->mp;
        for (const GifsMap& f : maps) {
            const MetricParams& o = f.cert()->mp;
            if (o.kind != mp.kind || o.q != mp.q || o.p != mp.p)
                throw std::invalid_argument("GifsSystem: certificates must share metric params");
        }
    }
}

bool GifsSystem::has_certs() const {
    return std::all_of(maps.begin(), maps.end(),
                       [](const GifsMap& f) { return f.cert().has_value(); });
}

const MetricParams& GifsSystem::cert_params() const {
    if (!has_certs())
        throw std::invalid_argument("GifsSystem: missing certificates");
    return maps.front().cert()->mp;
}

double GifsSystem::L_sys() const {
    if (!has_certs())
        throw std::invalid_argument("GifsSystem: missing certificates");
    double L = 0.0;
    for (const GifsMap& f : maps) L = std::max(L, f.cert()->L);
    return L;
}

std::set<Condition> classify(const GifsSystem& sys) {
    std::set<Condition> out;
    if (!sys.has_certs()) return out;
    const MetricParams& mp = sys.cert_params();
    double L = sys.L_sys();
    if (mp.kind == MetricParams::Kind::sup && mp.q < 1.0 && L < 1.0) {
        // continuity w.r.t. d_{s,q}, q<1, makes product images compact
        out = {Condition::Q, Condition::S2, Condition::S1};
        return out;
    }
    if (mp.kind == MetricParams::Kind::lp &&
        L < std::pow(1.0 - mp.q, 1.0 / mp.p)) {
        out = {Condition::P, Condition::S2, Condition::S1};
        return out;
    }
    if (mp.kind == MetricParams::Kind::sup && mp.q == 1.0 && L < 1.0) {
        bool all_c2 = std::all_of(sys.flags.begin(), sys.flags.end(),
                                  [](const MapFlags& f) { return f.c2; });
        bool all_c1 = std::all_of(sys.flags.begin(), sys.flags.end(),
                                  [](const MapFlags& f) { return f.c1 || f.c2; });
        if (all_c2) out.insert(Condition::S2);
        if (all_c1 || all_c2) out.insert(Condition::S1);
    }
    return out;
}

Point TruncatedMap::eval_tuple(const std::vector<Point>& xs) const {
    if (static_cast<int>(xs.size()) != m)
        throw std::invalid_argument("TruncatedMap: arity mismatch");
    return eval(base, TailSeq<Point>(xs, anchor));
}

TruncatedMap truncate(const GifsMap& f, int m, const Point& anchor) {
    if (m < 1) throw std::invalid_argument("truncate: m must be >= 1");
    return TruncatedMap{f, m, anchor};
}

// ---------------------------------------------------------------------------
// Built-in systems.

GifsSystem planar_ex5() {
    GifsSystem sys;
    sys.name = "ex5";
    sys.dim = 2;
    sys.base = BaseMetric::maximum;
    sys.seed_point = {0.0, 0.0};
    MetricParams mp = MetricParams::sup(0.5);
    const std::vector<Point> offsets = {
        {0.0, 0.0}, {0.0, 0.5}, {0.5, 0.0}, {0.5, 0.5}};
    for (const Point& b : offsets) {
        GifsMap f = GifsMap::affine_sum(0.1, 0.25, b);
        f.with_cert(*derive_cert(f, mp));
        sys.maps.push_back(std::move(f));
        sys.flags.push_back(MapFlags{true, true});
    }
    return sys;
}

GifsSystem sup_pair_system(int jmax) {
    GifsSystem sys;
    sys.name = "sup-pair";
    sys.dim = 1;
    sys.base = BaseMetric::absolute_1d;
    sys.seed_point = {1.0};
    double floor = 0.5 * (1.0 / jmax);  // smallest positive value of B
    MetricParams mp = MetricParams::sup(1.0);
    GifsMap f1 = GifsMap::sup_scale(0.5, 0.0, floor);
    f1.with_cert(*derive_cert(f1, mp));
    GifsMap f2 = GifsMap::constant({1.0});
    f2.with_cert(*derive_cert(f2, mp));
    sys.maps = {std::move(f1), std::move(f2)};
    sys.flags = {MapFlags{true, true}, MapFlags{true, true}};
    return sys;
}

GifsSystem half_sup_system(int jmax) {
    GifsSystem sys;
    sys.name = "half-sup";
    sys.dim = 1;
    sys.base = BaseMetric::absolute_1d;
    sys.seed_point = {1.0};
    double floor = 0.5 * (1.0 / jmax);
    MetricParams mp = MetricParams::sup(1.0);
    GifsMap f1 = GifsMap::sup_scale(0.5, 0.0, floor);
    f1.with_cert(*derive_cert(f1, mp));
    sys.maps = {std::move(f1)};
    sys.flags = {MapFlags{true, true}};
    return sys;
}

GifsSystem sup_interval_system(int grid_n) {
    GifsSystem sys;
    sys.name = "sup-interval";
    sys.dim = 1;
    sys.base = BaseMetric::absolute_1d;
    sys.seed_point = {2.0};
    (void)grid_n;
    MetricParams mp = MetricParams::sup(1.0);
    GifsMap f1 = GifsMap::sup_scale(0.5, 0.0);
    f1.with_cert(*derive_cert(f1, mp));
    GifsMap f2 = GifsMap::sup_scale(0.5, 0.25);
    f2.with_cert(*derive_cert(f2, mp));
    sys.maps = {std::move(f1), std::move(f2)};
    // the paper's example: (C1) holds, (C2) fails
    sys.flags = {MapFlags{true, false}, MapFlags{true, false}};
    return sys;
}

FiniteSet reciprocal_grid(int jmax) {
    std::vector<Point> pts;
    pts.push_back({0.0});
    for (int j = 1; j <= jmax; ++j) pts.push_back({1.0 / j});
    return FiniteSet(std::move(pts));
}

FiniteSet interval_grid(double a, double b, int n) {
    std::vector<Point> pts;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) pts.push_back({a + (b - a) * i / n});
    return FiniteSet(std::move(pts));
}

}  // namespace hutchinf
