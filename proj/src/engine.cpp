#include "hutchinf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <limits>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace hutchinf {

namespace {

constexpr std::size_t kMaxPairProducts = 64u << 20;  // resource cap

// Deterministic absolute-grid decimation: one representative per cell, cell
// width sized so every dropped point stays within eps of its representative.
// Cheaper than the greedy eps-net and exact enough for the slack accounting.
double cell_width(double eps, BaseMetric base, int dim) {
    return base == BaseMetric::euclidean ? eps / std::sqrt(double(dim)) : eps;
}

std::int64_t cell_key(const Point& p, double width) {
    // interleave per-axis cell indices into one key (two axes suffice here)
    std::int64_t key = 0;
    for (double v : p) {
        auto c = static_cast<std::int64_t>(std::floor(v / width));
        key = key * 0x100000001LL + (c & 0xffffffffLL);
    }
    return key;
}

FiniteSet prune_step(const FiniteSet& s, double eps, BaseMetric base,
                     double& slack) {
    if (eps <= 0.0) return s;
    slack += eps;
    double width = cell_width(eps, base, s.dim());
    std::unordered_set<std::int64_t> seen;
    std::vector<Point> kept;
    for (const Point& p : s.points())
        if (seen.insert(cell_key(p, width)).second) kept.push_back(p);
    return FiniteSet(std::move(kept));
}

// Minkowski sum streamed through the cell grid: pairs are never materialized
// beyond one representative per cell. Scan order is lexicographic in both
// factors, so the kept representatives are deterministic.
FiniteSet minkowski_prune(const FiniteSet& a, const FiniteSet& b, double eps,
                          BaseMetric base, double& slack) {
    if (eps <= 0.0) return minkowski_sum(a, b);
    slack += eps;
    double width = cell_width(eps, base, a.dim());
    std::unordered_set<std::int64_t> seen;
    std::vector<Point> kept;
    Point sum(a.dim());
    for (const Point& p : a.points())
        for (const Point& q : b.points()) {
            for (int d = 0; d < a.dim(); ++d) sum[d] = p[d] + q[d];
            if (seen.insert(cell_key(sum, width)).second) kept.push_back(sum);
        }
    return FiniteSet(std::move(kept));
}

// Image of one affine map over the set sequence: offset plus Minkowski
// accumulation of c_k * K_k for k < M; coordinates from M on are collapsed to
// representative points with a tail_error slack.
TrackedSet affine_image(const GifsMap& f, const SetSeq& ks, double eps, int M,
                        BaseMetric base) {
    const int plen = static_cast<int>(ks.prefix_size());
    double slack = 0.0;

    Point start = f.offset();
    // collapsed explicit coordinates in [M, plen)
    double w = f.coef_c() * std::pow(f.coef_r(), M);
    for (int k = M; k < plen; ++k) {
        const FiniteSet& sk = ks.prefix()[k];
        const Point& rep = sk.points().front();
        for (int d = 0; d < f.dim(); ++d) start[d] += w * rep[d];
        slack += std::abs(w) * diam_upper(sk, base);
        w *= f.coef_r();
    }
    // anchor tail from K0 = max(M, plen) on
    int K0 = std::max(M, plen);
    double tail = f.coef_c() * std::pow(f.coef_r(), K0) / (1.0 - f.coef_r());
    const Point& arep = ks.anchor().points().front();
    for (int d = 0; d < f.dim(); ++d) start[d] += tail * arep[d];
    slack += tail_error(f, K0, diam_upper(ks.anchor(), base));

    FiniteSet acc = FiniteSet::singleton(start);
    double ck = f.coef_c();
    for (int k = 0; k < M; ++k) {
        const FiniteSet& sk = ks.at(k);
        FiniteSet scaled = scale_set(sk, ck);
        ck *= f.coef_r();
        if (scaled.size() == 1) {
            acc = translate_set(acc, scaled.points().front());
            continue;
        }
        scaled = prune_step(scaled, eps, base, slack);
        if (acc.size() * scaled.size() > kMaxPairProducts)
            throw std::runtime_error("hutchinson: set size cap exceeded");
        acc = minkowski_prune(acc, scaled, eps, base, slack);
    }
    return {std::move(acc), slack};
}

// Achievable suprema over independent choices from the given sets: every
// value of the union that is at least the largest of the per-set minima.
std::vector<double> achievable_sups(const std::vector<const FiniteSet*>& sets) {
    double floor_min = -std::numeric_limits<double>::infinity();
    std::set<double> values;
    for (const FiniteSet* s : sets) {
        double mn = std::numeric_limits<double>::infinity();
        for (const Point& p : s->points()) {
            values.insert(p[0]);
            mn = std::min(mn, p[0]);
        }
        floor_min = std::max(floor_min, mn);
    }
    std::vector<double> out;
    for (double v : values)
        if (v >= floor_min) out.push_back(v);
    return out;
}

TrackedSet sup_scale_image(const GifsMap& f, const SetSeq& ks) {
    std::vector<const FiniteSet*> sets;
    for (const FiniteSet& s : ks.prefix()) sets.push_back(&s);
    sets.push_back(&ks.anchor());  // the repeated tail counts once
    std::vector<Point> out;
    for (double v : achievable_sups(sets)) {
        double y = f.scale() * v + f.shift();
        if (f.value_floor() > 0 && y > 0 && y < f.value_floor()) y = 0.0;
        out.push_back({y});
    }
    return {FiniteSet(std::move(out)), 0.0};
}

TrackedSet map_image(const GifsMap& f, const SetSeq& ks, double eps, int M,
                     BaseMetric base) {
    switch (f.kind()) {
        case MapKind::affine_sum:
            return affine_image(f, ks, eps, M, base);
        case MapKind::sup_scale:
            return sup_scale_image(f, ks);
        case MapKind::constant:
            return {FiniteSet::singleton(f.value()), 0.0};
        case MapKind::code_index:
            throw std::invalid_argument("hutchinson: unsupported map kind");
    }
    throw std::logic_error("unreachable");
}

SetSeq with_history(const std::vector<TrackedSet>& iterates, const SetSeq& ks) {
    std::vector<FiniteSet> prefix;
    prefix.reserve(iterates.size() + ks.prefix_size());
    for (auto it = iterates.rbegin(); it != iterates.rend(); ++it)
        prefix.push_back(it->set);
    prefix.insert(prefix.end(), ks.prefix().begin(), ks.prefix().end());
    return SetSeq(std::move(prefix), ks.anchor());
}

}  // namespace

namespace {

// HUTCHINF_THREADS caps the per-map parallelism (default: sequential).
int engine_threads() {
    static const int n = [] {
        const char* s = std::getenv("HUTCHINF_THREADS");
        int v = s ? std::atoi(s) : 1;
        return v < 1 ? 1 : v;
    }();
    return n;
}

}  // namespace

TrackedSet hutchinson_tracked(const GifsSystem& sys, const SetSeq& ks,
                              double prune_eps, int M) {
    sys.validate();
    if (M < 1) throw std::invalid_argument("hutchinson: M must be >= 1");
    const std::size_t n = sys.maps.size();
    std::vector<std::optional<TrackedSet>> results(n);
    const std::size_t batch = static_cast<std::size_t>(engine_threads());
    if (batch > 1 && n > 1) {
        for (std::size_t at = 0; at < n; at += batch) {
            std::vector<std::future<TrackedSet>> futs;
            for (std::size_t i = at; i < std::min(n, at + batch); ++i)
                futs.push_back(std::async(std::launch::async, [&, i] {
                    return map_image(sys.maps[i], ks, prune_eps, M, sys.base);
                }));
            for (std::size_t i = at; i < std::min(n, at + batch); ++i)
                results[i] = futs[i - at].get();
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            results[i] = map_image(sys.maps[i], ks, prune_eps, M, sys.base);
    }
    std::vector<FiniteSet> parts;
    double slack = 0.0;
    for (auto& r : results) {
        slack = std::max(slack, r->slack);  // union keeps the worst branch
        parts.push_back(std::move(r->set));
    }
    return {union_sets(parts), slack};
}

FiniteSet hutchinson(const GifsSystem& sys, const SetSeq& ks, double prune_eps,
                     int M) {
    return hutchinson_tracked(sys, ks, prune_eps, M).set;
}

std::vector<TrackedSet> gen_iterate_sets_tracked(const GifsSystem& sys,
                                                 const SetSeq& ks, int k,
                                                 double prune_eps, int M) {
    if (k < 1) throw std::invalid_argument("gen_iterate_sets: k must be >= 1");
    double L = sys.has_certs() ? sys.L_sys() : 1.0;
    std::vector<TrackedSet> iterates;
    double worst_slack = 0.0;
    for (int j = 0; j < k; ++j) {
        SetSeq seq = with_history(iterates, ks);
        TrackedSet step = hutchinson_tracked(sys, seq, prune_eps, M);
        // error in the inputs passes through one application of F
        step.slack += L * worst_slack;
        worst_slack = std::max(worst_slack, step.slack);
        iterates.push_back(std::move(step));
    }
    return iterates;
}

std::vector<FiniteSet> gen_iterate_sets(const GifsSystem& sys, const SetSeq& ks,
                                        int k, double prune_eps, int M) {
    std::vector<FiniteSet> out;
    for (TrackedSet& t : gen_iterate_sets_tracked(sys, ks, k, prune_eps, M))
        out.push_back(std::move(t.set));
    return out;
}

FiniteSet secelean_iterate(const GifsSystem& sys, const SetSeq& ks, int k,
                           double prune_eps, int M) {
    if (k < 0) throw std::invalid_argument("secelean_iterate: k must be >= 0");
    auto tilde_k = [&](FiniteSet s) {
        for (int j = 0; j < k; ++j)
            s = hutchinson(sys, SetSeq::constant(s), prune_eps, M);
        return s;
    };
    std::vector<FiniteSet> prefix;
    prefix.reserve(ks.prefix_size());
    for (const FiniteSet& s : ks.prefix()) prefix.push_back(tilde_k(s));
    FiniteSet anchor = tilde_k(ks.anchor());
    return hutchinson(sys, SetSeq(std::move(prefix), std::move(anchor)),
                      prune_eps, M);
}

OrderMGifs truncated_system(const GifsSystem& sys, int m, const Point& anchor) {
    std::set<Condition> conds = classify(sys);
    if (!conds.count(Condition::Q) && !conds.count(Condition::P))
        throw std::invalid_argument(
            "truncated_system: system must satisfy (Q) or (P)");
    OrderMGifs out;
    out.m = m;
    out.base = sys.base;
    for (const GifsMap& f : sys.maps) {
        out.maps.push_back(truncate(f, m, anchor));
        double lip = 0.0;
        switch (f.kind()) {
            case MapKind::affine_sum:
                // sum_{k<m} |c_k| in the maximum metric on X^m
                lip = std::abs(f.coef_c()) *
                      (1.0 - std::pow(std::abs(f.coef_r()), m)) /
                      (1.0 - std::abs(f.coef_r()));
                break;
            case MapKind::sup_scale:
                lip = f.scale();
                break;
            default:
                break;
        }
        out.contraction = std::max(out.contraction, lip);
    }
    return out;
}

FiniteSet gifs_iterate(const OrderMGifs& gifs, std::vector<FiniteSet> seeds,
                       int k, double prune_eps) {
    if (k < 1) throw std::invalid_argument("gifs_iterate: k must be >= 1");
    if (static_cast<int>(seeds.size()) != gifs.m)
        throw std::invalid_argument("gifs_iterate: need exactly m seed sets");
    std::vector<FiniteSet> window = std::move(seeds);  // K_j ... K_{j+m-1}
    FiniteSet last = window.back();
    for (int j = 0; j <= k; ++j) {
        std::vector<FiniteSet> parts;
        for (const TruncatedMap& tm : gifs.maps) {
            // a finite tuple is the sequence with a constant anchor-point tail
            SetSeq seq(window, FiniteSet::singleton(tm.anchor));
            parts.push_back(
                map_image(tm.base, seq, prune_eps, gifs.m, gifs.base).set);
        }
        last = union_sets(parts);
        window.erase(window.begin());
        window.push_back(last);
    }
    return last;
}

double error_bound(const MetricParams& mp, double L, int k, double d0) {
    mp.validate();
    if (k < 1) throw std::invalid_argument("error_bound: k must be >= 1");
    if (mp.kind == MetricParams::Kind::sup) {
        if (!(L < 1.0 && mp.q < 1.0))
            throw std::invalid_argument("error_bound: non-contractive parameters");
        double mx = std::max(L, mp.q);
        return L * std::pow(mx, k - 1) / (1.0 - mx) * d0;
    }
    double bpow = std::pow(L, mp.p) + mp.q;
    if (!(bpow < 1.0))
        throw std::invalid_argument("error_bound: non-contractive parameters");
    return L * std::pow(bpow, (k - 1) / mp.p) /
           (1.0 - std::pow(bpow, 1.0 / mp.p)) * d0;
}

AttractorApprox attractor(const GifsSystem& sys, double tol) {
    sys.validate();
    if (!(tol > 0)) throw std::invalid_argument("attractor: tol must be > 0");
    std::set<Condition> conds = classify(sys);
    SetSeq seeds = SetSeq::constant(FiniteSet::singleton(sys.seed_point));

    if (conds.count(Condition::Q) || conds.count(Condition::P)) {
        const MetricParams& mp = sys.cert_params();
        double L = sys.L_sys();

        // probe run to estimate the attractor's extent for tail sizing
        double diam_est;
        {
            auto probe = gen_iterate_sets(sys, seeds, 3, 0.0, 6);
            diam_est = 2.0 * diam_upper(probe.back(), sys.base) + 1.0;
        }
        int M = 1;
        double tail_budget = tol * (1.0 - L) / 20.0;
        auto worst_tail = [&](int m) {
            double t = 0.0;
            for (const GifsMap& f : sys.maps)
                t = std::max(t, tail_error(f, m, diam_est));
            return t;
        };
        while (M < 64 && worst_tail(M) > tail_budget) ++M;

        TrackedSet k1 = hutchinson_tracked(sys, seeds, 0.0, M);
        double d0 = hausdorff_seq(seeds, seeds.prepended(k1.set), mp, sys.base);

        int k = 1;
        while (k < 64 && error_bound(mp, L, k, d0) > tol / 2.0) ++k;
        if (error_bound(mp, L, k, d0) > tol / 2.0)
            throw std::runtime_error("attractor: tol unreachable within resource cap");
        double eps = tol * (1.0 - L) / (4.0 * (2.0 * M + 2.0));

        auto iterates = gen_iterate_sets_tracked(sys, seeds, k, eps, M);
        double err = error_bound(mp, L, k, d0) + iterates.back().slack;
        if (err > tol)
            throw std::runtime_error("attractor: tol unreachable within resource cap");
        return {std::move(iterates.back().set), err, k, eps, M};
    }

    if (conds.count(Condition::S1)) {
        // Secelean path: Y_k with the L^{k+1}/(1-L) bound; sup images are
        // exact here so no pruning slack accrues.
        double L = sys.L_sys();
        const int M = 4;
        FiniteSet tilde1 = hutchinson(sys, seeds, 0.0, M);
        double d0 = hausdorff(tilde1, seeds.anchor(), sys.base);
        int k = 0;
        auto bound = [&](int kk) {
            return std::pow(L, kk + 1) / (1.0 - L) * d0;
        };
        while (k < 256 && bound(k) > tol) ++k;
        if (bound(k) > tol)
            throw std::runtime_error("attractor: tol unreachable within resource cap");
        FiniteSet yk = secelean_iterate(sys, seeds, k, 0.0, M);
        return {std::move(yk), bound(k), k, 0.0, M};
    }

    throw std::invalid_argument("attractor: system satisfies neither (Q)/(P) nor (S1)");
}

std::vector<ConvergenceRow> convergence_table(const GifsSystem& sys,
                                              const SetSeq& seeds, int depth,
                                              double prune_eps, int M) {
    auto iterates = gen_iterate_sets_tracked(sys, seeds, depth, prune_eps, M);
    bool contractive = false;
    double d0 = 0.0;
    const MetricParams* mp = nullptr;
    if (sys.has_certs()) {
        mp = &sys.cert_params();
        double L = sys.L_sys();
        contractive = (mp->kind == MetricParams::Kind::sup && mp->q < 1.0 &&
                       L < 1.0) ||
                      (mp->kind == MetricParams::Kind::lp &&
                       L < std::pow(1.0 - mp->q, 1.0 / mp->p));
        if (contractive)
            d0 = hausdorff_seq(seeds, seeds.prepended(iterates.front().set), *mp,
                               sys.base);
    }
    std::vector<ConvergenceRow> rows;
    for (int k = 1; k <= depth; ++k) {
        ConvergenceRow row;
        row.k = k;
        row.size = iterates[k - 1].set.size();
        const FiniteSet& prev = k == 1 ? seeds.at(0) : iterates[k - 2].set;
        row.h_prev = hausdorff(iterates[k - 1].set, prev, sys.base);
        if (contractive) {
            double L = sys.L_sys();
            double b;
            if (k == 1) {
                // H(K^1, K_0) is the weight-1 term of the sup defining d0
                b = d0 + iterates[0].slack;
            } else {
                b = error_bound(*mp, L, k, d0) + error_bound(*mp, L, k - 1, d0) +
                    iterates[k - 1].slack + iterates[k - 2].slack;
            }
            row.bound = b;
            row.within = row.h_prev <= row.bound;
        } else {
            row.bound = std::numeric_limits<double>::quiet_NaN();
            row.within = true;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_cloud_csv(std::ostream& os, const FiniteSet& cloud) {
    for (int d = 0; d < cloud.dim(); ++d) os << (d ? ",x_" : "x_") << d;
    os << "\n";
    char buf[64];
    for (const Point& p : cloud.points()) {
        for (int d = 0; d < cloud.dim(); ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", p[d]);
            os << (d ? "," : "") << buf;
        }
        os << "\n";
    }
}

void write_convergence_csv(std::ostream& os,
                           const std::vector<ConvergenceRow>& rows) {
    os << "k,size,h_prev,bound,within\n";
    char buf[64];
    for (const ConvergenceRow& r : rows) {
        os << r.k << "," << r.size << ",";
        std::snprintf(buf, sizeof buf, "%.17g", r.h_prev);
        os << buf << ",";
        std::snprintf(buf, sizeof buf, "%.17g", r.bound);
        os << buf << "," << (r.within ? 1 : 0) << "\n";
    }
}

}  // namespace hutchinf
