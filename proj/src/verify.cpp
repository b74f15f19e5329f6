#include "hutchinf/verify.hpp"

#include "hutchinf/cantor.hpp"
#include "hutchinf/code_space.hpp"
#include "hutchinf/engine.hpp"
#include "hutchinf/seq_space.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hutchinf {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

TailSeq<Point> random_tailseq(std::mt19937_64& rng, int dim, double span = 1.0) {
    std::uniform_int_distribution<int> len(0, 4);
    std::uniform_real_distribution<double> coord(-span, span);
    auto pt = [&] {
        Point p(dim);
        for (double& v : p) v = coord(rng);
        return p;
    };
    std::vector<Point> prefix;
    int n = len(rng);
    for (int i = 0; i < n; ++i) prefix.push_back(pt());
    return TailSeq<Point>(std::move(prefix), pt());
}

CodeTree random_code_tree(std::mt19937_64& rng, int level, int alphabet) {
    std::uniform_int_distribution<int> sym(1, alphabet);
    if (level == 0) return CodeTree::leaf(sym(rng));
    std::uniform_int_distribution<int> nkids(0, 2);
    std::uniform_int_distribution<int> idx(0, 3);
    CodeTree::ChildList kids;
    std::vector<int> used;
    int n = nkids(rng);
    for (int t = 0; t < n; ++t) {
        int i = idx(rng);
        if (std::find(used.begin(), used.end(), i) != used.end()) continue;
        used.push_back(i);
        kids.emplace_back(i, random_code_tree(rng, level - 1, alphabet));
    }
    return CodeTree::node(std::move(kids), random_code_tree(rng, level - 1, alphabet));
}

CodePoint random_code_point(std::mt19937_64& rng, int depth, int alphabet,
                            int default_symbol) {
    std::vector<CodeTree> entries;
    for (int k = 0; k <= depth; ++k)
        entries.push_back(random_code_tree(rng, k, alphabet));
    return make_code_point(std::move(entries), default_symbol, alphabet);
}

std::vector<CheckResult> suite_metrics() {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(2024);

    bool axioms = true;
    std::string why;
    for (int t = 0; t < 200 && axioms; ++t) {
        MetricParams mp = t % 2 ? MetricParams::sup(0.5)
                                : MetricParams::lp(2.0, 0.5);
        auto x = random_tailseq(rng, 2), y = random_tailseq(rng, 2),
             z = random_tailseq(rng, 2);
        double dxy = seq_dist(x, y, mp, BaseMetric::euclidean);
        double dyx = seq_dist(y, x, mp, BaseMetric::euclidean);
        double dxz = seq_dist(x, z, mp, BaseMetric::euclidean);
        double dzy = seq_dist(z, y, mp, BaseMetric::euclidean);
        if (dxy != dyx) { axioms = false; why = "symmetry"; }
        if (dxy > dxz + dzy + 1e-12) { axioms = false; why = "triangle"; }
        if (seq_dist(x, x, mp, BaseMetric::euclidean) != 0.0) {
            axioms = false;
            why = "identity";
        }
    }
    out.push_back({"seq_dist metric axioms (200 random triples)", axioms, why});

    bool prop = true;
    why.clear();
    std::uniform_real_distribution<double> qd(0.2, 0.8);
    for (int t = 0; t < 200 && prop; ++t) {
        auto x = random_tailseq(rng, 1), y = random_tailseq(rng, 1);
        double q = qd(rng);
        double p = 1.0 + 2.0 * qd(rng);
        double ds = seq_dist(x, y, MetricParams::sup(q), BaseMetric::absolute_1d);
        double dp = seq_dist(x, y, MetricParams::lp(p, std::pow(q, p)),
                             BaseMetric::absolute_1d);
        if (ds > dp + 1e-12) { prop = false; why = "d_sq <= d_pq^p"; }
        double q2 = q + (1.0 - q) * 0.5;
        double ds2 = seq_dist(x, y, MetricParams::sup(q2), BaseMetric::absolute_1d);
        if (ds > ds2 + 1e-12) { prop = false; why = "monotone in q"; }
        double qq = std::pow(q, p) * 0.9;
        double dpq = seq_dist(x, y, MetricParams::lp(p, qq), BaseMetric::absolute_1d);
        double factor = std::pow(1.0 - qq / std::pow(q, p), -1.0 / p);
        if (dpq > factor * ds + 1e-12) { prop = false; why = "comparison (iii)"; }
    }
    out.push_back({"metric comparison inequalities (200 random pairs)", prop, why});
    return out;
}

std::vector<CheckResult> suite_hausdorff() {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    bool agree = true;
    for (int t = 0; t < 20 && agree; ++t) {
        std::vector<Point> a, b;
        for (int i = 0; i < 120; ++i) a.push_back({coord(rng), coord(rng)});
        for (int i = 0; i < 150; ++i) b.push_back({coord(rng), coord(rng)});
        FiniteSet A(a), B(b);
        double h1 = hausdorff_bruteforce(A, B, BaseMetric::euclidean);
        double h2 = hausdorff_grid(A, B, BaseMetric::euclidean);
        if (std::abs(h1 - h2) > 1e-12) agree = false;
    }
    out.push_back({"grid path agrees with reference path", agree, ""});

    // the interval-vs-point example under the lp sequence metric
    double q = 0.4, p = 2.0;
    FiniteSet grid = interval_grid(0.0, 1.0, 128);
    FiniteSet zero = FiniteSet::singleton({0.0});
    TailSeq<FiniteSet> ks({grid}, zero);
    TailSeq<FiniteSet> ds({zero, grid}, zero);
    double h = hausdorff_seq(ks, ds, MetricParams::lp(p, q), BaseMetric::absolute_1d);
    double expect = std::pow(1.0 + q, 1.0 / p);
    bool ok = std::abs(h - expect) <= 1.0 / 128;
    out.push_back({"product example value (1+q)^(1/p)", ok,
                   fmt(h) + " vs " + fmt(expect)});
    return out;
}

std::vector<CheckResult> suite_shifts() {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(7);
    const int n = 3;
    bool sup_ok = true, lp_ok = true, recon_ok = true;
    MetricParams sup = MetricParams::sup(0.5);
    MetricParams lp = MetricParams::lp(2.0, 0.5);
    for (int t = 0; t < 100; ++t) {
        auto mk = [&](int def) {
            std::vector<CodePoint> prefix;
            int len = t % 3;
            for (int i = 0; i < len; ++i)
                prefix.push_back(random_code_point(rng, 2, n, def));
            return TailSeq<CodePoint>(std::move(prefix),
                                      random_code_point(rng, 2, n, def));
        };
        auto a = mk(1), b = mk(1);
        double din = code_seq_dist(a, b, sup);
        if (din > 0) {
            double dout = code_dist(shift(1, a), shift(1, b), sup);
            if (std::abs(dout - sup.q * din) > 1e-12 * std::max(1.0, din))
                sup_ok = false;
        }
        double din2 = code_seq_dist(a, b, lp);
        if (din2 > 0) {
            double dout2 = code_dist(shift(2, a), shift(2, b), lp);
            double ratio = std::pow((1.0 - lp.q) / 2.0, 1.0 / lp.p);
            if (std::abs(dout2 - ratio * din2) > 1e-12 * std::max(1.0, din2))
                lp_ok = false;
        }
        CodePoint c = random_code_point(rng, 3, n, 1);
        int w = slice_width(c);
        std::vector<CodePoint> slices;
        for (int i = 0; i < w; ++i) slices.push_back(slice(c, i));
        CodePoint rebuilt = shift(c.entry(0).leaf_value(),
                                  TailSeq<CodePoint>(slices, slice(c, w)));
        if (!(rebuilt == c)) recon_ok = false;
    }
    out.push_back({"shift Lipschitz ratio q (sup metric)", sup_ok, ""});
    out.push_back({"shift Lipschitz ratio ((1-q)/2)^{1/p} (lp metric)", lp_ok, ""});
    out.push_back({"reconstruction alpha = tau_{alpha_0}(slices)", recon_ok, ""});
    return out;
}

std::vector<CheckResult> suite_tiles() {
    std::vector<CheckResult> out;
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.1);
    double diam = diam_exact(a.cloud, sys.base);
    double L = sys.L_sys();

    bool cover0 = true;
    std::vector<FiniteSet> parts;
    for (int i = 1; i <= 4; ++i) {
        Tile t = tile(sys, a, make_address({CodeTree::leaf(i)}));
        if (diam_exact(t.cloud, sys.base) > t.diam_bound + 1e-12) cover0 = false;
        parts.push_back(t.cloud);
    }
    double h = hausdorff(union_sets(parts), a.cloud, sys.base);
    bool hok = h <= 2.0 * a.err + L * diam;
    out.push_back({"depth-0 tile diameters within bound", cover0, ""});
    out.push_back({"depth-0 tile union close to the attractor", hok, fmt(h)});
    return out;
}

std::vector<CheckResult> suite_conjugacy() {
    std::vector<CheckResult> out;
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.1);
    std::mt19937_64 rng(21);
    bool ok = true;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        Address alpha = t % 2 == 0
                            ? make_address({CodeTree::leaf(1 + t % 4)})
                            : make_address({CodeTree::leaf(1 + t % 4),
                                            random_code_tree(rng, 1, 4)});
        TailSeq<CodePoint> codes({random_code_point(rng, 2, 4, 1)},
                                 random_code_point(rng, 2, 4, 1));
        ConjugacyResult r = conjugacy_check(sys, a, alpha, codes, 2);
        worst = std::max(worst, r.residual - r.budget);
        if (r.residual > r.budget) ok = false;
    }
    out.push_back({"conjugacy residual within budget (10 random cases)", ok,
                   "worst margin " + fmt(worst)});
    return out;
}

std::vector<CheckResult> suite_cantor() {
    std::vector<CheckResult> out;
    std::vector<int> ms{1, 1, 1, 1, 1, 1};
    CantorParams params = derive_params(0.5, 0.5, ms);
    double r0 = std::abs(2 * params.ps[0] + params.as[0] - 1.0);
    out.push_back({"fin1 residual", r0 <= 1e-12, fmt(r0)});
    bool fin3 = true;
    for (std::size_t k = 0; k < ms.size(); ++k)
        if (!(params.ps[k] / params.as[k] <
              0.5 * std::pow(0.5, ms[k]) / std::sqrt(2.0)))
            fin3 = false;
    out.push_back({"fin3 strict", fin3, ""});

    auto greedy = minimal_fin4_sequence(4);
    auto oks = check_fin4(greedy, 4);
    bool all4 = std::all_of(oks.begin(), oks.end(), [](bool b) { return b; });
    out.push_back({"greedy sequence satisfies the counting inequality", all4, ""});
    auto bad = check_fin4({1, 1, 1}, 2);
    out.push_back({"constant ones fail at k = 2", !bad[1], ""});

    bool cert_ok = true;
    for (int m = 1; m <= 4; ++m)
        for (int k = m; k <= 4; ++k)
            if (!measure_certificate(greedy, m, k).ok) cert_ok = false;
    out.push_back({"measure certificate ok for 1 <= m <= k <= 4", cert_ok, ""});

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> len(0, 2);
    auto random_code = [&](int depth) {
        TildeCode c;
        for (int k = 0; k <= depth; ++k) {
            std::uniform_int_distribution<std::uint64_t> sym(
                0, tilde_card(params, k) - 1);
            c.symbols.push_back(sym(rng));
        }
        return c;
    };
    bool lip = true;
    double K = params.K, q = params.q;
    for (int t = 0; t < 100; ++t) {
        auto mk = [&] {
            std::vector<TildeCode> prefix;
            int n = len(rng);
            for (int i = 0; i < n; ++i) prefix.push_back(random_code(3));
            return TailSeq<TildeCode>(std::move(prefix), random_code(3));
        };
        auto xa = mk(), xb = mk();
        std::size_t m = std::max(xa.prefix_size(), xb.prefix_size()) + 1;
        std::vector<Point> pa, pb;
        for (std::size_t i = 0; i < m; ++i) {
            pa.push_back(code_point(params, xa.at(i)));
            pb.push_back(code_point(params, xb.at(i)));
        }
        TailSeq<Point> sa(pa, code_point(params, xa.anchor()));
        TailSeq<Point> sb(pb, code_point(params, xb.anchor()));
        double din = seq_dist(sa, sb, MetricParams::sup(q), BaseMetric::euclidean);
        if (din == 0) continue;
        for (int i = 1; i <= 4; ++i) {
            Point ya = code_point(params, cantor_map(params, i, xa, 4));
            Point yb = code_point(params, cantor_map(params, i, xb, 4));
            double dout = base_dist(ya, yb, BaseMetric::euclidean);
            if (dout > K * din) lip = false;
        }
    }
    out.push_back({"sampled regrouping-map Lipschitz ratios <= K", lip, ""});
    return out;
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
    if (suite == "metrics") return suite_metrics();
    if (suite == "hausdorff") return suite_hausdorff();
    if (suite == "shifts") return suite_shifts();
    if (suite == "tiles") return suite_tiles();
    if (suite == "conjugacy") return suite_conjugacy();
    if (suite == "cantor") return suite_cantor();
    if (suite == "all") {
        std::vector<CheckResult> out;
        for (const char* s :
             {"metrics", "hausdorff", "shifts", "tiles", "conjugacy", "cantor"}) {
            auto r = run_suite(s);
            out.insert(out.end(), r.begin(), r.end());
        }
        return out;
    }
    throw std::invalid_argument("unknown suite: " + suite);
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.pass; });
}

}  // namespace hutchinf
