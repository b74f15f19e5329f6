#include "hutchinf/engine.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace hutchinf;

namespace {

// B = {1/(2j) : j <= jmax} u {0, 1}, built by halving the grid values so the
// set equality checks are bitwise.
FiniteSet expected_b(int jmax) {
    std::vector<Point> pts{{0.0}, {1.0}};
    for (int j = 1; j <= jmax; ++j) pts.push_back({0.5 * (1.0 / j)});
    return FiniteSet(std::move(pts));
}

FiniteSet attractor_grid(int nmax) {  // {2^-n : n <= nmax} u {0}
    std::vector<Point> pts{{0.0}};
    for (int n = 0; n <= nmax; ++n) pts.push_back({std::ldexp(1.0, -n)});
    return FiniteSet(std::move(pts));
}

}  // namespace

TEST_CASE("hutchinson: sup-pair on the truncated reciprocal grid") {
    GifsSystem sys = sup_pair_system(64);
    SetSeq seeds = SetSeq::constant(reciprocal_grid(64));
    FiniteSet k1 = hutchinson(sys, seeds, 0.0, 4);
    CHECK(k1 == expected_b(64));
}

TEST_CASE("hutchinson: constant maps send singletons to singletons") {
    GifsSystem sys;
    sys.name = "const";
    sys.dim = 1;
    sys.seed_point = {0.0};
    GifsMap c = GifsMap::constant({3.0});
    c.with_cert(*derive_cert(c, MetricParams::sup(0.5)));
    sys.maps = {std::move(c)};
    sys.flags = {MapFlags{}};
    SetSeq seeds = SetSeq::constant(FiniteSet::singleton({5.0}));
    FiniteSet img = hutchinson(sys, seeds, 0.0, 4);
    CHECK(img == FiniteSet::singleton({3.0}));
}

TEST_CASE("hutchinson: planar system on singleton seeds") {
    GifsSystem sys = planar_ex5();
    SetSeq seeds = SetSeq::constant(FiniteSet::singleton({0.0, 0.0}));
    FiniteSet k1 = hutchinson(sys, seeds, 0.0, 8);
    FiniteSet expect({{0.0, 0.0}, {0.0, 0.5}, {0.5, 0.0}, {0.5, 0.5}});
    CHECK(k1 == expect);
    CHECK_THROWS_AS(hutchinson(sys, seeds, 0.0, 0), std::invalid_argument);
}

TEST_CASE("hutchinson rejects code_index maps") {
    GifsSystem sys;
    sys.name = "codes";
    sys.dim = 2;
    sys.seed_point = {0.0, 0.0};
    GifsMap f = GifsMap::code_index(1);
    f.with_cert(LipCert{MetricParams::sup(0.5), 0.5});
    sys.maps = {std::move(f)};
    sys.flags = {MapFlags{}};
    SetSeq seeds = SetSeq::constant(FiniteSet::singleton({0.0, 0.0}));
    CHECK_THROWS_AS(hutchinson(sys, seeds, 0.0, 4), std::invalid_argument);
}

TEST_CASE("generalized iterates are stationary at B for the sup-pair system") {
    GifsSystem sys = sup_pair_system(64);
    SetSeq seeds = SetSeq::constant(reciprocal_grid(64));
    auto iterates = gen_iterate_sets(sys, seeds, 6, 0.0, 4);
    FiniteSet b = expected_b(64);
    for (int k = 2; k <= 6; ++k) CHECK(iterates[k - 1] == b);

    // the non-convergence witness: H(K^k, A_F) = 1/24, attained at 1/6
    FiniteSet af = attractor_grid(7);
    for (int k = 2; k <= 6; ++k) {
        double h = hausdorff(iterates[k - 1], af, sys.base);
        CHECK(h == hausdorff_bruteforce(iterates[k - 1], af, sys.base));
        CHECK(std::abs(h - 1.0 / 24.0) <= 1e-15);
    }
}

TEST_CASE("cardinality of generalized iterates from singleton seeds") {
    GifsSystem sys = planar_ex5();
    SetSeq seeds = SetSeq::constant(FiniteSet::singleton({0.0, 0.0}));
    auto iterates = gen_iterate_sets(sys, seeds, 3, 0.0, 8);
    CHECK(iterates[0].size() == 4);
    CHECK(iterates[1].size() <= 16);   // n^{2^{k-1}}, n = 4, k = 2
    CHECK(iterates[2].size() <= 256);  // k = 3
    // k = 1 equals a single operator application
    CHECK(iterates[0] == hutchinson(sys, seeds, 0.0, 8));
}

TEST_CASE("secelean iterates converge where generalized iterates stall") {
    GifsSystem sys = sup_pair_system(64);
    SetSeq seeds = SetSeq::constant(reciprocal_grid(64));
    FiniteSet y6 = secelean_iterate(sys, seeds, 6, 0.0, 4);
    FiniteSet af = attractor_grid(7);
    CHECK(hausdorff(y6, af, sys.base) <= std::ldexp(1.0, -6) + 1.0 / 64.0);

    // constant-only systems are stationary immediately
    GifsSystem cs;
    cs.name = "const";
    cs.dim = 1;
    cs.seed_point = {0.0};
    GifsMap c = GifsMap::constant({2.0});
    c.with_cert(*derive_cert(c, MetricParams::sup(0.5)));
    cs.maps = {std::move(c)};
    cs.flags = {MapFlags{}};
    for (int k = 0; k <= 3; ++k)
        CHECK(secelean_iterate(cs, SetSeq::constant(FiniteSet::singleton({9.0})),
                                k, 0.0, 4) == FiniteSet::singleton({2.0}));
}

TEST_CASE("both iteration schemes reach the planar attractor") {
    GifsSystem sys = planar_ex5();
    SetSeq seeds = SetSeq::constant(FiniteSet::singleton({0.0, 0.0}));
    auto gen = gen_iterate_sets(sys, seeds, 6, 1e-3, 8);
    FiniteSet sec = secelean_iterate(sys, seeds, 6, 1e-3, 8);
    // both carry error budgets around L^k; compare within a combined budget
    double h = hausdorff(gen.back(), sec, sys.base);
    CHECK(h <= 2.0 * std::pow(0.2, 5) + 3e-2);
}

TEST_CASE("error_bound formula values") {
    CHECK(error_bound(MetricParams::sup(0.5), 0.2, 3, 1.0) ==
          doctest::Approx(0.1).epsilon(1e-15));
    // k = 1: exponent zero
    CHECK(error_bound(MetricParams::sup(0.5), 0.2, 1, 2.0) ==
          doctest::Approx(0.2 / 0.5 * 2.0).epsilon(1e-15));
    CHECK_THROWS_AS(error_bound(MetricParams::lp(2.0, 0.9), 0.5, 2, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(error_bound(MetricParams::sup(0.5), 1.0, 2, 1.0),
                    std::invalid_argument);
}

TEST_CASE("operator contraction under the certified constant") {
    std::mt19937_64 rng(31);
    GifsSystem sys = planar_ex5();
    MetricParams mp = sys.cert_params();
    const int M = 20;
    for (int t = 0; t < 20; ++t) {
        std::vector<FiniteSet> ka, kd;
        int n = 1 + t % 3;
        for (int i = 0; i < n; ++i) {
            ka.push_back(testutil::random_set(rng, 2, 4));
            kd.push_back(testutil::random_set(rng, 2, 4));
        }
        SetSeq ks(ka, FiniteSet::singleton(testutil::random_point(rng, 2)));
        SetSeq ds(kd, FiniteSet::singleton(testutil::random_point(rng, 2)));
        auto ra = hutchinson_tracked(sys, ks, 0.0, M);
        auto rd = hutchinson_tracked(sys, ds, 0.0, M);
        double lhs = hausdorff(ra.set, rd.set, sys.base);
        double rhs = sys.L_sys() * hausdorff_seq(ks, ds, mp, sys.base) + ra.slack +
                     rd.slack + 1e-12;
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("monotone convergence of the planar iterates") {
    GifsSystem sys = planar_ex5();
    SetSeq seeds = SetSeq::constant(FiniteSet::singleton({0.0, 0.0}));
    const double eps = 1e-4;
    auto iterates = gen_iterate_sets_tracked(sys, seeds, 6, eps, 10);
    double factor = std::max(sys.L_sys(), sys.cert_params().q);
    std::vector<double> h;
    for (int k = 1; k < 6; ++k)
        h.push_back(hausdorff(iterates[k].set, iterates[k - 1].set, sys.base));
    for (std::size_t i = 2; i + 1 < h.size(); ++i) {
        double slack = 2.0 * (iterates[i + 1].slack + iterates[i].slack);
        CHECK(h[i + 1] <= factor * h[i] + slack);
    }
}

TEST_CASE("truncated systems and the order-m iteration") {
    GifsSystem sys = planar_ex5();
    OrderMGifs g1 = truncated_system(sys, 1, {0.0, 0.0});
    CHECK(g1.contraction == doctest::Approx(0.1).epsilon(1e-15));

    // order-1 truncation acts like the classical IFS x -> x/10 + b
    FiniteSet seed = FiniteSet::singleton({0.0, 0.0});
    FiniteSet k2 = gifs_iterate(g1, {seed}, 1, 0.0);
    CHECK(k2.size() == 16);

    // constant GIFS are stationary after one step
    GifsSystem cs;
    cs.name = "const";
    cs.dim = 1;
    cs.seed_point = {0.0};
    GifsMap c = GifsMap::constant({1.5});
    c.with_cert(*derive_cert(c, MetricParams::sup(0.5)));
    cs.maps = {std::move(c)};
    cs.flags = {MapFlags{}};
    OrderMGifs gc = truncated_system(cs, 2, {0.0});
    CHECK(gifs_iterate(gc, {FiniteSet::singleton({4.0}), FiniteSet::singleton({5.0})},
                       3, 0.0) == FiniteSet::singleton({1.5}));

    // systems without (Q)/(P) are rejected
    CHECK_THROWS_AS(truncated_system(sup_pair_system(), 2, {0.0}),
                    std::invalid_argument);
}

TEST_CASE("truncated attractors inherit the anchor's fixed point") {
    GifsSystem sys = planar_ex5();
    // (0,0) is the generalized fixed point of the first map
    for (int m = 1; m <= 4; ++m) {
        OrderMGifs g = truncated_system(sys, m, {0.0, 0.0});
        std::vector<FiniteSet> seeds(m, FiniteSet::singleton({0.0, 0.0}));
        // the order-m scheme contracts once per m applications
        FiniteSet cloud = gifs_iterate(g, seeds, 4 * m + 4, 2e-4);
        double best = 1e9;
        for (const Point& p : cloud.points())
            best = std::min(best, base_dist(p, {0.0, 0.0}, sys.base));
        CHECK(best <= 1e-12);
    }
}

TEST_CASE("successive truncated attractors converge geometrically") {
    GifsSystem sys = planar_ex5();
    const double eps = 3e-4;
    auto approx = [&](int m) {
        OrderMGifs g = truncated_system(sys, m, {0.0, 0.0});
        std::vector<FiniteSet> seeds(m, FiniteSet::singleton({0.0, 0.0}));
        // the order-m scheme contracts once per m applications
        return gifs_iterate(g, seeds, 4 * m + 4, eps);
    };
    std::vector<double> gaps;
    FiniteSet prev = approx(1);
    for (int m = 2; m <= 6; ++m) {
        FiniteSet cur = approx(m);
        gaps.push_back(hausdorff(prev, cur, sys.base));
        prev = cur;
    }
    // tail_error decays with ratio 1/4; allow pruning noise on top
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
        CHECK(gaps[i + 1] <= 0.5 * gaps[i] + 10 * eps);
}

TEST_CASE("attractor: planar self-consistency") {
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.05);
    CHECK(a.err <= 0.05);
    FiniteSet image = hutchinson(sys, SetSeq::constant(a.cloud), a.prune_eps,
                                 a.prefix_depth);
    CHECK(hausdorff(image, a.cloud, sys.base) <= 2.0 * a.err);
}

TEST_CASE("attractor: single constant map") {
    GifsSystem cs;
    cs.name = "const";
    cs.dim = 2;
    cs.seed_point = {0.0, 0.0};
    GifsMap c = GifsMap::constant({1.0, 2.0});
    c.with_cert(*derive_cert(c, MetricParams::sup(0.5)));
    cs.maps = {std::move(c)};
    cs.flags = {MapFlags{}};
    AttractorApprox a = attractor(cs, 0.01);
    CHECK(a.cloud == FiniteSet::singleton({1.0, 2.0}));
    CHECK(a.err == 0.0);
}

TEST_CASE("attractor: the lone sup map contracts to zero") {
    GifsSystem sys = half_sup_system(64);
    AttractorApprox a = attractor(sys, 1e-3);
    CHECK(a.err <= 1e-3);
    CHECK(hausdorff(a.cloud, FiniteSet::singleton({0.0}), sys.base) <= 1e-3);
}

TEST_CASE("attractor invariance holds for every produced approximation") {
    for (double tol : {0.1, 0.05}) {
        GifsSystem sys = planar_ex5();
        AttractorApprox a = attractor(sys, tol);
        FiniteSet image = hutchinson(sys, SetSeq::constant(a.cloud), a.prune_eps,
                                     a.prefix_depth);
        CHECK(hausdorff(image, a.cloud, sys.base) <= 2.0 * a.err);
    }
}

TEST_CASE("sup-interval iterates keep the stationary endpoints") {
    GifsSystem sys = sup_interval_system();
    SetSeq seeds = SetSeq::constant(interval_grid(0.0, 2.0, 128));
    auto iterates = gen_iterate_sets(sys, seeds, 4, 1.0 / 128.0, 4);
    for (int k = 2; k <= 4; ++k) {
        const auto& pts = iterates[k - 1].points();
        CHECK(pts.front()[0] == 0.0);
        CHECK(pts.back()[0] == 1.25);
    }
}

TEST_CASE("convergence table stays within its bounds") {
    GifsSystem sys = planar_ex5();
    SetSeq seeds = SetSeq::constant(FiniteSet::singleton({0.0, 0.0}));
    auto rows = convergence_table(sys, seeds, 6, 1e-3, 8);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) CHECK(r.within);
}
