#include "hutchinf/code_space.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <string>

using namespace hutchinf;

namespace {

CodePoint all_default_code(int symbol, int alphabet) {
    return make_code_point({}, symbol, alphabet);
}

TailSeq<CodePoint> random_code_args(std::mt19937_64& rng, int depth, int alphabet,
                                    int def) {
    std::uniform_int_distribution<int> len(0, 2);
    std::vector<CodePoint> prefix;
    int n = len(rng);
    for (int i = 0; i < n; ++i)
        prefix.push_back(testutil::random_code_point(rng, depth, alphabet, def));
    return {std::move(prefix),
            testutil::random_code_point(rng, depth, alphabet, def)};
}

}  // namespace

TEST_CASE("code_dist basics and the diameter cross-check") {
    std::mt19937_64 rng(17);
    CodePoint a = testutil::random_code_point(rng, 3, 4, 1);
    CHECK(code_dist(a, a, MetricParams::sup(0.5)) == 0.0);
    CHECK(code_dist(a, a, MetricParams::lp(2.0, 0.5)) == 0.0);

    // differing only in the level-0 entry: discrete distance with weight 1
    CodePoint b = a;
    b.entries[0] = CodeTree::leaf(a.entries[0].leaf_value() % 4 + 1);
    CHECK(code_dist(a, b, MetricParams::sup(0.5)) == 1.0);

    // two all-default points over different symbols realize the diameter
    CodePoint one = all_default_code(1, 2);
    CodePoint two = all_default_code(2, 2);
    for (double p : {1.0, 2.0}) {
        MetricParams mp = MetricParams::lp(p, 0.5);
        // diam of Omega_k under d_{k,p,q} is (1-q)^{-k/p}
        for (int k = 0; k <= 4; ++k) {
            CodeTree ta = CodeTree::all_default(k, 1);
            CodeTree tb = CodeTree::all_default(k, 2);
            double dk = std::pow(
                nested_lp_pow(ta, tb, mp.q, mp.p,
                              [](int x, int y) { return x == y ? 0.0 : 1.0; }),
                1.0 / mp.p);
            CHECK(dk == doctest::Approx(std::pow(1.0 - mp.q, -k / mp.p))
                            .epsilon(1e-13));
        }
        CHECK(code_dist(one, two, mp) ==
              doctest::Approx(std::pow(2.0, 1.0 / p)).epsilon(1e-13));
    }
}

TEST_CASE("shift transposes defaults to defaults") {
    CodePoint c = all_default_code(2, 3);
    CodePoint out = shift(3, TailSeq<CodePoint>::constant(c));
    CHECK(out.entry(0).leaf_value() == 3);
    for (int k = 1; k <= 4; ++k) CHECK(out.entry(k) == CodeTree::all_default(k, 2));
}

TEST_CASE("reconstruction identity alpha = tau_{alpha_0}(slices)") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        CodePoint a = testutil::random_code_point(rng, 3, 4, 1);
        int w = slice_width(a);
        std::vector<CodePoint> slices;
        for (int i = 0; i < w; ++i) slices.push_back(slice(a, i));
        CodePoint rebuilt = shift(a.entry(0).leaf_value(),
                                  TailSeq<CodePoint>(slices, slice(a, w)));
        CHECK(rebuilt == a);
    }
}

TEST_CASE("shift Lipschitz ratios are exact") {
    std::mt19937_64 rng(29);
    MetricParams sup = MetricParams::sup(0.5);
    MetricParams lp = MetricParams::lp(2.0, 0.5);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        auto a = random_code_args(rng, 2, 3, 1);
        auto b = random_code_args(rng, 2, 3, 1);
        double din = code_seq_dist(a, b, sup);
        if (din > 0) {
            double dout = code_dist(shift(2, a), shift(2, b), sup);
            CHECK(std::abs(dout - sup.q * din) <= 1e-12 * std::max(1.0, din));
            ++checked;
        }
        double din2 = code_seq_dist(a, b, lp);
        if (din2 > 0) {
            double dout2 = code_dist(shift(1, a), shift(1, b), lp);
            double ratio = std::pow((1.0 - lp.q) / 2.0, 1.0 / lp.p);
            CHECK(std::abs(dout2 - ratio * din2) <= 1e-12 * std::max(1.0, din2));
        }
    }
    CHECK(checked >= 150);
}

TEST_CASE("slice inverts shift and matches explicit arrays") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 50; ++t) {
        auto args = random_code_args(rng, 3, 3, 1);
        CodePoint shifted = shift(1, args);
        for (std::size_t i = 0; i < args.prefix_size() + 2; ++i)
            CHECK(slice(shifted, static_cast<int>(i)) == args.at(i));
    }

    CodePoint d = all_default_code(2, 2);
    CHECK(slice(d, 5) == d);

    // explicit illustration: alpha(0) picks the 0-th column of every level
    CodeTree a1 = CodeTree::node({{0, CodeTree::leaf(2)}, {1, CodeTree::leaf(1)}},
                                 CodeTree::leaf(1));
    CodeTree a2 = CodeTree::node(
        {{0, CodeTree::node({{0, CodeTree::leaf(2)}}, CodeTree::leaf(1))}},
        CodeTree::all_default(1, 1));
    CodePoint alpha = make_code_point({CodeTree::leaf(1), a1, a2}, 1, 2);
    CodePoint s0 = slice(alpha, 0);
    CHECK(s0.entry(0).leaf_value() == 2);  // alpha_1^{(0)}
    CHECK(s0.entry(1) ==
          CodeTree::node({{0, CodeTree::leaf(2)}}, CodeTree::leaf(1)));
    CodePoint s1 = slice(alpha, 1);
    CHECK(s1.entry(0).leaf_value() == 1);
    CHECK(s1.entry(1) == CodeTree::all_default(1, 1));
}

TEST_CASE("compose_address base case and zero propagation") {
    GifsSystem sys = planar_ex5();
    // depth 0: plain map evaluation
    NestedSeq<Point> ones = diagonal_embed(TailSeq<Point>::constant({1.0, 1.0}), 1);
    Point v = compose_address(sys, make_address({CodeTree::leaf(4)}), ones);
    CHECK(v[0] == doctest::Approx(19.0 / 30.0).epsilon(1e-14));

    // depth 1 on the zero tree: zeros propagate through every composition
    NestedSeq<Point> zeros = diagonal_embed(TailSeq<Point>::constant({0.0, 0.0}), 2);
    Address alpha = make_address({CodeTree::leaf(1), CodeTree::all_default(1, 1)});
    Point z = compose_address(sys, alpha, zeros);
    CHECK(z == Point{0.0, 0.0});

    CHECK_THROWS_AS(compose_address(sys, alpha, ones), std::invalid_argument);
}

TEST_CASE("composition Lipschitz decay") {
    std::mt19937_64 rng(41);
    GifsSystem sys = planar_ex5();
    MetricParams mp = sys.cert_params();
    double L = sys.L_sys();
    for (int t = 0; t < 60; ++t) {
        int depth = t % 2 + 1;
        std::vector<CodeTree> parts;
        for (int j = 0; j <= depth; ++j)
            parts.push_back(testutil::random_code_tree(rng, j, 4));
        Address alpha = make_address(std::move(parts));

        auto tree = [&](auto&& self, int level) -> NestedSeq<Point> {
            if (level == 0) return NestedSeq<Point>::leaf(testutil::random_point(rng, 2));
            NestedSeq<Point>::ChildList kids;
            if (t % 3 == 0) kids.emplace_back(0, self(self, level - 1));
            return NestedSeq<Point>::node(std::move(kids), self(self, level - 1));
        };
        NestedSeq<Point> x = tree(tree, depth + 1);
        NestedSeq<Point> y = tree(tree, depth + 1);
        double din = level_dist(x, y, mp, sys.base);
        if (din == 0) continue;
        double dout = base_dist(compose_address(sys, alpha, x),
                                compose_address(sys, alpha, y), sys.base);
        CHECK(dout <= std::pow(L, depth + 1) * din + 1e-10);
    }
}

TEST_CASE("tiles: invariance, diameter decay, nested refinement") {
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.05);
    double diam = diam_exact(a.cloud, sys.base);
    double L = sys.L_sys();

    std::vector<FiniteSet> parts;
    for (int i = 1; i <= 4; ++i) {
        Tile t = tile(sys, a, make_address({CodeTree::leaf(i)}));
        CHECK(diam_exact(t.cloud, sys.base) <= t.diam_bound + 1e-12);
        parts.push_back(t.cloud);
    }
    // depth-0 tiles cover the attractor up to the sampling slack
    double h = hausdorff(union_sets(parts), a.cloud, sys.base);
    CHECK(h <= 2.0 * a.err + L * L * diam);

    // nested refinement: a child tile sits inside its parent within tolerance
    Address parent = make_address({CodeTree::leaf(2)});
    Tile tp = tile(sys, a, parent);
    for (int s = 1; s <= 4; ++s) {
        Tile tc = tile(sys, a, make_address({CodeTree::leaf(2),
                                             CodeTree::all_default(1, s)}));
        double worst = 0.0;
        for (const Point& p : tc.cloud.points()) {
            double best = 1e9;
            for (const Point& q : tp.cloud.points())
                best = std::min(best, base_dist(p, q, sys.base));
            worst = std::max(worst, best);
        }
        CHECK(worst <= 2.0 * a.err + L * L * diam);
    }
}

namespace {

// trees with one explicit child at index 0, recursively: a small exhaustive
// family that still refines every parent tile
std::vector<CodeTree> narrow_family(int level, int alphabet) {
    if (level == 0) {
        std::vector<CodeTree> out;
        for (int s = 1; s <= alphabet; ++s) out.push_back(CodeTree::leaf(s));
        return out;
    }
    std::vector<CodeTree> sub = narrow_family(level - 1, alphabet);
    std::vector<CodeTree> out;
    for (const CodeTree& c0 : sub)
        for (const CodeTree& def : sub)
            out.push_back(CodeTree::node({{0, c0}}, def));
    return out;
}

}  // namespace

TEST_CASE("tile cover at depths one and two") {
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.1);
    double diam = diam_exact(a.cloud, sys.base);
    double L = sys.L_sys();

    for (int depth = 1; depth <= 2; ++depth) {
        std::vector<std::vector<CodeTree>> families;
        for (int j = 1; j <= depth; ++j) families.push_back(narrow_family(j, 4));
        std::vector<FiniteSet> parts;
        std::vector<int> pick(depth, 0);
        for (int head = 1; head <= 4; ++head) {
            std::fill(pick.begin(), pick.end(), 0);
            while (true) {
                std::vector<CodeTree> parts_addr{CodeTree::leaf(head)};
                for (int j = 0; j < depth; ++j)
                    parts_addr.push_back(families[j][pick[j]]);
                parts.push_back(
                    tile(sys, a, make_address(std::move(parts_addr)), 4).cloud);
                int j = depth - 1;
                while (j >= 0) {
                    if (++pick[j] < static_cast<int>(families[j].size())) break;
                    pick[j] = 0;
                    --j;
                }
                if (j < 0) break;
            }
        }
        double h = hausdorff(union_sets(parts), a.cloud, sys.base);
        CHECK(h <= 2.0 * a.err + std::pow(L, depth + 1) * diam);
    }
}

TEST_CASE("pi sends constant codes to generalized fixed points") {
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.05);
    for (int i = 1; i <= 4; ++i) {
        auto [target, tb] = gen_fixed_point(
            sys.maps[i - 1], TailSeq<Point>::constant({0.1, 0.1}), 1e-11, sys.base);
        PiResult r = pi_point(sys, a, all_default_code(i, 4), 3);
        CHECK(base_dist(r.point, target, sys.base) <= r.err + 1e-11);
    }
}

TEST_CASE("pi err decays by the contraction factor per depth") {
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.05);
    CodePoint c = all_default_code(3, 4);
    double prev = -1.0;
    for (int depth = 0; depth <= 3; ++depth) {
        PiResult r = pi_point(sys, a, c, depth);
        if (depth > 0) CHECK(r.err <= sys.L_sys() * prev + 4.0 * a.err + 1e-12);
        prev = r.err;
    }
}

TEST_CASE("pi surjectivity by greedy address descent") {
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.1);
    double diam = diam_exact(a.cloud, sys.base);
    double L = sys.L_sys();
    auto f1 = narrow_family(1, 4);
    auto f2 = narrow_family(2, 4);

    // tiles are target-independent: enumerate them once
    std::vector<Tile> depth0, depth1;
    for (int i = 1; i <= 4; ++i)
        depth0.push_back(tile(sys, a, make_address({CodeTree::leaf(i)}), 4));
    for (int i = 1; i <= 4; ++i)
        for (const CodeTree& c1 : f1)
            depth1.push_back(tile(sys, a, make_address({CodeTree::leaf(i), c1}), 4));

    auto nearest = [&](const Tile& t, const Point& target) {
        double best = 1e9;
        for (const Point& p : t.cloud.points())
            best = std::min(best, base_dist(p, target, sys.base));
        return best;
    };

    // depth-1 greedy for every cloud point
    for (const Point& target : a.cloud.points()) {
        double best1 = 1e9;
        for (const Tile& t : depth1) best1 = std::min(best1, nearest(t, target));
        CHECK(best1 <= 2.0 * (a.err + std::pow(L, 2) * diam));
    }

    // depth-2 refinement for a subsample, extending the best depth-1 address
    std::map<std::string, std::vector<Tile>> cache;
    for (std::size_t ti = 0; ti < a.cloud.size(); ti += 8) {
        const Point& target = a.cloud.points()[ti];
        const Tile* best_tile = nullptr;
        double best1 = 1e9;
        for (const Tile& t : depth1) {
            double d = nearest(t, target);
            if (d < best1) { best1 = d; best_tile = &t; }
        }
        REQUIRE(best_tile != nullptr);
        std::string key = format_address(best_tile->address);
        auto [it, fresh] = cache.try_emplace(key);
        if (fresh) {
            for (const CodeTree& c2 : f2) {
                std::vector<CodeTree> parts = best_tile->address.parts;
                parts.push_back(c2);
                it->second.push_back(tile(sys, a, make_address(std::move(parts)), 4));
            }
        }
        double best2 = 1e9;
        for (const Tile& t : it->second) best2 = std::min(best2, nearest(t, target));
        CHECK(best2 <= 2.0 * (a.err + std::pow(L, 3) * diam));
    }
}

TEST_CASE("conjugacy: f_alpha after pi_k equals pi after tau_alpha") {
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.05);
    std::mt19937_64 rng(53);

    // depth-0 constant codes: both sides reduce to the map at a fixed point
    for (int i = 1; i <= 4; ++i) {
        TailSeq<CodePoint> codes = TailSeq<CodePoint>::constant(all_default_code(i, 4));
        ConjugacyResult r =
            conjugacy_check(sys, a, make_address({CodeTree::leaf(i)}), codes, 3);
        CHECK(r.residual <= r.budget);
    }

    // 50 random cases at depths 0 and 1
    for (int t = 0; t < 50; ++t) {
        Address alpha =
            t % 2 ? make_address({CodeTree::leaf(1 + t % 4),
                                  testutil::random_code_tree(rng, 1, 4)})
                  : make_address({CodeTree::leaf(1 + t % 4)});
        auto codes = random_code_args(rng, 3, 4, 1);
        ConjugacyResult r = conjugacy_check(sys, a, alpha, codes, 3);
        CHECK(r.residual <= r.budget);
    }
}

TEST_CASE("conjugacy residual vanishes for a constant system") {
    GifsSystem cs;
    cs.name = "const";
    cs.dim = 2;
    cs.seed_point = {0.0, 0.0};
    GifsMap c = GifsMap::constant({0.25, 0.75});
    c.with_cert(*derive_cert(c, MetricParams::sup(0.5)));
    cs.maps = {std::move(c)};
    cs.flags = {MapFlags{}};
    AttractorApprox a = attractor(cs, 0.01);
    TailSeq<CodePoint> codes = TailSeq<CodePoint>::constant(all_default_code(1, 1));
    ConjugacyResult r =
        conjugacy_check(cs, a, make_address({CodeTree::leaf(1)}), codes, 2);
    CHECK(r.residual == 0.0);
}

TEST_CASE("discrepancy bound dominates measured composition gaps") {
    std::mt19937_64 rng(59);
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.05);
    double a_diam = diam_exact(a.cloud, sys.base) + 2.0 * a.err;
    MetricParams lp = MetricParams::lp(1.0, 0.5);
    MetricParams sup = MetricParams::sup(0.5);

    Address same = make_address({CodeTree::leaf(2), CodeTree::all_default(1, 1)});
    CHECK(discrepancy_bound(same, same, a_diam, lp) == 0.0);

    Address head1 = make_address({CodeTree::leaf(1)});
    Address head2 = make_address({CodeTree::leaf(3)});
    CHECK(discrepancy_bound(head1, head2, a_diam, lp) == a_diam);

    for (int t = 0; t < 40; ++t) {
        int depth = 1 + t % 2;
        int head = 1 + t % 4;
        std::vector<CodeTree> pa{CodeTree::leaf(head)}, pb{CodeTree::leaf(head)};
        for (int j = 1; j <= depth; ++j) {
            pa.push_back(testutil::random_code_tree(rng, j, 4));
            pb.push_back(testutil::random_code_tree(rng, j, 4));
        }
        Address alpha = make_address(std::move(pa));
        Address beta = make_address(std::move(pb));

        for (int s = 0; s < 6; ++s) {
            std::uniform_int_distribution<std::size_t> pick(0, a.cloud.size() - 1);
            NestedSeq<Point> x = diagonal_embed(
                TailSeq<Point>::constant(a.cloud.points()[pick(rng)]), depth + 1);
            double gap = base_dist(compose_address(sys, alpha, x),
                                   compose_address(sys, beta, x), sys.base);
            CHECK(gap <= discrepancy_bound(alpha, beta, a_diam, lp) + 1e-9);
            CHECK(gap <= discrepancy_bound(alpha, beta, a_diam, sup) + 1e-9);
        }
    }
}

TEST_CASE("pi continuity modulus under (Q)") {
    GifsSystem sys = planar_ex5();
    AttractorApprox a = attractor(sys, 0.02);
    std::mt19937_64 rng(61);
    MetricParams lp = MetricParams::lp(1.0, 0.5);

    const double eps = 0.2;
    const int k = 2;  // tile diameters at depth k are below eps/3
    double diam = diam_exact(a.cloud, sys.base);
    CHECK(std::pow(tile_decay_factor(sys), k + 1) * (diam + 2 * a.err) <= eps / 3);
    double delta =
        std::min(1.0, eps / 3.0 * std::pow((1.0 - lp.q) / 2.0, double(k) / lp.p) / diam);

    int tested = 0;
    for (int t = 0; t < 40; ++t) {
        CodePoint x = testutil::random_code_point(rng, 3, 4, 1);
        // perturb entry 2 at a far child index (beyond the generator's 0..3
        // budget): the weight 2^{-i0} keeps the pair delta-close while the
        // codes still differ
        std::uniform_int_distribution<int> far(5, 8);
        int i0 = far(rng);
        const CodeTree& dd = x.entries[2].default_child();  // level 1
        int old_sym = dd.child(0).leaf_value();
        CodeTree replaced = CodeTree::node({{0, CodeTree::leaf(old_sym % 4 + 1)}},
                                           dd.default_child());
        CodeTree::ChildList kids = x.entries[2].explicit_children();
        kids.emplace_back(i0, replaced);
        CodePoint y = x;
        y.entries[2] = CodeTree::node(std::move(kids), dd);
        double d = code_dist(x, y, lp);
        REQUIRE(d > 0.0);
        if (d >= delta) continue;
        ++tested;
        PiResult px = pi_point(sys, a, x, 3);
        PiResult py = pi_point(sys, a, y, 3);
        CHECK(base_dist(px.point, py.point, sys.base) <=
              eps + px.err + py.err);
    }
    CHECK(tested >= 10);
}

TEST_CASE("pi discontinuity witness for the sup-pair system") {
    GifsSystem sys = sup_pair_system(64);
    AttractorApprox a = attractor(sys, 0.01);

    CodePoint limit = all_default_code(1, 2);
    MetricParams sup = MetricParams::sup(0.5);

    for (int n = 2; n <= 6; ++n) {
        // alpha_(n): the level-1 entry has a 2 at place n, 1 elsewhere
        CodeTree perturbed =
            CodeTree::node({{n, CodeTree::leaf(2)}}, CodeTree::leaf(1));
        CodePoint an = make_code_point({CodeTree::leaf(1), perturbed}, 1, 2);

        PiResult pn = pi_point(sys, a, an, 1);
        CHECK(pn.point[0] == 0.5);  // exactly 1/2 for every n

        CHECK(code_dist(an, limit, sup) ==
              doctest::Approx(std::pow(0.5, n + 1)).epsilon(1e-13));
    }
    PiResult pl = pi_point(sys, a, limit, 4);
    CHECK(pl.point[0] <= std::pow(0.5, 4));
    CHECK(std::abs(0.5 - pl.point[0]) >= 0.25);  // the gap never closes
}

TEST_CASE("address serialization round trips") {
    std::mt19937_64 rng(67);
    CHECK(format_address(parse_address("[1,[2,*1]]")) == "[1,[2,*1]]");
    Address ex = parse_address("[1,[2,*1]]");
    CHECK(ex.depth() == 1);
    CHECK(ex.head_symbol() == 1);
    CHECK(ex.parts[1].child(0).leaf_value() == 2);
    CHECK(ex.parts[1].child(7).leaf_value() == 1);

    for (int t = 0; t < 100; ++t) {
        int depth = t % 3;
        std::vector<CodeTree> parts;
        for (int j = 0; j <= depth; ++j)
            parts.push_back(testutil::random_code_tree(rng, j, 4));
        Address addr = make_address(std::move(parts));
        Address back = parse_address(format_address(addr));
        CHECK(back == addr);
    }
    CHECK_THROWS_AS(parse_address("[1,[2,1]]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_address("1,2"), std::invalid_argument);
}
