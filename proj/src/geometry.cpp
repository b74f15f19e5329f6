#include "hutchinf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace hutchinf {

namespace {

void check_dims(const Point& x, const Point& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("base_dist: dimension mismatch");
}

}  // namespace

double base_dist(const Point& x, const Point& y, BaseMetric m) {
    return cmp_to_dist(base_dist_cmp(x, y, m), m);
}

double base_dist_cmp(const Point& x, const Point& y, BaseMetric m) {
    check_dims(x, y);
    switch (m) {
        case BaseMetric::euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                double d = x[i] - y[i];
                s += d * d;
            }
            return s;
        }
        case BaseMetric::maximum: {
            double mx = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                mx = std::max(mx, std::abs(x[i] - y[i]));
            return mx;
        }
        case BaseMetric::absolute_1d:
            if (x.size() != 1)
                throw std::invalid_argument("absolute_1d metric needs dimension 1");
            return std::abs(x[0] - y[0]);
    }
    throw std::logic_error("unreachable");
}

double cmp_to_dist(double c, BaseMetric m) {
    return m == BaseMetric::euclidean ? std::sqrt(c) : c;
}

// ---------------------------------------------------------------------------
// Spatial grid for exact nearest-neighbour queries (ring search).

namespace {

struct GridIndex {
    const std::vector<Point>* pts = nullptr;
    BaseMetric metric = BaseMetric::euclidean;
    int dim = 0;
    double cell = 1.0;
    Point lo;
    std::vector<std::int64_t> ncells;
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> buckets;

    void build(const std::vector<Point>& points, BaseMetric m) {
        pts = &points;
        metric = m;
        dim = static_cast<int>(points.front().size());
        lo.assign(dim, std::numeric_limits<double>::infinity());
        Point hi(dim, -std::numeric_limits<double>::infinity());
        for (const Point& p : points)
            for (int d = 0; d < dim; ++d) {
                lo[d] = std::min(lo[d], p[d]);
                hi[d] = std::max(hi[d], p[d]);
            }
        double extent = 0.0;
        for (int d = 0; d < dim; ++d) extent = std::max(extent, hi[d] - lo[d]);
        double target = std::max(1.0, std::floor(std::pow(
                                           static_cast<double>(points.size()),
                                           1.0 / dim)));
        cell = extent > 0 ? extent / target : 1.0;
        if (!(cell > 0)) cell = 1.0;
        ncells.assign(dim, 1);
        for (int d = 0; d < dim; ++d)
            ncells[d] = static_cast<std::int64_t>(
                            std::floor((hi[d] - lo[d]) / cell)) +
                        1;
        for (std::uint32_t i = 0; i < points.size(); ++i)
            buckets[key_of(points[i])].push_back(i);
    }

    std::int64_t coord(const Point& p, int d) const {
        auto c = static_cast<std::int64_t>(std::floor((p[d] - lo[d]) / cell));
        return std::clamp<std::int64_t>(c, 0, ncells[d] - 1);
    }

    std::int64_t key(const std::vector<std::int64_t>& c) const {
        std::int64_t k = 0;
        for (int d = 0; d < dim; ++d) k = k * ncells[d] + c[d];
        return k;
    }

    std::int64_t key_of(const Point& p) const {
        std::int64_t k = 0;
        for (int d = 0; d < dim; ++d) k = k * ncells[d] + coord(p, d);
        return k;
    }

    // Exact nearest distance from q to the indexed cloud, in cmp domain.
    double nearest_cmp(const Point& q) const {
        std::vector<std::int64_t> c(dim), cur(dim);
        for (int d = 0; d < dim; ++d) c[d] = coord(q, d);
        double best = std::numeric_limits<double>::infinity();
        std::int64_t max_ring = 0;
        for (int d = 0; d < dim; ++d)
            max_ring = std::max<std::int64_t>(
                max_ring, std::max(c[d], ncells[d] - 1 - c[d]));
        for (std::int64_t r = 0; r <= max_ring; ++r) {
            // Points in cells at Chebyshev ring >= r are at least
            // (r-1)*cell away (the query sits somewhere inside its own cell).
            double lb = static_cast<double>(r - 1) * cell;
            double lb_cmp = metric == BaseMetric::euclidean ? lb * lb : lb;
            if (r > 1 && best <= lb_cmp) break;
            scan_ring(q, c, cur, 0, r, false, best);
        }
        return best;
    }

    void scan_ring(const Point& q, const std::vector<std::int64_t>& c,
                   std::vector<std::int64_t>& cur, int d, std::int64_t r,
                   bool boundary, double& best) const {
        if (d == dim) {
            if (r > 0 && !boundary) return;  // interior already visited
            auto it = buckets.find(key(cur));
            if (it == buckets.end()) return;
            for (std::uint32_t i : it->second)
                best = std::min(best, base_dist_cmp(q, (*pts)[i], metric));
            return;
        }
        for (std::int64_t o = -r; o <= r; ++o) {
            std::int64_t v = c[d] + o;
            if (v < 0 || v >= ncells[d]) continue;
            cur[d] = v;
            scan_ring(q, c, cur, d + 1, r, boundary || std::abs(o) == r, best);
        }
    }
};

double directed_cmp_brute(const FiniteSet& a, const FiniteSet& b, BaseMetric m) {
    double worst = 0.0;
    for (const Point& p : a.points()) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& q : b.points())
            best = std::min(best, base_dist_cmp(p, q, m));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

FiniteSet::FiniteSet(std::vector<Point> pts, double dedup_tol, BaseMetric m) {
    if (pts.empty()) throw std::invalid_argument("FiniteSet: empty point set");
    if (dedup_tol < 0) throw std::invalid_argument("FiniteSet: negative dedup_tol");
    dim_ = static_cast<int>(pts.front().size());
    for (const Point& p : pts) {
        if (static_cast<int>(p.size()) != dim_)
            throw std::invalid_argument("FiniteSet: mixed dimensions");
        for (double v : p)
            if (!std::isfinite(v))
                throw std::invalid_argument("FiniteSet: non-finite coordinate");
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (dedup_tol == 0.0) {
        points_ = std::move(pts);
        dedup_tol_ = 0.0;
        return;
    }
    FiniteSet exact(pts, 0.0);
    // Reuse the greedy eps-net pass for tolerance-based dedup.
    *this = epsnet_prune(exact, dedup_tol, m);
    dedup_tol_ = dedup_tol;
}

double hausdorff_bruteforce(const FiniteSet& a, const FiniteSet& b, BaseMetric m) {
    double c = std::max(directed_cmp_brute(a, b, m), directed_cmp_brute(b, a, m));
    return cmp_to_dist(c, m);
}

double hausdorff_grid(const FiniteSet& a, const FiniteSet& b, BaseMetric m) {
    GridIndex ib;
    ib.build(b.points(), m);
    double worst = 0.0;
    for (const Point& p : a.points()) worst = std::max(worst, ib.nearest_cmp(p));
    GridIndex ia;
    ia.build(a.points(), m);
    for (const Point& q : b.points()) worst = std::max(worst, ia.nearest_cmp(q));
    return cmp_to_dist(worst, m);
}

double hausdorff(const FiniteSet& a, const FiniteSet& b, BaseMetric m) {
    if (a.size() * b.size() <= 64 * 64) return hausdorff_bruteforce(a, b, m);
    return hausdorff_grid(a, b, m);
}

FiniteSet epsnet_prune(const FiniteSet& a, double eps, BaseMetric m) {
    if (eps < 0) throw std::invalid_argument("epsnet_prune: negative eps");
    if (eps == 0.0) return a;
    const auto& pts = a.points();  // already lexicographically sorted
    const int dim = a.dim();

    double eps_cmp = m == BaseMetric::euclidean ? eps * eps : eps;
    // Grid over kept points, cell size eps; neighbours live within +-1 ring
    // for the maximum metric and +-ceil(1) rings for euclidean.
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> cells;
    Point lo = pts.front();
    std::vector<std::int64_t> span(dim, 1);
    {
        Point hi = pts.front();
        for (const Point& p : pts)
            for (int d = 0; d < dim; ++d) {
                lo[d] = std::min(lo[d], p[d]);
                hi[d] = std::max(hi[d], p[d]);
            }
        for (int d = 0; d < dim; ++d)
            span[d] = static_cast<std::int64_t>(std::floor((hi[d] - lo[d]) / eps)) + 1;
    }
    auto cell_key = [&](const std::vector<std::int64_t>& c) {
        std::int64_t k = 0;
        for (int d = 0; d < dim; ++d) k = k * span[d] + c[d];
        return k;
    };
    auto coords = [&](const Point& p) {
        std::vector<std::int64_t> c(dim);
        for (int d = 0; d < dim; ++d)
            c[d] = std::clamp<std::int64_t>(
                static_cast<std::int64_t>(std::floor((p[d] - lo[d]) / eps)), 0,
                span[d] - 1);
        return c;
    };

    std::vector<Point> kept;
    std::vector<std::int64_t> nb(dim);
    for (const Point& p : pts) {
        auto c = coords(p);
        bool covered = false;
        // Examine the 3^dim neighbourhood (cell size == eps covers the ball).
        std::vector<int> off(dim, -1);
        while (true) {
            bool in_range = true;
            for (int d = 0; d < dim; ++d) {
                nb[d] = c[d] + off[d];
                if (nb[d] < 0 || nb[d] >= span[d]) { in_range = false; break; }
            }
            if (in_range) {
                auto it = cells.find(cell_key(nb));
                if (it != cells.end()) {
                    for (std::uint32_t i : it->second)
                        if (base_dist_cmp(p, kept[i], m) <= eps_cmp) {
                            covered = true;
                            break;
                        }
                }
            }
            if (covered) break;
            int d = 0;
            while (d < dim && off[d] == 1) off[d++] = -1;
            if (d == dim) break;
            ++off[d];
        }
        if (!covered) {
            kept.push_back(p);
            cells[cell_key(c)].push_back(static_cast<std::uint32_t>(kept.size() - 1));
        }
    }
    FiniteSet out(std::move(kept), 0.0);
    return out;
}

double diam_exact(const FiniteSet& a, BaseMetric m) {
    double c = 0.0;
    const auto& pts = a.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            c = std::max(c, base_dist_cmp(pts[i], pts[j], m));
    return cmp_to_dist(c, m);
}

double diam_upper(const FiniteSet& a, BaseMetric m) {
    const auto& pts = a.points();
    int dim = a.dim();
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) {
        double lo = pts.front()[d], hi = lo;
        for (const Point& p : pts) {
            lo = std::min(lo, p[d]);
            hi = std::max(hi, p[d]);
        }
        double e = hi - lo;
        acc = m == BaseMetric::euclidean ? acc + e * e : std::max(acc, e);
    }
    return m == BaseMetric::euclidean ? std::sqrt(acc) : acc;
}

FiniteSet scale_set(const FiniteSet& a, double s) {
    std::vector<Point> out = a.points();
    for (Point& p : out)
        for (double& v : p) v *= s;
    return FiniteSet(std::move(out));
}

FiniteSet translate_set(const FiniteSet& a, const Point& b) {
    std::vector<Point> out = a.points();
    for (Point& p : out)
        for (std::size_t d = 0; d < p.size(); ++d) p[d] += b[d];
    return FiniteSet(std::move(out));
}

FiniteSet union_sets(const std::vector<FiniteSet>& sets) {
    std::vector<Point> all;
    for (const FiniteSet& s : sets)
        all.insert(all.end(), s.points().begin(), s.points().end());
    return FiniteSet(std::move(all));
}

FiniteSet minkowski_sum(const FiniteSet& a, const FiniteSet& b) {
    std::vector<Point> out;
    out.reserve(a.size() * b.size());
    for (const Point& p : a.points())
        for (const Point& q : b.points()) {
            Point r = p;
            for (std::size_t d = 0; d < r.size(); ++d) r[d] += q[d];
            out.push_back(std::move(r));
        }
    return FiniteSet(std::move(out));
}

}  // namespace hutchinf
