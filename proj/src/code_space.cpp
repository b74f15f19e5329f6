#include "hutchinf/code_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hutchinf {

namespace {

double discrete(int a, int b) { return a == b ? 0.0 : 1.0; }

void check_tree(const CodeTree& t, int alphabet) {
    if (t.level() == 0) {
        int v = t.leaf_value();
        if (v < 1 || v > alphabet)
            throw std::invalid_argument("code tree leaf outside alphabet");
        return;
    }
    for (const auto& [i, c] : t.explicit_children()) check_tree(c, alphabet);
    check_tree(t.default_child(), alphabet);
}

// Level-k metric on Omega_k (discrete leaf metric).
double omega_level_dist(const CodeTree& x, const CodeTree& y,
                        const MetricParams& mp) {
    if (mp.kind == MetricParams::Kind::sup)
        return nested_sup_dist(x, y, mp.q, discrete);
    return std::pow(nested_lp_pow(x, y, mp.q, mp.p, discrete), 1.0 / mp.p);
}

}  // namespace

CodeTree CodePoint::entry(int k) const {
    if (k < 0) throw std::invalid_argument("CodePoint::entry: negative index");
    if (k < prefix_depth()) return entries[k];
    return CodeTree::all_default(k, default_symbol);
}

bool CodePoint::operator==(const CodePoint& o) const {
    if (alphabet != o.alphabet) return false;
    int m = std::max(prefix_depth(), o.prefix_depth());
    for (int k = 0; k < m; ++k)
        if (!(entry(k) == o.entry(k))) return false;
    return default_symbol == o.default_symbol;
}

CodePoint make_code_point(std::vector<CodeTree> entries, int default_symbol,
                          int alphabet) {
    if (default_symbol < 1 || default_symbol > alphabet)
        throw std::invalid_argument("make_code_point: default symbol outside alphabet");
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].level() != static_cast<int>(k))
            throw std::invalid_argument("make_code_point: entry level mismatch");
        check_tree(entries[k], alphabet);
    }
    return CodePoint{std::move(entries), default_symbol, alphabet};
}

Address make_address(std::vector<CodeTree> parts) {
    if (parts.empty()) throw std::invalid_argument("make_address: empty address");
    for (std::size_t j = 0; j < parts.size(); ++j)
        if (parts[j].level() != static_cast<int>(j))
            throw std::invalid_argument("make_address: part level mismatch");
    return Address{std::move(parts)};
}

double code_dist(const CodePoint& a, const CodePoint& b,
                 const MetricParams& mp) {
    mp.validate();
    if (a.alphabet != b.alphabet)
        throw std::invalid_argument("code_dist: alphabet mismatch");
    int m = std::max(a.prefix_depth(), b.prefix_depth());
    double delta = discrete(a.default_symbol, b.default_symbol);
    if (mp.kind == MetricParams::Kind::sup) {
        std::vector<double> terms(m);
        for (int k = 0; k < m; ++k)
            terms[k] = omega_level_dist(a.entry(k), b.entry(k), mp);
        // beyond m both entries are all-default: level distance = delta
        return weighted_aggregate(terms, delta, mp);
    }
    // weights ((1-q)/2)^k; all-default entries at level k are at distance
    // delta * (1-q)^{-k/p}, so each tail term is delta^p * 2^{-k}
    double A = (1.0 - mp.q) / 2.0;
    double acc = 0.0;
    double w = 1.0;
    for (int k = 0; k < m; ++k) {
        acc += w * nested_lp_pow(a.entry(k), b.entry(k), mp.q, mp.p, discrete);
        w *= A;
    }
    acc += delta * std::pow(2.0, 1.0 - m);
    return std::pow(acc, 1.0 / mp.p);
}

double code_seq_dist(const TailSeq<CodePoint>& x, const TailSeq<CodePoint>& y,
                     const MetricParams& mp) {
    std::size_t m = std::max(x.prefix_size(), y.prefix_size());
    std::vector<double> terms(m);
    for (std::size_t i = 0; i < m; ++i)
        terms[i] = code_dist(x.at(i), y.at(i), mp);
    return weighted_aggregate(terms, code_dist(x.anchor(), y.anchor(), mp), mp);
}

CodePoint shift(int j, const TailSeq<CodePoint>& args) {
    const CodePoint& anchor = args.anchor();
    if (j < 1 || j > anchor.alphabet)
        throw std::invalid_argument("shift: symbol outside alphabet");
    for (const CodePoint& a : args.prefix()) {
        if (a.alphabet != anchor.alphabet)
            throw std::invalid_argument("shift: alphabet mismatch");
        if (a.default_symbol != anchor.default_symbol)
            throw std::invalid_argument("shift: arguments must share default symbol");
    }
    int depth_in = anchor.prefix_depth();
    for (const CodePoint& a : args.prefix())
        depth_in = std::max(depth_in, a.prefix_depth());
    std::vector<CodeTree> entries;
    entries.push_back(CodeTree::leaf(j));
    for (int k = 0; k < depth_in; ++k) {
        CodeTree::ChildList kids;
        for (std::size_t i = 0; i < args.prefix_size(); ++i)
            kids.emplace_back(static_cast<int>(i), args.prefix()[i].entry(k));
        entries.push_back(CodeTree::node(std::move(kids), anchor.entry(k)));
    }
    return make_code_point(std::move(entries), anchor.default_symbol,
                           anchor.alphabet);
}

CodePoint slice(const CodePoint& a, int i) {
    if (i < 0) throw std::invalid_argument("slice: negative index");
    std::vector<CodeTree> entries;
    for (int k = 0; k + 1 < a.prefix_depth(); ++k)
        entries.push_back(a.entries[k + 1].child(i));
    return make_code_point(std::move(entries), a.default_symbol, a.alphabet);
}

int slice_width(const CodePoint& a) {
    int w = 0;
    for (int k = 1; k < a.prefix_depth(); ++k)
        for (const auto& [i, c] : a.entries[k].explicit_children())
            w = std::max(w, i + 1);
    return w;
}

Address slice_address(const Address& a, int i) {
    std::vector<CodeTree> parts;
    for (std::size_t j = 1; j < a.parts.size(); ++j)
        parts.push_back(a.parts[j].child(i));
    return Address{std::move(parts)};
}

Address default_slice_address(const Address& a) {
    std::vector<CodeTree> parts;
    for (std::size_t j = 1; j < a.parts.size(); ++j)
        parts.push_back(a.parts[j].default_child());
    return Address{std::move(parts)};
}

namespace {

int needed_width(const Address& alpha, int tree_explicit_max) {
    int w = tree_explicit_max;
    for (std::size_t j = 1; j < alpha.parts.size(); ++j)
        for (const auto& [i, c] : alpha.parts[j].explicit_children())
            w = std::max(w, i + 1);
    return w;
}

}  // namespace

Point compose_address(const GifsSystem& sys, const Address& alpha,
                      const NestedSeq<Point>& x) {
    if (x.level() != alpha.depth() + 1)
        throw std::invalid_argument("compose_address: level mismatch");
    int head = alpha.head_symbol();
    if (head < 1 || head > static_cast<int>(sys.maps.size()))
        throw std::invalid_argument("compose_address: symbol outside system");
    const GifsMap& f = sys.maps[head - 1];
    if (alpha.depth() == 0) return eval(f, level1_to_tailseq(x));

    int w = 0;
    for (const auto& [i, c] : x.explicit_children()) w = std::max(w, i + 1);
    w = needed_width(alpha, w);
    std::vector<Point> prefix;
    prefix.reserve(w);
    for (int i = 0; i < w; ++i)
        prefix.push_back(compose_address(sys, slice_address(alpha, i), x.child(i)));
    Point anchor = compose_address(sys, default_slice_address(alpha),
                                   x.default_child());
    return eval(f, TailSeq<Point>(std::move(prefix), std::move(anchor)));
}

CodePoint tau_compose(const Address& alpha, const NestedSeq<CodePoint>& x) {
    if (x.level() != alpha.depth() + 1)
        throw std::invalid_argument("tau_compose: level mismatch");
    int head = alpha.head_symbol();
    if (alpha.depth() == 0) {
        int w = 0;
        for (const auto& [i, c] : x.explicit_children()) w = std::max(w, i + 1);
        std::vector<CodePoint> prefix;
        for (int i = 0; i < w; ++i) prefix.push_back(x.child(i).leaf_value());
        return shift(head, TailSeq<CodePoint>(std::move(prefix),
                                              x.default_child().leaf_value()));
    }
    int w = 0;
    for (const auto& [i, c] : x.explicit_children()) w = std::max(w, i + 1);
    w = needed_width(alpha, w);
    std::vector<CodePoint> prefix;
    prefix.reserve(w);
    for (int i = 0; i < w; ++i)
        prefix.push_back(tau_compose(slice_address(alpha, i), x.child(i)));
    CodePoint anchor =
        tau_compose(default_slice_address(alpha), x.default_child());
    return shift(head, TailSeq<CodePoint>(std::move(prefix), std::move(anchor)));
}

double tile_decay_factor(const GifsSystem& sys) {
    const MetricParams& mp = sys.cert_params();
    double L = sys.L_sys();
    if (mp.kind == MetricParams::Kind::sup) return L;
    return L / std::pow(1.0 - mp.q, 1.0 / mp.p);
}

namespace {

NestedSeq<Point> random_point_tree(int level, const std::vector<Point>& cloud,
                                   std::mt19937_64& rng) {
    if (level == 0) {
        std::uniform_int_distribution<std::size_t> pick(0, cloud.size() - 1);
        return NestedSeq<Point>::leaf(cloud[pick(rng)]);
    }
    NestedSeq<Point> def = random_point_tree(level - 1, cloud, rng);
    std::uniform_int_distribution<int> nkids(0, 2);
    std::uniform_int_distribution<int> idx(0, 3);
    NestedSeq<Point>::ChildList kids;
    std::set<int> used;
    int n = nkids(rng);
    for (int t = 0; t < n; ++t) {
        int i = idx(rng);
        if (!used.insert(i).second) continue;
        kids.emplace_back(i, random_point_tree(level - 1, cloud, rng));
    }
    return NestedSeq<Point>::node(std::move(kids), std::move(def));
}

}  // namespace

Tile tile(const GifsSystem& sys, const AttractorApprox& a, const Address& alpha,
          int n_random, std::uint64_t seed) {
    std::set<Condition> conds = classify(sys);
    if (conds.empty())
        throw std::invalid_argument("tile: system must satisfy at least (S1)");
    const int level = alpha.depth() + 1;
    const auto& cloud = a.cloud.points();

    std::vector<Point> images;
    for (const Point& p : cloud) {
        NestedSeq<Point> x =
            diagonal_embed(TailSeq<Point>::constant(p), level);
        images.push_back(compose_address(sys, alpha, x));
    }
    std::mt19937_64 rng(seed);
    for (int t = 0; t < n_random; ++t) {
        NestedSeq<Point> x = random_point_tree(level, cloud, rng);
        images.push_back(compose_address(sys, alpha, x));
    }
    double decay = std::pow(tile_decay_factor(sys), level);
    // diam_upper equals the exact diameter for the maximum metric and is a
    // valid upper bound otherwise, so the certified bound survives
    double bound = decay * (diam_upper(a.cloud, sys.base) + 2.0 * a.err);
    return Tile{alpha, FiniteSet(std::move(images)), bound};
}

PiResult pi_point(const GifsSystem& sys, const AttractorApprox& a,
                  const CodePoint& code, int depth) {
    std::set<Condition> conds = classify(sys);
    if (conds.empty())
        throw std::invalid_argument("pi_point: system must satisfy at least (S1)");
    std::vector<CodeTree> parts;
    for (int k = 0; k <= depth; ++k) parts.push_back(code.entry(k));
    Address addr = make_address(std::move(parts));
    // Any point of the depth-k tile lies within its diameter bound of
    // x_alpha; one deterministic sample realizes such a point without
    // enumerating the whole tile.
    NestedSeq<Point> x = diagonal_embed(
        TailSeq<Point>::constant(a.cloud.points().front()), depth + 1);
    Point p = compose_address(sys, addr, x);
    double decay = std::pow(tile_decay_factor(sys), depth + 1);
    double bound = decay * (diam_upper(a.cloud, sys.base) + 2.0 * a.err);
    return {std::move(p), bound + 2.0 * a.err};
}

ConjugacyResult conjugacy_check(const GifsSystem& sys, const AttractorApprox& a,
                                const Address& alpha,
                                const TailSeq<CodePoint>& codes, int depth) {
    const int level = alpha.depth() + 1;
    // codes as a level-1 tree, diagonally embedded up to the needed level
    NestedSeq<CodePoint>::ChildList kids;
    for (std::size_t i = 0; i < codes.prefix_size(); ++i)
        kids.emplace_back(static_cast<int>(i),
                          NestedSeq<CodePoint>::leaf(codes.prefix()[i]));
    NestedSeq<CodePoint> tree = NestedSeq<CodePoint>::node(
        std::move(kids), NestedSeq<CodePoint>::leaf(codes.anchor()));
    for (int l = 2; l <= level; ++l)
        tree = NestedSeq<CodePoint>::node({}, tree);

    double leaf_err = 0.0;
    auto pi_leaf = [&](const CodePoint& c) {
        PiResult r = pi_point(sys, a, c, depth);
        leaf_err = std::max(leaf_err, r.err);
        return r.point;
    };
    NestedSeq<Point> mapped = map_leaves<Point>(tree, pi_leaf);
    Point left = compose_address(sys, alpha, mapped);

    CodePoint shifted = tau_compose(alpha, tree);
    PiResult right = pi_point(sys, a, shifted, depth + level);

    double decay = std::pow(tile_decay_factor(sys), level);
    double budget = decay * leaf_err + right.err + 2.0 * a.err;
    return {base_dist(left, right.point, sys.base), budget};
}

double discrepancy_bound(const Address& alpha, const Address& beta,
                         double a_diam, const MetricParams& mp) {
    mp.validate();
    if (alpha.parts.size() != beta.parts.size())
        throw std::invalid_argument("discrepancy_bound: depth mismatch");
    if (alpha.head_symbol() != beta.head_symbol()) return a_diam;
    const int k = alpha.depth();
    if (mp.kind == MetricParams::Kind::sup) {
        double worst = 0.0;
        for (int l = 1; l <= k; ++l)
            worst = std::max(worst, nested_sup_dist(alpha.parts[l], beta.parts[l],
                                                    mp.q, discrete));
        return a_diam * worst;
    }
    double acc = 0.0;
    for (int l = 1; l <= k; ++l)
        acc += nested_lp_pow(alpha.parts[l], beta.parts[l], mp.q, 1.0, discrete);
    return a_diam * std::pow(acc, 1.0 / mp.p);
}

// ---------------------------------------------------------------------------
// Serialization: level-0 trees are bare symbols; deeper trees list explicit
// children 0..w-1 followed by the starred default, e.g. [1,[2,*1]].

std::string format_tree(const CodeTree& t) {
    if (t.level() == 0) return std::to_string(t.leaf_value());
    int w = 0;
    for (const auto& [i, c] : t.explicit_children()) w = std::max(w, i + 1);
    std::string out = "[";
    for (int i = 0; i < w; ++i) out += format_tree(t.child(i)) + ",";
    out += "*" + format_tree(t.default_child()) + "]";
    return out;
}

namespace {

CodeTree parse_tree_at(const std::string& s, std::size_t& pos);

int parse_int_at(const std::string& s, std::size_t& pos) {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
        ++pos;
    if (pos == start) throw std::invalid_argument("parse_tree: expected symbol");
    return std::stoi(s.substr(start, pos - start));
}

CodeTree parse_tree_at(const std::string& s, std::size_t& pos) {
    if (pos >= s.size()) throw std::invalid_argument("parse_tree: truncated input");
    if (s[pos] != '[') return CodeTree::leaf(parse_int_at(s, pos));
    ++pos;  // '['
    CodeTree::ChildList kids;
    int index = 0;
    while (true) {
        if (pos >= s.size()) throw std::invalid_argument("parse_tree: truncated input");
        if (s[pos] == '*') {
            ++pos;
            CodeTree def = parse_tree_at(s, pos);
            if (pos >= s.size() || s[pos] != ']')
                throw std::invalid_argument("parse_tree: missing ]");
            ++pos;
            return CodeTree::node(std::move(kids), std::move(def));
        }
        kids.emplace_back(index++, parse_tree_at(s, pos));
        if (pos >= s.size() || s[pos] != ',')
            throw std::invalid_argument("parse_tree: missing ,");
        ++pos;
    }
}

}  // namespace

CodeTree parse_tree(const std::string& s) {
    std::size_t pos = 0;
    CodeTree t = parse_tree_at(s, pos);
    if (pos != s.size()) throw std::invalid_argument("parse_tree: trailing input");
    return t;
}

std::string format_address(const Address& a) {
    std::string out = "[";
    for (std::size_t j = 0; j < a.parts.size(); ++j) {
        if (j) out += ",";
        out += format_tree(a.parts[j]);
    }
    return out + "]";
}

Address parse_address(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("parse_address: missing brackets");
    std::size_t pos = 1;
    std::vector<CodeTree> parts;
    while (pos < s.size() - 1) {
        parts.push_back(parse_tree_at(s, pos));
        if (pos < s.size() - 1) {
            if (s[pos] != ',') throw std::invalid_argument("parse_address: missing ,");
            ++pos;
        }
    }
    if (pos != s.size() - 1)
        throw std::invalid_argument("parse_address: trailing input");
    return make_address(std::move(parts));
}

}  // namespace hutchinf
