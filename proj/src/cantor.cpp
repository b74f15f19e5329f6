#include "hutchinf/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hutchinf {

namespace {

constexpr std::uint64_t kEnumerationCap = 1000000;

const double kSqrt2 = std::sqrt(2.0);

void validate_ms(const std::vector<int>& ms) {
    if (ms.empty()) throw std::invalid_argument("cantor: empty m sequence");
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (ms[i] < 1) throw std::invalid_argument("cantor: m_k must be positive");
        if (i > 0 && ms[i] < ms[i - 1])
            throw std::invalid_argument("cantor: m sequence must be nondecreasing");
    }
}

// m_0 * ... * m_{k-1}; the geometry stays in double range up to huge products,
// enumeration caps are enforced separately in tilde_card.
std::uint64_t m_product(const std::vector<int>& ms, int k) {
    std::uint64_t p = 1;
    for (int i = 0; i < k; ++i) {
        p *= static_cast<std::uint64_t>(ms[i]);
        if (p > 1000)
            throw std::invalid_argument("cantor: m products too large for geometry");
    }
    return p;
}

}  // namespace

CantorParams derive_params(double K, double q, std::vector<int> ms) {
    if (!(K > 0 && K < 1) || !(q > 0 && q < 1))
        throw std::invalid_argument("derive_params: K, q must lie in (0,1)");
    validate_ms(ms);
    CantorParams out;
    out.K = K;
    out.q = q;
    out.ms = std::move(ms);
    const auto& m = out.ms;
    double denom0 = 2.0 * K * std::pow(q, m[0]) + 2.0 * kSqrt2;
    out.as.push_back(2.0 * kSqrt2 / denom0);
    out.ps.push_back(K * std::pow(q, m[0]) / denom0);
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
        // G = sqrt(4^{m_0...m_k}) as an exact integer
        double G = std::ldexp(1.0, static_cast<int>(m_product(m, k + 1)));
        double denom =
            G * K * std::pow(q, m[k + 1]) + 2.0 * kSqrt2 * (G - 1.0);
        out.as.push_back(2.0 * kSqrt2 / denom * out.ps[k]);
        out.ps.push_back(K * std::pow(q, m[k + 1]) / denom * out.ps[k]);
    }
    // residual check of the defining constraints
    double r0 = std::abs(2.0 * out.ps[0] + out.as[0] - 1.0);
    if (r0 > 1e-12) throw std::runtime_error("derive_params: fin1 residual too large");
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
        double G = std::ldexp(1.0, static_cast<int>(m_product(m, k + 1)));
        double lhs = G * out.ps[k + 1] + (G - 1.0) * out.as[k + 1];
        if (std::abs(lhs - out.ps[k]) > 1e-12 * std::max(1.0, out.ps[k]))
            throw std::runtime_error("derive_params: fin2 residual too large");
    }
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (!(out.ps[k] / out.as[k] < K * std::pow(q, m[k]) / kSqrt2))
            throw std::runtime_error("derive_params: fin3 violated");
    }
    return out;
}

std::uint64_t tilde_card(const CantorParams& params, int k) {
    if (k == 0) return 4;
    std::uint64_t exp2 = 2 * m_product(params.ms, k);  // 4^prod = 2^(2 prod)
    if (exp2 >= 63) throw std::invalid_argument("cantor: alphabet exceeds enumeration cap");
    return std::uint64_t{1} << exp2;
}

namespace {

Square child_square(const Square& parent, std::uint64_t sym, std::uint64_t grid,
                    double p_next, double a_next) {
    double h = p_next + a_next;
    std::uint64_t i = sym % grid;
    std::uint64_t j = sym / grid;
    return Square{parent.x + static_cast<double>(i) * h,
                  parent.y + static_cast<double>(j) * h, p_next};
}

}  // namespace

Square square_of(const CantorParams& params, const TildeAddress& addr) {
    if (addr.empty()) throw std::invalid_argument("square_of: empty address");
    if (addr.size() > params.ps.size())
        throw std::invalid_argument("square_of: address deeper than derived params");
    if (addr[0] >= 4) throw std::invalid_argument("square_of: symbol out of range");
    double h0 = params.ps[0] + params.as[0];
    Square sq{static_cast<double>(addr[0] % 2) * h0,
              static_cast<double>(addr[0] / 2) * h0, params.ps[0]};
    for (std::size_t k = 1; k < addr.size(); ++k) {
        std::uint64_t card = tilde_card(params, static_cast<int>(k));
        if (addr[k] >= card)
            throw std::invalid_argument("square_of: symbol out of range");
        std::uint64_t grid = std::uint64_t{1} << m_product(params.ms, k);
        sq = child_square(sq, addr[k], grid, params.ps[k], params.as[k]);
    }
    return sq;
}

std::vector<std::pair<TildeAddress, Square>> squares(const CantorParams& params,
                                                     int depth) {
    if (depth < 0) throw std::invalid_argument("squares: negative depth");
    if (depth >= static_cast<int>(params.ps.size()))
        throw std::invalid_argument("squares: depth deeper than derived params");
    std::uint64_t total = 1;
    for (int k = 0; k <= depth; ++k) {
        total *= tilde_card(params, k);
        if (total > kEnumerationCap)
            throw std::invalid_argument("squares: enumeration cap exceeded");
    }
    std::vector<std::pair<TildeAddress, Square>> out;
    out.reserve(total);
    TildeAddress addr(depth + 1, 0);
    while (true) {
        out.emplace_back(addr, square_of(params, addr));
        int k = depth;
        while (k >= 0) {
            if (++addr[k] < tilde_card(params, k)) break;
            addr[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

TildeCode cantor_map(const CantorParams& params, int i,
                     const TailSeq<TildeCode>& codes, int out_depth) {
    if (i < 1 || i > 4) throw std::invalid_argument("cantor_map: i must be 1..4");
    if (out_depth < 0) throw std::invalid_argument("cantor_map: negative depth");
    TildeCode out;
    out.symbols.push_back(static_cast<std::uint64_t>(i - 1));
    for (int k = 0; k + 1 <= out_depth; ++k) {
        std::uint64_t radix = tilde_card(params, k);
        int mk = params.ms.at(k);
        std::uint64_t packed = 0;
        std::uint64_t weight = 1;
        for (int j = 0; j < mk; ++j) {
            const TildeCode& c = codes.at(j);
            if (c.depth() < k)
                throw std::invalid_argument("cantor_map: argument code too shallow");
            packed += c.symbols[k] * weight;
            weight *= radix;
        }
        out.symbols.push_back(packed);
    }
    return out;
}

Point code_point(const CantorParams& params, const TildeCode& code) {
    Square sq = square_of(params, code.symbols);
    return {sq.x + sq.side / 2.0, sq.y + sq.side / 2.0};
}

std::vector<bool> check_fin4(const std::vector<int>& ms, int k_max) {
    if (k_max < 1) throw std::invalid_argument("check_fin4: k_max must be >= 1");
    if (static_cast<int>(ms.size()) < k_max + 1)
        throw std::invalid_argument("check_fin4: m sequence too short");
    std::vector<bool> out;
    BigInt prod = ms[0];     // m_0
    BigInt sum = 1 + prod;   // 1 + m_0
    for (int k = 1; k <= k_max; ++k) {
        prod *= ms[k];
        // (1 + m_0 + ... + m_0...m_{k-1})(k-1) - m_0...m_k < -k
        out.push_back(sum * (k - 1) - prod < -BigInt(k));
        sum += prod;
    }
    return out;
}

std::vector<int> minimal_fin4_sequence(int k_max) {
    if (k_max < 1) throw std::invalid_argument("minimal_fin4_sequence: k_max >= 1");
    std::vector<int> ms{1};
    BigInt prod = 1;     // m_0 ... m_{k-1}
    BigInt sum = 2;      // 1 + m_0 + ... (with m_0 = 1)
    for (int k = 1; k <= k_max; ++k) {
        // least m_k with sum*(k-1) - prod*m_k < -k, i.e. m_k > (sum*(k-1)+k)/prod
        BigInt num = sum * (k - 1) + k;
        BigInt m = num / prod + 1;
        int mk = std::max(m.convert_to<int>(), ms.back());
        ms.push_back(mk);
        prod *= mk;
        sum += prod;
    }
    auto ok = check_fin4(ms, k_max);
    if (!std::all_of(ok.begin(), ok.end(), [](bool b) { return b; }))
        throw std::logic_error("minimal_fin4_sequence: greedy choice failed");
    return ms;
}

MeasureCertificate measure_certificate(const std::vector<int>& ms, int m,
                                       int k) {
    if (m < 1) throw std::invalid_argument("measure_certificate: m must be >= 1");
    if (k < m) throw std::invalid_argument("measure_certificate: requires k >= m");
    if (static_cast<int>(ms.size()) < k + 1)
        throw std::invalid_argument("measure_certificate: m sequence too short");
    BigInt prod = 1;
    BigInt sum = 1;  // 1 + m_0 + ... + m_0...m_{k-1}
    for (int j = 0; j < k; ++j) {
        prod *= ms[j];
        sum += prod;
    }
    prod *= ms[k];
    MeasureCertificate cert;
    cert.r_exponent = BigInt(m) * sum;
    cert.tile_exponent = sum + prod;
    cert.r_k = boost::multiprecision::pow(
        BigInt(4), cert.r_exponent.convert_to<unsigned>());
    cert.tiles = boost::multiprecision::pow(
        BigInt(4), cert.tile_exponent.convert_to<unsigned>());
    cert.bound = BigRat(cert.r_k, cert.tiles);
    // r_k / tiles < 4^{-k}  <=>  r_exp - tile_exp < -k, exactly
    cert.ok = cert.r_exponent - cert.tile_exponent < -BigInt(k);
    return cert;
}

std::vector<std::vector<TildeCode>> cantor_gen_iterate(const CantorParams& params,
                                                       int depth, int steps) {
    if (steps < 1) throw std::invalid_argument("cantor_gen_iterate: steps >= 1");
    if (depth + 1 > static_cast<int>(params.ms.size()))
        throw std::invalid_argument("cantor_gen_iterate: depth deeper than params");
    int arity = 1;
    for (int k = 0; k < depth; ++k) arity = std::max(arity, params.ms[k]);

    TildeCode seed;
    seed.symbols.assign(depth + 1, 0);
    std::vector<TildeCode> seed_set{seed};
    std::vector<std::vector<TildeCode>> iterates;

    for (int s = 0; s < steps; ++s) {
        // argument sets: previous iterates newest-first, then the seed forever
        std::vector<const std::vector<TildeCode>*> args;
        for (auto it = iterates.rbegin(); it != iterates.rend(); ++it)
            args.push_back(&*it);
        while (static_cast<int>(args.size()) < arity) args.push_back(&seed_set);

        std::uint64_t combos = 1;
        for (int j = 0; j < arity; ++j) {
            combos *= args[j]->size();
            if (combos > kEnumerationCap)
                throw std::runtime_error("cantor_gen_iterate: enumeration cap exceeded");
        }
        std::vector<TildeCode> next;
        std::vector<std::size_t> pick(arity, 0);
        while (true) {
            std::vector<TildeCode> tuple;
            tuple.reserve(arity);
            for (int j = 0; j < arity; ++j) tuple.push_back((*args[j])[pick[j]]);
            TailSeq<TildeCode> seq(tuple, seed);
            for (int i = 1; i <= 4; ++i)
                next.push_back(cantor_map(params, i, seq, depth));
            int j = arity - 1;
            while (j >= 0) {
                if (++pick[j] < args[j]->size()) break;
                pick[j] = 0;
                --j;
            }
            if (j < 0) break;
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        iterates.push_back(std::move(next));
    }
    return iterates;
}

GifsSystem cantor_point_system(const CantorParams& params) {
    GifsSystem sys;
    sys.name = "cantor";
    sys.dim = 2;
    sys.base = BaseMetric::euclidean;
    sys.seed_point = {params.ps[0] / 2.0, params.ps[0] / 2.0};
    MetricParams mp = MetricParams::sup(params.q);
    for (int i = 1; i <= 4; ++i) {
        GifsMap f = GifsMap::code_index(i);
        f.with_cert(LipCert{mp, params.K});
        sys.maps.push_back(std::move(f));
        sys.flags.push_back(MapFlags{true, true});
    }
    return sys;
}

void write_squares_csv(std::ostream& os,
                       const std::vector<std::pair<TildeAddress, Square>>& sq) {
    os << "address,x,y,side\n";
    char buf[64];
    for (const auto& [addr, s] : sq) {
        for (std::size_t k = 0; k < addr.size(); ++k)
            os << (k ? "-" : "") << (addr[k] + 1);
        std::snprintf(buf, sizeof buf, ",%.17g", s.x);
        os << buf;
        std::snprintf(buf, sizeof buf, ",%.17g", s.y);
        os << buf;
        std::snprintf(buf, sizeof buf, ",%.17g", s.side);
        os << buf << "\n";
    }
}

}  // namespace hutchinf
