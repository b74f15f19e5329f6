#pragma once

#include "hutchinf/geometry.hpp"
#include "hutchinf/gifs.hpp"
#include "hutchinf/tail_seq.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hutchinf {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Parameters of the planar Cantor construction: K, q in (0,1), a nondecreasing
// sequence (m_k), and the derived square sides (p_k) and gaps (a_k) with
// 2 p_0 + a_0 = 1,  2^{m_0...m_k} p_{k+1} + (2^{m_0...m_k} - 1) a_{k+1} = p_k,
// p_k / a_k < K q^{m_k} / sqrt(2).
struct CantorParams {
    double K = 0.5;
    double q = 0.5;
    std::vector<int> ms;
    std::vector<double> ps;
    std::vector<double> as;
};

CantorParams derive_params(double K, double q, std::vector<int> ms);

struct Square {
    double x = 0.0;  // lower-left corner
    double y = 0.0;
    double side = 0.0;
};

// Depth-k auxiliary address: entry j is a 0-based symbol of the alphabet
// Omega~_j (|Omega~_0| = 4, |Omega~_{k+1}| = |Omega~_k|^{m_k}).
using TildeAddress = std::vector<std::uint64_t>;

// Alphabet size |Omega~_k|; throws when it exceeds the enumeration cap.
std::uint64_t tilde_card(const CantorParams& params, int k);

// The square I_alpha of a depth-k address (row-major child placement).
Square square_of(const CantorParams& params, const TildeAddress& addr);

// The full depth-k square family in lexicographic address order.
// Enumeration is capped at 10^6 squares.
std::vector<std::pair<TildeAddress, Square>> squares(const CantorParams& params,
                                                     int depth);

// Depth-capped element of the code space Omega~ = prod_k Omega~_k.
struct TildeCode {
    std::vector<std::uint64_t> symbols;  // symbols[k] in [0, |Omega~_k|)

    int depth() const { return static_cast<int>(symbols.size()) - 1; }
    bool operator==(const TildeCode& o) const { return symbols == o.symbols; }
    bool operator<(const TildeCode& o) const { return symbols < o.symbols; }
};

// The index-regrouping map: output entry 0 is i, output entry k+1 packs the
// k-th entries of the first m_k argument codes. Arguments must reach depth
// out_depth - 1.
TildeCode cantor_map(const CantorParams& params, int i,
                     const TailSeq<TildeCode>& codes, int out_depth);

// Center of the code's deepest square; the true point of the Cantor set lies
// within sqrt(2) * p_depth of it.
Point code_point(const CantorParams& params, const TildeCode& code);

// Exact integer evaluation of the counting inequality
// (1 + m_0 + m_0 m_1 + ... + m_0...m_{k-1})(k-1) - m_0...m_k < -k
// for k = 1..k_max.
std::vector<bool> check_fin4(const std::vector<int>& ms, int k_max);

// Greedy least nondecreasing sequence satisfying the inequality up to k_max.
std::vector<int> minimal_fin4_sequence(int k_max);

struct MeasureCertificate {
    BigInt r_k;          // tile count covering any order-m image
    BigInt tiles;        // |_{k+1}Omega~|
    BigRat bound;        // r_k / tiles, exact
    BigInt r_exponent;   // base-4 exponents of the two counts
    BigInt tile_exponent;
    bool ok = false;     // bound < 4^{-k}, exactly
};

// The counting certificate behind the non-GIFS statement: any order-m
// generalized weak contraction image is covered by r_k depth-(k+1) tiles of
// cylinder measure 1/|_{k+1}Omega~| each.
MeasureCertificate measure_certificate(const std::vector<int>& ms, int m, int k);

// Generalized set iterates of the four regrouping maps at the symbol level,
// from the all-ones singleton seed. Returns K^1..K^steps as code sets.
std::vector<std::vector<TildeCode>> cantor_gen_iterate(const CantorParams& params,
                                                       int depth, int steps);

// The four maps as a system fed to the engine's classifier: code_index maps
// with the analytic sup-metric certificate L_{s,q}(f_i) <= K.
GifsSystem cantor_point_system(const CantorParams& params);

// CSV rows "address,x,y,side" with dash-joined 1-based address symbols.
void write_squares_csv(std::ostream& os,
                       const std::vector<std::pair<TildeAddress, Square>>& sq);

}  // namespace hutchinf
