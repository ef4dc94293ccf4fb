#pragma once

#include "hlat/enumeration.hpp"
#include "hlat/lattice_builder.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hlat {

/* n x n conjugate-symmetric matrix over L: integer diagonal h(x_i, x_i) and
 * the strictly upper entries a_ij = h(x_i, x_j), i < j, row-major. */
struct HermMatrix {
    std::size_t n = 0;
    std::vector<mpz_class> diag;
    std::vector<LElement> upper;

    LElement at(ImaginaryQuadratic const& q, std::size_t i, std::size_t j) const;
    bool is_zero() const;
    bool operator==(HermMatrix const&) const = default;
    std::string str() const;
};

/* A -> U^T A conj(U), the Gram matrix of (sum_i U_ij x_i)_j. */
HermMatrix herm_transform(ImaginaryQuadratic const& q, HermMatrix const& a,
                          std::vector<std::vector<LElement>> const& u);

/* The trace lattice with h(x, y) = Tr_{K/L}(d x conj(y)) and multiplication by
 * zeta on the Z-basis. Coordinates are integer vectors on that basis;
 * h(x, y) = x^T (Ha + Hb omega) y and b(x, y) = x^T G y. */
class HermitianLattice {
  public:
    HermitianLattice(ImaginaryQuadratic q, unsigned long p, IntMatrix gram, std::vector<LElement> h, IntMatrix zeta);

    ImaginaryQuadratic const& L() const { return q_; }
    unsigned long p() const { return p_; }
    std::size_t dim() const { return gram_.rows(); }
    IntMatrix const& gram() const { return gram_; }
    IntMatrix const& zeta_matrix() const { return zeta_; }
    LElement const& h(std::size_t i, std::size_t j) const { return h_[i * dim() + j]; }
    std::vector<LElement> const& h_table() const { return h_; }
    LElement h_value(std::span<mpz_class const> x, std::span<mpz_class const> y) const;

    /* Lazily built; throws NotPositiveDefinite. */
    ShortVectorEnumerator const& enumerator() const;

  private:
    ImaginaryQuadratic q_;
    unsigned long p_;
    IntMatrix gram_;
    std::vector<LElement> h_;
    IntMatrix zeta_;
    mutable std::shared_ptr<ShortVectorEnumerator> en_;
};

HermitianLattice hermitian_lattice(FieldTower const& t, TraceLattice const& lat);
/* Columns: basis coordinates of zeta b_j. */
IntMatrix zeta_matrix(FieldTower const& t, FracIdeal const& a);
std::vector<LElement> hermitian_gram_table(FieldTower const& t, FracIdeal const& a, KElement const& d);

struct HermitianTableReport {
    bool conj_symmetric = false;
    bool in_inverse_different = false;  // sqrt(-ell) h in O_L
    bool trace_matches_gram = false;    // Tr_{L/Q}(h) = G
    bool ok() const { return conj_symmetric && in_inverse_different && trace_matches_gram; }
};
HermitianTableReport check_hermitian_table(HermitianLattice const& hl);

struct ZetaReport {
    bool order_p = false;          // M^p = I, M != I
    bool preserves_gram = false;   // M^T G M = G
    bool preserves_h = false;      // M^T H M = H
    mpz_class det_minus_identity;  // det(M - I), p^2 expected
    bool fixed_point_free = false;
    bool ok() const { return order_p && preserves_gram && preserves_h && fixed_point_free; }
};
ZetaReport check_zeta(HermitianLattice const& hl);

/* Orbit sizes of x -> M x on nonzero vectors of b-norm <= bound. */
struct OrbitReport {
    std::uint64_t vectors = 0;
    std::uint64_t orbits = 0;
    bool all_size_p = false;
    bool norms_preserved = false;
    bool ok() const { return all_size_p && norms_preserved; }
};
OrbitReport check_orbits(HermitianLattice const& hl, mpq_class const& bound, unsigned threads = 1);

struct DualReport {
    bool det_one = false;
    bool h_in_inverse_different = false;
    bool ok() const { return det_one && h_in_inverse_different; }
};
DualReport dual_check(HermitianLattice const& hl);

/* c_0 .. c_bound with c_m = #{x : b(x, x) = 2m}. */
std::vector<std::uint64_t> theta_genus1(HermitianLattice const& hl, unsigned long bound, unsigned threads = 1);

struct RepNumberTable {
    std::size_t genus = 0;
    unsigned long diag_bound = 0;
    std::map<std::vector<long long>, std::uint64_t> counts;  // keyed by encode()
    mpz_class scale;  // off-diagonal coordinates are stored times this

    std::vector<long long> encode(HermMatrix const& a) const;
    HermMatrix decode(std::vector<long long> const& key) const;
    std::uint64_t count(HermMatrix const& a) const;
    bool in_range(HermMatrix const& a) const;
};
/* Every tuple (x_1..x_n) with h(x_i, x_i) <= diag_bound, grouped by its
 * Hermitian Gram matrix. */
RepNumberTable rep_numbers(HermitianLattice const& hl, std::size_t genus, unsigned long diag_bound, unsigned threads = 1);
/* R_A for a single A by backtracking with coset enumeration. */
std::uint64_t rep_number(HermitianLattice const& hl, HermMatrix const& a);

struct CongruenceReport {
    unsigned long p = 0;
    std::size_t genus = 0;
    unsigned long bound = 0;
    std::vector<std::pair<HermMatrix, std::uint64_t>> entries;  // A, R_A
    bool verdict = false;
};
CongruenceReport congruence_check(RepNumberTable const& table, unsigned long p);
CongruenceReport congruence_check_genus1(std::vector<std::uint64_t> const& c, unsigned long p);

/* sum over A with diagonal (a, b) of R_A == c_a c_b for all a, b <= bound. */
bool marginal_check(RepNumberTable const& table, std::vector<std::uint64_t> const& c);

struct InvarianceReport {
    std::size_t checked = 0;
    std::size_t skipped = 0;  // image outside the table range
    std::size_t mismatches = 0;
    bool ok() const { return mismatches == 0; }
};
InvarianceReport u_invariance_check(ImaginaryQuadratic const& q, RepNumberTable const& table,
                                    std::vector<std::vector<LElement>> const& u);

struct TransformReport {
    unsigned long coeff_bound = 0;  // coefficients used
    double max_rel_error = 0;       // computed from the truncated series
    double tail_bound = 0;          // certified bound on the discarded terms
    double achievable = 0;          // best certified precision within max_bound
    bool reachable = false;
    bool pass = false;
    std::vector<std::pair<double, double>> per_y;  // (y, relative error)
};
/* theta(i/y) against y^w theta(iy) with w = dim/2 (or the given exponent). */
TransformReport transform_check_genus1(HermitianLattice const& hl, std::vector<double> const& ys, double precision,
                                       unsigned long max_bound = 40, std::optional<double> exponent = std::nullopt,
                                       unsigned threads = 1);
/* Upper bound on sum_{m > bound} c_m e^(-2 pi m y) for an even lattice of
 * dimension dim with minimum >= 2. */
double theta_tail_bound(std::size_t dim, unsigned long bound, double y);

struct E8Report {
    bool is_e8 = false;
    std::uint64_t roots = 0;
};
/* Throws std::invalid_argument unless dim = 8. */
E8Report e8_identify(HermitianLattice const& hl);

}  // namespace hlat
