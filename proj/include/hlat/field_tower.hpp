#pragma once

#include "hlat/ball.hpp"
#include "hlat/exact_linalg.hpp"
#include "hlat/poly.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlat {

/* Rejected parameters or malformed input. */
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/* Element of K = Q(delta, zeta_p), delta^2 = -ell0, on the basis
 *   zeta^0 .. zeta^(p-2), zeta^0 delta .. zeta^(p-2) delta. */
struct KElement {
    RatVector c;

    bool is_zero() const;
    bool operator==(KElement const&) const = default;
    std::vector<std::string> to_strings() const;
    static KElement from_strings(std::vector<std::string> const& s);
};

KElement operator+(KElement a, KElement const& b);
KElement operator-(KElement a, KElement const& b);
KElement operator-(KElement a);
KElement operator*(mpq_class const& s, KElement a);

/* a + b*omega in L = Q(delta), where omega = (1 + delta)/2 when ell0 = 3 mod 4
 * and omega = delta otherwise, so that O_L = Z + Z omega. */
struct LElement {
    mpq_class a;
    mpq_class b;

    bool operator==(LElement const&) const = default;
    bool is_integral() const { return a.get_den() == 1 && b.get_den() == 1; }
    bool is_rational() const { return b == 0; }
};

class ImaginaryQuadratic {
  public:
    ImaginaryQuadratic() = default;
    explicit ImaginaryQuadratic(unsigned long ell0);

    unsigned long ell0() const { return ell0_; }
    bool half_integral_omega() const { return half_; }
    /* -ell_norm is the field discriminant. */
    unsigned long ell_norm() const { return half_ ? ell0_ : 4 * ell0_; }

    LElement add(LElement const& x, LElement const& y) const { return {x.a + y.a, x.b + y.b}; }
    LElement sub(LElement const& x, LElement const& y) const { return {x.a - y.a, x.b - y.b}; }
    LElement mul(LElement const& x, LElement const& y) const;
    LElement conj(LElement const& x) const;
    mpq_class trace(LElement const& x) const;
    mpq_class norm(LElement const& x) const;
    /* sqrt(-ell_norm) = 2 delta or delta. */
    LElement sqrt_disc() const;
    /* x lies in the inverse different sqrt(-ell_norm)^-1 O_L. */
    bool in_inverse_different(LElement const& x) const;
    /* Units of O_L. */
    std::vector<LElement> units() const;

  private:
    unsigned long ell0_ = 1;
    bool half_ = false;
};

/* Embeddings into C, one ball pair per embedding zeta -> e^(2 pi i k/p),
 * delta -> s i sqrt(ell0); index 2(k-1) + (s < 0). */
struct CertifiedEmbedding {
    struct Value {
        unsigned long k;
        int s;
        Ball re;
        Ball im;
    };
    std::vector<Value> values;
    mpfr_prec_t prec;
};

/* The compositum K = L M of L = Q(sqrt(-ell)) and M = Q(zeta_p) together with
 * F, the fixed field of complex conjugation. Immutable once built. */
class FieldTower {
  public:
    /* Throws InvalidInput when ell = 0, p is not prime, p != 1 mod 4 or
     * p divides the discriminant of L. */
    static FieldTower build(unsigned long ell, unsigned long p);

    unsigned long ell_input() const { return ell_input_; }
    unsigned long ell_norm() const { return quad_.ell_norm(); }
    unsigned long ell0() const { return quad_.ell0(); }
    /* ell_input = root_scale^2 * ell0 */
    unsigned long root_scale() const { return scale_; }
    unsigned long p() const { return p_; }
    std::size_t half() const { return p_ - 1; }
    std::size_t degree() const { return 2 * (p_ - 1); }
    ImaginaryQuadratic const& L() const { return quad_; }

    KElement zero() const;
    KElement one() const;
    KElement rational(mpq_class const& q) const;
    KElement zeta(unsigned long k = 1) const;
    KElement delta() const;
    KElement omega() const;
    /* sqrt(-ell_input) = root_scale * delta */
    KElement sqrt_minus_ell() const;
    KElement embed(LElement const& x) const;

    KElement mul(KElement const& x, KElement const& y) const;
    KElement pow(KElement const& x, unsigned long e) const;
    /* Throws std::domain_error for zero. */
    KElement inv(KElement const& x) const;
    KElement conj(KElement const& x) const;
    /* zeta -> zeta^k, delta -> s delta */
    KElement galois(KElement const& x, unsigned long k, int s) const;

    mpq_class trace_Q(KElement const& x) const;
    LElement trace_L(KElement const& x) const;
    KElement trace_F(KElement const& x) const;
    KElement trace_M(KElement const& x) const;
    mpq_class norm_Q(KElement const& x) const;
    /* N_{F/Q}(x) for x in F; the monic square root of the K-characteristic
     * polynomial is the F-characteristic polynomial. */
    mpq_class norm_F(KElement const& x) const;
    bool in_F(KElement const& x) const { return conj(x) == x; }

    /* Row j holds the coordinates of x * basis_j. */
    RatMatrix mult_matrix(KElement const& x) const;
    QPoly charpoly(KElement const& x) const;
    QPoly minimal_polynomial(KElement const& x) const;

    /* O_K = O_L[zeta] with basis omega^j zeta^i, index j (p-1) + i. */
    RatVector to_ok(KElement const& x) const;
    KElement from_ok(std::span<mpq_class const> y) const;
    KElement from_ok(std::span<mpz_class const> y) const;
    /* Row j: O_K coordinates of x * e_j. */
    RatMatrix ok_mult_matrix(KElement const& x) const;
    IntMatrix ok_conj_matrix() const { return ok_conj_; }
    /* Tr_{K/Q}(e_i e_j) */
    IntMatrix ok_trace_matrix() const { return ok_trace_; }
    /* Z-basis of O_F = O_K cap F, in K coordinates. */
    std::vector<KElement> const& of_basis() const { return of_basis_; }

    std::vector<std::complex<long double>> embeddings(KElement const& x) const;
    /* sigma_k(x), k = 1..p-1, for x in F (the real embeddings of F). */
    std::vector<long double> real_embeddings(KElement const& x) const;
    CertifiedEmbedding certified_embeddings(KElement const& x, mpfr_prec_t prec) const;
    /* Signs of the real embeddings of x in F, certified by ball refinement. */
    std::vector<int> real_signs(KElement const& x) const;

    struct PositivityDecision {
        bool positive;
        bool used_sturm;
        mpfr_prec_t prec;
    };
    /* Throws std::invalid_argument unless x is in F. Zero is not positive. */
    PositivityDecision decide_total_positivity(KElement const& x, mpfr_prec_t max_prec = 4096) const;
    bool is_totally_positive(KElement const& x) const { return decide_total_positivity(x).positive; }

  private:
    FieldTower() = default;
    void init_tables();

    unsigned long ell_input_ = 0;
    unsigned long scale_ = 1;
    unsigned long p_ = 0;
    ImaginaryQuadratic quad_;
    RatMatrix ok_to_k_;   // rows: K coordinates of e_j
    RatMatrix k_to_ok_;
    IntMatrix ok_conj_;
    IntMatrix ok_trace_;
    std::vector<KElement> of_basis_;
    std::vector<long double> cos_, sin_;  // cos(2 pi j/p), j = 0..p-1
};

/* F-characteristic polynomial totally positive test by Sturm sequences: all
 * roots of a real-rooted polynomial are > 0. */
bool sturm_all_roots_positive(QPoly const& f);

bool is_prime(unsigned long n);

}  // namespace hlat
