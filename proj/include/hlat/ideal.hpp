#pragma once

#include "hlat/field_tower.hpp"

namespace hlat {

/* Fractional O_K-ideal basis / den. Rows of `basis` are O_K coordinates
 * (see FieldTower::to_ok) of a Z-basis, in row HNF: upper triangular, positive
 * pivots, entries above a pivot reduced into [0, pivot). den is the least
 * positive integer with den * I inside O_K, so equal ideals compare equal. */
class FracIdeal {
  public:
    FracIdeal() = default;

    /* Z-span of the rational rows; must have full rank. Does not check
     * O_K-stability (see is_ok_module). */
    static FracIdeal from_rows(RatMatrix const& rows);
    static FracIdeal from_integer_rows(IntMatrix const& rows, mpz_class const& den);
    /* Z-span of integer rows over den, with modulus * Z^n inside the span. */
    static FracIdeal from_rows_modular(IntMatrix const& rows, mpz_class const& den, mpz_class const& modulus);
    static FracIdeal unit(std::size_t n);

    IntMatrix const& basis() const { return basis_; }
    mpz_class const& den() const { return den_; }
    std::size_t dim() const { return basis_.rows(); }
    RatMatrix rational_basis() const;
    /* Index-normalised: N(O_K) = 1. */
    mpq_class norm() const;
    bool is_integral() const { return den_ == 1; }
    bool contains(std::span<mpq_class const> ok_coords) const;

    bool operator==(FracIdeal const&) const = default;

  private:
    FracIdeal(IntMatrix b, mpz_class den);
    void canonicalize();

    IntMatrix basis_;
    mpz_class den_ = 1;
};

FracIdeal principal_ideal(FieldTower const& t, KElement const& x);
/* O_K (q, generators...): Z-span of q O_K and g O_K for each generator. */
FracIdeal ideal_generated(FieldTower const& t, std::vector<KElement> const& gens);

FracIdeal mul(FieldTower const& t, FracIdeal const& a, FracIdeal const& b);
/* Throws std::domain_error for the zero ideal (cannot be represented). */
FracIdeal inverse(FieldTower const& t, FracIdeal const& a);
FracIdeal conj(FieldTower const& t, FracIdeal const& a);
bool is_ok_module(FieldTower const& t, FracIdeal const& a);
/* Z-basis of a, as elements of K. */
std::vector<KElement> ideal_elements(FieldTower const& t, FracIdeal const& a);

/* O_K; throws std::logic_error when the trace discriminant of the basis
 * omega^j zeta^i differs from ell_norm^(p-1) p^(2(p-2)). */
FracIdeal maximal_order(FieldTower const& t);
/* |disc K| */
mpz_class field_discriminant(FieldTower const& t);
/* The different D_{K/Q}, the inverse of the trace dual of O_K. */
FracIdeal inverse_different(FieldTower const& t);
FracIdeal different_ideal(FieldTower const& t);

/* Kernel of O_K -> F_q, omega -> r, zeta -> s. */
struct PrimeIdeal {
    unsigned long q;
    unsigned long r;
    unsigned long s;
    FracIdeal ideal;
};
/* All primes of residue degree one above q; empty unless q = 1 mod p.
 * Ordered by (r, s). */
std::vector<PrimeIdeal> degree_one_primes(FieldTower const& t, unsigned long q);

/* The trace dual of O_L, as a + b omega generators (Z-basis). */
struct QuadraticLattice {
    LElement b1;
    LElement b2;
};
QuadraticLattice inverse_different_L(ImaginaryQuadratic const& q);
/* Generator of the different of L computed as the inverse of its trace dual,
 * normalised to sqrt(-ell_norm) up to a unit. */
LElement different_generator_L(ImaginaryQuadratic const& q);

}  // namespace hlat
