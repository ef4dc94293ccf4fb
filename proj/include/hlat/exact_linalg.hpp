#pragma once

#include "hlat/matrix.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace hlat {

/* Column-style Hermite normal form.
 *
 * Returns (h, u) with m * u = h and u unimodular. h is lower "staircase":
 * each pivot is positive, the pivot of a later row sits in a later column,
 * and the entries to the left of a pivot are reduced into [0, pivot).
 * Zero columns (rank deficiency) are moved to the right. */
struct HnfResult {
    IntMatrix h;
    IntMatrix u;
};
HnfResult hnf(IntMatrix const& m);

/* Row-style HNF of the lattice spanned by the rows of `gens`, given a
 * positive integer `modulus` with modulus * Z^n contained in that lattice.
 * The result is square, upper triangular, with positive diagonal and the
 * entries above each pivot reduced into [0, pivot). It is the transpose
 * of the column-style form of gens^T. */
IntMatrix hnf_rows_modular(IntMatrix const& gens, mpz_class const& modulus);

/* Fraction-free (Bareiss) determinant. Throws std::invalid_argument if m is
 * not square. */
mpz_class det_exact(IntMatrix const& m);
mpq_class det_exact(RatMatrix const& m);

/* Leading principal minors d_1, ..., d_n (no pivoting). */
std::vector<mpq_class> leading_minors(RatMatrix const& m);

/* Exact inverse. Throws std::domain_error on singular input. */
RatMatrix invert(RatMatrix const& m);

/* Solve x * m = b for a row vector x (m square, nonsingular). */
RatVector solve_left(RatMatrix const& m, std::span<mpq_class const> b);

/* Basis of { v in Z^cols : m v = 0 }, one vector per column of the result. */
IntMatrix integer_kernel(IntMatrix const& m);

/* Integer solutions of c x = t: x0 + span(kernel columns). Returns nullopt
 * when there is no integral solution. */
struct AffineLattice {
    IntVector x0;
    IntMatrix kernel;  // columns
};
std::optional<AffineLattice> solve_integer(IntMatrix const& c, std::span<mpz_class const> t);

/* Exact LLL on a Gram matrix.
 *
 * t is unimodular with columns giving the new basis in the old coordinates,
 * so reduced = t^T q t. gs_norms are the Gram-Schmidt squared norms of the
 * reduced basis; their product is det(q). */
struct LllResult {
    GramForm reduced;
    IntMatrix t;
    std::vector<mpq_class> gs_norms;
};
LllResult lll_reduce(GramForm const& q, mpq_class const& delta = mpq_class(99, 100));

/* True iff the Lovasz and size conditions hold for the given delta. */
bool is_lll_reduced(GramForm const& q, mpq_class const& delta);

class NotPositiveDefinite : public std::domain_error {
  public:
    NotPositiveDefinite() : std::domain_error("quadratic form is not positive definite") {}
};

mpz_class floor_div(mpz_class const& a, mpz_class const& b);
mpz_class round_div(mpz_class const& a, mpz_class const& b);

}  // namespace hlat
