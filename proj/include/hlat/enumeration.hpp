#pragma once

#include "hlat/exact_linalg.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace hlat {

/* Fincke-Pohst enumeration of short vectors of a positive definite form.
 *
 * The form is LLL-reduced once at construction. The tree search runs in
 * long double with a relative slack of 1e-9 on the bound, and every leaf is
 * re-checked with exact integer arithmetic, so the output is exactly the set
 * { z != 0 : z^T R z <= bound }. Vectors come out in lexicographic order of
 * their reduced coordinates, the last coordinate being the most significant.
 *
 * Partitioning by the value of the last reduced coordinate gives independent
 * subtrees; the multi-threaded entry points merge them in value order, so the
 * result does not depend on the thread count. */
class ShortVectorEnumerator {
  public:
    using ReducedVisitor = std::function<bool(std::span<long long const> z, mpq_class const& norm)>;
    using Visitor = std::function<bool(std::span<mpz_class const> x, mpq_class const& norm)>;

    explicit ShortVectorEnumerator(GramForm const& q);

    std::size_t dim() const { return original_.dim(); }
    GramForm const& form() const { return original_; }
    GramForm const& reduced() const { return reduced_; }
    /* Columns are the reduced basis in the original coordinates. */
    IntMatrix const& transform() const { return t_; }

    /* Visits z in reduced coordinates. Returning false from the visitor stops. */
    void for_each_reduced(mpq_class const& bound, ReducedVisitor const& visit) const;
    /* Visits x = t z in the coordinates of the original form. */
    void for_each(mpq_class const& bound, Visitor const& visit) const;

    /* All nonzero z (reduced coordinates) with norm <= bound. */
    std::vector<std::vector<long long>> collect_reduced(mpq_class const& bound, unsigned threads = 1) const;
    /* Number of nonzero vectors per exact norm value, norm <= bound. */
    std::map<mpq_class, std::uint64_t> norm_histogram(mpq_class const& bound, unsigned threads = 1) const;

    IntVector to_original(std::span<long long const> z) const;

  private:
    void run(mpq_class const& bound, std::span<long long const> top_values,
             std::function<bool(std::span<long long const>, long long)> const& leaf) const;
    std::vector<long long> top_values(mpq_class const& bound) const;

    GramForm original_;
    GramForm reduced_;
    IntMatrix t_;
    mpz_class scale_;              // reduced_ * scale_ is integral
    IntMatrix scaled_;             // reduced_ * scale_
    std::vector<long long> qi_;    // scaled_ as int64 when it fits
    bool fast_ = false;
    std::vector<long double> mu_;  // row-major, mu_[i*n+j], j < i
    std::vector<long double> b_;   // Gram-Schmidt norms
};

/* Every nonzero x with x^T q x <= bound, each exactly once, in the
 * deterministic enumerator order. Throws NotPositiveDefinite. */
void enumerate_short(GramForm const& q, mpq_class const& bound, ShortVectorEnumerator::Visitor const& visit);
std::vector<IntVector> short_vectors(GramForm const& q, mpq_class const& bound);

/* Exact linear condition coeffs . x == target on integer vectors x. */
struct LinearConstraint {
    IntVector coeffs;
    mpq_class target;
};

/* Every nonzero x with x^T q x <= bound satisfying all constraints. Same set
 * as filtering enumerate_short; inconsistent constraints give no output. */
void enumerate_coset(GramForm const& q, mpq_class const& bound, std::span<LinearConstraint const> constraints,
                     ShortVectorEnumerator::Visitor const& visit);
std::vector<IntVector> coset_vectors(GramForm const& q, mpq_class const& bound,
                                     std::span<LinearConstraint const> constraints);

}  // namespace hlat
