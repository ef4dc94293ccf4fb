#pragma once

#include "hlat/matrix.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hlat {

/* Dense univariate polynomial over Q, coefficients from low to high degree. */
class QPoly {
  public:
    QPoly() = default;
    explicit QPoly(std::vector<mpq_class> coeffs);
    static QPoly constant(mpq_class c);
    static QPoly x();

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    mpq_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpq_class(0); }
    mpq_class const& lead() const { return c_.back(); }
    std::vector<mpq_class> const& coeffs() const { return c_; }

    mpq_class operator()(mpq_class const& t) const;
    QPoly derivative() const;
    QPoly monic() const;

    friend QPoly operator+(QPoly const& a, QPoly const& b);
    friend QPoly operator-(QPoly const& a, QPoly const& b);
    friend QPoly operator*(QPoly const& a, QPoly const& b);
    friend QPoly operator*(mpq_class const& s, QPoly const& a);
    bool operator==(QPoly const&) const = default;

    std::string str() const;

  private:
    void trim();
    std::vector<mpq_class> c_;
};

/* Quotient and remainder; throws std::domain_error on division by zero. */
std::pair<QPoly, QPoly> divmod(QPoly const& a, QPoly const& b);
/* Monic gcd (zero if both inputs are zero). */
QPoly gcd(QPoly const& a, QPoly const& b);
/* Monic square root when one exists. */
std::optional<QPoly> monic_sqrt(QPoly const& a);

/* p-th cyclotomic polynomial for prime p. */
QPoly cyclotomic_prime(unsigned long p);

/* det(X I - m) via Faddeev-LeVerrier. */
QPoly charpoly(RatMatrix const& m);

/* Number of distinct real roots in (a, b]; nullopt bounds mean -inf / +inf. */
int sturm_count(QPoly const& f, std::optional<mpq_class> const& a, std::optional<mpq_class> const& b);

}  // namespace hlat
