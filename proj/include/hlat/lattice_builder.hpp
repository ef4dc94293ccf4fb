#pragma once

#include "hlat/ideal.hpp"

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace hlat {

/* Discriminants of the F-bases B1 = (1, sqrt(-ell)) and B2 = (1, zeta). */
struct UnramifiedEvidence {
    mpq_class d_b1;            // det Tr_{K/F}(b_i b_j), a rational number
    mpq_class expected_d_b1;   // -4 ell
    KElement d_b2;             // zeta^-2 (zeta^2 - 1)^2, in F
    mpq_class norm_d_b1;       // N_{F/Q}(d_b1) = d_b1^(p-1)
    mpq_class norm_d_b2;       // N_{F/Q}(d_b2), expected p^2
    mpz_class support_gcd;     // gcd of the two norms
    bool d_b1_ok = false;
    bool d_b2_ok = false;      // d_b2 == (zeta - zeta^-1)^2 and its norm is p^2
    bool unramified = false;   // support_gcd == 1

    bool ok() const { return d_b1_ok && d_b2_ok && unramified; }
};
UnramifiedEvidence verify_unramified(FieldTower const& t);

struct SearchBudget {
    /* Candidate ideals: O_K, then degree-one primes and products of two with
     * norm <= pool_norm. */
    unsigned long pool_norm = 200;
    /* 0: only +-1 may adjust the signs of a generator. Otherwise units of O_F
     * are combined to fix signs, then u^(+-2) steps up to this many per unit
     * shrink the height of d. */
    unsigned unit_range = 3;
    std::size_t max_candidates = std::numeric_limits<std::size_t>::max();
    /* Generator enumeration: bound grows by 3/2 this many times. */
    unsigned enum_rounds = 8;
};

struct CandidateLog {
    std::string label;
    mpq_class norm_c;             // N((A conj(A) D)^-1)
    std::size_t generators = 0;   // generators of C found in C cap F
    std::size_t units = 0;        // units available for the sign solve
    bool accepted = false;
    std::string note;
};

struct SearchLog {
    std::vector<CandidateLog> candidates;
    SearchBudget budget;
    std::string summary() const;
};

class SearchExhausted : public std::runtime_error {
  public:
    explicit SearchExhausted(SearchLog log);
    SearchLog const& log() const { return log_; }

  private:
    SearchLog log_;
};

struct UnimodularPair {
    FracIdeal ideal;
    KElement d;
    std::string label;
    SearchLog log;
};

/* Exact criterion: d in F totally positive and (d) A conj(A) D = O_K. */
bool satisfies_criterion(FieldTower const& t, FracIdeal const& a, KElement const& d);

/* Throws SearchExhausted when no candidate within the budget works. */
UnimodularPair find_unimodular_pair(FieldTower const& t, SearchBudget const& budget = {});

/* Z-basis of the O_F-submodule C cap F of a conjugation-stable ideal C, in
 * K coordinates. */
std::vector<KElement> fixed_sublattice(FieldTower const& t, FracIdeal const& c);

struct TraceLattice {
    FracIdeal ideal;
    KElement d;
    std::vector<KElement> zbasis;  // rows of the ideal HNF over den
    RatMatrix gram;                // Tr_{K/Q}(d b_i conj(b_j))
};
TraceLattice trace_gram(FieldTower const& t, FracIdeal const& a, KElement const& d);

struct EvenUnimodularReport {
    std::size_t dim = 0;
    mpq_class det;
    bool integral = false;
    bool even = false;
    bool det_one = false;
    bool positive_definite = false;
    bool dim_ok = false;  // dim = 0 mod 8

    bool ok() const { return integral && even && det_one && positive_definite && dim_ok; }
    std::vector<std::string> failures() const;
};
EvenUnimodularReport verify_even_unimodular(RatMatrix const& gram);

}  // namespace hlat
