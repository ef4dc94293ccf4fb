#include "doctest.h"

#include "hlat/enumeration.hpp"
#include "hlat/exact_linalg.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace hlat;

namespace {

bool is_column_hnf(IntMatrix const& h)
{
    std::size_t k = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        for (std::size_t j = k + 1; j < h.cols(); ++j)
            if (h(i, j) != 0) return false;
        if (k < h.cols() && h(i, k) != 0) {
            if (h(i, k) < 0) return false;
            for (std::size_t j = 0; j < k; ++j)
                if (h(i, j) < 0 || h(i, j) >= h(i, k)) return false;
            ++k;
        }
    }
    return true;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int span)
{
    std::uniform_int_distribution<int> d(-span, span);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = d(rng);
    return m;
}

std::set<IntVector> as_set(std::vector<IntVector> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("hnf on small inputs")
{
    auto id = IntMatrix::identity(3);
    auto r = hnf(id);
    CHECK(r.h == id);
    CHECK(r.u == id);

    auto swap = hnf(IntMatrix{{0, 1}, {1, 0}});
    CHECK(swap.h == IntMatrix::identity(2));

    IntMatrix diag{{2, 0}, {0, 3}};
    CHECK(hnf(diag).h == diag);
}

TEST_CASE("hnf transform and idempotence on random matrices")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
        IntMatrix m = random_matrix(rng, r, c, 9);
        auto [h, u] = hnf(m);
        CHECK(m * u == h);
        CHECK(abs(det_exact(u)) == 1);
        CHECK(is_column_hnf(h));
        CHECK(hnf(h).h == h);
    }
}

TEST_CASE("modular row hnf matches the transposed column hnf")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + rng() % 4;
        IntMatrix m = random_matrix(rng, n + rng() % 3, n, 12);
        IntMatrix sq(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                sq(i, j) = m(i, j);
        mpz_class d = abs(det_exact(sq));
        if (d == 0) continue;
        IntMatrix expected = hnf(m.transpose()).h.transpose();
        IntMatrix square(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                square(i, j) = expected(i, j);
        CHECK(hnf_rows_modular(m, d) == square);
    }
}

TEST_CASE("determinants")
{
    CHECK(det_exact(IntMatrix::identity(8)) == 1);
    CHECK(det_exact(IntMatrix{{2, 1}, {1, 2}}) == 3);
    CHECK(det_exact(IntMatrix{{0, 1}, {1, 0}}) == -1);
    CHECK(det_exact(oracle::e8_cartan()) == 1);
    RatMatrix r(2, 2);
    r(0, 0) = mpq_class(1, 2);
    r(1, 1) = mpq_class(2, 3);
    CHECK(det_exact(r) == mpq_class(1, 3));
    CHECK_THROWS_AS(det_exact(IntMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("inverse")
{
    CHECK(invert(RatMatrix::identity(4)) == RatMatrix::identity(4));
    RatMatrix two = to_rational(IntMatrix{{2, 0}, {0, 2}});
    RatMatrix half(2, 2);
    half(0, 0) = half(1, 1) = mpq_class(1, 2);
    CHECK(invert(two) == half);
    CHECK_THROWS_AS(invert(to_rational(IntMatrix{{1, 2}, {2, 4}})), std::domain_error);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        RatMatrix m = to_rational(random_matrix(rng, 4, 4, 5));
        if (det_exact(m) == 0) continue;
        CHECK(invert(invert(m)) == m);
        CHECK(m * invert(m) == RatMatrix::identity(4));
    }
}

TEST_CASE("integer kernel and integral solutions")
{
    IntMatrix c{{1, 1, 0}};
    IntMatrix k = integer_kernel(c);
    CHECK(k.cols() == 2);
    CHECK((c * k).is_zero());

    IntMatrix two{{2, 0}};
    IntVector odd{mpz_class(1)};
    CHECK_FALSE(solve_integer(two, odd).has_value());
    IntVector even{mpz_class(4)};
    auto sol = solve_integer(two, even);
    REQUIRE(sol.has_value());
    CHECK(sol->x0[0] == 2);
    CHECK(sol->kernel.cols() == 1);
}

TEST_CASE("lll reduction")
{
    GramForm reduced(IntMatrix{{2, 1}, {1, 2}});
    auto r = lll_reduce(reduced);
    CHECK(r.t == IntMatrix::identity(2));

    GramForm q(IntMatrix{{4, 2}, {2, 4}});
    auto l = lll_reduce(q, mpq_class(3, 4));
    CHECK(l.reduced.g(0, 0) <= l.reduced.g(1, 1));
    CHECK(2 * abs(l.reduced.g(0, 1)) <= l.reduced.g(0, 0));

    CHECK_THROWS_AS(lll_reduce(GramForm(IntMatrix{{1, 2}, {2, 1}})), NotPositiveDefinite);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + rng() % 6;
        IntMatrix g = oracle::random_pd_gram(rng, n, 20);
        IntMatrix u = oracle::random_unimodular(rng, n, 30);
        GramForm skew(u.transpose() * g * u);
        auto res = lll_reduce(skew);
        RatMatrix t = to_rational(res.t);
        CHECK(t.transpose() * skew.g * t == res.reduced.g);
        CHECK(abs(det_exact(res.t)) == 1);
        CHECK(det_exact(res.reduced.g) == det_exact(skew.g));
        mpq_class prod = 1;
        for (auto const& b : res.gs_norms)
            prod *= b;
        CHECK(prod == det_exact(skew.g));
        CHECK(is_lll_reduced(res.reduced, mpq_class(99, 100)));
    }
}

TEST_CASE("short vector enumeration")
{
    auto one = short_vectors(GramForm(IntMatrix{{2}}), 2);
    REQUIRE(one.size() == 2);
    CHECK(as_set(one) == std::set<IntVector>{{mpz_class(1)}, {mpz_class(-1)}});

    CHECK(short_vectors(GramForm(IntMatrix::identity(2)), 1).size() == 4);

    GramForm e8(oracle::e8_cartan());
    CHECK(short_vectors(e8, 2).size() == 240);
    ShortVectorEnumerator en(e8);
    auto hist = en.norm_histogram(8, 3);
    CHECK(hist[2] == oracle::e8_theta(1));
    CHECK(hist[4] == oracle::e8_theta(2));
    CHECK(hist[6] == oracle::e8_theta(3));
    CHECK(hist[8] == oracle::e8_theta(4));
    CHECK(en.norm_histogram(8, 1) == hist);
    CHECK(en.collect_reduced(4, 4) == en.collect_reduced(4, 1));

    CHECK_THROWS_AS(ShortVectorEnumerator(GramForm(IntMatrix{{1, 0}, {0, -1}})), NotPositiveDefinite);
}

TEST_CASE("enumeration agrees with brute force and is invariant under unimodular change")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + rng() % 3;
        IntMatrix g = oracle::random_pd_gram(rng, n, 2);
        long bound = 1 + static_cast<long>(rng() % 8);
        auto brute = oracle::brute_force_short(g, bound, 6);
        auto found = short_vectors(GramForm(g), bound);
        CHECK(found.size() == brute.size());
        CHECK(found.size() % 2 == 0);
        IntMatrix u = oracle::random_unimodular(rng, n, 10);
        CHECK(short_vectors(GramForm(u.transpose() * g * u), bound).size() == found.size());
    }
}

TEST_CASE("coset enumeration")
{
    GramForm id2(IntMatrix::identity(2));
    LinearConstraint x1{{1, 0}, 1};
    auto v = coset_vectors(id2, 1, std::span<LinearConstraint const>(&x1, 1));
    REQUIRE(v.size() == 1);
    CHECK(v[0] == IntVector{1, 0});

    CHECK(as_set(coset_vectors(id2, 5, {})) == as_set(short_vectors(id2, 5)));

    std::vector<LinearConstraint> zero{{{1, 0}, 0}, {{0, 1}, 0}};
    CHECK(coset_vectors(id2, 0, zero).empty());

    LinearConstraint frac{{2, 0}, mpq_class(1, 2)};
    CHECK(coset_vectors(id2, 10, std::span<LinearConstraint const>(&frac, 1)).empty());
}
