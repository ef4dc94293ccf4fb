#include "doctest.h"

#include "hlat/field_tower.hpp"

#include <cmath>
#include <random>

using namespace hlat;

namespace {

KElement random_element(FieldTower const& k, std::mt19937_64& rng, int span = 3)
{
    std::uniform_int_distribution<int> d(-span, span);
    KElement x = k.zero();
    for (auto& v : x.c)
        v = d(rng);
    return x;
}

KElement galois_sum(FieldTower const& k, KElement const& x, bool both_signs)
{
    KElement s = k.zero();
    for (unsigned long j = 1; j < k.p(); ++j) {
        s = s + k.galois(x, j, +1);
        if (both_signs) s = s + k.galois(x, j, -1);
    }
    return s;
}

mpz_class ipow(mpz_class b, unsigned long e)
{
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

}  // namespace

TEST_CASE("build validates parameters")
{
    auto k = FieldTower::build(1, 5);
    CHECK(k.degree() == 8);
    CHECK(k.ell_norm() == 4);
    CHECK(!k.L().half_integral_omega());
    CHECK(FieldTower::build(3, 13).degree() == 24);
    CHECK(FieldTower::build(3, 13).ell_norm() == 3);

    auto s = FieldTower::build(12, 5);
    CHECK(s.ell0() == 3);
    CHECK(s.root_scale() == 2);
    CHECK(s.ell_norm() == 3);

    CHECK_THROWS_AS(FieldTower::build(5, 5), InvalidInput);
    CHECK_THROWS_AS(FieldTower::build(1, 7), InvalidInput);
    CHECK_THROWS_AS(FieldTower::build(1, 4), InvalidInput);
    CHECK_THROWS_AS(FieldTower::build(0, 5), InvalidInput);
    CHECK_THROWS_AS(FieldTower::build(1, 1), InvalidInput);
    CHECK_THROWS_AS(FieldTower::build(26, 13), InvalidInput);
}

TEST_CASE("arithmetic identities")
{
    for (auto [ell, p] : {std::pair{1ul, 5ul}, {3ul, 5ul}, {2ul, 13ul}, {7ul, 5ul}}) {
        auto k = FieldTower::build(ell, p);
        CHECK(k.mul(k.zeta(), k.zeta(p - 1)) == k.one());
        CHECK(k.pow(k.zeta(), p) == k.one());
        CHECK(k.mul(k.delta(), k.delta()) == k.rational(-static_cast<long>(k.ell0())));
        KElement const r = k.sqrt_minus_ell();
        CHECK(k.mul(r, r) == k.rational(-static_cast<long>(ell)));

        std::mt19937_64 rng(ell * 100 + p);
        for (int t = 0; t < 5; ++t) {
            KElement x = random_element(k, rng), y = random_element(k, rng);
            CHECK(k.conj(k.conj(x)) == x);
            CHECK(k.conj(k.mul(x, y)) == k.mul(k.conj(x), k.conj(y)));
            CHECK(k.galois(k.mul(x, y), 2, -1) == k.mul(k.galois(x, 2, -1), k.galois(y, 2, -1)));
            if (!x.is_zero()) CHECK(k.mul(x, k.inv(x)) == k.one());
            CHECK(k.from_ok(std::span<mpq_class const>(k.to_ok(x))) == x);
        }
        CHECK_THROWS_AS(k.inv(k.zero()), std::domain_error);
    }
}

TEST_CASE("omega generates O_L")
{
    auto a = FieldTower::build(3, 5);
    KElement w = a.omega();
    // omega^2 - omega + 1 = 0
    CHECK(a.mul(w, w) - w + a.one() == a.zero());
    auto b = FieldTower::build(2, 5);
    CHECK(b.mul(b.omega(), b.omega()) == b.rational(-2));
    auto q = a.L();
    LElement x{2, 3}, y{-1, 5};
    CHECK(a.embed(q.mul(x, y)) == a.mul(a.embed(x), a.embed(y)));
    CHECK(a.embed(q.conj(x)) == a.conj(a.embed(x)));
    CHECK(q.norm(LElement{0, 1}) == 1);
    CHECK(q.units().size() == 6);
    CHECK(FieldTower::build(1, 5).L().units().size() == 4);
    CHECK(FieldTower::build(11, 5).L().units().size() == 2);
}

TEST_CASE("traces")
{
    auto k = FieldTower::build(1, 5);
    CHECK(k.trace_Q(k.one()) == 8);
    CHECK(k.trace_L(k.zeta()) == LElement{-1, 0});
    CHECK(k.trace_F(k.delta()) == k.zero());
    CHECK(k.trace_Q(k.delta()) == 0);

    for (auto [ell, p] : {std::pair{1ul, 5ul}, {3ul, 5ul}, {11ul, 5ul}, {2ul, 13ul}}) {
        auto t = FieldTower::build(ell, p);
        std::mt19937_64 rng(ell + p);
        for (int i = 0; i < 4; ++i) {
            KElement x = random_element(t, rng);
            CHECK(galois_sum(t, x, true) == t.rational(t.trace_Q(x)));
            CHECK(galois_sum(t, x, false) == t.embed(t.trace_L(x)));
            // Tr_{K/Q} = Tr_{L/Q} o Tr_{K/L} = Tr_{F/Q} o Tr_{K/F}
            CHECK(t.L().trace(t.trace_L(x)) == t.trace_Q(x));
            KElement f = t.trace_F(x);
            CHECK(t.in_F(f));
            CHECK(t.trace_Q(f) == 2 * t.trace_Q(x));
        }
    }
}

TEST_CASE("norms and minimal polynomials")
{
    auto k = FieldTower::build(1, 5);
    CHECK(k.minimal_polynomial(k.zeta()) == cyclotomic_prime(5));
    CHECK(k.minimal_polynomial(k.delta()) == QPoly(std::vector<mpq_class>{1, 0, 1}));
    CHECK(k.minimal_polynomial(k.one()) == QPoly(std::vector<mpq_class>{-1, 1}));
    CHECK(k.norm_Q(k.rational(2)) == 256);
    CHECK(k.norm_Q(k.zeta() - k.one()) == 25);

    std::mt19937_64 rng(7);
    for (auto [ell, p] : {std::pair{1ul, 5ul}, {7ul, 5ul}}) {
        auto t = FieldTower::build(ell, p);
        for (int i = 0; i < 4; ++i) {
            KElement x = random_element(t, rng, 2);
            CHECK(t.minimal_polynomial(t.conj(x)) == t.minimal_polynomial(x));
            KElement prod = t.one();
            for (unsigned long j = 1; j < p; ++j)
                for (int s : {1, -1})
                    prod = t.mul(prod, t.galois(x, j, s));
            CHECK(prod == t.rational(t.norm_Q(x)));
            KElement f = t.trace_F(x);
            mpq_class nf = t.norm_F(f);
            CHECK(nf * nf == t.norm_Q(f));
            KElement pf = t.one();
            for (unsigned long j = 1; j < p; ++j)
                pf = t.mul(pf, t.galois(f, j, 1));
            CHECK(pf == t.rational(nf));
        }
    }
    CHECK_THROWS_AS(k.norm_F(k.delta()), std::invalid_argument);
}

TEST_CASE("O_K basis and discriminant")
{
    for (auto [ell, p] : {std::pair{1ul, 5ul}, {3ul, 5ul}, {2ul, 5ul}, {11ul, 5ul}, {3ul, 13ul}}) {
        auto k = FieldTower::build(ell, p);
        IntMatrix tr = k.ok_trace_matrix();
        mpz_class const disc = ipow(k.ell_norm(), p - 1) * ipow(p, 2 * (p - 2));
        CHECK(det_exact(tr) == disc);
        CHECK(tr == tr.transpose());
        IntMatrix j = k.ok_conj_matrix();
        CHECK(j * j == IntMatrix::identity(k.degree()));
        CHECK(k.of_basis().size() == p - 1);
        for (auto const& b : k.of_basis())
            CHECK(k.in_F(b));
        RatMatrix g(p - 1, p - 1);
        for (std::size_t a = 0; a < p - 1; ++a)
            for (std::size_t b = 0; b < p - 1; ++b)
                g(a, b) = k.trace_Q(k.mul(k.of_basis()[a], k.of_basis()[b])) / 2;
        // K/F is unramified, so disc(K) = disc(F)^2
        mpq_class const d = det_exact(g);
        mpz_class const expect = ipow(k.ell_norm(), (p - 1) / 2) * ipow(p, p - 2);
        CHECK(abs(d) == expect);
    }
}

TEST_CASE("embeddings and total positivity")
{
    auto k = FieldTower::build(1, 5);
    KElement z = k.zeta() + k.zeta(4);
    CHECK(k.embeddings(k.one()).size() == 8);
    auto re = k.real_embeddings(z);
    REQUIRE(re.size() == 4);
    CHECK(std::abs(static_cast<double>(re[0]) - 0.6180339887) < 1e-9);
    CHECK(std::abs(static_cast<double>(re[1]) + 1.6180339887) < 1e-9);

    CHECK(k.is_totally_positive(k.one()));
    CHECK(!k.is_totally_positive(z));
    CHECK(k.is_totally_positive(k.rational(2) + z));
    CHECK(!k.is_totally_positive(k.zero()));
    CHECK(!k.is_totally_positive(k.rational(-1)));
    CHECK_THROWS_AS(k.is_totally_positive(k.delta()), std::invalid_argument);

    auto s = k.real_signs(z);
    CHECK(s == std::vector<int>{1, -1, -1, 1});

    // the Sturm path alone
    auto d = k.decide_total_positivity(k.rational(2) + z, 32);
    CHECK(d.used_sturm);
    CHECK(d.positive);
    CHECK(!k.decide_total_positivity(z, 32).positive);
    CHECK(!k.decide_total_positivity(k.rational(-3), 32).positive);

    auto ball = k.certified_embeddings(k.delta(), 128);
    CHECK(ball.values.size() == 8);
    CHECK(ball.values[0].im.certified_sign() == 1);
    CHECK(ball.values[1].im.certified_sign() == -1);
    CHECK(ball.values[0].re.contains_zero());
}

TEST_CASE("ball arithmetic")
{
    Ball a = Ball::sqrt(2, 200);
    Ball two = a * a - Ball::exact(2, 200);
    CHECK(two.contains_zero());
    Ball c = Ball::cos_2pi(1, 6, 100) - Ball::exact(mpq_class(1, 2), 100);
    CHECK(c.contains_zero());
    CHECK(Ball::sin_2pi(1, 4, 64).certified_sign() == 1);
    CHECK(Ball::exact(mpq_class(-1, 3), 64).certified_sign() == -1);
}

TEST_CASE("polynomials")
{
    QPoly x = QPoly::x();
    QPoly f = (x - QPoly::constant(1)) * (x - QPoly::constant(2)) * (x + QPoly::constant(3));
    CHECK(sturm_count(f, std::nullopt, std::nullopt) == 3);
    CHECK(sturm_count(f, mpq_class(0), std::nullopt) == 2);
    CHECK(sturm_count(f, mpq_class(1), mpq_class(2)) == 1);
    CHECK(!sturm_all_roots_positive(f));
    CHECK(sturm_all_roots_positive((x - QPoly::constant(1)) * (x - QPoly::constant(5))));
    auto r = monic_sqrt(f * f);
    REQUIRE(r);
    CHECK(*r == f);
    CHECK(!monic_sqrt(f * x));
    CHECK(gcd(f, (x - QPoly::constant(2)) * x) == x - QPoly::constant(2));
    RatMatrix m{{2, 1}, {1, 2}};
    CHECK(charpoly(m) == QPoly(std::vector<mpq_class>{3, -4, 1}));
}
