#include "doctest.h"

#include "hlat/hermitian_theta.hpp"
#include "oracles.hpp"

using namespace hlat;

namespace {

std::vector<std::pair<unsigned long, unsigned long>> const kSmall{{1, 5}, {3, 5}, {7, 5}, {4, 5}, {11, 5}};

HermitianLattice build(unsigned long ell, unsigned long p)
{
    auto t = FieldTower::build(ell, p);
    auto pair = find_unimodular_pair(t);
    return hermitian_lattice(t, trace_gram(t, pair.ideal, pair.d));
}

HermMatrix herm2(long a, long b, LElement off)
{
    HermMatrix m;
    m.n = 2;
    m.diag = {mpz_class(a), mpz_class(b)};
    m.upper = {off};
    return m;
}

}  // namespace

TEST_CASE("hermitian table and zeta action")
{
    for (auto [ell, p] : kSmall) {
        CAPTURE(ell);
        auto hl = build(ell, p);
        CHECK(hl.dim() == 8);
        CHECK(check_hermitian_table(hl).ok());

        auto z = check_zeta(hl);
        CHECK(z.order_p);
        CHECK(z.preserves_gram);
        CHECK(z.preserves_h);
        CHECK(z.det_minus_identity == p * p);
        CHECK(z.ok());

        auto orb = check_orbits(hl, 4);
        CHECK(orb.vectors == 2400);
        CHECK(orb.orbits * p == orb.vectors);
        CHECK(orb.ok());

        CHECK(dual_check(hl).ok());
    }
}

TEST_CASE("h is sesquilinear on coordinates")
{
    auto hl = build(7, 5);
    auto const& q = hl.L();
    IntVector x{1, 0, 2, -1, 0, 0, 3, 1}, y{0, 1, 1, 0, -2, 1, 0, 0};
    LElement hxy = hl.h_value(x, y), hyx = hl.h_value(y, x);
    CHECK(hyx == q.conj(hxy));
    LElement hxx = hl.h_value(x, x);
    CHECK(hxx.is_rational());
    mpz_class bxx = 0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            bxx += x[i] * hl.gram()(i, j) * x[j];
    CHECK(2 * hxx.a == bxx);
}

TEST_CASE("dual check rejects a scaled lattice")
{
    auto hl = build(1, 5);
    std::vector<LElement> h2;
    for (auto const& v : hl.h_table())
        h2.push_back({2 * v.a, 2 * v.b});
    HermitianLattice scaled(hl.L(), hl.p(), mpz_class(2) * hl.gram(), h2, hl.zeta_matrix());
    auto r = dual_check(scaled);
    CHECK(!r.det_one);
    CHECK(!r.ok());
    CHECK(theta_genus1(scaled, 2)[1] == 0);
    CHECK(theta_genus1(scaled, 2)[2] == 240);
}

TEST_CASE("genus one theta is the E8 series")
{
    for (auto [ell, p] : kSmall) {
        CAPTURE(ell);
        auto hl = build(ell, p);
        auto c = theta_genus1(hl, 6, 2);
        for (std::size_t m = 0; m < c.size(); ++m)
            CHECK(c[m] == oracle::e8_theta(m));
        CHECK(congruence_check_genus1(c, p).verdict);
        auto e8 = e8_identify(hl);
        CHECK(e8.is_e8);
        CHECK(e8.roots == 240);
    }
    CHECK(!congruence_check_genus1({1, 241}, 5).verdict);
    CHECK(!congruence_check_genus1({2, 240}, 5).verdict);
}

TEST_CASE("genus two representation numbers")
{
    auto hl = build(3, 5);
    auto const& q = hl.L();
    auto table = rep_numbers(hl, 2, 1);
    auto c = theta_genus1(hl, 1);

    CHECK(table.count(herm2(0, 0, {0, 0})) == 1);
    CHECK(table.count(herm2(1, 0, {0, 0})) == 240);
    CHECK(table.count(herm2(1, 1, {1, 0})) == 240);
    CHECK(table.count(herm2(1, 1, {mpq_class(1, 3), 0})) == 0);
    CHECK(marginal_check(table, c));

    auto cong = congruence_check(table, 5);
    CHECK(cong.verdict);
    CHECK(cong.entries.size() == table.counts.size());

    std::uint64_t total = 0;
    for (auto const& [key, count] : table.counts) {
        total += count;
        auto a = table.decode(key);
        CHECK(table.encode(a) == key);
        CHECK(rep_number(hl, a) == count);
    }
    CHECK(total == 241 * 241);

    for (auto const& [key, count] : table.counts) {
        auto a = table.decode(key);
        for (auto& u : a.upper)
            u = q.conj(u);
        CHECK(table.count(a) == count);
    }

    // unit scalings, a swap and an elementary move
    for (auto const& u : q.units()) {
        std::vector<std::vector<LElement>> m{{u, {0, 0}}, {{0, 0}, {1, 0}}};
        auto r = u_invariance_check(q, table, m);
        CHECK(r.ok());
        CHECK(r.skipped == 0);
    }
    std::vector<std::vector<LElement>> swap{{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
    CHECK(u_invariance_check(q, table, swap).ok());
    std::vector<std::vector<LElement>> shear{{{1, 0}, {0, 1}}, {{0, 0}, {1, 0}}};
    auto r = u_invariance_check(q, table, shear);
    CHECK(r.ok());
    CHECK(r.checked > 0);
    CHECK(r.skipped > 0);

    // a table that is not invariant is detected
    auto broken = table;
    broken.counts[table.encode(herm2(1, 0, {0, 0}))] += 5;
    CHECK(!u_invariance_check(q, broken, swap).ok());
    CHECK(!marginal_check(broken, c));
}

TEST_CASE("herm transform")
{
    ImaginaryQuadratic q(3);
    auto a = herm2(1, 2, {1, 1});
    std::vector<std::vector<LElement>> id{{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}};
    CHECK(herm_transform(q, a, id) == a);
    std::vector<std::vector<LElement>> swap{{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
    auto s = herm_transform(q, a, swap);
    CHECK(s.diag == std::vector<mpz_class>{2, 1});
    CHECK(s.upper[0] == q.conj(a.upper[0]));
    CHECK(herm_transform(q, s, swap) == a);
}

TEST_CASE("transformation check")
{
    auto hl = build(1, 5);
    auto r = transform_check_genus1(hl, {1.0, 1.2, 1.5, 2.0}, 1e-8);
    CHECK(r.reachable);
    CHECK(r.pass);
    CHECK(r.max_rel_error < 1e-8);
    CHECK(r.tail_bound < 1e-9);
    REQUIRE(r.per_y.size() == 4);
    CHECK(r.per_y[0].second == 0);

    auto wrong = transform_check_genus1(hl, {2.0}, 1e-8, 40, 5.0);
    CHECK(!wrong.pass);
    CHECK(wrong.max_rel_error >= 0.1);

    auto tight = transform_check_genus1(hl, {2.0}, 1e-300, 10);
    CHECK(!tight.reachable);
    CHECK(!tight.pass);
    CHECK(tight.achievable > 0);

    CHECK(theta_tail_bound(8, 10, 1.0) < theta_tail_bound(8, 5, 1.0));
    CHECK(theta_tail_bound(8, 5, 2.0) < theta_tail_bound(8, 5, 1.0));
    CHECK_THROWS_AS(transform_check_genus1(hl, {0.0}, 1e-8), std::invalid_argument);
}

TEST_CASE("non positive definite input")
{
    auto hl = build(1, 5);
    HermitianLattice neg(hl.L(), hl.p(), mpz_class(-1) * hl.gram(), hl.h_table(), hl.zeta_matrix());
    CHECK_THROWS_AS(neg.enumerator(), NotPositiveDefinite);
    CHECK_THROWS_AS(theta_genus1(neg, 2), NotPositiveDefinite);
    CHECK_THROWS_AS(HermitianLattice(hl.L(), 5, IntMatrix::identity(3), hl.h_table(), hl.zeta_matrix()),
                    std::invalid_argument);
}

TEST_CASE("large tower" * doctest::timeout(300))
{
    auto hl = build(3, 13);
    CHECK(hl.dim() == 24);
    CHECK(check_hermitian_table(hl).ok());
    auto z = check_zeta(hl);
    CHECK(z.ok());
    CHECK(z.det_minus_identity == 13 * 13);
    CHECK(dual_check(hl).ok());
    auto c = theta_genus1(hl, 2);
    CHECK(c[1] % 13 == 0);
    CHECK(c[2] % 13 == 0);
    CHECK(congruence_check_genus1(c, 13).verdict);
    CHECK_THROWS_AS(e8_identify(hl), std::invalid_argument);
    MESSAGE("c_1 = " << c[1] << ", c_2 = " << c[2]);
}
