#include "hlat/ideal.hpp"

#include "hlat/enumeration.hpp"

namespace hlat {

namespace {

IntMatrix row_hnf(IntMatrix const& rows)
{
    std::size_t const n = rows.cols();
    IntMatrix h = hnf(rows.transpose()).h;
    IntMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(j, i) = h(i, j);
    for (std::size_t i = 0; i < n; ++i)
        if (out(i, i) == 0) throw std::domain_error("ideal generators do not have full rank");
    return out;
}

mpz_class diag_product(IntMatrix const& b)
{
    mpz_class d = 1;
    for (std::size_t i = 0; i < b.rows(); ++i)
        d *= b(i, i);
    return d;
}

IntMatrix stack(std::vector<IntMatrix> const& blocks, std::size_t cols)
{
    std::size_t rows = 0;
    for (auto const& b : blocks)
        rows += b.rows();
    IntMatrix out(rows, cols);
    std::size_t r = 0;
    for (auto const& b : blocks)
        for (std::size_t i = 0; i < b.rows(); ++i, ++r)
            for (std::size_t j = 0; j < cols; ++j)
                out(r, j) = b(i, j);
    return out;
}

}  // namespace

FracIdeal::FracIdeal(IntMatrix b, mpz_class den) : basis_(std::move(b)), den_(std::move(den)) { canonicalize(); }

void FracIdeal::canonicalize()
{
    if (den_ <= 0) throw std::invalid_argument("ideal denominator must be positive");
    mpz_class g = den_;
    for (std::size_t i = 0; i < basis_.rows(); ++i)
        for (std::size_t j = i; j < basis_.cols(); ++j)
            if (basis_(i, j) != 0) g = gcd(g, basis_(i, j));
    if (g == 1) return;
    den_ /= g;
    for (std::size_t i = 0; i < basis_.rows(); ++i)
        for (std::size_t j = i; j < basis_.cols(); ++j)
            basis_(i, j) /= g;
}

FracIdeal FracIdeal::from_rows(RatMatrix const& rows)
{
    mpz_class const den = common_denominator(rows);
    IntMatrix m(rows.rows(), rows.cols());
    for (std::size_t i = 0; i < rows.rows(); ++i)
        for (std::size_t j = 0; j < rows.cols(); ++j) {
            mpq_class v = rows(i, j) * den;
            m(i, j) = v.get_num();
        }
    return from_integer_rows(m, den);
}

FracIdeal FracIdeal::from_integer_rows(IntMatrix const& rows, mpz_class const& den) { return FracIdeal(row_hnf(rows), den); }

FracIdeal FracIdeal::from_rows_modular(IntMatrix const& rows, mpz_class const& den, mpz_class const& modulus)
{
    IntMatrix h = hnf_rows_modular(rows, abs(modulus));
    return FracIdeal(std::move(h), den);
}

FracIdeal FracIdeal::unit(std::size_t n) { return FracIdeal(IntMatrix::identity(n), 1); }

RatMatrix FracIdeal::rational_basis() const
{
    RatMatrix r = to_rational(basis_);
    mpq_class const inv(1, den_);
    return inv * r;
}

mpq_class FracIdeal::norm() const
{
    mpq_class n(diag_product(basis_));
    mpz_class dn;
    mpz_pow_ui(dn.get_mpz_t(), den_.get_mpz_t(), dim());
    n /= dn;
    return n;
}

bool FracIdeal::contains(std::span<mpq_class const> y) const
{
    // back substitution against the upper triangular basis
    std::size_t const n = dim();
    RatVector r(y.begin(), y.end());
    for (auto& v : r)
        v *= den_;
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class z = r[i] / basis_(i, i);
        if (z.get_den() != 1) return false;
        if (z == 0) continue;
        for (std::size_t j = i; j < n; ++j)
            r[j] -= z * basis_(i, j);
    }
    return true;
}

FracIdeal principal_ideal(FieldTower const& t, KElement const& x)
{
    if (x.is_zero()) throw std::domain_error("zero ideal");
    return FracIdeal::from_rows(t.ok_mult_matrix(x));
}

FracIdeal ideal_generated(FieldTower const& t, std::vector<KElement> const& gens)
{
    std::size_t const n = t.degree();
    std::vector<RatMatrix> blocks;
    mpz_class den = 1;
    for (auto const& g : gens) {
        blocks.push_back(t.ok_mult_matrix(g));
        den = lcm(den, common_denominator(blocks.back()));
    }
    // a nonzero rational generator q puts q den Z^n inside the scaled span
    mpz_class modulus = 0;
    for (auto const& g : gens)
        if (g.c[0] != 0 && g == t.rational(g.c[0])) {
            mpq_class const q = g.c[0] * den;
            if (q.get_den() == 1) modulus = gcd(modulus, q.get_num());
        }
    std::vector<IntMatrix> ints;
    for (auto const& b : blocks)
        ints.push_back(to_integer(mpq_class(den) * b));
    IntMatrix all = stack(ints, n);
    if (modulus != 0) return FracIdeal::from_rows_modular(all, den, modulus);
    return FracIdeal::from_integer_rows(all, den);
}

FracIdeal mul(FieldTower const& t, FracIdeal const& a, FracIdeal const& b)
{
    std::size_t const n = t.degree();
    RatMatrix const bb = to_rational(b.basis());
    std::vector<IntMatrix> blocks;
    blocks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        KElement x = t.from_ok(std::span<mpz_class const>(a.basis().row(i).begin(), a.basis().row(i).end()));
        blocks.push_back(to_integer(bb * t.ok_mult_matrix(x)));
    }
    mpz_class const modulus = diag_product(a.basis()) * diag_product(b.basis());
    return FracIdeal::from_rows_modular(stack(blocks, n), a.den() * b.den(), modulus);
}

FracIdeal inverse(FieldTower const& t, FracIdeal const& a)
{
    std::size_t const n = t.degree();
    mpz_class const N = diag_product(a.basis());
    if (N == 0) throw std::domain_error("zero ideal");
    // x a' inside O_K  <=>  x W integral, W = [M_b1 | ... | M_bn | N I]
    std::vector<IntMatrix> blocks;
    for (std::size_t i = 0; i < n; ++i) {
        KElement x = t.from_ok(std::span<mpz_class const>(a.basis().row(i).begin(), a.basis().row(i).end()));
        blocks.push_back(to_integer(t.ok_mult_matrix(x)).transpose());
    }
    blocks.push_back(N * IntMatrix::identity(n));
    IntMatrix c = hnf_rows_modular(stack(blocks, n), N);
    // dual of the column lattice: rows of (c^T)^-1, scaled by N to be integral
    RatMatrix dual = invert(to_rational(c.transpose()));
    IntMatrix scaled = to_integer(mpq_class(N) * dual);
    return FracIdeal::from_rows_modular(a.den() * scaled, N, N * a.den());
}

FracIdeal conj(FieldTower const& t, FracIdeal const& a)
{
    IntMatrix rows = a.basis() * t.ok_conj_matrix();
    return FracIdeal::from_rows_modular(rows, a.den(), diag_product(a.basis()));
}

bool is_ok_module(FieldTower const& t, FracIdeal const& a)
{
    RatMatrix const b = a.rational_basis();
    for (KElement const& g : {t.zeta(), t.omega()}) {
        RatMatrix img = b * t.ok_mult_matrix(g);
        for (std::size_t i = 0; i < img.rows(); ++i)
            if (!a.contains(img.row(i))) return false;
    }
    return true;
}

std::vector<KElement> ideal_elements(FieldTower const& t, FracIdeal const& a)
{
    RatMatrix const b = a.rational_basis();
    std::vector<KElement> out;
    for (std::size_t i = 0; i < b.rows(); ++i)
        out.push_back(t.from_ok(b.row(i)));
    return out;
}

mpz_class field_discriminant(FieldTower const& t)
{
    mpz_class a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), t.ell_norm(), t.p() - 1);
    mpz_ui_pow_ui(b.get_mpz_t(), t.p(), 2 * (t.p() - 2));
    return a * b;
}

FracIdeal maximal_order(FieldTower const& t)
{
    mpz_class const d = det_exact(t.ok_trace_matrix());
    if (abs(d) != field_discriminant(t))
        throw std::logic_error("trace discriminant of the O_K basis does not match the conductor-discriminant formula");
    return FracIdeal::unit(t.degree());
}

FracIdeal inverse_different(FieldTower const& t)
{
    // x in D^-1  <=>  x T integral, T the trace matrix of the O_K basis
    return FracIdeal::from_rows(invert(to_rational(t.ok_trace_matrix())));
}

FracIdeal different_ideal(FieldTower const& t) { return inverse(t, inverse_different(t)); }

std::vector<PrimeIdeal> degree_one_primes(FieldTower const& t, unsigned long q)
{
    std::vector<PrimeIdeal> out;
    if (!is_prime(q) || q % t.p() != 1) return out;
    auto const& L = t.L();
    // omega^2 = omega - (1 + ell0)/4  or  -ell0
    std::vector<unsigned long> roots, zetas;
    for (unsigned long r = 0; r < q; ++r) {
        mpz_class v = mpz_class(r) * r;
        if (L.half_integral_omega())
            v += mpz_class((1 + L.ell0()) / 4) - r;
        else
            v += L.ell0();
        if (v % q == 0) roots.push_back(r);
    }
    for (unsigned long s = 2; s < q; ++s) {
        mpz_class v;
        mpz_class const base(s), mod(q);
        mpz_powm_ui(v.get_mpz_t(), base.get_mpz_t(), t.p(), mod.get_mpz_t());
        if (v == 1) zetas.push_back(s);
    }
    for (auto r : roots)
        for (auto s : zetas) {
            auto const rq = mpq_class(static_cast<long>(r)), sq = mpq_class(static_cast<long>(s));
            FracIdeal id = ideal_generated(
                t, {t.rational(static_cast<long>(q)), t.omega() - t.rational(rq), t.zeta() - t.rational(sq)});
            if (id.norm() != q) throw std::logic_error("prime ideal has the wrong norm");
            out.push_back({q, r, s, std::move(id)});
        }
    return out;
}

QuadraticLattice inverse_different_L(ImaginaryQuadratic const& q)
{
    LElement const e[2] = {{1, 0}, {0, 1}};
    RatMatrix tr(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            tr(i, j) = q.trace(q.mul(e[i], e[j]));
    RatMatrix d = invert(tr);
    return {{d(0, 0), d(0, 1)}, {d(1, 0), d(1, 1)}};
}

LElement different_generator_L(ImaginaryQuadratic const& q)
{
    QuadraticLattice const dual = inverse_different_L(q);
    // the different is {x : x dual inside O_L}: dual of the columns of [M_b1 | M_b2]
    RatMatrix w(2, 4);
    LElement const e[2] = {{1, 0}, {0, 1}};
    LElement const b[2] = {dual.b1, dual.b2};
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
            LElement v = q.mul(e[j], b[k]);
            w(j, 2 * k) = v.a;
            w(j, 2 * k + 1) = v.b;
        }
    mpz_class const c = common_denominator(w);
    IntMatrix cols = to_integer(mpq_class(c) * w);
    IntMatrix h = hnf(cols).h;
    RatMatrix basis(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            basis(i, j) = mpq_class(h(i, j), c);
    RatMatrix diff = invert(basis);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            diff(i, j).canonicalize();
    LElement const g[2] = {{diff(0, 0), diff(0, 1)}, {diff(1, 0), diff(1, 1)}};
    // generator: an element of norm [O_L : D] = ell_norm
    RatMatrix nf(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            nf(i, j) = q.trace(q.mul(g[i], q.conj(g[j]))) / 2;
    mpq_class const target(static_cast<long>(q.ell_norm()));
    for (auto const& z : short_vectors(GramForm(nf), target)) {
        LElement x = q.add(q.mul({mpq_class(z[0]), 0}, g[0]), q.mul({mpq_class(z[1]), 0}, g[1]));
        if (q.norm(x) == target) return x;
    }
    throw std::logic_error("different of L is not principal");
}

}  // namespace hlat
