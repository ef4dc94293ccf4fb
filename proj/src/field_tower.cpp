#include "hlat/field_tower.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hlat {

bool is_prime(unsigned long n)
{
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------- KElement

bool KElement::is_zero() const
{
    for (auto const& v : c)
        if (v != 0) return false;
    return true;
}

std::vector<std::string> KElement::to_strings() const
{
    std::vector<std::string> out;
    out.reserve(c.size());
    for (auto const& v : c)
        out.push_back(v.get_str());
    return out;
}

KElement KElement::from_strings(std::vector<std::string> const& s)
{
    KElement x;
    x.c.reserve(s.size());
    for (auto const& t : s) {
        mpq_class v;
        if (v.set_str(t, 10) != 0) throw InvalidInput("malformed rational '" + t + "'");
        v.canonicalize();
        x.c.push_back(v);
    }
    return x;
}

KElement operator+(KElement a, KElement const& b)
{
    for (std::size_t i = 0; i < a.c.size(); ++i)
        a.c[i] += b.c[i];
    return a;
}

KElement operator-(KElement a, KElement const& b)
{
    for (std::size_t i = 0; i < a.c.size(); ++i)
        a.c[i] -= b.c[i];
    return a;
}

KElement operator-(KElement a)
{
    for (auto& v : a.c)
        v = -v;
    return a;
}

KElement operator*(mpq_class const& s, KElement a)
{
    for (auto& v : a.c)
        v *= s;
    return a;
}

// ------------------------------------------------------ ImaginaryQuadratic

ImaginaryQuadratic::ImaginaryQuadratic(unsigned long ell0) : ell0_(ell0), half_(ell0 % 4 == 3) {}

LElement ImaginaryQuadratic::mul(LElement const& x, LElement const& y) const
{
    // omega^2 = omega - (1 + ell0)/4   or   -ell0
    mpq_class const bb = x.b * y.b;
    if (half_) {
        mpq_class c(static_cast<long>(1 + ell0_), 4);
        c.canonicalize();
        return {x.a * y.a - bb * c, x.a * y.b + x.b * y.a + bb};
    }
    return {x.a * y.a - bb * static_cast<unsigned long>(ell0_), x.a * y.b + x.b * y.a};
}

LElement ImaginaryQuadratic::conj(LElement const& x) const
{
    if (half_) return {x.a + x.b, -x.b};
    return {x.a, -x.b};
}

mpq_class ImaginaryQuadratic::trace(LElement const& x) const { return 2 * x.a + (half_ ? x.b : mpq_class(0)); }

mpq_class ImaginaryQuadratic::norm(LElement const& x) const { return mul(x, conj(x)).a; }

LElement ImaginaryQuadratic::sqrt_disc() const
{
    // delta = 2 omega - 1 in the half-integral case
    if (half_) return {-1, 2};
    return {0, 2};
}

bool ImaginaryQuadratic::in_inverse_different(LElement const& x) const { return mul(sqrt_disc(), x).is_integral(); }

std::vector<LElement> ImaginaryQuadratic::units() const
{
    std::vector<LElement> u{{1, 0}, {-1, 0}};
    if (ell0_ == 1) {
        u.push_back({0, 1});
        u.push_back({0, -1});
    } else if (ell0_ == 3) {
        // sixth roots of unity: +-omega, +-(omega - 1)
        u.push_back({0, 1});
        u.push_back({0, -1});
        u.push_back({-1, 1});
        u.push_back({1, -1});
    }
    return u;
}

// ------------------------------------------------------------- FieldTower

namespace {

std::vector<mpq_class> cyc_mul(std::span<mpq_class const> a, std::span<mpq_class const> b, unsigned long p)
{
    std::vector<mpq_class> r(p);
    mpq_class t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            t = a[i] * b[j];
            r[(i + j) % p] += t;
        }
    }
    mpq_class const top = r[p - 1];
    r.pop_back();
    if (top != 0)
        for (auto& v : r)
            v -= top;
    return r;
}

/* Tr_{M/Q} of sum a_i zeta^i */
mpq_class cyc_trace(std::span<mpq_class const> a, unsigned long p)
{
    mpq_class s = a[0] * static_cast<unsigned long>(p - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
        s -= a[i];
    return s;
}

}  // namespace

FieldTower FieldTower::build(unsigned long ell, unsigned long p)
{
    if (ell == 0) throw InvalidInput("ell must be a positive integer");
    if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
    if (p % 4 != 1) throw InvalidInput("p = " + std::to_string(p) + " is not congruent to 1 mod 4");
    if (ell % p == 0)
        throw InvalidInput("p = " + std::to_string(p) + " divides ell = " + std::to_string(ell));

    FieldTower t;
    t.ell_input_ = ell;
    t.p_ = p;
    unsigned long rest = ell, ell0 = 1, scale = 1;
    for (unsigned long d = 2; d * d <= rest; ++d) {
        while (rest % (d * d) == 0) {
            rest /= d * d;
            scale *= d;
        }
        if (rest % d == 0) {
            rest /= d;
            ell0 *= d;
        }
    }
    ell0 *= rest;
    t.scale_ = scale;
    t.quad_ = ImaginaryQuadratic(ell0);
    if (t.ell_norm() % p == 0)
        throw InvalidInput("p = " + std::to_string(p) + " divides the discriminant -" + std::to_string(t.ell_norm()));
    t.init_tables();
    return t;
}

void FieldTower::init_tables()
{
    std::size_t const n = degree(), h = half();
    cos_.resize(p_);
    sin_.resize(p_);
    for (unsigned long j = 0; j < p_; ++j) {
        long double const a = 2 * std::numbers::pi_v<long double> * j / p_;
        cos_[j] = std::cos(a);
        sin_[j] = std::sin(a);
    }

    ok_to_k_ = RatMatrix(n, n);
    k_to_ok_ = RatMatrix(n, n);
    for (std::size_t i = 0; i < h; ++i) {
        ok_to_k_(i, i) = 1;
        k_to_ok_(i, i) = 1;
        if (quad_.half_integral_omega()) {
            // omega zeta^i = (zeta^i + zeta^i delta)/2 ; zeta^i delta = 2 omega zeta^i - zeta^i
            ok_to_k_(h + i, i) = mpq_class(1, 2);
            ok_to_k_(h + i, h + i) = mpq_class(1, 2);
            k_to_ok_(h + i, i) = -1;
            k_to_ok_(h + i, h + i) = 2;
        } else {
            ok_to_k_(h + i, h + i) = 1;
            k_to_ok_(h + i, h + i) = 1;
        }
    }

    ok_conj_ = IntMatrix(n, n);
    ok_trace_ = IntMatrix(n, n);
    std::vector<KElement> e(n);
    for (std::size_t j = 0; j < n; ++j)
        e[j].c.assign(ok_to_k_.row(j).begin(), ok_to_k_.row(j).end());
    for (std::size_t j = 0; j < n; ++j) {
        RatVector cj = to_ok(conj(e[j]));
        for (std::size_t k = 0; k < n; ++k)
            ok_conj_(j, k) = cj[k].get_num();
        for (std::size_t k = 0; k < n; ++k) {
            mpq_class tr = trace_Q(mul(e[j], e[k]));
            ok_trace_(j, k) = tr.get_num();
        }
    }

    IntMatrix fix = ok_conj_ - IntMatrix::identity(n);
    IntMatrix ker = integer_kernel(fix.transpose());
    of_basis_.clear();
    for (std::size_t c = 0; c < ker.cols(); ++c)
        of_basis_.push_back(from_ok(std::span<mpz_class const>(ker.column(c))));
}

KElement FieldTower::zero() const { return KElement{RatVector(degree())}; }

KElement FieldTower::one() const { return rational(1); }

KElement FieldTower::rational(mpq_class const& q) const
{
    KElement x = zero();
    x.c[0] = q;
    return x;
}

KElement FieldTower::zeta(unsigned long k) const
{
    k %= p_;
    KElement x = zero();
    if (k == p_ - 1) {
        for (std::size_t i = 0; i < half(); ++i)
            x.c[i] = -1;
    } else {
        x.c[k] = 1;
    }
    return x;
}

KElement FieldTower::delta() const
{
    KElement x = zero();
    x.c[half()] = 1;
    return x;
}

KElement FieldTower::embed(LElement const& u) const
{
    KElement x = zero();
    if (quad_.half_integral_omega()) {
        x.c[0] = u.a + u.b / 2;
        x.c[half()] = u.b / 2;
    } else {
        x.c[0] = u.a;
        x.c[half()] = u.b;
    }
    return x;
}

KElement FieldTower::omega() const { return embed(LElement{0, 1}); }

KElement FieldTower::sqrt_minus_ell() const { return mpq_class(static_cast<long>(scale_)) * delta(); }

KElement FieldTower::mul(KElement const& x, KElement const& y) const
{
    std::size_t const h = half();
    std::span<mpq_class const> xa(x.c.data(), h), xb(x.c.data() + h, h);
    std::span<mpq_class const> ya(y.c.data(), h), yb(y.c.data() + h, h);
    auto aa = cyc_mul(xa, ya, p_);
    auto bb = cyc_mul(xb, yb, p_);
    auto ab = cyc_mul(xa, yb, p_);
    auto ba = cyc_mul(xb, ya, p_);
    KElement r = zero();
    mpq_class const l0(static_cast<long>(ell0()));
    for (std::size_t i = 0; i < h; ++i) {
        r.c[i] = aa[i] - l0 * bb[i];
        r.c[h + i] = ab[i] + ba[i];
    }
    return r;
}

KElement FieldTower::pow(KElement const& x, unsigned long e) const
{
    KElement r = one(), b = x;
    while (e) {
        if (e & 1) r = mul(r, b);
        e >>= 1;
        if (e) b = mul(b, b);
    }
    return r;
}

KElement FieldTower::inv(KElement const& x) const
{
    if (x.is_zero()) throw std::domain_error("inverse of zero in K");
    RatMatrix m = mult_matrix(x);
    // y * m = 1
    KElement e1 = one();
    return KElement{solve_left(m, e1.c)};
}

KElement FieldTower::galois(KElement const& x, unsigned long k, int s) const
{
    k %= p_;
    if (k == 0) throw std::invalid_argument("galois: k must be a unit mod p");
    std::size_t const h = half();
    std::vector<mpq_class> ra(p_), rb(p_);
    for (std::size_t i = 0; i < h; ++i) {
        std::size_t const j = (i * k) % p_;
        ra[j] += x.c[i];
        rb[j] += x.c[h + i];
    }
    KElement r = zero();
    for (std::size_t i = 0; i < h; ++i) {
        r.c[i] = ra[i] - ra[p_ - 1];
        r.c[h + i] = rb[i] - rb[p_ - 1];
        if (s < 0) r.c[h + i] = -r.c[h + i];
    }
    return r;
}

KElement FieldTower::conj(KElement const& x) const { return galois(x, p_ - 1, -1); }

mpq_class FieldTower::trace_Q(KElement const& x) const
{
    return 2 * cyc_trace(std::span<mpq_class const>(x.c.data(), half()), p_);
}

LElement FieldTower::trace_L(KElement const& x) const
{
    std::size_t const h = half();
    mpq_class const a = cyc_trace(std::span<mpq_class const>(x.c.data(), h), p_);
    mpq_class const b = cyc_trace(std::span<mpq_class const>(x.c.data() + h, h), p_);
    if (quad_.half_integral_omega()) return {a - b, 2 * b};
    return {a, b};
}

KElement FieldTower::trace_F(KElement const& x) const { return x + conj(x); }

KElement FieldTower::trace_M(KElement const& x) const
{
    KElement r = zero();
    for (std::size_t i = 0; i < half(); ++i)
        r.c[i] = 2 * x.c[i];
    return r;
}

RatMatrix FieldTower::mult_matrix(KElement const& x) const
{
    std::size_t const n = degree();
    RatMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        KElement e = zero();
        e.c[j] = 1;
        KElement r = mul(x, e);
        for (std::size_t k = 0; k < n; ++k)
            m(j, k) = r.c[k];
    }
    return m;
}

mpq_class FieldTower::norm_Q(KElement const& x) const { return det_exact(mult_matrix(x)); }

QPoly FieldTower::charpoly(KElement const& x) const { return hlat::charpoly(mult_matrix(x)); }

QPoly FieldTower::minimal_polynomial(KElement const& x) const
{
    QPoly c = charpoly(x);
    return divmod(c, gcd(c, c.derivative())).first.monic();
}

mpq_class FieldTower::norm_F(KElement const& x) const
{
    if (!in_F(x)) throw std::invalid_argument("norm_F: element is not in F");
    auto f = monic_sqrt(charpoly(x));
    if (!f) throw std::logic_error("norm_F: characteristic polynomial is not a square");
    mpq_class c = f->coeff(0);
    return f->degree() % 2 ? mpq_class(-c) : c;
}

RatVector FieldTower::to_ok(KElement const& x) const
{
    std::size_t const n = degree();
    RatVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (x.c[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (k_to_ok_(i, j) != 0) y[j] += x.c[i] * k_to_ok_(i, j);
    }
    return y;
}

KElement FieldTower::from_ok(std::span<mpq_class const> y) const
{
    std::size_t const n = degree();
    KElement x = zero();
    for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) continue;
        for (std::size_t k = 0; k < n; ++k)
            if (ok_to_k_(j, k) != 0) x.c[k] += y[j] * ok_to_k_(j, k);
    }
    return x;
}

KElement FieldTower::from_ok(std::span<mpz_class const> y) const
{
    RatVector q(y.begin(), y.end());
    return from_ok(std::span<mpq_class const>(q));
}

RatMatrix FieldTower::ok_mult_matrix(KElement const& x) const
{
    std::size_t const n = degree();
    RatMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        KElement e{RatVector(ok_to_k_.row(j).begin(), ok_to_k_.row(j).end())};
        RatVector r = to_ok(mul(x, e));
        for (std::size_t k = 0; k < n; ++k)
            m(j, k) = r[k];
    }
    return m;
}

std::vector<std::complex<long double>> FieldTower::embeddings(KElement const& x) const
{
    std::size_t const h = half();
    long double const root = std::sqrt(static_cast<long double>(ell0()));
    std::vector<std::complex<long double>> out;
    out.reserve(degree());
    for (unsigned long k = 1; k < p_; ++k) {
        std::complex<long double> a = 0, b = 0;
        for (std::size_t i = 0; i < h; ++i) {
            std::size_t const j = (i * k) % p_;
            std::complex<long double> z(cos_[j], sin_[j]);
            if (x.c[i] != 0) a += static_cast<long double>(x.c[i].get_d()) * z;
            if (x.c[h + i] != 0) b += static_cast<long double>(x.c[h + i].get_d()) * z;
        }
        std::complex<long double> const id(0, root);
        out.push_back(a + id * b);
        out.push_back(a - id * b);
    }
    return out;
}

std::vector<long double> FieldTower::real_embeddings(KElement const& x) const
{
    auto e = embeddings(x);
    std::vector<long double> out;
    for (std::size_t k = 0; k < e.size(); k += 2)
        out.push_back(e[k].real());
    return out;
}

CertifiedEmbedding FieldTower::certified_embeddings(KElement const& x, mpfr_prec_t prec) const
{
    std::size_t const h = half();
    std::vector<Ball> cs, ss;
    for (unsigned long j = 0; j < p_; ++j) {
        cs.push_back(Ball::cos_2pi(j, p_, prec));
        ss.push_back(Ball::sin_2pi(j, p_, prec));
    }
    Ball const root = Ball::sqrt(ell0(), prec);
    std::vector<Ball> a(h, Ball(prec)), b(h, Ball(prec));
    for (std::size_t i = 0; i < h; ++i) {
        a[i] = Ball::exact(x.c[i], prec);
        b[i] = Ball::exact(x.c[h + i], prec);
    }
    CertifiedEmbedding out{{}, prec};
    for (unsigned long k = 1; k < p_; ++k) {
        Ball are(prec), aim(prec), bre(prec), bim(prec);
        for (std::size_t i = 0; i < h; ++i) {
            std::size_t const j = (i * k) % p_;
            if (x.c[i] != 0) {
                are = are + a[i] * cs[j];
                aim = aim + a[i] * ss[j];
            }
            if (x.c[h + i] != 0) {
                bre = bre + b[i] * cs[j];
                bim = bim + b[i] * ss[j];
            }
        }
        // a + s i root b
        Ball const rb_re = root * bre, rb_im = root * bim;
        out.values.push_back({k, +1, are - rb_im, aim + rb_re});
        out.values.push_back({k, -1, are + rb_im, aim - rb_re});
    }
    return out;
}

std::vector<int> FieldTower::real_signs(KElement const& x) const
{
    if (!in_F(x)) throw std::invalid_argument("real_signs: element is not in F");
    if (x.is_zero()) throw std::domain_error("real_signs: zero element");
    for (mpfr_prec_t prec = 64; prec <= (1 << 16); prec *= 2) {
        auto emb = certified_embeddings(x, prec);
        std::vector<int> s;
        bool ok = true;
        for (auto const& v : emb.values) {
            if (v.s < 0) continue;
            int const sg = v.re.certified_sign();
            ok = ok && sg != 0;
            s.push_back(sg);
        }
        if (ok) return s;
    }
    throw std::runtime_error("real_signs: precision cap reached");
}

bool sturm_all_roots_positive(QPoly const& f)
{
    if (f(mpq_class(0)) == 0) return false;
    return sturm_count(f, std::nullopt, mpq_class(0)) == 0;
}

FieldTower::PositivityDecision FieldTower::decide_total_positivity(KElement const& x, mpfr_prec_t max_prec) const
{
    if (!in_F(x)) throw std::invalid_argument("is_totally_positive: element is not in F");
    if (x.is_zero()) return {false, false, 0};
    for (mpfr_prec_t prec = 64; prec <= max_prec; prec *= 2) {
        auto emb = certified_embeddings(x, prec);
        bool all_pos = true;
        for (auto const& v : emb.values) {
            if (v.s < 0) continue;
            int const sg = v.re.certified_sign();
            if (sg < 0) return {false, false, prec};
            all_pos = all_pos && sg > 0;
        }
        if (all_pos) return {true, false, prec};
    }
    return {sturm_all_roots_positive(minimal_polynomial(x)), true, max_prec};
}

}  // namespace hlat
