#include "hlat/exact_linalg.hpp"

#include <algorithm>
#include <utility>

namespace hlat {

GramForm::GramForm(RatMatrix m) : g(std::move(m))
{
    if (!g.is_square())
        throw std::invalid_argument("GramForm: matrix is not square");
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (g(i, j) != g(j, i))
                throw std::invalid_argument("GramForm: matrix is not symmetric");
}

bool GramForm::is_integral() const
{
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            if (g(i, j).get_den() != 1) return false;
    return true;
}

bool GramForm::is_positive_definite() const
{
    for (auto const& m : leading_minors(g))
        if (sgn(m) <= 0) return false;
    return true;
}

mpq_class GramForm::evaluate(std::span<mpz_class const> x) const
{
    mpq_class s = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x[i] == 0) continue;
        mpq_class r = 0;
        for (std::size_t j = 0; j < dim(); ++j)
            if (x[j] != 0) r += g(i, j) * x[j];
        s += r * x[i];
    }
    return s;
}

mpq_class GramForm::evaluate(std::span<long long const> x) const
{
    IntVector v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        v[i] = static_cast<long>(x[i]);
    return evaluate(std::span<mpz_class const>(v));
}

mpz_class floor_div(mpz_class const& a, mpz_class const& b)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

mpz_class round_div(mpz_class const& a, mpz_class const& b)
{
    // nearest integer to a/b, b > 0
    return floor_div(2 * a + b, 2 * b);
}

namespace {

/* Column operation on (h, u): (col_k, col_j) <- (s col_k + t col_j, x col_k + y col_j). */
void combine_columns(IntMatrix& m, std::size_t k, std::size_t j, mpz_class const& s, mpz_class const& t,
                     mpz_class const& x, mpz_class const& y)
{
    mpz_class a, b;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        a = m(r, k);
        b = m(r, j);
        m(r, k) = s * a + t * b;
        m(r, j) = x * a + y * b;
    }
}

void subtract_column(IntMatrix& m, std::size_t dst, std::size_t src, mpz_class const& q)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (m(r, src) != 0) m(r, dst) -= q * m(r, src);
}

void negate_column(IntMatrix& m, std::size_t c)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        m(r, c) = -m(r, c);
}

}  // namespace

HnfResult hnf(IntMatrix const& m)
{
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(m.cols());
    std::size_t const ncols = m.cols();
    std::size_t k = 0;
    mpz_class g, s, t, x, y;
    for (std::size_t i = 0; i < h.rows() && k < ncols; ++i) {
        for (std::size_t j = k + 1; j < ncols; ++j) {
            if (h(i, j) == 0) continue;
            mpz_class const a = h(i, k);
            mpz_class const b = h(i, j);
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            x = -b / g;
            y = a / g;
            combine_columns(h, k, j, s, t, x, y);
            combine_columns(u, k, j, s, t, x, y);
        }
        if (h(i, k) == 0) continue;
        if (h(i, k) < 0) {
            negate_column(h, k);
            negate_column(u, k);
        }
        for (std::size_t j = 0; j < k; ++j) {
            mpz_class q = floor_div(h(i, j), h(i, k));
            if (q == 0) continue;
            subtract_column(h, j, k, q);
            subtract_column(u, j, k, q);
        }
        ++k;
    }
    return {std::move(h), std::move(u)};
}

IntMatrix hnf_rows_modular(IntMatrix const& gens, mpz_class const& modulus)
{
    if (modulus <= 0)
        throw std::invalid_argument("hnf_rows_modular: modulus must be positive");
    std::size_t const n = gens.cols();
    IntMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        h(i, i) = modulus;

    std::vector<mpz_class> v(n);
    mpz_class g, s, t, a, b, e, f;
    for (std::size_t r = 0; r < gens.rows(); ++r) {
        for (std::size_t j = 0; j < n; ++j)
            mpz_fdiv_r(v[j].get_mpz_t(), gens(r, j).get_mpz_t(), modulus.get_mpz_t());
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] == 0) continue;
            a = h(i, i);
            b = v[i];
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            mpz_divexact(e.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(f.get_mpz_t(), b.get_mpz_t(), g.get_mpz_t());
            for (std::size_t j = i; j < n; ++j) {
                mpz_class const hj = h(i, j);
                h(i, j) = s * hj + t * v[j];
                v[j] = e * v[j] - f * hj;
                if (j > i) mpz_fdiv_r(h(i, j).get_mpz_t(), h(i, j).get_mpz_t(), modulus.get_mpz_t());
                mpz_fdiv_r(v[j].get_mpz_t(), v[j].get_mpz_t(), modulus.get_mpz_t());
            }
        }
    }
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i) {
            mpz_class q = floor_div(h(i, j), h(j, j));
            if (q == 0) continue;
            for (std::size_t c = j; c < n; ++c)
                h(i, c) -= q * h(j, c);
        }
    return h;
}

mpz_class det_exact(IntMatrix const& m)
{
    if (!m.is_square())
        throw std::invalid_argument("det_exact: matrix is not square");
    std::size_t const n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && a(r, k) == 0)
                ++r;
            if (r == n) return 0;
            a.swap_rows(k, r);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

mpq_class det_exact(RatMatrix const& m)
{
    if (!m.is_square())
        throw std::invalid_argument("det_exact: matrix is not square");
    // clear denominators row by row, then run Bareiss on integers
    IntMatrix a(m.rows(), m.cols());
    mpz_class scale = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        mpz_class d = 1;
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            mpq_class v = m(i, j) * d;
            a(i, j) = v.get_num();
        }
        scale *= d;
    }
    mpq_class r(det_exact(a), scale);
    r.canonicalize();
    return r;
}

std::vector<mpq_class> leading_minors(RatMatrix const& m)
{
    if (!m.is_square())
        throw std::invalid_argument("leading_minors: matrix is not square");
    std::size_t const n = m.rows();
    std::vector<mpq_class> out(n);
    RatMatrix a = m;
    mpq_class prod = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            // elimination without pivoting breaks down; finish with explicit minors
            for (std::size_t r = k; r < n; ++r) {
                RatMatrix sub(r + 1, r + 1);
                for (std::size_t i = 0; i <= r; ++i)
                    for (std::size_t j = 0; j <= r; ++j)
                        sub(i, j) = m(i, j);
                out[r] = det_exact(sub);
            }
            return out;
        }
        prod *= a(k, k);
        out[k] = prod;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            mpq_class f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
        }
    }
    return out;
}

RatMatrix invert(RatMatrix const& m)
{
    if (!m.is_square())
        throw std::invalid_argument("invert: matrix is not square");
    std::size_t const n = m.rows();
    RatMatrix a = m;
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0)
            ++piv;
        if (piv == n)
            throw std::domain_error("invert: singular matrix");
        a.swap_rows(k, piv);
        inv.swap_rows(k, piv);
        mpq_class const p = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= p;
            inv(k, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            mpq_class const f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                if (a(k, j) != 0) a(i, j) -= f * a(k, j);
                if (inv(k, j) != 0) inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

RatVector solve_left(RatMatrix const& m, std::span<mpq_class const> b)
{
    // x m = b  <=>  m^T x^T = b^T
    std::size_t const n = m.rows();
    if (!m.is_square() || b.size() != n)
        throw std::invalid_argument("solve_left: dimension mismatch");
    RatMatrix a = m.transpose();
    RatVector rhs(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0)
            ++piv;
        if (piv == n)
            throw std::domain_error("solve_left: singular matrix");
        a.swap_rows(k, piv);
        std::swap(rhs[k], rhs[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            mpq_class f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
            rhs[i] -= f * rhs[k];
        }
    }
    RatVector x(n);
    for (std::size_t k = n; k-- > 0;) {
        mpq_class s = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j)
            s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

namespace {

std::size_t hnf_rank(IntMatrix const& h)
{
    std::size_t r = 0;
    for (std::size_t j = 0; j < h.cols(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < h.rows() && zero; ++i)
            zero = h(i, j) == 0;
        if (zero) break;
        ++r;
    }
    return r;
}

}  // namespace

IntMatrix integer_kernel(IntMatrix const& m)
{
    auto [h, u] = hnf(m);
    std::size_t const r = hnf_rank(h);
    IntMatrix k(m.cols(), m.cols() - r);
    for (std::size_t j = r; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.cols(); ++i)
            k(i, j - r) = u(i, j);
    return k;
}

std::optional<AffineLattice> solve_integer(IntMatrix const& c, std::span<mpz_class const> t)
{
    if (t.size() != c.rows())
        throw std::invalid_argument("solve_integer: dimension mismatch");
    auto [h, u] = hnf(c);
    std::size_t const n = c.cols();
    std::size_t const r = hnf_rank(h);
    IntVector w(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        mpz_class rest = t[i];
        for (std::size_t j = 0; j < k; ++j)
            rest -= h(i, j) * w[j];
        if (k < r && h(i, k) != 0) {
            if (!mpz_divisible_p(rest.get_mpz_t(), h(i, k).get_mpz_t())) return std::nullopt;
            w[k] = rest / h(i, k);
            ++k;
        } else if (rest != 0) {
            return std::nullopt;
        }
    }
    AffineLattice out;
    out.x0.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j)
            out.x0[i] += u(i, j) * w[j];
    out.kernel = IntMatrix(n, n - r);
    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            out.kernel(i, j - r) = u(i, j);
    return out;
}

LllResult lll_reduce(GramForm const& q, mpq_class const& delta)
{
    if (delta <= mpq_class(1, 4) || delta >= 1)
        throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1)");
    std::size_t const n = q.dim();
    mpz_class const scale = common_denominator(q.g);
    IntMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            mpq_class v = q.g(i, j) * scale;
            b(i, j) = v.get_num();
        }
    IntMatrix H = IntMatrix::identity(n);
    if (n == 0) return {q, H, {}};

    mpz_class const dnum = delta.get_num();
    mpz_class const dden = delta.get_den();
    std::vector<mpz_class> d(n + 1);
    IntMatrix lam(n, n);
    d[0] = 1;
    d[1] = b(0, 0);
    if (d[1] <= 0) throw NotPositiveDefinite();

    auto redi = [&](std::size_t k, std::size_t l) {
        mpz_class twice = 2 * lam(k, l);
        if (abs(twice) <= d[l + 1]) return;
        mpz_class const qq = round_div(lam(k, l), d[l + 1]);
        for (std::size_t c = 0; c < n; ++c)
            H(k, c) -= qq * H(l, c);
        mpz_class const bkk = b(k, k) - 2 * qq * b(k, l) + qq * qq * b(l, l);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            b(k, i) -= qq * b(l, i);
            b(i, k) = b(k, i);
        }
        b(k, k) = bkk;
        lam(k, l) -= qq * d[l + 1];
        for (std::size_t i = 0; i < l; ++i)
            lam(k, i) -= qq * lam(l, i);
    };

    std::size_t kmax = 0;
    auto swapi = [&](std::size_t k) {
        H.swap_rows(k, k - 1);
        b.swap_rows(k, k - 1);
        b.swap_cols(k, k - 1);
        for (std::size_t j = 0; j + 1 < k; ++j)
            std::swap(lam(k, j), lam(k - 1, j));
        mpz_class const l = lam(k, k - 1);
        mpz_class B = (d[k - 1] * d[k + 1] + l * l) / d[k];
        for (std::size_t i = k + 1; i <= kmax; ++i) {
            mpz_class const t = lam(i, k);
            lam(i, k) = (d[k + 1] * lam(i, k - 1) - l * t) / d[k];
            lam(i, k - 1) = (B * t + l * lam(i, k)) / d[k + 1];
        }
        d[k] = std::move(B);
    };

    std::size_t k = 1;
    while (k < n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 0; j <= k; ++j) {
                mpz_class u = b(k, j);
                for (std::size_t i = 0; i < j; ++i)
                    u = (d[i + 1] * u - lam(k, i) * lam(j, i)) / d[i];
                if (j < k)
                    lam(k, j) = u;
                else {
                    if (u <= 0) throw NotPositiveDefinite();
                    d[k + 1] = u;
                }
            }
        }
        redi(k, k - 1);
        mpz_class const lhs = dden * d[k + 1] * d[k - 1];
        mpz_class const rhs = dnum * d[k] * d[k] - dden * lam(k, k - 1) * lam(k, k - 1);
        if (lhs < rhs) {
            swapi(k);
            if (k > 1) --k;
        } else {
            for (std::size_t l = k - 1; l-- > 0;)
                redi(k, l);
            ++k;
        }
    }

    LllResult out;
    out.t = H.transpose();
    RatMatrix red(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            red(i, j) = mpq_class(b(i, j), scale);
            red(i, j).canonicalize();
        }
    out.reduced = GramForm(std::move(red));
    out.gs_norms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.gs_norms[i] = mpq_class(d[i + 1], d[i] * scale);
        out.gs_norms[i].canonicalize();
    }
    return out;
}

bool is_lll_reduced(GramForm const& q, mpq_class const& delta)
{
    std::size_t const n = q.dim();
    RatMatrix mu(n, n);
    std::vector<mpq_class> B(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            mpq_class s = q.g(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= mu(j, k) * mu(i, k) * B[k];
            mu(i, j) = s / B[j];
        }
        mpq_class s = q.g(i, i);
        for (std::size_t k = 0; k < i; ++k)
            s -= mu(i, k) * mu(i, k) * B[k];
        if (s <= 0) return false;
        B[i] = s;
    }
    mpq_class const half(1, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(mu(i, j)) > half) return false;
    for (std::size_t k = 1; k < n; ++k)
        if (B[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * B[k - 1]) return false;
    return true;
}

}  // namespace hlat
