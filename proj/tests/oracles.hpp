#pragma once

// Independent reference data used by several test binaries. Nothing here
// goes through the library code paths it is compared against.

#include "hlat/matrix.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/* Cartan matrix of E8: chain 0-1-2-3-4-5-6 with node 7 attached to node 4. */
inline hlat::IntMatrix e8_cartan()
{
    hlat::IntMatrix g(8, 8);
    for (int i = 0; i < 8; ++i)
        g(i, i) = 2;
    auto link = [&](int a, int b) { g(a, b) = g(b, a) = -1; };
    for (int i = 0; i + 1 < 7; ++i)
        link(i, i + 1);
    link(4, 7);
    return g;
}

inline std::uint64_t sigma3(std::uint64_t m)
{
    std::uint64_t s = 0;
    for (std::uint64_t d = 1; d <= m; ++d)
        if (m % d == 0) s += d * d * d;
    return s;
}

/* Theta coefficients of E8 by the Eisenstein series identity 240 sigma_3(m). */
inline std::uint64_t e8_theta(std::uint64_t m) { return m == 0 ? 1 : 240 * sigma3(m); }

/* Brute-force count of integer vectors x with x^T g x <= bound and all
 * |x_i| <= box, excluding 0. */
inline std::vector<std::vector<long>> brute_force_short(hlat::IntMatrix const& g, long bound, long box)
{
    std::size_t const n = g.rows();
    std::vector<std::vector<long>> out;
    std::vector<long> x(n, -box);
    while (true) {
        bool zero = true;
        long s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            zero = zero && x[i] == 0;
            for (std::size_t j = 0; j < n; ++j)
                s += x[i] * g(i, j).get_si() * x[j];
        }
        if (!zero && s <= bound) out.push_back(x);
        std::size_t k = 0;
        while (k < n && x[k] == box)
            x[k++] = -box;
        if (k == n) break;
        ++x[k];
    }
    return out;
}

/* Random positive definite integer Gram: A^T A + I for a random A. */
inline hlat::IntMatrix random_pd_gram(std::mt19937_64& rng, std::size_t n, int span)
{
    std::uniform_int_distribution<int> dist(-span, span);
    hlat::IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = dist(rng);
    hlat::IntMatrix g = a.transpose() * a;
    for (std::size_t i = 0; i < n; ++i)
        g(i, i) += 1;
    return g;
}

/* Random unimodular matrix as a product of elementary operations. */
inline hlat::IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps)
{
    hlat::IntMatrix u = hlat::IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        int c = coef(rng);
        for (std::size_t r = 0; r < n; ++r)
            u(r, i) += c * u(r, j);
    }
    return u;
}

}  // namespace oracle

namespace oracle {

/* Determinant by plain rational Gaussian elimination. */
inline mpq_class naive_det(std::vector<std::vector<mpq_class>> a)
{
    std::size_t const n = a.size();
    mpq_class det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0)
            ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            mpq_class f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

/* Resultant of two integer polynomials (coefficients low to high) via the
 * Sylvester matrix. */
inline mpq_class resultant(std::vector<long> const& f, std::vector<long> const& g)
{
    std::size_t const m = f.size() - 1, n = g.size() - 1;
    std::vector<std::vector<mpq_class>> s(m + n, std::vector<mpq_class>(m + n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= m; ++k)
            s[i][i + k] = f[m - k];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k <= n; ++k)
            s[n + i][i + k] = g[n - k];
    return naive_det(s);
}

/* |disc Q(zeta_p)| = |res(Phi_p, Phi_p')|. */
inline mpz_class cyclotomic_disc(long p)
{
    std::vector<long> phi(static_cast<std::size_t>(p), 1), dphi;
    for (long i = 1; i < p; ++i)
        dphi.push_back(i);
    mpq_class r = resultant(phi, dphi);
    return abs(r.get_num());
}

}  // namespace oracle
