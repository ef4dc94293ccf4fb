#include "hlat/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace hlat {

namespace {

constexpr long double kRelativeSlack = 1e-9L;
constexpr long long kFastCoordLimit = 1LL << 24;

struct GsData {
    RatMatrix mu;
    std::vector<mpq_class> b;
};

GsData gram_schmidt(RatMatrix const& g)
{
    std::size_t const n = g.rows();
    GsData out{RatMatrix(n, n), std::vector<mpq_class>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            mpq_class s = g(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= out.mu(j, k) * out.mu(i, k) * out.b[k];
            out.mu(i, j) = s / out.b[j];
        }
        mpq_class s = g(i, i);
        for (std::size_t k = 0; k < i; ++k)
            s -= out.mu(i, k) * out.mu(i, k) * out.b[k];
        if (s <= 0) throw NotPositiveDefinite();
        out.b[i] = s;
    }
    return out;
}

/* Floating-point search tree over an LDL^T factorisation. */
struct FpTree {
    std::size_t n = 0;
    std::vector<long double> mu;      // mu[i*n+j], j < i
    std::vector<long double> b;
    std::vector<long double> target;  // enumeration centre, in the same coordinates

    long double radius(long double r) const
    {
        long double bmin = std::numeric_limits<long double>::max();
        for (auto v : b)
            bmin = std::min(bmin, v);
        return r * (1 + kRelativeSlack) + kRelativeSlack * bmin;
    }

    std::vector<long long> top_values(long double R) const
    {
        std::vector<long long> out;
        if (n == 0 || R < 0) return out;
        long double const c = target[n - 1];
        long double const r = std::sqrt(R / b[n - 1]);
        auto lo = static_cast<long long>(std::ceil(c - r));
        auto hi = static_cast<long long>(std::floor(c + r));
        for (long long v = lo; v <= hi; ++v)
            out.push_back(v);
        return out;
    }

    template <class Leaf>
    bool search(long double R, std::span<long long const> tops, Leaf&& leaf) const
    {
        std::vector<long long> x(n, 0);
        auto dfs = [&](auto&& self, std::size_t j, long double partial) -> bool {
            long double c = target[j];
            for (std::size_t i = j + 1; i < n; ++i)
                c -= mu[i * n + j] * (static_cast<long double>(x[i]) - target[i]);
            long double const rem = R - partial;
            if (rem < 0) return true;
            long double const r = std::sqrt(rem / b[j]);
            auto lo = static_cast<long long>(std::ceil(c - r));
            auto hi = static_cast<long long>(std::floor(c + r));
            for (long long v = lo; v <= hi; ++v) {
                long double const d = static_cast<long double>(v) - c;
                long double const np = partial + b[j] * d * d;
                if (np > R) continue;
                x[j] = v;
                if (j == 0) {
                    if (!leaf(std::span<long long const>(x))) return false;
                } else if (!self(self, j - 1, np)) {
                    return false;
                }
            }
            x[j] = 0;
            return true;
        };
        for (long long v : tops) {
            long double const d = static_cast<long double>(v) - target[n - 1];
            long double const np = b[n - 1] * d * d;
            if (np > R) continue;
            x[n - 1] = v;
            if (n == 1) {
                if (!leaf(std::span<long long const>(x))) return false;
            } else if (!dfs(dfs, n - 2, np)) {
                return false;
            }
        }
        return true;
    }
};

FpTree make_tree(GramForm const& reduced, std::vector<long double> target)
{
    GsData gs = gram_schmidt(reduced.g);
    FpTree t;
    t.n = reduced.dim();
    t.mu.assign(t.n * t.n, 0);
    t.b.resize(t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
        t.b[i] = gs.b[i].get_d();
        for (std::size_t j = 0; j < i; ++j)
            t.mu[i * t.n + j] = gs.mu(i, j).get_d();
    }
    t.target = std::move(target);
    t.target.resize(t.n, 0);
    return t;
}

std::vector<std::vector<long long>> split(std::vector<long long> const& v, unsigned parts)
{
    parts = std::max(1u, parts);
    std::vector<std::vector<long long>> out(parts);
    std::size_t const chunk = (v.size() + parts - 1) / parts;
    for (std::size_t k = 0; k < v.size(); ++k)
        out[chunk ? k / chunk : 0].push_back(v[k]);
    return out;
}

}  // namespace

ShortVectorEnumerator::ShortVectorEnumerator(GramForm const& q) : original_(q)
{
    if (!q.is_positive_definite()) throw NotPositiveDefinite();
    LllResult lll = lll_reduce(q);
    reduced_ = std::move(lll.reduced);
    t_ = std::move(lll.t);
    std::size_t const n = dim();
    scale_ = common_denominator(reduced_.g);
    scaled_ = IntMatrix(n, n);
    fast_ = true;
    qi_.assign(n * n, 0);
    mpz_class const limit = mpz_class(1) << 62;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            mpq_class v = reduced_.g(i, j) * scale_;
            scaled_(i, j) = v.get_num();
            if (abs(scaled_(i, j)) >= limit)
                fast_ = false;
            else
                qi_[i * n + j] = scaled_(i, j).get_si();
        }
    FpTree tree = make_tree(reduced_, {});
    mu_ = std::move(tree.mu);
    b_ = std::move(tree.b);
}

std::vector<long long> ShortVectorEnumerator::top_values(mpq_class const& bound) const
{
    FpTree tree{dim(), mu_, b_, std::vector<long double>(dim(), 0)};
    return tree.top_values(tree.radius(static_cast<long double>(bound.get_d())));
}

void ShortVectorEnumerator::run(mpq_class const& bound, std::span<long long const> tops,
                                std::function<bool(std::span<long long const>, long long)> const& leaf) const
{
    // leaf receives the scaled norm; -1 signals "use the exact slow path"
    std::size_t const n = dim();
    if (n == 0 || sgn(bound) < 0) return;
    FpTree tree{n, mu_, b_, std::vector<long double>(n, 0)};
    mpz_class bound_scaled;
    {
        mpq_class bs = bound * scale_;
        mpz_fdiv_q(bound_scaled.get_mpz_t(), bs.get_num_mpz_t(), bs.get_den_mpz_t());
    }
    bool const fast_bound = fast_ && mpz_fits_slong_p(bound_scaled.get_mpz_t());
    long long const bs_ll = fast_bound ? bound_scaled.get_si() : 0;
    IntVector xz(n);
    tree.search(tree.radius(static_cast<long double>(bound.get_d())), tops, [&](std::span<long long const> z) {
        bool zero = true;
        bool small = true;
        for (long long v : z) {
            zero = zero && v == 0;
            small = small && v < kFastCoordLimit && v > -kFastCoordLimit;
        }
        if (zero) return true;
        if (fast_bound && small) {
            __int128 s = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (z[i] == 0) continue;
                __int128 r = 0;
                for (std::size_t j = 0; j < n; ++j)
                    r += static_cast<__int128>(qi_[i * n + j]) * z[j];
                s += r * z[i];
            }
            if (s > bs_ll) return true;
            return leaf(z, static_cast<long long>(s));
        }
        for (std::size_t i = 0; i < n; ++i)
            xz[i] = static_cast<long>(z[i]);
        mpz_class s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (xz[i] == 0) continue;
            mpz_class r = 0;
            for (std::size_t j = 0; j < n; ++j)
                r += scaled_(i, j) * xz[j];
            s += r * xz[i];
        }
        if (s > bound_scaled) return true;
        return leaf(z, -1);
    });
}

void ShortVectorEnumerator::for_each_reduced(mpq_class const& bound, ReducedVisitor const& visit) const
{
    auto tops = top_values(bound);
    run(bound, tops, [&](std::span<long long const> z, long long s) {
        mpq_class norm = s >= 0 ? mpq_class(mpz_class(static_cast<long>(s)), scale_) : reduced_.evaluate(z);
        norm.canonicalize();
        return visit(z, norm);
    });
}

void ShortVectorEnumerator::for_each(mpq_class const& bound, Visitor const& visit) const
{
    for_each_reduced(bound, [&](std::span<long long const> z, mpq_class const& norm) {
        IntVector x = to_original(z);
        return visit(std::span<mpz_class const>(x), norm);
    });
}

IntVector ShortVectorEnumerator::to_original(std::span<long long const> z) const
{
    std::size_t const n = dim();
    IntVector x(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (z[j] == 0) continue;
        mpz_class const zj = static_cast<long>(z[j]);
        for (std::size_t i = 0; i < n; ++i)
            x[i] += t_(i, j) * zj;
    }
    return x;
}

std::vector<std::vector<long long>> ShortVectorEnumerator::collect_reduced(mpq_class const& bound,
                                                                           unsigned threads) const
{
    auto parts = split(top_values(bound), threads);
    std::vector<std::vector<std::vector<long long>>> found(parts.size());
    auto work = [&](std::size_t k) {
        run(bound, parts[k], [&](std::span<long long const> z, long long) {
            found[k].emplace_back(z.begin(), z.end());
            return true;
        });
    };
    if (parts.size() == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < parts.size(); ++k)
            pool.emplace_back(work, k);
    }
    std::vector<std::vector<long long>> out;
    for (auto& f : found)
        for (auto& v : f)
            out.push_back(std::move(v));
    return out;
}

std::map<mpq_class, std::uint64_t> ShortVectorEnumerator::norm_histogram(mpq_class const& bound,
                                                                        unsigned threads) const
{
    auto parts = split(top_values(bound), threads);
    std::vector<std::map<long long, std::uint64_t>> fast(parts.size());
    std::vector<std::map<mpq_class, std::uint64_t>> slow(parts.size());
    auto work = [&](std::size_t k) {
        run(bound, parts[k], [&](std::span<long long const> z, long long s) {
            if (s >= 0)
                ++fast[k][s];
            else
                ++slow[k][reduced_.evaluate(z)];
            return true;
        });
    };
    if (parts.size() == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < parts.size(); ++k)
            pool.emplace_back(work, k);
    }
    std::map<mpq_class, std::uint64_t> out;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        for (auto const& [s, c] : fast[k]) {
            mpq_class norm(mpz_class(static_cast<long>(s)), scale_);
            norm.canonicalize();
            out[norm] += c;
        }
        for (auto const& [norm, c] : slow[k])
            out[norm] += c;
    }
    return out;
}

void enumerate_short(GramForm const& q, mpq_class const& bound, ShortVectorEnumerator::Visitor const& visit)
{
    ShortVectorEnumerator(q).for_each(bound, visit);
}

std::vector<IntVector> short_vectors(GramForm const& q, mpq_class const& bound)
{
    std::vector<IntVector> out;
    enumerate_short(q, bound, [&](std::span<mpz_class const> x, mpq_class const&) {
        out.emplace_back(x.begin(), x.end());
        return true;
    });
    return out;
}

void enumerate_coset(GramForm const& q, mpq_class const& bound, std::span<LinearConstraint const> constraints,
                     ShortVectorEnumerator::Visitor const& visit)
{
    std::size_t const n = q.dim();
    if (!q.is_positive_definite()) throw NotPositiveDefinite();
    if (sgn(bound) < 0) return;
    IntMatrix c(constraints.size(), n);
    IntVector t(constraints.size());
    for (std::size_t k = 0; k < constraints.size(); ++k) {
        if (constraints[k].coeffs.size() != n)
            throw std::invalid_argument("enumerate_coset: constraint has wrong length");
        if (constraints[k].target.get_den() != 1) return;  // integer x cannot hit a fractional value
        for (std::size_t j = 0; j < n; ++j)
            c(k, j) = constraints[k].coeffs[j];
        t[k] = constraints[k].target.get_num();
    }
    auto sol = solve_integer(c, t);
    if (!sol) return;
    IntVector const& x0 = sol->x0;
    IntMatrix const& K = sol->kernel;
    std::size_t const r = K.cols();

    auto emit = [&](IntVector const& x) {
        bool zero = std::all_of(x.begin(), x.end(), [](mpz_class const& v) { return v == 0; });
        if (zero) return true;
        mpq_class norm = q.evaluate(std::span<mpz_class const>(x));
        if (norm > bound) return true;
        return visit(std::span<mpz_class const>(x), norm);
    };
    if (r == 0) {
        emit(x0);
        return;
    }

    RatMatrix Kq = to_rational(K);
    RatMatrix qk = Kq.transpose() * q.g;
    GramForm sub(qk * Kq);
    LllResult lll = lll_reduce(sub);
    RatMatrix T = to_rational(lll.t);

    // minimiser of q(x0 + K z) over real z, expressed in reduced coordinates
    RatVector x0q(x0.begin(), x0.end());
    RatVector lin(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j)
            lin[i] += qk(i, j) * x0q[j];
    RatMatrix subinv = invert(sub.g);
    RatVector zstar(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            zstar[i] -= subinv(i, j) * lin[j];
    mpq_class qmin = q.evaluate(std::span<mpz_class const>(x0));
    for (std::size_t i = 0; i < r; ++i)
        qmin += zstar[i] * lin[i];
    mpq_class const radius = bound - qmin;
    if (sgn(radius) < 0) return;
    RatMatrix Tinv = invert(T);
    std::vector<long double> centre(r);
    for (std::size_t i = 0; i < r; ++i) {
        mpq_class s = 0;
        for (std::size_t j = 0; j < r; ++j)
            s += Tinv(i, j) * zstar[j];
        centre[i] = s.get_d();
    }

    FpTree tree = make_tree(lll.reduced, centre);
    long double const R = tree.radius(static_cast<long double>(radius.get_d()));
    auto tops = tree.top_values(R);
    IntVector x(n);
    tree.search(R, tops, [&](std::span<long long const> w) {
        x = x0;
        for (std::size_t a = 0; a < r; ++a) {
            if (w[a] == 0) continue;
            mpz_class const wa = static_cast<long>(w[a]);
            for (std::size_t b = 0; b < r; ++b) {
                if (lll.t(b, a) == 0) continue;
                mpz_class const zb = lll.t(b, a) * wa;
                for (std::size_t i = 0; i < n; ++i)
                    x[i] += K(i, b) * zb;
            }
        }
        return emit(x);
    });
}

std::vector<IntVector> coset_vectors(GramForm const& q, mpq_class const& bound,
                                     std::span<LinearConstraint const> constraints)
{
    std::vector<IntVector> out;
    enumerate_coset(q, bound, constraints, [&](std::span<mpz_class const> x, mpq_class const&) {
        out.emplace_back(x.begin(), x.end());
        return true;
    });
    return out;
}

}  // namespace hlat
