#include "hlat/hermitian_theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

namespace hlat {

namespace {

std::size_t upper_index(std::size_t n, std::size_t i, std::size_t j) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

long long to_ll(mpz_class const& v)
{
    if (!v.fits_slong_p()) throw std::overflow_error("value does not fit in 64 bits");
    return v.get_si();
}

std::vector<long long> to_ll(IntMatrix const& m)
{
    std::vector<long long> out;
    out.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out.push_back(to_ll(m(i, j)));
    return out;
}

/* y = M x for a row-major n x n matrix. */
void apply(std::vector<long long> const& m, std::span<long long const> x, std::span<long long> y)
{
    std::size_t const n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        long long s = 0;
        for (std::size_t j = 0; j < n; ++j)
            s += m[i * n + j] * x[j];
        y[i] = s;
    }
}

long long dot(std::span<long long const> a, std::span<long long const> b)
{
    long long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

/* Reduced-coordinate data shared by the counting routines: vectors are LLL
 * coordinates z, G, Ha, Hb are the transformed forms scaled to integers. */
struct Reduced {
    std::size_t n;
    IntMatrix t;
    std::vector<long long> g;       // t^T G t
    std::vector<long long> ha, hb;  // scale * t^T H t
    mpz_class scale;

    explicit Reduced(HermitianLattice const& hl)
    {
        auto const& en = hl.enumerator();
        n = hl.dim();
        t = en.transform();
        RatMatrix tr = to_rational(t);
        RatMatrix a(n, n), b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = hl.h(i, j).a;
                b(i, j) = hl.h(i, j).b;
            }
        RatMatrix ra = tr.transpose() * a * tr, rb = tr.transpose() * b * tr;
        scale = lcm(common_denominator(ra), common_denominator(rb));
        ha = to_ll(to_integer(mpq_class(scale) * ra));
        hb = to_ll(to_integer(mpq_class(scale) * rb));
        g = to_ll(to_integer(en.reduced().g));
    }

    long long norm(std::span<long long const> z) const
    {
        long long s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            long long r = 0;
            for (std::size_t j = 0; j < n; ++j)
                r += g[i * n + j] * z[j];
            s += z[i] * r;
        }
        return s;
    }
};

}  // namespace

// ---------------------------------------------------------------- HermMatrix

LElement HermMatrix::at(ImaginaryQuadratic const& q, std::size_t i, std::size_t j) const
{
    if (i == j) return {mpq_class(diag[i]), 0};
    if (i < j) return upper[upper_index(n, i, j)];
    return q.conj(upper[upper_index(n, j, i)]);
}

bool HermMatrix::is_zero() const
{
    for (auto const& d : diag)
        if (d != 0) return false;
    for (auto const& u : upper)
        if (u.a != 0 || u.b != 0) return false;
    return true;
}

std::string HermMatrix::str() const
{
    std::ostringstream os;
    os << "diag=[";
    for (std::size_t i = 0; i < diag.size(); ++i)
        os << (i ? "," : "") << diag[i];
    os << "] off=[";
    for (std::size_t i = 0; i < upper.size(); ++i)
        os << (i ? "," : "") << upper[i].a << (upper[i].b >= 0 ? "+" : "") << upper[i].b << "w";
    os << ']';
    return os.str();
}

HermMatrix herm_transform(ImaginaryQuadratic const& q, HermMatrix const& a, std::vector<std::vector<LElement>> const& u)
{
    std::size_t const n = a.n;
    std::vector<std::vector<LElement>> full(n, std::vector<LElement>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            LElement s{0, 0};
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t l = 0; l < n; ++l)
                    s = q.add(s, q.mul(q.mul(u[i][j], a.at(q, i, l)), q.conj(u[l][k])));
            full[j][k] = s;
        }
    HermMatrix out;
    out.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (!full[i][i].is_rational() || full[i][i].a.get_den() != 1)
            throw std::logic_error("transformed matrix has a non-integral diagonal");
        out.diag.push_back(full[i][i].a.get_num());
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.upper.push_back(full[i][j]);
    return out;
}

// ---------------------------------------------------------- HermitianLattice

HermitianLattice::HermitianLattice(ImaginaryQuadratic q, unsigned long p, IntMatrix gram, std::vector<LElement> h,
                                   IntMatrix zeta)
    : q_(q), p_(p), gram_(std::move(gram)), h_(std::move(h)), zeta_(std::move(zeta))
{
    std::size_t const n = gram_.rows();
    if (!gram_.is_square() || h_.size() != n * n || zeta_.rows() != n || zeta_.cols() != n)
        throw std::invalid_argument("inconsistent Hermitian lattice dimensions");
    RatMatrix g = to_rational(gram_);
    if (g == g.transpose()) {
        GramForm f(g);
        if (f.is_positive_definite()) en_ = std::make_shared<ShortVectorEnumerator>(f);
    }
}

ShortVectorEnumerator const& HermitianLattice::enumerator() const
{
    if (!en_) throw NotPositiveDefinite();
    return *en_;
}

LElement HermitianLattice::h_value(std::span<mpz_class const> x, std::span<mpz_class const> y) const
{
    std::size_t const n = dim();
    LElement s{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (y[j] == 0) continue;
            mpz_class const c = x[i] * y[j];
            s.a += c * h(i, j).a;
            s.b += c * h(i, j).b;
        }
    }
    return s;
}

std::vector<LElement> hermitian_gram_table(FieldTower const& t, FracIdeal const& a, KElement const& d)
{
    auto const b = ideal_elements(t, a);
    std::size_t const n = b.size();
    std::vector<KElement> db, cb;
    for (auto const& x : b) {
        db.push_back(t.mul(d, x));
        cb.push_back(t.conj(x));
    }
    std::vector<LElement> h(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h[i * n + j] = t.trace_L(t.mul(db[i], cb[j]));
    return h;
}

IntMatrix zeta_matrix(FieldTower const& t, FracIdeal const& a)
{
    RatMatrix const y = a.rational_basis();
    return to_integer(y * t.ok_mult_matrix(t.zeta()) * invert(y)).transpose();
}

HermitianLattice hermitian_lattice(FieldTower const& t, TraceLattice const& lat)
{
    return HermitianLattice(t.L(), t.p(), to_integer(lat.gram), hermitian_gram_table(t, lat.ideal, lat.d),
                            zeta_matrix(t, lat.ideal));
}

// ------------------------------------------------------------------ checks

HermitianTableReport check_hermitian_table(HermitianLattice const& hl)
{
    auto const& q = hl.L();
    HermitianTableReport r{true, true, true};
    for (std::size_t i = 0; i < hl.dim(); ++i)
        for (std::size_t j = 0; j < hl.dim(); ++j) {
            LElement const& v = hl.h(i, j);
            r.conj_symmetric = r.conj_symmetric && hl.h(j, i) == q.conj(v);
            r.in_inverse_different = r.in_inverse_different && q.in_inverse_different(v);
            r.trace_matches_gram = r.trace_matches_gram && q.trace(v) == hl.gram()(i, j);
        }
    return r;
}

ZetaReport check_zeta(HermitianLattice const& hl)
{
    std::size_t const n = hl.dim();
    IntMatrix const& m = hl.zeta_matrix();
    IntMatrix const id = IntMatrix::identity(n);
    ZetaReport r;
    IntMatrix pw = id;
    for (unsigned long k = 0; k < hl.p(); ++k)
        pw = pw * m;
    r.order_p = pw == id && !(m == id);
    r.preserves_gram = m.transpose() * hl.gram() * m == hl.gram();
    RatMatrix ha(n, n), hb(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ha(i, j) = hl.h(i, j).a;
            hb(i, j) = hl.h(i, j).b;
        }
    RatMatrix const mr = to_rational(m);
    r.preserves_h = mr.transpose() * ha * mr == ha && mr.transpose() * hb * mr == hb;
    r.det_minus_identity = det_exact(m - id);
    r.fixed_point_free = r.det_minus_identity != 0;
    return r;
}

OrbitReport check_orbits(HermitianLattice const& hl, mpq_class const& bound, unsigned threads)
{
    auto const& en = hl.enumerator();
    Reduced const red(hl);
    std::size_t const n = hl.dim();
    RatMatrix const tr = to_rational(red.t);
    std::vector<long long> const mz = to_ll(to_integer(invert(tr) * to_rational(hl.zeta_matrix()) * tr));

    auto vecs = en.collect_reduced(bound, threads);
    std::set<std::vector<long long>> seen;
    OrbitReport r;
    r.vectors = vecs.size();
    r.all_size_p = true;
    r.norms_preserved = true;
    std::vector<long long> cur(n), next(n);
    for (auto const& v : vecs) {
        if (seen.count(v)) continue;
        ++r.orbits;
        long long const nv = red.norm(v);
        cur = v;
        unsigned long size = 0;
        do {
            seen.insert(cur);
            ++size;
            apply(mz, cur, next);
            std::swap(cur, next);
            r.norms_preserved = r.norms_preserved && red.norm(cur) == nv;
        } while (cur != v && size <= hl.p());
        r.all_size_p = r.all_size_p && size == hl.p();
    }
    return r;
}

DualReport dual_check(HermitianLattice const& hl)
{
    DualReport r;
    r.det_one = det_exact(hl.gram()) == 1;
    r.h_in_inverse_different = true;
    for (auto const& v : hl.h_table())
        r.h_in_inverse_different = r.h_in_inverse_different && hl.L().in_inverse_different(v);
    return r;
}

std::vector<std::uint64_t> theta_genus1(HermitianLattice const& hl, unsigned long bound, unsigned threads)
{
    std::vector<std::uint64_t> c(bound + 1, 0);
    c[0] = 1;
    if (bound == 0) return c;
    auto hist = hl.enumerator().norm_histogram(mpq_class(static_cast<long>(2 * bound)), threads);
    for (auto const& [norm, count] : hist) {
        if (norm.get_den() != 1 || norm.get_num() % 2 != 0)
            throw std::logic_error("lattice vector of odd or non-integral norm " + norm.get_str());
        c[norm.get_num().get_ui() / 2] += count;
    }
    return c;
}

// --------------------------------------------------- representation numbers

std::vector<long long> RepNumberTable::encode(HermMatrix const& a) const
{
    std::vector<long long> key;
    for (auto const& d : a.diag)
        key.push_back(to_ll(d));
    for (auto const& u : a.upper) {
        mpq_class sa = u.a * scale, sb = u.b * scale;
        if (sa.get_den() != 1 || sb.get_den() != 1) throw std::invalid_argument("entry outside the table lattice");
        key.push_back(to_ll(sa.get_num()));
        key.push_back(to_ll(sb.get_num()));
    }
    return key;
}

HermMatrix RepNumberTable::decode(std::vector<long long> const& key) const
{
    HermMatrix a;
    a.n = genus;
    for (std::size_t i = 0; i < genus; ++i)
        a.diag.push_back(mpz_class(static_cast<long>(key[i])));
    for (std::size_t k = genus; k + 1 < key.size(); k += 2) {
        mpq_class x(mpz_class(static_cast<long>(key[k])), scale), y(mpz_class(static_cast<long>(key[k + 1])), scale);
        x.canonicalize();
        y.canonicalize();
        a.upper.push_back({x, y});
    }
    return a;
}

bool RepNumberTable::in_range(HermMatrix const& a) const
{
    for (auto const& d : a.diag)
        if (d < 0 || d > diag_bound) return false;
    return true;
}

std::uint64_t RepNumberTable::count(HermMatrix const& a) const
{
    if (!in_range(a)) throw std::out_of_range("matrix outside the table range");
    for (auto const& u : a.upper) {
        mpq_class sa = u.a * scale, sb = u.b * scale;
        if (sa.get_den() != 1 || sb.get_den() != 1) return 0;
    }
    auto it = counts.find(encode(a));
    return it == counts.end() ? 0 : it->second;
}

RepNumberTable rep_numbers(HermitianLattice const& hl, std::size_t genus, unsigned long diag_bound, unsigned threads)
{
    if (genus == 0) throw std::invalid_argument("genus must be at least 1");
    Reduced const red(hl);
    std::size_t const n = hl.dim();
    RepNumberTable table;
    table.genus = genus;
    table.diag_bound = diag_bound;
    table.scale = red.scale;

    auto vecs = hl.enumerator().collect_reduced(mpq_class(static_cast<long>(2 * diag_bound)), threads);
    vecs.insert(vecs.begin(), std::vector<long long>(n, 0));
    std::size_t const m = vecs.size();
    std::vector<long long> half(m);
    std::vector<std::vector<long long>> hav(m, std::vector<long long>(n)), hbv(m, std::vector<long long>(n));
    for (std::size_t k = 0; k < m; ++k) {
        half[k] = red.norm(vecs[k]) / 2;
        apply(red.ha, vecs[k], hav[k]);
        apply(red.hb, vecs[k], hbv[k]);
    }

    using Counts = std::map<std::vector<long long>, std::uint64_t>;
    std::size_t const key_len = genus + genus * (genus - 1);
    auto worker = [&](std::size_t first_lo, std::size_t first_hi, Counts& out) {
        std::vector<std::size_t> pick(genus);
        std::vector<long long> key(key_len);
        auto rec = [&](auto&& self, std::size_t k) -> void {
            if (k == genus) {
                auto it = out.find(key);
                if (it == out.end())
                    out.emplace(key, 1);
                else
                    ++it->second;
                return;
            }
            std::size_t const lo = k == 0 ? first_lo : 0, hi = k == 0 ? first_hi : m;
            for (std::size_t v = lo; v < hi; ++v) {
                pick[k] = v;
                key[k] = half[v];
                for (std::size_t i = 0; i < k; ++i) {
                    std::size_t const idx = genus + 2 * upper_index(genus, i, k);
                    key[idx] = dot(vecs[pick[i]], hav[v]);
                    key[idx + 1] = dot(vecs[pick[i]], hbv[v]);
                }
                self(self, k + 1);
            }
        };
        rec(rec, 0);
    };

    unsigned const parts = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(m)));
    std::vector<Counts> partial(parts);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < parts; ++w)
            pool.emplace_back(worker, m * w / parts, m * (w + 1) / parts, std::ref(partial[w]));
    }
    for (auto& part : partial)
        for (auto const& [k, c] : part)
            table.counts[k] += c;
    return table;
}

std::uint64_t rep_number(HermitianLattice const& hl, HermMatrix const& a)
{
    auto const& q = hl.L();
    std::size_t const n = hl.dim();
    Reduced const red(hl);
    auto const& en = hl.enumerator();
    GramForm const& g = en.reduced();
    for (auto const& d : a.diag)
        if (d < 0) return 0;

    std::vector<IntVector> picked(a.n);
    auto h_row = [&](IntVector const& x, std::vector<long long> const& hm) {
        IntVector r(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                r[j] += x[i] * static_cast<long>(hm[i * n + j]);
        return r;
    };
    std::uint64_t total = 0;
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == a.n) {
            ++total;
            return;
        }
        std::vector<LinearConstraint> cons;
        for (std::size_t i = 0; i < k; ++i) {
            LElement const v = a.at(q, i, k);
            cons.push_back({h_row(picked[i], red.ha), v.a * red.scale});
            cons.push_back({h_row(picked[i], red.hb), v.b * red.scale});
        }
        mpq_class const target(2 * a.diag[k]);
        if (target == 0) {
            for (auto const& c : cons)
                if (c.target != 0) return;
            picked[k] = IntVector(n);
            self(self, k + 1);
            return;
        }
        enumerate_coset(g, target, cons, [&](std::span<mpz_class const> x, mpq_class const& nrm) {
            if (nrm != target) return true;
            picked[k] = IntVector(x.begin(), x.end());
            self(self, k + 1);
            return true;
        });
    };
    rec(rec, 0);
    return total;
}

CongruenceReport congruence_check(RepNumberTable const& table, unsigned long p)
{
    CongruenceReport r;
    r.p = p;
    r.genus = table.genus;
    r.bound = table.diag_bound;
    r.verdict = true;
    bool saw_zero = false;
    for (auto const& [key, count] : table.counts) {
        HermMatrix a = table.decode(key);
        if (a.is_zero()) {
            saw_zero = true;
            r.verdict = r.verdict && count == 1;
        } else {
            r.verdict = r.verdict && count % p == 0;
        }
        r.entries.emplace_back(std::move(a), count);
    }
    r.verdict = r.verdict && saw_zero;
    return r;
}

CongruenceReport congruence_check_genus1(std::vector<std::uint64_t> const& c, unsigned long p)
{
    CongruenceReport r;
    r.p = p;
    r.genus = 1;
    r.bound = c.empty() ? 0 : c.size() - 1;
    r.verdict = !c.empty() && c[0] == 1;
    for (std::size_t m = 0; m < c.size(); ++m) {
        HermMatrix a;
        a.n = 1;
        a.diag.push_back(mpz_class(static_cast<unsigned long>(m)));
        if (m > 0) r.verdict = r.verdict && c[m] % p == 0;
        r.entries.emplace_back(std::move(a), c[m]);
    }
    return r;
}

bool marginal_check(RepNumberTable const& table, std::vector<std::uint64_t> const& c)
{
    if (table.genus != 2 || c.size() <= table.diag_bound) return false;
    std::map<std::pair<long long, long long>, std::uint64_t> sums;
    for (auto const& [key, count] : table.counts)
        sums[{key[0], key[1]}] += count;
    for (unsigned long a = 0; a <= table.diag_bound; ++a)
        for (unsigned long b = 0; b <= table.diag_bound; ++b) {
            auto it = sums.find({static_cast<long long>(a), static_cast<long long>(b)});
            std::uint64_t const got = it == sums.end() ? 0 : it->second;
            if (got != c[a] * c[b]) return false;
        }
    return true;
}

InvarianceReport u_invariance_check(ImaginaryQuadratic const& q, RepNumberTable const& table,
                                    std::vector<std::vector<LElement>> const& u)
{
    InvarianceReport r;
    for (auto const& [key, count] : table.counts) {
        HermMatrix img = herm_transform(q, table.decode(key), u);
        if (!table.in_range(img)) {
            ++r.skipped;
            continue;
        }
        ++r.checked;
        if (table.count(img) != count) ++r.mismatches;
    }
    return r;
}

// ------------------------------------------------------ transformation check

double theta_tail_bound(std::size_t dim, unsigned long bound, double y)
{
    // at most ((sqrt(2m) + r)/r)^dim vectors of norm <= 2m, r = sqrt(2)/2 the packing radius
    long double const r = std::sqrt(2.0L) / 2;
    long double const two_pi_y = 2 * std::numbers::pi_v<long double> * y;
    auto logf = [&](long double m) { return dim * std::log((std::sqrt(2 * m) + r) / r) - two_pi_y * m; };
    long double sum = 0;
    for (unsigned long m = bound + 1;; ++m) {
        long double const lf = logf(m);
        // the ratio f(m+1)/f(m) decreases in m, so a ratio below 1/2 bounds the rest geometrically
        long double const rho = std::exp(logf(m + 1) - lf);
        if (rho < 0.5L) {
            sum += std::exp(lf) / (1 - rho);
            break;
        }
        sum += std::exp(lf);
        if (m > bound + 100000) return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(sum);
}

TransformReport transform_check_genus1(HermitianLattice const& hl, std::vector<double> const& ys, double precision,
                                       unsigned long max_bound, std::optional<double> exponent, unsigned threads)
{
    for (double y : ys)
        if (!(y > 0)) throw std::invalid_argument("y values must be positive");
    std::size_t const dim = hl.dim();
    long double const w = exponent ? *exponent : static_cast<long double>(dim) / 2;

    // theta >= 1, so the relative truncation error is at most the absolute tail
    auto tails = [&](unsigned long b) {
        double worst = 0;
        for (double y : ys) {
            double const t = theta_tail_bound(dim, b, 1 / y) +
                             static_cast<double>(std::pow(static_cast<long double>(y), w)) * theta_tail_bound(dim, b, y);
            worst = std::max(worst, t);
        }
        return worst;
    };
    TransformReport rep;
    rep.achievable = tails(max_bound);
    unsigned long b = 0;
    while (b < max_bound && tails(b) > precision / 10)
        ++b;
    rep.coeff_bound = b;
    rep.tail_bound = tails(b);
    rep.reachable = rep.tail_bound <= precision / 10;
    if (!rep.reachable) return rep;

    auto const c = theta_genus1(hl, b, threads);
    auto theta = [&](long double y) {
        long double s = 0;
        for (std::size_t m = c.size(); m-- > 0;)
            s += static_cast<long double>(c[m]) * std::exp(-2 * std::numbers::pi_v<long double> * m * y);
        return s;
    };
    for (double y : ys) {
        long double const yl = y;
        long double const lhs = theta(1 / yl), rhs = std::pow(yl, w) * theta(yl);
        double const err = static_cast<double>(std::fabs(lhs - rhs) / lhs);
        rep.per_y.emplace_back(y, err);
        rep.max_rel_error = std::max(rep.max_rel_error, err);
    }
    rep.pass = rep.max_rel_error + rep.tail_bound < precision;
    return rep;
}

E8Report e8_identify(HermitianLattice const& hl)
{
    if (hl.dim() != 8)
        throw std::invalid_argument("E8 identification needs dimension 8, got " + std::to_string(hl.dim()));
    E8Report r;
    r.is_e8 = verify_even_unimodular(to_rational(hl.gram())).ok();
    if (r.is_e8) r.roots = theta_genus1(hl, 1)[1];
    return r;
}

}  // namespace hlat
