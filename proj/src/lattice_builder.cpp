#include "hlat/lattice_builder.hpp"

#include "hlat/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace hlat {

UnramifiedEvidence verify_unramified(FieldTower const& t)
{
    auto disc2 = [&](KElement const& b) {
        KElement const t00 = t.trace_F(t.one()), t01 = t.trace_F(b), t11 = t.trace_F(t.mul(b, b));
        return t.mul(t00, t11) - t.mul(t01, t01);
    };
    UnramifiedEvidence ev;
    KElement const d1 = disc2(t.sqrt_minus_ell());
    ev.expected_d_b1 = -4 * mpq_class(static_cast<long>(t.ell_input()));
    ev.d_b1 = d1.c[0];
    ev.d_b1_ok = d1 == t.rational(d1.c[0]) && ev.d_b1 == ev.expected_d_b1;

    ev.d_b2 = disc2(t.zeta());
    KElement const w = t.zeta() - t.zeta(t.p() - 1);
    ev.norm_d_b2 = t.norm_F(ev.d_b2);
    ev.d_b2_ok = ev.d_b2 == t.mul(w, w) && ev.norm_d_b2 == mpz_class(t.p()) * t.p();

    mpz_class n1;
    mpz_pow_ui(n1.get_mpz_t(), ev.d_b1.get_num_mpz_t(), t.p() - 1);
    ev.norm_d_b1 = n1;
    ev.support_gcd = gcd(n1, ev.norm_d_b2.get_num());
    ev.unramified = ev.support_gcd == 1;
    return ev;
}

std::string SearchLog::summary() const
{
    std::ostringstream os;
    os << "pool_norm=" << budget.pool_norm << " unit_range=" << budget.unit_range << " candidates=" << candidates.size()
       << '\n';
    for (auto const& c : candidates) {
        os << "  " << c.label << ": N(C)=" << c.norm_c << " generators=" << c.generators << " units=" << c.units
           << (c.accepted ? " accepted" : " rejected");
        if (!c.note.empty()) os << " (" << c.note << ')';
        os << '\n';
    }
    return os.str();
}

SearchExhausted::SearchExhausted(SearchLog log)
    : std::runtime_error("no unimodular pair within the search budget\n" + log.summary()), log_(std::move(log))
{
}

bool satisfies_criterion(FieldTower const& t, FracIdeal const& a, KElement const& d)
{
    if (d.is_zero() || !t.in_F(d) || !t.is_totally_positive(d)) return false;
    FracIdeal prod = mul(t, mul(t, principal_ideal(t, d), mul(t, a, conj(t, a))), different_ideal(t));
    return prod == maximal_order(t);
}

std::vector<KElement> fixed_sublattice(FieldTower const& t, FracIdeal const& c)
{
    std::size_t const n = t.degree();
    RatMatrix const b = c.rational_basis();
    RatMatrix jc = b * to_rational(t.ok_conj_matrix()) * invert(b);
    IntMatrix fix = to_integer(jc) - IntMatrix::identity(n);
    IntMatrix ker = integer_kernel(fix.transpose());
    std::vector<KElement> out;
    for (std::size_t k = 0; k < ker.cols(); ++k) {
        RatVector y(n);
        for (std::size_t i = 0; i < n; ++i)
            if (ker(i, k) != 0)
                for (std::size_t j = 0; j < n; ++j)
                    y[j] += ker(i, k) * b(i, j);
        out.push_back(t.from_ok(std::span<mpq_class const>(y)));
    }
    return out;
}

namespace {

struct Candidate {
    std::string label;
    FracIdeal ideal;
    mpq_class norm;
};

std::vector<Candidate> candidate_pool(FieldTower const& t, unsigned long pool_norm)
{
    std::vector<Candidate> pool{{"O_K", FracIdeal::unit(t.degree()), 1}};
    std::vector<Candidate> primes;
    for (unsigned long q = 2; q <= pool_norm; ++q) {
        for (auto& pr : degree_one_primes(t, q)) {
            // conj: omega -> Tr(omega) - omega, zeta -> zeta^-1
            unsigned long const rc = t.L().half_integral_omega() ? (1 + q - pr.r) % q : (q - pr.r) % q;
            unsigned long sc = 1;
            while (sc * pr.s % q != 1)
                ++sc;
            if (std::pair{rc, sc} < std::pair{pr.r, pr.s}) continue;
            std::string label = "P(" + std::to_string(q) + "," + std::to_string(pr.r) + "," + std::to_string(pr.s) + ")";
            primes.push_back({std::move(label), std::move(pr.ideal), q});
        }
    }
    std::vector<Candidate> products;
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (std::size_t j = i; j < primes.size(); ++j)
            if (primes[i].norm * primes[j].norm <= pool_norm)
                products.push_back(
                    {primes[i].label + "*" + primes[j].label, mul(t, primes[i].ideal, primes[j].ideal),
                     primes[i].norm * primes[j].norm});
    for (auto& c : primes)
        pool.push_back(std::move(c));
    for (auto& c : products)
        pool.push_back(std::move(c));
    std::stable_sort(pool.begin() + 1, pool.end(), [](Candidate const& a, Candidate const& b) { return a.norm < b.norm; });
    return pool;
}

std::optional<mpq_class> rational_sqrt(mpq_class const& x)
{
    if (x < 0) return std::nullopt;
    mpz_class a, b;
    if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t())) return std::nullopt;
    mpz_sqrt(a.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(b.get_mpz_t(), x.get_den_mpz_t());
    return mpq_class(a, b);
}

/* x with first nonzero coordinate negative is -y for an emitted y. */
bool canonical_sign(std::span<mpz_class const> x)
{
    for (auto const& v : x)
        if (v != 0) return v > 0;
    return false;
}

KElement combine(FieldTower const& t, std::vector<KElement> const& basis, std::span<mpz_class const> z)
{
    KElement x = t.zero();
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (z[i] != 0) x = x + mpq_class(z[i]) * basis[i];
    return x;
}

/* T2(x, y) = Tr_{F/Q}(x y) on F elements. */
GramForm t2_form(FieldTower const& t, std::vector<KElement> const& basis)
{
    std::size_t const m = basis.size();
    RatMatrix g(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j)
            g(i, j) = g(j, i) = t.trace_Q(t.mul(basis[i], basis[j])) / 2;
    return GramForm(std::move(g));
}

long double log_abs_norm(FieldTower const& t, KElement const& x)
{
    long double s = 0;
    for (long double v : t.real_embeddings(x))
        s += std::log(std::fabs(v));
    return s;
}

std::uint32_t sign_mask(FieldTower const& t, KElement const& x)
{
    std::uint32_t m = 0;
    auto s = t.real_signs(x);
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s[k] < 0) m |= 1u << k;
    return m;
}

/* Units of O_F: -1, the cyclotomic units of Q(zeta_p)^+, and short elements
 * of O_F of norm +-1. */
std::vector<KElement> known_units(FieldTower const& t)
{
    std::vector<KElement> units{t.rational(-1)};
    KElement const den = t.inv(t.zeta() - t.zeta(t.p() - 1));
    for (unsigned long k = 2; k <= (t.p() - 1) / 2; ++k)
        units.push_back(t.mul(t.zeta(k) - t.zeta(t.p() - k), den));
    auto const& of = t.of_basis();
    ShortVectorEnumerator en(t2_form(t, of));
    mpq_class const bound(static_cast<long>(3 * (t.p() - 1)));
    en.for_each(bound, [&](std::span<mpz_class const> z, mpq_class const&) {
        if (!canonical_sign(z)) return true;
        KElement u = combine(t, of, z);
        if (std::fabs(log_abs_norm(t, u)) > 1e-6L) return true;
        if (abs(t.norm_Q(u)) == 1) units.push_back(std::move(u));
        return units.size() < 64;
    });
    return units;
}

/* Subset of units whose sign masks xor to `target`, if any. */
std::optional<std::vector<std::size_t>> solve_signs(std::vector<std::uint32_t> const& masks, std::uint32_t target)
{
    struct Row {
        std::uint32_t mask;
        std::vector<bool> combo;
    };
    std::vector<Row> basis;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        Row r{masks[i], std::vector<bool>(masks.size())};
        r.combo[i] = true;
        // reduce by pivots (lowest set bit of each basis row)
        for (auto const& b : basis) {
            std::uint32_t const piv = b.mask & -b.mask;
            if (r.mask & piv) {
                r.mask ^= b.mask;
                for (std::size_t k = 0; k < r.combo.size(); ++k)
                    r.combo[k] = r.combo[k] != b.combo[k];
            }
        }
        if (r.mask == 0) continue;
        std::uint32_t const piv = r.mask & -r.mask;
        for (auto& b : basis)
            if (b.mask & piv) {
                b.mask ^= r.mask;
                for (std::size_t k = 0; k < b.combo.size(); ++k)
                    b.combo[k] = b.combo[k] != r.combo[k];
            }
        basis.push_back(std::move(r));
    }
    std::uint32_t m = target;
    std::vector<bool> combo(masks.size());
    for (auto const& b : basis) {
        std::uint32_t const piv = b.mask & -b.mask;
        if (m & piv) {
            m ^= b.mask;
            for (std::size_t k = 0; k < combo.size(); ++k)
                combo[k] = combo[k] != b.combo[k];
        }
    }
    if (m != 0) return std::nullopt;
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < combo.size(); ++k)
        if (combo[k]) out.push_back(k);
    return out;
}

long double log_spread(FieldTower const& t, KElement const& x)
{
    auto e = t.real_embeddings(x);
    long double mean = 0;
    for (auto& v : e) {
        v = std::log(std::fabs(v));
        mean += v;
    }
    mean /= e.size();
    long double s = 0;
    for (auto v : e)
        s += (v - mean) * (v - mean);
    return s;
}

/* Multiply by squares of units while the embeddings get more balanced. */
KElement reduce_height(FieldTower const& t, KElement d, std::vector<KElement> const& units, unsigned range)
{
    for (std::size_t i = 1; i < units.size(); ++i) {
        KElement const sq = t.mul(units[i], units[i]);
        KElement const isq = t.inv(sq);
        for (unsigned step = 0; step < range; ++step) {
            long double const cur = log_spread(t, d);
            KElement const up = t.mul(d, sq), down = t.mul(d, isq);
            long double const su = log_spread(t, up), sd = log_spread(t, down);
            if (su < cur - 1e-9L && su <= sd)
                d = up;
            else if (sd < cur - 1e-9L)
                d = down;
            else
                break;
        }
    }
    return d;
}

}  // namespace

UnimodularPair find_unimodular_pair(FieldTower const& t, SearchBudget const& budget)
{
    SearchLog log;
    log.budget = budget;
    if (budget.max_candidates == 0) throw SearchExhausted(std::move(log));

    FracIdeal const different = different_ideal(t);
    std::vector<KElement> const units = budget.unit_range == 0 ? std::vector<KElement>{t.rational(-1)} : known_units(t);
    std::vector<std::uint32_t> unit_masks;
    for (auto const& u : units)
        unit_masks.push_back(sign_mask(t, u));

    auto pool = candidate_pool(t, budget.pool_norm);
    unsigned long const deg_f = t.p() - 1;
    for (std::size_t ci = 0; ci < pool.size() && ci < budget.max_candidates; ++ci) {
        Candidate const& cand = pool[ci];
        CandidateLog entry;
        entry.label = cand.label;
        FracIdeal const c = inverse(t, mul(t, mul(t, cand.ideal, conj(t, cand.ideal)), different));
        entry.norm_c = c.norm();
        auto const target = rational_sqrt(entry.norm_c);
        if (!target) {
            entry.note = "N(C) is not a square";
            log.candidates.push_back(std::move(entry));
            continue;
        }

        // generators g of C inside F: |N_{F/Q}(g)| = sqrt(N(C)); T2(g) >= (p-1) N^(2/(p-1))
        std::vector<KElement> const fb = fixed_sublattice(t, c);
        ShortVectorEnumerator en(t2_form(t, fb));
        long double const log_target = std::log(static_cast<long double>(target->get_d()));
        long double const lower = deg_f * std::exp(2 * log_target / deg_f);
        mpq_class prev = -1;
        mpq_class bound(static_cast<double>(lower * 1.0001L) + 1e-6);
        std::vector<KElement> gens;
        for (unsigned round = 0; round <= budget.enum_rounds && gens.empty(); ++round) {
            en.for_each(bound, [&](std::span<mpz_class const> z, mpq_class const& nrm) {
                if (nrm <= prev || !canonical_sign(z)) return true;
                KElement g = combine(t, fb, z);
                if (std::fabs(log_abs_norm(t, g) - log_target) > 1e-6L) return true;
                if (abs(t.norm_Q(g)) == entry.norm_c) gens.push_back(std::move(g));
                return gens.size() < 16;
            });
            prev = bound;
            bound *= mpq_class(3, 2);
        }
        entry.generators = gens.size();
        if (gens.empty()) {
            entry.note = "no generator in C cap F up to T2 <= " + prev.get_str();
            log.candidates.push_back(std::move(entry));
            continue;
        }

        std::vector<KElement> local_units = units;
        std::vector<std::uint32_t> local_masks = unit_masks;
        if (budget.unit_range > 0) {
            KElement const g0inv = t.inv(gens[0]);
            for (std::size_t i = 1; i < gens.size(); ++i) {
                local_units.push_back(t.mul(gens[i], g0inv));
                local_masks.push_back(sign_mask(t, local_units.back()));
            }
        }
        entry.units = local_units.size();

        for (auto const& g : gens) {
            auto sol = solve_signs(local_masks, sign_mask(t, g));
            if (!sol) continue;
            KElement d = g;
            for (auto k : *sol)
                d = t.mul(d, local_units[k]);
            if (budget.unit_range > 0) d = reduce_height(t, d, units, budget.unit_range);
            if (!t.is_totally_positive(d) || !(principal_ideal(t, d) == c)) continue;
            entry.accepted = true;
            log.candidates.push_back(entry);
            return UnimodularPair{cand.ideal, d, cand.label, std::move(log)};
        }
        entry.note = "no totally positive generator from the known units";
        log.candidates.push_back(std::move(entry));
    }
    throw SearchExhausted(std::move(log));
}

TraceLattice trace_gram(FieldTower const& t, FracIdeal const& a, KElement const& d)
{
    RatMatrix const y = a.rational_basis();
    RatMatrix const m = y * t.ok_mult_matrix(d) * to_rational(t.ok_trace_matrix()) *
                        to_rational(t.ok_conj_matrix().transpose()) * y.transpose();
    return TraceLattice{a, d, ideal_elements(t, a), m};
}

std::vector<std::string> EvenUnimodularReport::failures() const
{
    std::vector<std::string> f;
    if (!integral) f.push_back("integrality");
    if (!even) f.push_back("even diagonal");
    if (!det_one) f.push_back("determinant 1 (got " + det.get_str() + ")");
    if (!positive_definite) f.push_back("positive definiteness");
    if (!dim_ok) f.push_back("dimension divisible by 8 (got " + std::to_string(dim) + ")");
    return f;
}

EvenUnimodularReport verify_even_unimodular(RatMatrix const& gram)
{
    EvenUnimodularReport r;
    r.dim = gram.rows();
    if (!gram.is_square()) return r;
    bool symmetric = gram == gram.transpose();
    r.integral = symmetric;
    for (std::size_t i = 0; i < r.dim; ++i)
        for (std::size_t j = 0; j < r.dim; ++j)
            r.integral = r.integral && gram(i, j).get_den() == 1;
    r.even = r.integral;
    for (std::size_t i = 0; i < r.dim && r.even; ++i)
        r.even = gram(i, i).get_num() % 2 == 0;
    r.det = det_exact(gram);
    r.det_one = r.det == 1;
    r.positive_definite = symmetric;
    for (auto const& m : leading_minors(gram))
        r.positive_definite = r.positive_definite && m > 0;
    r.dim_ok = r.dim > 0 && r.dim % 8 == 0;
    return r;
}

}  // namespace hlat
