/* Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails. */

#include "hlat/cli_report.hpp"
#include "oracles.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace hlat;
namespace fs = std::filesystem;

namespace {

std::vector<std::pair<unsigned long, unsigned long>> const kSmall{{1, 5}, {3, 5}, {7, 5}, {4, 5}, {11, 5}};

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, std::string const& what)
    {
        if (!ok) {
            if (pass) detail.clear();
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(std::string const& s)
    {
        if (pass) detail += (detail.empty() ? "" : ", ") + s;
    }
};

fs::path g_dir;

struct Built {
    unsigned long ell, p;
    FieldTower t;
    LatticeRecord rec;
    HermitianLattice hl;
};
std::vector<Built> g_built;

int run_cli(std::string const& args, std::string* err = nullptr)
{
    fs::path const e = g_dir / "stderr.txt";
    std::string const cmd = std::string(HLAT_CLI) + " " + args + " > " + (g_dir / "stdout.txt").string() + " 2> " + e.string();
    int const status = std::system(cmd.c_str());
    if (err) {
        std::ifstream in(e);
        std::stringstream ss;
        ss << in.rdbuf();
        *err = ss.str();
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string pair_str(unsigned long ell, unsigned long p) { return "(" + std::to_string(ell) + "," + std::to_string(p) + ")"; }

// ------------------------------------------------------------------ criteria

Outcome construction()
{
    Outcome o;
    double worst = 0;
    for (auto [ell, p] : kSmall) {
        std::string const f = (g_dir / ("lattice_" + std::to_string(ell) + "_" + std::to_string(p) + ".json")).string();
        auto start = std::chrono::steady_clock::now();
        int const b = run_cli("build --ell " + std::to_string(ell) + " --p " + std::to_string(p) + " --out " + f);
        int const v = b == 0 ? run_cli("verify --in " + f) : -1;
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        worst = std::max(worst, secs);
        o.require(b == 0, pair_str(ell, p) + " build exit " + std::to_string(b));
        o.require(v == 0, pair_str(ell, p) + " verify exit " + std::to_string(v));
        if (b != 0) continue;
        auto rec = read_record(f);
        auto rep = verify_even_unimodular(to_rational(rec.gram));
        o.require(rep.integral && rep.even && rep.det_one && rep.positive_definite && rep.dim_ok,
                  pair_str(ell, p) + " even unimodular checks");
        o.require(rep.dim == 8 && rep.det == 1, pair_str(ell, p) + " dim/det");
        o.require(secs < 30, pair_str(ell, p) + " took " + std::to_string(secs) + " s");
        auto t = FieldTower::build(ell, p);
        g_built.push_back({ell, p, t, rec, hermitian_lattice(t, rec)});
    }
    o.note("5 pairs built and verified through the CLI, dim 8, det 1, slowest " + std::to_string(worst).substr(0, 5) + " s");
    return o;
}

Outcome e8()
{
    Outcome o;
    ShortVectorEnumerator textbook{GramForm(oracle::e8_cartan())};
    auto const hist = textbook.norm_histogram(2);
    std::uint64_t const oracle_roots = hist.count(2) ? hist.at(2) : 0;
    o.require(oracle_roots == 240, "textbook E8 gives " + std::to_string(oracle_roots) + " roots");
    o.require(g_built.size() == kSmall.size(), "missing lattices from criterion 1");
    for (auto const& b : g_built) {
        auto r = e8_identify(b.hl);
        o.require(r.is_e8, pair_str(b.ell, b.p) + " not identified as E8");
        o.require(r.roots == oracle_roots, pair_str(b.ell, b.p) + " has " + std::to_string(r.roots) + " roots");
    }
    o.note("all 5 identified, 240 roots each, equal to the textbook E8 count");
    return o;
}

Outcome genus1()
{
    Outcome o;
    auto t = FieldTower::build(1, 5);
    auto pair = find_unimodular_pair(t);
    auto hl = hermitian_lattice(t, trace_gram(t, pair.ideal, pair.d));
    auto c = theta_genus1(hl, 6);
    o.require(c.size() == 7 && c[0] == 1, "c_0 != 1");
    for (std::size_t m = 1; m < c.size(); ++m) {
        o.require(c[m] % 5 == 0, "c_" + std::to_string(m) + " not divisible by 5");
        o.require(c[m] == oracle::e8_theta(m), "c_" + std::to_string(m) + " differs from 240 sigma_3");
    }
    std::vector<std::uint64_t> const expected{1, 240, 2160, 6720, 17520};
    o.require(std::equal(expected.begin(), expected.end(), c.begin()), "c_0..c_4 differ from (1,240,2160,6720,17520)");
    o.require(congruence_check_genus1(c, 5).verdict, "congruence verdict");
    std::ostringstream os;
    os << "c_0..c_6 = (";
    for (std::size_t m = 0; m < c.size(); ++m)
        os << (m ? "," : "") << c[m];
    os << ")";
    o.note(os.str());
    return o;
}

Outcome large_case()
{
    Outcome o;
    auto t = FieldTower::build(3, 13);
    auto pair = find_unimodular_pair(t);
    auto rec = make_record(t, pair);
    auto rep = verify_even_unimodular(to_rational(rec.gram));
    o.require(rep.ok() && rep.dim == 24, "not a dim-24 even unimodular lattice");
    auto hl = hermitian_lattice(t, rec);
    auto z = check_zeta(hl);
    o.require(z.order_p, "zeta matrix does not have order 13");
    o.require(z.det_minus_identity == 169, "det(M - I) = " + z.det_minus_identity.get_str());
    auto c = theta_genus1(hl, 2, 4);
    o.require(c[1] % 13 == 0 && c[2] % 13 == 0, "c_1 or c_2 not divisible by 13");
    o.note("dim 24, det 1, M^13 = I, det(M - I) = 169, c_1 = " + std::to_string(c[1]) + ", c_2 = " + std::to_string(c[2]));
    g_built.push_back({3, 13, t, rec, hl});
    return o;
}

Outcome genus2()
{
    Outcome o;
    auto const& hl = g_built.front().hl;  // (1, 5)
    auto table = rep_numbers(hl, 2, 2, 4);
    auto cong = congruence_check(table, 5);
    HermMatrix zero;
    zero.n = 2;
    zero.diag = {0, 0};
    zero.upper = {{0, 0}};
    o.require(table.count(zero) == 1, "R_0 != 1");
    o.require(cong.verdict, "some R_A not divisible by 5");
    o.require(marginal_check(table, theta_genus1(hl, 2)), "marginalisation identity");
    o.note(std::to_string(table.counts.size()) + " matrices A, R_0 = 1, all others divisible by 5, marginals = c_a c_b");
    return o;
}

Outcome automorphism()
{
    Outcome o;
    std::uint64_t orbits = 0;
    for (auto const& b : g_built) {
        auto z = check_zeta(b.hl);
        std::string const tag = pair_str(b.ell, b.p);
        o.require(z.order_p, tag + " order");
        o.require(z.preserves_gram, tag + " M^T G M != G");
        o.require(z.fixed_point_free, tag + " ker(M - I) != 0");
        auto orb = check_orbits(b.hl, 4, 4);
        o.require(orb.ok(), tag + " orbit of size != p");
        orbits += orb.orbits;
    }
    o.note(std::to_string(g_built.size()) + " lattices, " + std::to_string(orbits) + " orbits of norm <= 4, all of size p");
    return o;
}

Outcome duality()
{
    Outcome o;
    for (auto const& b : g_built) {
        auto ht = check_hermitian_table(b.hl);
        std::string const tag = pair_str(b.ell, b.p);
        o.require(ht.in_inverse_different, tag + " sqrt(-ell) h not in O_L");
        o.require(ht.trace_matches_gram, tag + " Tr h != G");
        o.require(ht.conj_symmetric, tag + " h not conjugate symmetric");
        o.require(dual_check(b.hl).ok(), tag + " dual check");
    }
    o.note(std::to_string(g_built.size()) + " lattices");
    return o;
}

Outcome transform()
{
    Outcome o;
    auto const& hl = g_built.front().hl;
    auto r = transform_check_genus1(hl, {1.2, 1.5, 2.0}, 1e-8);
    o.require(r.reachable, "precision not reachable");
    o.require(r.pass && r.max_rel_error + r.tail_bound < 1e-8, "relative error above 1e-8");
    auto wrong = transform_check_genus1(hl, {1.2, 1.5, 2.0}, 1e-8, 40, 5.0);
    o.require(!wrong.pass && wrong.max_rel_error >= 0.1, "wrong exponent not detected");
    std::ostringstream os;
    os << "max error " << r.max_rel_error << " + certified tail " << r.tail_bound << " with " << r.coeff_bound
       << " coefficients; exponent 5 gives " << wrong.max_rel_error;
    o.note(os.str());
    return o;
}

Outcome unramified()
{
    Outcome o;
    auto pairs = kSmall;
    pairs.push_back({3, 13});
    for (auto [ell, p] : pairs) {
        auto ev = verify_unramified(FieldTower::build(ell, p));
        std::string const tag = pair_str(ell, p);
        o.require(ev.d_b1 == -4 * mpq_class(static_cast<long>(ell)), tag + " d_B1");
        o.require(ev.norm_d_b2 == p * p, tag + " N(d_B2)");
        o.require(ev.support_gcd == 1, tag + " shared prime support");
    }
    o.note("d_B1 = -4 ell, N(d_B2) = p^2, coprime, for 6 pairs");
    return o;
}

Outcome validation()
{
    Outcome o;
    struct Case {
        unsigned long ell, p;
        char const* msg;
    };
    for (auto c : {Case{5, 5, "p = 5 divides ell = 5"}, Case{1, 7, "p = 7 is not congruent to 1 mod 4"},
                   Case{1, 4, "p = 4 is not prime"}}) {
        std::string err;
        int code = run_cli("build --ell " + std::to_string(c.ell) + " --p " + std::to_string(c.p) + " --out " +
                               (g_dir / "rejected.json").string(),
                           &err);
        o.require(code == 3, pair_str(c.ell, c.p) + " exit " + std::to_string(code));
        o.require(err.find(c.msg) != std::string::npos, pair_str(c.ell, c.p) + " message '" + err + "'");
    }
    o.note("(5,5), (1,7), (1,4) exit 3 with specific messages");
    return o;
}

KElement random_k(FieldTower const& t, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> num(-6, 6), den(1, 3);
    KElement x;
    for (std::size_t i = 0; i < t.degree(); ++i) {
        mpq_class v(num(rng), den(rng));
        v.canonicalize();
        x.c.push_back(v);
    }
    return x;
}

Outcome properties()
{
    Outcome o;
    std::mt19937_64 rng(20240601);
    int const kChecks = 200;
    std::vector<FieldTower> towers;
    for (auto [ell, p] : kSmall)
        towers.push_back(FieldTower::build(ell, p));
    towers.push_back(FieldTower::build(3, 13));
    std::uniform_int_distribution<std::size_t> pick(0, towers.size() - 1);

    int fail_trace = 0, fail_conj = 0, fail_hnf = 0, fail_coset = 0, fail_gl = 0;
    for (int i = 0; i < kChecks; ++i) {
        auto const& t = towers[pick(rng)];
        auto x = random_k(t, rng);
        mpq_class const tq = t.trace_Q(x);
        bool ok = t.L().trace(t.trace_L(x)) == tq && t.trace_Q(t.trace_F(x)) == 2 * tq &&
                  t.trace_Q(t.trace_M(x)) == 2 * tq && t.in_F(t.trace_F(x));
        fail_trace += !ok;
    }
    for (int i = 0; i < kChecks; ++i) {
        auto const& t = towers[pick(rng)];
        auto x = random_k(t, rng), y = random_k(t, rng);
        bool ok = t.conj(t.conj(x)) == x && t.conj(t.mul(x, y)) == t.mul(t.conj(x), t.conj(y)) &&
                  t.conj(x + y) == t.conj(x) + t.conj(y);
        fail_conj += !ok;
    }
    for (int i = 0; i < kChecks; ++i) {
        std::uniform_int_distribution<std::size_t> dim(1, 5);
        std::uniform_int_distribution<int> entry(-20, 20);
        std::size_t const r = dim(rng), c = dim(rng);
        IntMatrix m(r, c);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < c; ++b)
                m(a, b) = entry(rng);
        auto h = hnf(m);
        bool ok = hnf(h.h).h == h.h && m * h.u == h.h && abs(det_exact(h.u)) == 1;
        fail_hnf += !ok;
    }
    for (int i = 0; i < kChecks; ++i) {
        std::uniform_int_distribution<std::size_t> dim(1, 4), ncons(0, 2);
        std::uniform_int_distribution<int> bnd(0, 6), coef(-2, 2), tgt(-3, 3);
        std::size_t const n = dim(rng);
        GramForm g(oracle::random_pd_gram(rng, n, 1));
        mpq_class const bound(bnd(rng));
        std::vector<LinearConstraint> cons(ncons(rng));
        for (auto& cn : cons) {
            cn.coeffs.resize(n);
            for (auto& v : cn.coeffs)
                v = coef(rng);
            cn.target = tgt(rng);
        }
        std::set<IntVector> filtered, coset;
        for (auto const& v : short_vectors(g, bound)) {
            bool keep = true;
            for (auto const& cn : cons) {
                mpz_class s = 0;
                for (std::size_t k = 0; k < n; ++k)
                    s += cn.coeffs[k] * v[k];
                keep = keep && s == cn.target;
            }
            if (keep) filtered.insert(v);
        }
        auto cv = coset_vectors(g, bound, cons);
        coset.insert(cv.begin(), cv.end());
        fail_coset += !(coset == filtered && coset.size() == cv.size());
    }
    {
        std::vector<std::pair<ImaginaryQuadratic, RepNumberTable>> tables;
        for (std::size_t k : {0ul, 1ul})  // (1,5) and (3,5)
            tables.emplace_back(g_built[k].hl.L(), rep_numbers(g_built[k].hl, 2, 2, 4));
        for (int i = 0; i < kChecks; ++i) {
            auto const& [q, table] = tables[i % tables.size()];
            auto const units = q.units();
            std::uniform_int_distribution<std::size_t> ui(0, units.size() - 1);
            std::uniform_int_distribution<int> kind(0, 2), small(-1, 1);
            using Mat = std::vector<std::vector<LElement>>;
            auto mul = [&](Mat const& a, Mat const& b) {
                Mat c(2, std::vector<LElement>(2, LElement{0, 0}));
                for (int r = 0; r < 2; ++r)
                    for (int s = 0; s < 2; ++s)
                        for (int k = 0; k < 2; ++k)
                            c[r][s] = q.add(c[r][s], q.mul(a[r][k], b[k][s]));
                return c;
            };
            Mat u{{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}};
            for (int step = 0; step < 3; ++step) {
                Mat e{{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}};
                switch (kind(rng)) {
                case 0: e = {{units[ui(rng)], {0, 0}}, {{0, 0}, units[ui(rng)]}}; break;
                case 1: e = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}}; break;
                default: e[0][1] = {small(rng), small(rng)}; break;
                }
                u = mul(u, e);
            }
            fail_gl += !u_invariance_check(q, table, u).ok();
        }
    }
    auto report = [&](char const* name, int fails) {
        o.require(fails == 0, std::string(name) + ": " + std::to_string(fails) + " failures");
    };
    report("trace transitivity", fail_trace);
    report("conj involution", fail_conj);
    report("hnf idempotence", fail_hnf);
    report("coset vs filter", fail_coset);
    report("GL_2(O_L) invariance", fail_gl);
    o.note("5 x 200 randomized checks, zero failures");
    return o;
}

}  // namespace

int main()
{
    g_dir = fs::temp_directory_path() / ("hlat_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(g_dir);

    struct Criterion {
        int id;
        char const* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> const criteria{
        {1, "construction", construction},     {2, "E8 identification", e8},
        {3, "genus-1 congruence", genus1},     {4, "large case (3,13)", large_case},
        {5, "genus-2 congruence", genus2},     {6, "automorphism", automorphism},
        {7, "duality", duality},               {8, "transformation formula", transform},
        {9, "unramified evidence", unramified},     {10, "input validation", validation},
        {11, "property suite", properties},
    };
    int failed = 0;
    for (auto const& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (std::exception const& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::ostringstream time;
        time.precision(2);
        time << std::fixed << secs;
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << ". " << c.name << ": " << o.detail << " [" << time.str()
                  << " s]" << std::endl;
    }
    fs::remove_all(g_dir);
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all 11 criteria passed") << std::endl;
    return failed ? 1 : 0;
}
