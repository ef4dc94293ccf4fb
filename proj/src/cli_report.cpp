#include "hlat/cli_report.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace hlat {

namespace {

json int_json(mpz_class const& v)
{
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

mpz_class json_int(json const& j)
{
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (j.is_number_unsigned()) return mpz_class(j.get<unsigned long>());
    if (j.is_string()) {
        mpz_class v;
        if (v.set_str(j.get<std::string>(), 10) == 0) return v;
    }
    throw InvalidInput("expected an integer, got " + j.dump());
}

json matrix_json(IntMatrix const& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(int_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

IntMatrix json_matrix(json const& j, std::size_t n, char const* what)
{
    if (!j.is_array() || j.size() != n) throw InvalidInput(std::string(what) + ": expected " + std::to_string(n) + " rows");
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw InvalidInput(std::string(what) + ": row " + std::to_string(i) + " has the wrong length");
        for (std::size_t k = 0; k < n; ++k)
            m(i, k) = json_int(j[i][k]);
    }
    return m;
}

json const& field(json const& j, char const* key)
{
    if (!j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
    return j.at(key);
}

unsigned long json_ulong(json const& j, char const* key)
{
    json const& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0))
        throw InvalidInput(std::string("field '") + key + "' must be a non-negative integer");
    return v.get<unsigned long>();
}

class Timer {
  public:
    double lap()
    {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

  private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string mpq_detail(char const* name, mpq_class const& v) { return std::string(name) + " = " + v.get_str(); }

int fail_invalid(std::ostream& err, std::string const& msg)
{
    err << "error: " << msg << '\n';
    return kInvalid;
}

/* Loads a lattice for the downstream commands, refusing unverified files. */
LatticeRecord load_verified(RunConfig const& cfg)
{
    if (cfg.in.empty()) throw InvalidInput("--in is required");
    LatticeRecord r = read_record(cfg.in);
    if (!is_verified(cfg.in)) throw InvalidInput("'" + cfg.in + "' has not passed verify; run `verify --in " + cfg.in + "` first");
    return r;
}

void emit(RunConfig const& cfg, std::ostream& out, std::string const& text)
{
    if (cfg.out.empty())
        out << text;
    else
        write_text(cfg.out, text);
}

}  // namespace

// ------------------------------------------------------------------ config

void RunConfig::validate() const
{
    if (genus == 0) throw InvalidInput("genus must be at least 1");
    if (threads == 0) throw InvalidInput("threads must be at least 1");
    if (!(precision > 0) || !std::isfinite(precision)) throw InvalidInput("precision must be a positive number");
    for (double y : ys)
        if (!(y > 0) || !std::isfinite(y)) throw InvalidInput("y values must be positive");
    if (budget.pool_norm == 0) throw InvalidInput("pool-norm must be at least 1");
    if (budget.enum_rounds == 0) throw InvalidInput("enum-rounds must be at least 1");
    if (exponent && !std::isfinite(*exponent)) throw InvalidInput("exponent must be finite");
}

// --------------------------------------------------------------- lattice file

LatticeRecord make_record(FieldTower const& t, UnimodularPair const& pair)
{
    LatticeRecord r;
    r.ell = t.ell_input();
    r.ell_norm = t.ell_norm();
    r.p = t.p();
    r.ideal = pair.ideal;
    r.d = pair.d;
    r.gram = to_integer(trace_gram(t, pair.ideal, pair.d).gram);
    r.zeta = zeta_matrix(t, pair.ideal);

    json cands = json::array();
    for (auto const& c : pair.log.candidates)
        cands.push_back({{"label", c.label},
                         {"norm_c", c.norm_c.get_str()},
                         {"generators", c.generators},
                         {"units", c.units},
                         {"accepted", c.accepted},
                         {"note", c.note}});
    r.provenance = {{"label", pair.label},
                    {"pool_norm", pair.log.budget.pool_norm},
                    {"unit_range", pair.log.budget.unit_range},
                    {"enum_rounds", pair.log.budget.enum_rounds},
                    {"candidates", std::move(cands)}};
    return r;
}

json to_json(LatticeRecord const& r)
{
    json d = json::array();
    for (auto const& s : r.d.to_strings())
        d.push_back(s);
    return {{"format_version", LatticeRecord::kFormatVersion},
            {"ell", r.ell},
            {"ell_norm", r.ell_norm},
            {"p", r.p},
            {"ideal_basis", matrix_json(r.ideal.basis())},
            {"ideal_den", int_json(r.ideal.den())},
            {"d_coords", std::move(d)},
            {"gram", matrix_json(r.gram)},
            {"zeta_matrix", matrix_json(r.zeta)},
            {"provenance", r.provenance}};
}

LatticeRecord record_from_json(json const& j)
{
    if (!j.is_object()) throw InvalidInput("lattice file must hold a JSON object");
    if (json_ulong(j, "format_version") != LatticeRecord::kFormatVersion)
        throw InvalidInput("unsupported format_version " + field(j, "format_version").dump());
    LatticeRecord r;
    r.ell = json_ulong(j, "ell");
    r.ell_norm = json_ulong(j, "ell_norm");
    r.p = json_ulong(j, "p");
    if (r.p < 3 || r.p > 1000) throw InvalidInput("p out of range");
    std::size_t const n = 2 * (r.p - 1);

    IntMatrix basis = json_matrix(field(j, "ideal_basis"), n, "ideal_basis");
    mpz_class den = json_int(field(j, "ideal_den"));
    if (den <= 0) throw InvalidInput("ideal_den must be positive");
    if (det_exact(basis) == 0) throw InvalidInput("ideal_basis is singular");
    r.ideal = FracIdeal::from_integer_rows(basis, den);
    if (!(r.ideal.basis() == basis) || r.ideal.den() != den)
        throw InvalidInput("ideal_basis/ideal_den are not in canonical form");

    json const& dc = field(j, "d_coords");
    if (!dc.is_array() || dc.size() != n) throw InvalidInput("d_coords must have " + std::to_string(n) + " entries");
    std::vector<std::string> strs;
    for (auto const& v : dc) {
        if (!v.is_string()) throw InvalidInput("d_coords entries must be rational strings");
        strs.push_back(v.get<std::string>());
    }
    r.d = KElement::from_strings(strs);
    r.gram = json_matrix(field(j, "gram"), n, "gram");
    r.zeta = json_matrix(field(j, "zeta_matrix"), n, "zeta_matrix");
    r.provenance = j.value("provenance", json::object());
    return r;
}

std::string canonical_dump(json const& j) { return j.dump(2) + "\n"; }

LatticeRecord read_record(std::string const& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (json::exception const& e) {
        throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
    }
    try {
        return record_from_json(j);
    } catch (json::exception const& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
}

void write_text(std::string const& path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
    if (!out) throw InvalidInput("write to '" + path + "' failed");
}

HermitianLattice hermitian_lattice(FieldTower const& t, LatticeRecord const& r)
{
    return HermitianLattice(t.L(), t.p(), r.gram, hermitian_gram_table(t, r.ideal, r.d), r.zeta);
}

// ------------------------------------------------------------------ tables

json to_json(RepNumberTable const& table, ImaginaryQuadratic const& q, unsigned long p)
{
    json entries = json::array();
    for (auto const& [key, count] : table.counts) {
        HermMatrix a = table.decode(key);
        json diag = json::array(), off = json::array();
        for (auto const& d : a.diag)
            diag.push_back(int_json(d));
        for (auto const& u : a.upper)
            off.push_back({u.a.get_str(), u.b.get_str()});
        entries.push_back({{"diag", diag}, {"offdiag", off}, {"count", count}, {"residue", count % p}});
    }
    return {{"genus", table.genus},
            {"diag_bound", table.diag_bound},
            {"p", p},
            {"omega", q.half_integral_omega() ? "(1+sqrt(-" + std::to_string(q.ell0()) + "))/2"
                                              : "sqrt(-" + std::to_string(q.ell0()) + ")"},
            {"entries", std::move(entries)}};
}

json to_json(CongruenceReport const& r)
{
    std::uint64_t nonzero = 0, divisible = 0;
    for (auto const& [a, count] : r.entries)
        if (!a.is_zero()) {
            ++nonzero;
            if (count % r.p == 0) ++divisible;
        }
    return {{"p", r.p},
            {"genus", r.genus},
            {"bound", r.bound},
            {"entries", r.entries.size()},
            {"nonzero_entries", nonzero},
            {"divisible_entries", divisible},
            {"verdict", r.verdict}};
}

std::string theta_csv(std::vector<std::uint64_t> const& c, unsigned long p)
{
    std::ostringstream os;
    os << "m,c_m,c_m_mod_p\n";
    for (std::size_t m = 0; m < c.size(); ++m)
        os << m << ',' << c[m] << ',' << c[m] % p << '\n';
    return os.str();
}

// ------------------------------------------------------------------ report

bool Stage::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](Check const& c) { return c.pass; });
}

bool PipelineReport::pass() const
{
    return !stages.empty() && std::all_of(stages.begin(), stages.end(), [](Stage const& s) { return s.pass(); });
}

std::vector<std::string> PipelineReport::failed_checks() const
{
    std::vector<std::string> out;
    for (auto const& s : stages)
        for (auto const& c : s.checks)
            if (!c.pass) out.push_back(s.name + "." + c.name);
    return out;
}

json PipelineReport::to_json() const
{
    json st = json::array();
    for (auto const& s : stages) {
        json checks = json::array();
        for (auto const& c : s.checks)
            checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        st.push_back({{"stage", s.name}, {"pass", s.pass()}, {"checks", std::move(checks)}});
    }
    json tm = json::object();
    for (auto const& [k, v] : timings)
        tm[k] = v;
    return {{"tower", tower}, {"pair", pair},     {"stages", std::move(st)},
            {"tables", tables}, {"timings", tm}, {"pass", pass()}};
}

std::string PipelineReport::text() const
{
    std::ostringstream os;
    os << "tower: " << tower.dump() << '\n';
    if (!pair.empty()) os << "pair: " << pair.dump() << '\n';
    for (auto const& s : stages) {
        os << s.name << (s.pass() ? ": ok" : ": FAILED") << '\n';
        for (auto const& c : s.checks) {
            os << "  " << (c.pass ? "pass " : "FAIL ") << c.name;
            if (!c.detail.empty()) os << "  (" << c.detail << ')';
            os << '\n';
        }
    }
    for (auto const& [k, v] : timings)
        os << "time " << k << ": " << std::fixed << std::setprecision(3) << v << " s\n";
    os.unsetf(std::ios::floatfield);
    os << (pass() ? "verdict: pass" : "verdict: FAIL") << '\n';
    return os.str();
}

PipelineReport verify_record(LatticeRecord const& r, unsigned threads)
{
    PipelineReport rep;
    Timer timer;
    FieldTower const t = FieldTower::build(r.ell, r.p);
    if (t.ell_norm() != r.ell_norm)
        throw InvalidInput("ell_norm " + std::to_string(r.ell_norm) + " does not match ell = " + std::to_string(r.ell));
    rep.tower = {{"ell", r.ell}, {"ell_norm", t.ell_norm()}, {"ell0", t.ell0()}, {"p", r.p}, {"degree", t.degree()}};
    rep.pair = {{"label", r.provenance.value("label", "")}, {"ideal_norm", r.ideal.norm().get_str()}};

    auto ev = verify_unramified(t);
    rep.stages.push_back({"unramified",
                          {{"d_b1", ev.d_b1_ok, mpq_detail("d_B1", ev.d_b1)},
                           {"d_b2", ev.d_b2_ok, mpq_detail("N(d_B2)", ev.norm_d_b2)},
                           {"disjoint_support", ev.unramified, "gcd " + ev.support_gcd.get_str()}}});
    rep.timings.emplace_back("unramified", timer.lap());

    Stage pair{"pair", {}};
    bool const in_f = t.in_F(r.d);
    bool const pos = in_f && !r.d.is_zero() && t.is_totally_positive(r.d);
    bool const module = is_ok_module(t, r.ideal);
    pair.checks.push_back({"d_in_F", in_f, ""});
    pair.checks.push_back({"d_totally_positive", pos, ""});
    pair.checks.push_back({"ideal_is_OK_module", module, ""});
    if (module) {
        pair.checks.push_back({"criterion", pos && satisfies_criterion(t, r.ideal, r.d), "(d) A conj(A) D = O_K"});
        bool const gram_ok = pos && trace_gram(t, r.ideal, r.d).gram == to_rational(r.gram);
        pair.checks.push_back({"gram_is_trace_form", gram_ok, ""});
        pair.checks.push_back({"zeta_is_multiplication", zeta_matrix(t, r.ideal) == r.zeta, ""});
    }
    rep.stages.push_back(std::move(pair));
    rep.timings.emplace_back("pair", timer.lap());

    auto ur = verify_even_unimodular(to_rational(r.gram));
    rep.stages.push_back({"unimodularity",
                          {{"integral", ur.integral, ""},
                           {"even", ur.even, ""},
                           {"det_one", ur.det_one, mpq_detail("det", ur.det)},
                           {"positive_definite", ur.positive_definite, ""},
                           {"dim_0_mod_8", ur.dim_ok, "dim " + std::to_string(ur.dim)}}});
    rep.timings.emplace_back("unimodularity", timer.lap());

    if (!module) return rep;
    HermitianLattice const hl = hermitian_lattice(t, r);
    auto ht = check_hermitian_table(hl);
    rep.stages.push_back({"hermitian",
                          {{"conj_symmetric", ht.conj_symmetric, ""},
                           {"in_inverse_different", ht.in_inverse_different, "sqrt(-ell) h in O_L"},
                           {"trace_matches_gram", ht.trace_matches_gram, "Tr_{L/Q} h = G"}}});

    auto z = check_zeta(hl);
    Stage aut{"automorphism",
              {{"order_p", z.order_p, "M^p = I, M != I"},
               {"preserves_gram", z.preserves_gram, ""},
               {"preserves_h", z.preserves_h, ""},
               {"fixed_point_free", z.fixed_point_free, mpq_detail("det(M - I)", mpq_class(z.det_minus_identity))}}};
    if (ur.positive_definite && z.preserves_gram) {
        auto orb = check_orbits(hl, 4, threads);
        aut.checks.push_back({"orbits_norm_le_4", orb.ok(),
                              std::to_string(orb.vectors) + " vectors in " + std::to_string(orb.orbits) + " orbits"});
    }
    rep.stages.push_back(std::move(aut));

    auto dr = dual_check(hl);
    rep.stages.push_back({"dual", {{"det_one", dr.det_one, ""}, {"h_in_inverse_different", dr.h_in_inverse_different, ""}}});
    rep.timings.emplace_back("hermitian", timer.lap());
    return rep;
}

// ---------------------------------------------------------------- manifest

std::string file_digest(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::uint64_t h = 14695981039346656037ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string manifest_path(std::string const& lattice_path) { return lattice_path + ".manifest.json"; }

namespace {

json read_manifest(std::string const& lattice_path)
{
    std::ifstream in(manifest_path(lattice_path));
    if (!in) return {{"entries", json::array()}};
    try {
        json j;
        in >> j;
        if (j.is_object() && j.contains("entries") && j["entries"].is_array()) return j;
    } catch (json::exception const&) {
    }
    throw InvalidInput("manifest '" + manifest_path(lattice_path) + "' is malformed");
}

}  // namespace

void append_manifest(std::string const& lattice_path, std::string const& command, int exit_code, json details)
{
    json m = read_manifest(lattice_path);
    m["entries"].push_back({{"command", command},
                            {"digest", file_digest(lattice_path)},
                            {"exit", exit_code},
                            {"details", std::move(details)}});
    write_text(manifest_path(lattice_path), canonical_dump(m));
}

bool is_verified(std::string const& lattice_path)
{
    json const m = read_manifest(lattice_path);
    std::string const digest = file_digest(lattice_path);
    for (auto const& e : m["entries"])
        if (e.value("command", "") == "verify" && e.value("exit", -1) == kOk && e.value("digest", "") == digest)
            return true;
    return false;
}

// ------------------------------------------------------------------ sweep

std::vector<SweepRow> sweep(std::vector<std::pair<unsigned long, unsigned long>> const& pairs, SearchBudget const& budget,
                            unsigned long bound, unsigned threads)
{
    std::vector<SweepRow> rows(pairs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < pairs.size();) {
            SweepRow& row = rows[i];
            row.ell = pairs[i].first;
            row.p = pairs[i].second;
            try {
                FieldTower const t = FieldTower::build(row.ell, row.p);
                LatticeRecord const r = make_record(t, find_unimodular_pair(t, budget));
                row.built = true;
                row.dim = r.gram.rows();
                auto rep = verify_record(r);
                row.verified = rep.pass();
                if (!row.verified) {
                    row.note = "failed: " + rep.failed_checks().front();
                    continue;
                }
                auto c = theta_genus1(hermitian_lattice(t, r), std::max(bound, 1ul));
                row.roots = c[1];
                c.resize(bound + 1);
                row.congruence = congruence_check_genus1(c, row.p).verdict;
            } catch (SearchExhausted const&) {
                row.note = "search exhausted";
            } catch (std::exception const& e) {
                row.note = e.what();
            }
        }
    };
    unsigned const workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(work);
    pool.clear();
    return rows;
}

std::string sweep_table(std::vector<SweepRow> const& rows)
{
    std::ostringstream os;
    os << "ell,p,dim,built,verified,congruence,roots,note\n";
    for (auto const& r : rows) {
        std::string note = r.note;
        std::replace(note.begin(), note.end(), ',', ';');
        std::replace(note.begin(), note.end(), '\n', ' ');
        os << r.ell << ',' << r.p << ',' << r.dim << ',' << r.built << ',' << r.verified << ',' << r.congruence << ','
           << r.roots << ',' << note << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------- commands

int cmd_build(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        FieldTower const t = FieldTower::build(cfg.ell, cfg.p);
        Timer timer;
        UnimodularPair pair = find_unimodular_pair(t, cfg.budget);
        double const secs = timer.lap();
        LatticeRecord const r = make_record(t, pair);
        auto ur = verify_even_unimodular(to_rational(r.gram));
        std::string const path =
            cfg.out.empty() ? "lattice_" + std::to_string(cfg.ell) + "_" + std::to_string(cfg.p) + ".json" : cfg.out;
        write_text(path, canonical_dump(to_json(r)));
        append_manifest(path, "build", kOk,
                        {{"ell", cfg.ell},
                         {"p", cfg.p},
                         {"label", pair.label},
                         {"dim", ur.dim},
                         {"det", ur.det.get_str()},
                         {"candidates", pair.log.candidates.size()}});
        out << "wrote " << path << ": ideal " << pair.label << ", dim " << ur.dim << ", det " << ur.det << " ("
            << std::fixed << std::setprecision(2) << secs << " s)\n";
        out.unsetf(std::ios::floatfield);
        return kOk;
    } catch (SearchExhausted const& e) {
        err << "error: " << e.what();
        return kExhausted;
    } catch (InvalidInput const& e) {
        return fail_invalid(err, e.what());
    }
}

int cmd_verify(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        if (cfg.in.empty()) throw InvalidInput("--in is required");
        LatticeRecord const r = read_record(cfg.in);
        PipelineReport const rep = verify_record(r, cfg.threads);
        out << rep.text();
        if (!cfg.out.empty()) write_text(cfg.out, canonical_dump(rep.to_json()));
        json failed = rep.failed_checks();
        int const code = rep.pass() ? kOk : kFailed;
        append_manifest(cfg.in, "verify", code, {{"failed", failed}});
        if (code != kOk) {
            err << "verification failed:";
            for (auto const& f : rep.failed_checks())
                err << ' ' << f;
            err << '\n';
        }
        return code;
    } catch (InvalidInput const& e) {
        return fail_invalid(err, e.what());
    }
}

int cmd_theta(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        LatticeRecord const r = load_verified(cfg);
        FieldTower const t = FieldTower::build(r.ell, r.p);
        HermitianLattice const hl = hermitian_lattice(t, r);
        CongruenceReport cong;
        json details;
        if (cfg.genus == 1) {
            unsigned long const bound = cfg.coeff_bound.value_or(6);
            auto const c = theta_genus1(hl, bound, cfg.threads);
            cong = congruence_check_genus1(c, r.p);
            emit(cfg, out, theta_csv(c, r.p));
            details = to_json(cong);
        } else {
            auto const table = rep_numbers(hl, cfg.genus, cfg.diag_bound, cfg.threads);
            cong = congruence_check(table, r.p);
            json j = to_json(table, t.L(), r.p);
            j["verdict"] = cong.verdict;
            if (cfg.genus == 2) j["marginal_check"] = marginal_check(table, theta_genus1(hl, cfg.diag_bound, cfg.threads));
            emit(cfg, out, canonical_dump(j));
            details = to_json(cong);
            details["marginal_check"] = j.value("marginal_check", true);
            cong.verdict = cong.verdict && details["marginal_check"].get<bool>();
        }
        int const code = cong.verdict ? kOk : kFailed;
        append_manifest(cfg.in, "theta", code, details);
        err << "congruence mod " << r.p << " (genus " << cfg.genus << "): " << (cong.verdict ? "pass" : "FAIL") << '\n';
        return code;
    } catch (InvalidInput const& e) {
        return fail_invalid(err, e.what());
    }
}

int cmd_transform_check(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        LatticeRecord const r = load_verified(cfg);
        FieldTower const t = FieldTower::build(r.ell, r.p);
        HermitianLattice const hl = hermitian_lattice(t, r);
        auto const rep = transform_check_genus1(hl, cfg.ys, cfg.precision, cfg.coeff_bound.value_or(40), cfg.exponent,
                                                cfg.threads);
        json per_y = json::array();
        for (auto const& [y, e] : rep.per_y)
            per_y.push_back({{"y", y}, {"rel_error", e}});
        json j = {{"precision", cfg.precision},
                  {"exponent", cfg.exponent.value_or(static_cast<double>(hl.dim()) / 2)},
                  {"coeff_bound", rep.coeff_bound},
                  {"max_rel_error", rep.max_rel_error},
                  {"tail_bound", rep.tail_bound},
                  {"achievable", rep.achievable},
                  {"reachable", rep.reachable},
                  {"pass", rep.pass},
                  {"per_y", per_y}};
        emit(cfg, out, canonical_dump(j));
        if (!rep.reachable)
            err << "precision " << cfg.precision << " is unreachable within " << cfg.coeff_bound.value_or(40)
                << " coefficients; achievable " << rep.achievable << '\n';
        int const code = rep.pass ? kOk : kFailed;
        append_manifest(cfg.in, "transform-check", code, j);
        return code;
    } catch (InvalidInput const& e) {
        return fail_invalid(err, e.what());
    } catch (std::invalid_argument const& e) {
        return fail_invalid(err, e.what());
    }
}

int cmd_sweep(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        auto const rows = sweep(cfg.pairs, cfg.budget, cfg.coeff_bound.value_or(2), cfg.threads);
        emit(cfg, out, sweep_table(rows));
        bool const ok =
            std::all_of(rows.begin(), rows.end(), [](SweepRow const& r) { return r.built && r.verified && r.congruence; });
        if (!ok) err << "sweep: some rows failed\n";
        return ok ? kOk : kFailed;
    } catch (InvalidInput const& e) {
        return fail_invalid(err, e.what());
    }
}

int cmd_e8check(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        LatticeRecord const r = load_verified(cfg);
        if (r.gram.rows() != 8)
            throw InvalidInput("e8check needs an 8-dimensional lattice, got dimension " + std::to_string(r.gram.rows()));
        FieldTower const t = FieldTower::build(r.ell, r.p);
        auto const e8 = e8_identify(hermitian_lattice(t, r));
        json j = {{"is_e8", e8.is_e8}, {"roots", e8.roots}};
        emit(cfg, out, canonical_dump(j));
        int const code = e8.is_e8 && e8.roots == 240 ? kOk : kFailed;
        append_manifest(cfg.in, "e8check", code, j);
        return code;
    } catch (InvalidInput const& e) {
        return fail_invalid(err, e.what());
    }
}

}  // namespace hlat
