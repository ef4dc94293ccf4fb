#pragma once

#include "hlat/hermitian_theta.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hlat {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kFailed = 1, kExhausted = 2, kInvalid = 3 };

struct RunConfig {
    unsigned long ell = 0;
    unsigned long p = 0;
    std::size_t genus = 1;
    std::optional<unsigned long> coeff_bound;  // theta: 6, sweep: 2, transform-check: max 40
    unsigned long diag_bound = 2;
    SearchBudget budget;
    double precision = 1e-8;
    std::vector<double> ys{1.2, 1.5, 2.0};
    std::optional<double> exponent;  // transform-check override of dim/2
    std::vector<std::pair<unsigned long, unsigned long>> pairs;
    std::string in;
    std::string out;
    unsigned threads = 1;

    /* Throws InvalidInput. */
    void validate() const;
};

/* The interchange file: the pair (A, d), its trace form and the zeta action. */
struct LatticeRecord {
    static constexpr int kFormatVersion = 1;

    unsigned long ell = 0;  // as given; the tower is rebuilt from (ell, p)
    unsigned long ell_norm = 0;
    unsigned long p = 0;
    FracIdeal ideal;
    KElement d;
    IntMatrix gram;
    IntMatrix zeta;
    json provenance;
};

LatticeRecord make_record(FieldTower const& t, UnimodularPair const& pair);
json to_json(LatticeRecord const& r);
/* Throws InvalidInput on a malformed document. */
LatticeRecord record_from_json(json const& j);
/* Sorted keys, two-space indent, trailing newline. */
std::string canonical_dump(json const& j);
LatticeRecord read_record(std::string const& path);
void write_text(std::string const& path, std::string const& text);

HermitianLattice hermitian_lattice(FieldTower const& t, LatticeRecord const& r);

json to_json(RepNumberTable const& table, ImaginaryQuadratic const& q, unsigned long p);
json to_json(CongruenceReport const& r);
std::string theta_csv(std::vector<std::uint64_t> const& c, unsigned long p);

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Stage {
    std::string name;
    std::vector<Check> checks;
    bool pass() const;
};

struct PipelineReport {
    json tower;
    json pair;
    std::vector<Stage> stages;
    json tables;
    std::vector<std::pair<std::string, double>> timings;  // seconds

    bool pass() const;
    std::vector<std::string> failed_checks() const;
    json to_json() const;
    std::string text() const;
};

/* Every verification stage on a stored lattice. */
PipelineReport verify_record(LatticeRecord const& r, unsigned threads = 1);

/* 64-bit FNV-1a of the file bytes, as 16 hex digits. */
std::string file_digest(std::string const& path);
std::string manifest_path(std::string const& lattice_path);
/* Appends {command, digest, exit, details} to the manifest. */
void append_manifest(std::string const& lattice_path, std::string const& command, int exit_code, json details);
/* True when the manifest has a passing verify entry for the current file contents. */
bool is_verified(std::string const& lattice_path);

struct SweepRow {
    unsigned long ell = 0;
    unsigned long p = 0;
    std::size_t dim = 0;
    bool built = false;
    bool verified = false;
    bool congruence = false;
    std::uint64_t roots = 0;
    std::string note;
};
std::vector<SweepRow> sweep(std::vector<std::pair<unsigned long, unsigned long>> const& pairs, SearchBudget const& budget,
                            unsigned long bound, unsigned threads);
std::string sweep_table(std::vector<SweepRow> const& rows);

/* Subcommands; results go to out, diagnostics to err. Return an ExitCode. */
int cmd_build(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_theta(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_transform_check(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_e8check(RunConfig const& cfg, std::ostream& out, std::ostream& err);

}  // namespace hlat
