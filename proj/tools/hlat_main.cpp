#include "hlat/cli_report.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace hlat;

namespace {

std::vector<std::pair<unsigned long, unsigned long>> parse_pairs(std::vector<std::string> const& items)
{
    std::vector<std::pair<unsigned long, unsigned long>> out;
    for (auto const& s : items) {
        auto colon = s.find(':');
        if (colon == std::string::npos) throw InvalidInput("pair '" + s + "' must look like ell:p");
        try {
            std::size_t used = 0;
            unsigned long ell = std::stoul(s.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument(s);
            std::string rest = s.substr(colon + 1);
            unsigned long p = std::stoul(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(s);
            out.emplace_back(ell, p);
        } catch (std::logic_error const&) {
            throw InvalidInput("pair '" + s + "' must look like ell:p");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hermitian theta series of ideal lattices in Q(sqrt(-ell), zeta_p)"};
    app.require_subcommand(1);

    RunConfig cfg;
    unsigned long bound = 0;
    double exponent = 0;
    std::vector<std::string> pairs;

    auto add_tower = [&](CLI::App* c) {
        c->add_option("--ell", cfg.ell, "ell, a positive integer")->required();
        c->add_option("--p", cfg.p, "prime p = 1 mod 4")->required();
    };
    auto add_budget = [&](CLI::App* c) {
        c->add_option("--pool-norm", cfg.budget.pool_norm, "largest norm of a candidate ideal")->capture_default_str();
        c->add_option("--unit-range", cfg.budget.unit_range, "unit exponent range for adjusting d")->capture_default_str();
    };
    auto add_in = [&](CLI::App* c) { c->add_option("--in", cfg.in, "lattice JSON file")->required(); };
    auto add_threads = [&](CLI::App* c) { c->add_option("--threads", cfg.threads, "worker threads")->capture_default_str(); };

    auto* build = app.add_subcommand("build", "search for (A, d) and write the lattice file");
    add_tower(build);
    add_budget(build);
    build->add_option("--out", cfg.out, "output path (default lattice_<ell>_<p>.json)");

    auto* verify = app.add_subcommand("verify", "check every property of a lattice file");
    add_in(verify);
    add_threads(verify);
    verify->add_option("--out", cfg.out, "also write the report as JSON");

    auto* theta = app.add_subcommand("theta", "theta coefficients or representation numbers and the mod p verdict");
    add_in(theta);
    add_threads(theta);
    theta->add_option("--genus", cfg.genus, "genus n")->capture_default_str();
    auto* theta_bound = theta->add_option("--bound", bound, "genus 1: largest m (default 6)");
    theta->add_option("--diag-bound", cfg.diag_bound, "genus >= 2: largest diagonal entry")->capture_default_str();
    theta->add_option("--out", cfg.out, "write the CSV or JSON table here instead of stdout");

    auto* transform = app.add_subcommand("transform-check", "numerical check of theta(i/y) = y^w theta(iy)");
    add_in(transform);
    add_threads(transform);
    transform->add_option("--y", cfg.ys, "y values")->delimiter(',')->capture_default_str();
    transform->add_option("--precision", cfg.precision, "target relative precision")->capture_default_str();
    auto* transform_bound = transform->add_option("--bound", bound, "largest coefficient index allowed (default 40)");
    auto* exp_opt = transform->add_option("--exponent", exponent, "override the weight dim/2");
    transform->add_option("--out", cfg.out, "write the JSON report here instead of stdout");

    auto* sw = app.add_subcommand("sweep", "build, verify and check several (ell, p)");
    sw->add_option("--pairs", pairs, "comma separated ell:p list")->delimiter(',');
    auto* sweep_bound = sw->add_option("--bound", bound, "genus-1 coefficients checked per row (default 2)");
    add_budget(sw);
    add_threads(sw);
    sw->add_option("--out", cfg.out, "write the CSV table here instead of stdout");

    auto* e8 = app.add_subcommand("e8check", "identify an 8-dimensional lattice as E8");
    add_in(e8);
    e8->add_option("--out", cfg.out, "write the JSON result here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return kInvalid;
    }

    if (theta_bound->count() || transform_bound->count() || sweep_bound->count()) cfg.coeff_bound = bound;
    if (exp_opt->count()) cfg.exponent = exponent;

    try {
        if (*build) return cmd_build(cfg, std::cout, std::cerr);
        if (*verify) return cmd_verify(cfg, std::cout, std::cerr);
        if (*theta) return cmd_theta(cfg, std::cout, std::cerr);
        if (*transform) return cmd_transform_check(cfg, std::cout, std::cerr);
        if (*sw) {
            cfg.pairs = parse_pairs(pairs);
            return cmd_sweep(cfg, std::cout, std::cerr);
        }
        if (*e8) return cmd_e8check(cfg, std::cout, std::cerr);
    } catch (InvalidInput const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (std::exception const& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kFailed;
    }
    return kInvalid;
}
