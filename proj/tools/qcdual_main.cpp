// Command-line harness: moduli-spec parsing, suite execution, deterministic
// machine-readable reports. Exit codes: 0 all checks pass, 1 some check
// failed, 2 configuration error, 3 internal invariant violation.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qcdual/cli.hpp"

namespace {

using qcdual::SuiteConfig;

void add_common_flags(CLI::App* cmd, SuiteConfig& cfg, std::string& budget_str, std::string& m_str) {
    cmd->add_option("--out", cfg.output_path, "write the report body to this file");
    cmd->add_option("--budget", budget_str, "enumeration budget (elements)");
    cmd->add_option("--basis-budget", cfg.basis_budget, "basic neighborhoods per family");
    cmd->add_option("--scan-limit", cfg.scan_limit, "index scan limit for n0 searches");
    cmd->add_option("--seed", cfg.rng_seed, "64-bit RNG seed");
    cmd->add_option("--samples", cfg.sample_count, "sample count for randomized checks");
    (void)m_str;
}

void apply_env_overrides(SuiteConfig& cfg) {
    if (const char* v = std::getenv("QCDUAL_ENUM_BUDGET")) cfg.enumeration_budget = qcdual::BigInt(v);
    if (const char* v = std::getenv("QCDUAL_BASIS_BUDGET")) cfg.basis_budget = std::stoul(v);
    if (const char* v = std::getenv("QCDUAL_SCAN_LIMIT")) cfg.scan_limit = std::stoul(v);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact quasi-convex duality toolkit for (+) Z_{m_n}"};
    app.require_subcommand(1);

    SuiteConfig cfg;
    std::string budget_str, m_str = "1";

    auto* hull = app.add_subcommand("hull", "quasi-convex hull of an element set");
    hull->add_option("--group", cfg.moduli_spec, "moduli spec")->required();
    hull->add_option("--depth", cfg.depth, "truncation depth")->required();
    hull->add_option("--set", cfg.set_literal, "';'-joined element literals (n:r,...)");

    auto* polar = app.add_subcommand("polar", "polar of an element set");
    polar->add_option("--group", cfg.moduli_spec, "moduli spec")->required();
    polar->add_option("--depth", cfg.depth, "truncation depth")->required();
    polar->add_option("--set", cfg.set_literal, "';'-joined element literals");

    auto* atlas = app.add_subcommand("atlas", "all quasi-convex subsets of a small truncation");
    atlas->add_option("--group", cfg.moduli_spec, "moduli spec")->required();
    atlas->add_option("--depth", cfg.depth, "truncation depth")->required();
    atlas->add_option("--dot", cfg.dot_path, "write the inclusion order as DOT");

    auto* witness = app.add_subcommand("witness", "V_m escape witness for an infinite-prefix character");
    witness->add_option("--moduli", cfg.moduli_spec, "moduli spec")->required();
    witness->add_option("--m", m_str, "V_m index")->required();
    witness->add_option("--chi", cfg.chi_literal, "character prefix literal (n:r,...)")->required();

    auto* certify = app.add_subcommand("certify", "continuity certificate for a finite-support character");
    certify->add_option("--moduli", cfg.moduli_spec, "moduli spec")->required();
    certify->add_option("--chi", cfg.chi_literal, "character literal");

    auto* discont = app.add_subcommand("discont", "discontinuous character table on a truncation");
    discont->add_option("--moduli", cfg.moduli_spec, "moduli spec")->required();
    discont->add_option("--depth", cfg.depth, "truncation depth")->required();
    discont->add_option("--seq", cfg.seq_literal, "candidate sequence; default e_1..e_depth");

    auto* compare = app.add_subcommand("compare-top", "compare two topology descriptors at a truncation");
    compare->add_option("--moduli", cfg.moduli_spec, "moduli spec")->required();
    compare->add_option("--depth", cfg.depth, "truncation depth")->required();
    compare->add_option("--tau1", cfg.tau1_literal, "first descriptor literal");
    compare->add_option("--tau2", cfg.tau2_literal, "second descriptor literal");

    auto* verify = app.add_subcommand("verify", "run the full acceptance suite");

    for (auto* cmd : {hull, polar, atlas, witness, certify, discont, compare, verify})
        add_common_flags(cmd, cfg, budget_str, m_str);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_env_overrides(cfg);
        if (!budget_str.empty()) cfg.enumeration_budget = qcdual::BigInt(budget_str);
        cfg.m_value = qcdual::BigInt(m_str);
        cfg.command = app.get_subcommands().front()->get_name();

        auto start = std::chrono::steady_clock::now();
        auto report = qcdual::run_suite(cfg);
        auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

        if (cfg.output_path.empty()) std::cout << report.body;
        std::cerr << "qcdual " << cfg.command << ": " << report.passed << "/" << report.cases
                  << " checks passed in " << elapsed.count() << " ms\n";
        return report.all_pass ? 0 : 1;
    } catch (const qcdual::Error& e) {
        switch (e.kind()) {
            case qcdual::ErrorKind::internal:
                std::cerr << "internal invariant violation: " << e.what() << "\n";
                return 3;
            default:
                std::cerr << "error: " << e.what() << "\n";
                return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
