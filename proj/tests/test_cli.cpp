#include <catch2/catch_amalgamated.hpp>

#include "qcdual/cli.hpp"

using namespace qcdual;

TEST_CASE("moduli spec parsing round-trips") {
    for (const auto& spec : {"geom:base=2", "arith:start=2,step=1", "primes", "list:4,2", "list:2,3,4"}) {
        auto seq = parse_moduli_spec(spec);
        CHECK(seq.spec_string() == spec);
        auto again = parse_moduli_spec(seq.spec_string());
        for (uint32_t n = 1; n <= (seq.finite_length() ? *seq.finite_length() : 6u); ++n)
            CHECK(again.at(n) == seq.at(n));
    }
}

TEST_CASE("moduli spec parse errors") {
    auto kind_of = [](const std::string& s) {
        try {
            parse_moduli_spec(s);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::internal;
    };
    CHECK(kind_of("bogus") == ErrorKind::parse_error);
    CHECK(kind_of("geom:base=1") == ErrorKind::modulus_below_two);
    CHECK(kind_of("list:4,1") == ErrorKind::modulus_below_two);
    CHECK(kind_of("arith:start=2") == ErrorKind::parse_error);
    CHECK(kind_of("list:4,x") == ErrorKind::parse_error);
}

TEST_CASE("sparse literals") {
    auto moduli = parse_moduli_spec("geom:base=2");
    auto chi = parse_character_literal(moduli, "5:1,6:1");
    CHECK(chi.residue_at(5) == 1);
    CHECK(chi.residue_at(6) == 1);
    CHECK(parse_element_literal(moduli, "0").is_zero());
    CHECK(parse_element_list(moduli, "").empty());
    CHECK(parse_element_list(moduli, "0;1:1").size() == 2);
    CHECK_THROWS_AS(parse_sparse_literal("5"), Error);
    CHECK_THROWS_AS(parse_sparse_literal("0:1"), Error); // indices start at 1
}

TEST_CASE("witness subcommand mirrors the documented case-2 run") {
    SuiteConfig cfg;
    cfg.command = "witness";
    cfg.moduli_spec = "geom:base=2";
    cfg.m_value = 1;
    cfg.chi_literal = "5:1,6:1";
    auto report = run_suite(cfg);
    CHECK(report.all_pass);
    CHECK(report.body.find("\"case_used\":\"case2\"") != std::string::npos);
    CHECK(report.body.find("\"pairing\":\"1/2\"") != std::string::npos);
}

TEST_CASE("atlas subcommand lists the 4 quasi-convex subsets of Z_4") {
    SuiteConfig cfg;
    cfg.command = "atlas";
    cfg.moduli_spec = "list:4";
    cfg.depth = 1;
    auto report = run_suite(cfg);
    CHECK(report.all_pass);
    CHECK(report.body.find("\"case\":\"atlas_total\",\"count\":4") != std::string::npos);
}

TEST_CASE("hull subcommand reports polar, hull, and quasi-convexity") {
    SuiteConfig cfg;
    cfg.command = "hull";
    cfg.moduli_spec = "list:4";
    cfg.depth = 1;
    cfg.set_literal = "1:1";
    auto report = run_suite(cfg);
    CHECK(report.all_pass);
    CHECK(report.body.find("\"quasiconvex\":false") != std::string::npos);
}

TEST_CASE("report bodies are a pure function of the config") {
    for (const auto& command : {std::string("witness"), std::string("discont"), std::string("compare-top")}) {
        SuiteConfig cfg;
        cfg.command = command;
        cfg.moduli_spec = "geom:base=2";
        cfg.depth = command == "discont" ? 10 : 6;
        cfg.chi_literal = "5:1,6:1";
        cfg.sample_count = 25;
        cfg.rng_seed = 7;
        auto a = run_suite(cfg);
        auto b = run_suite(cfg);
        CHECK(a.body == b.body);
        CHECK_FALSE(a.body.empty());
    }
}

TEST_CASE("compare-top subcommand certifies the finer topology") {
    SuiteConfig cfg;
    cfg.command = "compare-top";
    cfg.moduli_spec = "geom:base=2";
    cfg.depth = 6;
    cfg.tau1_literal = "uniform-c";
    cfg.tau2_literal = "product";
    cfg.basis_budget = 16;
    auto report = run_suite(cfg);
    CHECK(report.all_pass);
    CHECK(report.body.find("\"verdict\":\"tau1_finer\"") != std::string::npos);
}

TEST_CASE("certify subcommand carries the certificate parameters") {
    SuiteConfig cfg;
    cfg.command = "certify";
    cfg.moduli_spec = "arith:start=2,step=1";
    cfg.chi_literal = "1:1,2:1";
    auto report = run_suite(cfg);
    CHECK(report.all_pass);
    CHECK(report.body.find("\"m\":\"4\"") != std::string::npos);
    CHECK(report.body.find("\"verified_exhaustively\":true") != std::string::npos);
}

TEST_CASE("unknown command is a configuration error") {
    SuiteConfig cfg;
    cfg.command = "frobnicate";
    CHECK_THROWS_AS(run_suite(cfg), Error);
}
