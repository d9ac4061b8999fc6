#include <catch2/catch_amalgamated.hpp>

#include "qcdual/literals.hpp"
#include "qcdual/verify.hpp"
#include "qcdual/witness.hpp"

using namespace qcdual;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::internal;
}

} // namespace

TEST_CASE("compute_n0: least index with m_n >= 10m") {
    CHECK(compute_n0(parse_moduli_spec("geom:base=2"), 1) == 4);  // 2^4 = 16 >= 10
    CHECK(compute_n0(parse_moduli_spec("arith:start=2,step=1"), 1) == 9); // m_9 = 10
    CHECK(compute_n0(parse_moduli_spec("geom:base=2"), 2) == 5);  // 32 >= 20
    CHECK(kind_of([] { compute_n0(parse_moduli_spec("list:2,2,2"), 1); }) ==
          ErrorKind::no_index_within_limit);
    CHECK(kind_of([] { compute_n0(parse_moduli_spec("list:4,2"), 1); }) ==
          ErrorKind::non_monotone_moduli);
}

TEST_CASE("partition_support: exact bucket boundaries") {
    auto geom = parse_moduli_spec("geom:base=2");
    auto chi = Character::make(geom, {{4, 8}, {5, 1}, {6, 16}}, true);
    auto buckets = partition_support(chi, 4, geom);
    REQUIRE(buckets.size() == 3);
    CHECK(buckets[BigInt(7)] == std::vector<uint32_t>{4}); // 1/2 in (7/16, 8/16]
    CHECK(buckets[BigInt(0)] == std::vector<uint32_t>{5}); // 1/32 in (0, 1/16]
    CHECK(buckets[BigInt(3)] == std::vector<uint32_t>{6}); // 1/4 in (3/16, 4/16]

    CHECK(partition_support(Character::zero(geom), 4, geom).empty());

    auto below = Character::make(geom, {{1, 1}, {3, 2}}, true);
    CHECK(partition_support(below, 4, geom).empty()); // indices below n0 excluded
}

TEST_CASE("witness: short circuit on a large single ratio") {
    auto geom = parse_moduli_spec("geom:base=2");
    auto chi = Character::make(geom, {{4, 8}}, true);
    auto report = witness_not_continuous(chi, 1, geom);
    CHECK(report.case_used == WitnessCase::short_circuit);
    CHECK(report.n0 == 4);
    CHECK_FALSE(report.chosen_k.has_value());
    CHECK(report.witness == GroupElement::make(geom, {{4, 1}}));
    CHECK(report.pairing_value == torus(1, 2));
    CHECK(vm_contains(1, report.witness, geom));
    CHECK_FALSE(report.pairing_value.in_t_plus());
}

TEST_CASE("witness: case 2 with the floor formula") {
    auto geom = parse_moduli_spec("geom:base=2");
    auto chi = Character::make(geom, {{5, 1}, {6, 1}}, true);
    auto report = witness_not_continuous(chi, 1, geom);
    CHECK(report.case_used == WitnessCase::case2);
    REQUIRE(report.chosen_k.has_value());
    CHECK(*report.chosen_k == 0);
    CHECK(report.witness.residue_at(5) == 8);  // floor(32/4) = 8, x_5 = 1/4
    CHECK(report.witness.residue_at(6) == 16); // floor(64/4) = 16, x_6 = 1/4
    CHECK(report.pairing_value == torus(1, 2));
    CHECK(report.all_bounds_hold());
}

TEST_CASE("witness: case 1 walks a bucket until the sum crosses 1/4") {
    auto arith = parse_moduli_spec("arith:start=2,step=1");
    std::vector<std::pair<uint32_t, BigInt>> entries;
    for (uint32_t n = 9; n <= 18; ++n) entries.emplace_back(n, 2);
    auto chi = Character::make(arith, entries, true);
    auto report = witness_not_continuous(chi, 1, arith);
    CHECK(report.case_used == WitnessCase::case1);
    REQUIRE(report.chosen_k.has_value());
    CHECK(*report.chosen_k == 1);
    CHECK(report.witness == GroupElement::make(arith, {{9, 1}, {10, 1}})); // stops at N = 2
    CHECK(report.pairing_value == torus(21, 55)); // 2/10 + 2/11
    CHECK_FALSE(report.pairing_value.in_t_plus());
}

TEST_CASE("witness: too-short prefixes are InsufficientSupport") {
    auto geom = parse_moduli_spec("geom:base=2");
    auto chi = Character::make(geom, {{5, 1}}, true); // |A_0| = 1 < 2m = 2
    CHECK(kind_of([&] { witness_not_continuous(chi, 1, geom); }) == ErrorKind::insufficient_support);
    // an unflagged character is rejected outright
    CHECK(kind_of([&] { witness_not_continuous(chi.with_prefix_flag(false), 1, geom); }) ==
          ErrorKind::invalid_params);
}

TEST_CASE("witness: negative residues pick sign-matched coordinates") {
    auto geom = parse_moduli_spec("geom:base=2");
    auto chi = Character::make(geom, {{5, -1}, {6, -1}}, true);
    auto report = witness_not_continuous(chi, 1, geom);
    CHECK(report.case_used == WitnessCase::case2);
    CHECK(report.witness.residue_at(5) == -8);
    CHECK(report.pairing_value == torus(1, 2)); // terms are |chi_n| * |x_n|
}

TEST_CASE("continuity certificate: documented examples") {
    auto arith = parse_moduli_spec("arith:start=2,step=1");
    auto chi = Character::make(arith, {{1, 1}, {2, 1}});
    auto cert = continuity_certificate(chi, arith);
    CHECK(cert.m == 4); // m_3
    CHECK(cert.n1 == 3);
    CHECK(cert.verified);

    auto empty = continuity_certificate(Character::zero(arith), arith);
    CHECK(empty.m == 2); // m_1

    auto geom = parse_moduli_spec("geom:base=2");
    auto cert2 = continuity_certificate(Character::make(geom, {{1, 1}}), geom);
    CHECK(cert2.m == 4); // m_2
    CHECK(cert2.verified);
}

TEST_CASE("two directions are consistent on finite supports") {
    for (const auto& spec : {"geom:base=2", "arith:start=2,step=1", "primes"}) {
        auto moduli = parse_moduli_spec(spec);
        for (const auto& literal : {"1:1", "1:1,3:2", "2:1,4:1,5:2"}) {
            auto chi = parse_character_literal(moduli, literal);
            auto cert = continuity_certificate(chi, moduli);
            for (int extra = 0; extra < 3; ++extra) {
                BigInt m = cert.m + extra;
                CHECK(kind_of([&] { witness_not_continuous(chi.with_prefix_flag(true), m, moduli); }) ==
                      ErrorKind::insufficient_support);
            }
        }
    }
}

TEST_CASE("witness soundness: randomized mini-run over both rule families") {
    auto result = criterion_witness_soundness(/*seed=*/20240 , /*samples_per_config=*/40);
    if (!result.failures.empty()) INFO(result.failures.front());
    CHECK(result.pass);
}

TEST_CASE("trace entries expose exact rationals for external re-verification") {
    auto geom = parse_moduli_spec("geom:base=2");
    auto chi = Character::make(geom, {{5, 1}, {6, 1}}, true);
    auto report = witness_not_continuous(chi, 1, geom);
    bool saw_lower_chain = false;
    for (const auto& check : report.trace) {
        CHECK(check.holds);
        if (check.relation == ">=" && check.rhs == Rational(3, 20)) saw_lower_chain = true;
    }
    CHECK(saw_lower_chain);
}
