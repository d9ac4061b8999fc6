#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "qcdual/literals.hpp"
#include "qcdual/report.hpp"
#include "qcdual/subgroup.hpp"

using namespace qcdual;

namespace {

FiniteTruncation trunc_of(const std::string& spec, uint32_t depth) {
    return FiniteTruncation(parse_moduli_spec(spec), depth);
}

// Enumerate every subgroup of a small truncation by closing generator
// extensions, starting from {0}.
std::vector<std::vector<GroupElement>> all_subgroups(const FiniteTruncation& t) {
    auto elements = t.elements(BigInt(64));
    auto key_of = [&](const std::vector<GroupElement>& members) {
        std::set<std::vector<BigInt>> keys;
        for (const auto& x : members) keys.insert(t.raw_tuple(x));
        return keys;
    };
    std::map<std::set<std::vector<BigInt>>, std::vector<GroupElement>> seen;
    std::vector<std::vector<GroupElement>> frontier{{}};
    seen.emplace(key_of({}), std::vector<GroupElement>{});
    while (!frontier.empty()) {
        std::vector<std::vector<GroupElement>> next;
        for (const auto& gens : frontier) {
            for (const auto& x : elements) {
                auto extended = gens;
                extended.push_back(x);
                auto closure = subgroup_closure(extended, t, BigInt(100000));
                auto key = key_of(closure.elements);
                if (seen.count(key)) continue;
                seen.emplace(std::move(key), extended);
                next.push_back(std::move(extended));
            }
        }
        frontier = std::move(next);
    }
    std::vector<std::vector<GroupElement>> out;
    for (auto& [key, gens] : seen) out.push_back(gens);
    return out;
}

} // namespace

TEST_CASE("moduli rules generate the documented sequences") {
    auto geom = parse_moduli_spec("geom:base=2");
    CHECK(geom.at(1) == 2);
    CHECK(geom.at(4) == 16);
    CHECK(geom.is_monotone());
    CHECK(geom.is_unbounded());

    auto arith = parse_moduli_spec("arith:start=2,step=1");
    CHECK(arith.at(1) == 2);
    CHECK(arith.at(9) == 10);

    auto primes = parse_moduli_spec("primes");
    CHECK(primes.at(1) == 2);
    CHECK(primes.at(5) == 11);
    CHECK(primes.at(25) == 97);

    auto list = parse_moduli_spec("list:4,2");
    CHECK(list.at(1) == 4);
    CHECK_FALSE(list.is_monotone());
    CHECK(list.finite_length() == 2);
}

TEST_CASE("residues live in the canonical window and zero entries vanish") {
    auto moduli = parse_moduli_spec("list:4,6");
    auto x = GroupElement::make(moduli, {{1, 3}, {2, 4}});
    CHECK(x.residue_at(1) == -1); // 3 == -1 (mod 4)
    CHECK(x.residue_at(2) == -2); // 4 == -2 (mod 6)
    auto half = GroupElement::make(moduli, {{1, 2}});
    CHECK(half.residue_at(1) == 2); // +m/2 is the chosen representative
    auto zero = GroupElement::make(moduli, {{1, 8}});
    CHECK(zero.is_zero());
}

TEST_CASE("pairing follows the direct-sum formula") {
    auto arith = parse_moduli_spec("arith:start=2,step=1");
    auto chi1 = Character::make(arith, {{1, 1}});
    auto e1 = GroupElement::make(arith, {{1, 1}});
    CHECK(pairing(chi1, e1) == torus(1, 2));

    auto chi = Character::make(arith, {{1, 1}, {2, -1}});
    auto x = GroupElement::make(arith, {{1, 1}, {2, 1}});
    CHECK(pairing(chi, x) == torus(1, 6)); // 1/2 - 1/3

    CHECK(pairing(Character::zero(arith), x).is_zero());

    auto other = parse_moduli_spec("geom:base=2");
    CHECK_THROWS_AS(pairing(Character::make(other, {{1, 1}}), x), Error);
}

TEST_CASE("order of an element") {
    auto moduli = parse_moduli_spec("list:9");
    FiniteTruncation t(moduli, 1);
    CHECK(GroupElement::unit(moduli, 1, 1).order() == 9);
    CHECK(GroupElement::unit(moduli, 1, 3).order() == 3);
    auto mixed = parse_moduli_spec("list:2,3");
    CHECK(GroupElement::make(mixed, {{1, 1}, {2, 1}}).order() == 6);
}

TEST_CASE("dual enumeration: counts, order, separation") {
    auto z2z3 = trunc_of("list:2,3", 2);
    CHECK(z2z3.dual_enumerate(BigInt(100)).size() == 6);

    auto z2 = trunc_of("list:2", 1);
    auto duals2 = z2.dual_enumerate(BigInt(100));
    REQUIRE(duals2.size() == 2);
    CHECK(duals2[0].is_zero());
    CHECK(duals2[1].residue_at(1) == 1);

    auto z4 = trunc_of("list:4", 1);
    auto duals4 = z4.dual_enumerate(BigInt(100));
    REQUIRE(duals4.size() == 4);
    CHECK(duals4[0].residue_at(1) == 0);
    CHECK(duals4[1].residue_at(1) == 1);
    CHECK(duals4[2].residue_at(1) == 2);
    CHECK(duals4[3].residue_at(1) == -1);

    // separation, exhaustively on groups up to 64 elements
    for (const auto& spec : {"list:8", "list:2,4", "list:3,3", "list:2,2,2", "list:12", "list:2,32"}) {
        auto moduli = parse_moduli_spec(spec);
        FiniteTruncation t(moduli, moduli.finite_length().value());
        auto duals = t.dual_enumerate(BigInt(64));
        t.for_each_element(BigInt(64), [&](const GroupElement& x) {
            if (x.is_zero()) return;
            bool separated = false;
            for (const auto& chi : duals)
                if (!pairing(chi, x).is_zero()) separated = true;
            CHECK(separated);
        });
    }
}

TEST_CASE("enumeration budget is enforced") {
    auto t = trunc_of("geom:base=2", 8);
    CHECK_THROWS_AS(t.elements(BigInt(1000)), Error);
    CHECK(t.cardinality() == BigInt(1) << 36);
}

TEST_CASE("subgroup membership: documented examples") {
    auto t = trunc_of("list:2,3", 2);
    auto g = GroupElement::make(t.moduli(), {{1, 1}, {2, 1}});

    auto c1 = subgroup_membership({g}, GroupElement::make(t.moduli(), {{2, 1}}), t);
    REQUIRE(c1.has_value());
    CHECK((*c1)[0] == 4);

    auto c2 = subgroup_membership({g}, GroupElement::make(t.moduli(), {{1, 1}}), t);
    REQUIRE(c2.has_value());
    CHECK((*c2)[0] == 3);

    auto none = subgroup_membership({GroupElement::make(t.moduli(), {{2, 1}})},
                                    GroupElement::make(t.moduli(), {{1, 1}}), t);
    CHECK_FALSE(none.has_value());
}

TEST_CASE("subgroup membership: linear algebra agrees with brute force") {
    DetRng rng(0xabcdef);
    std::vector<std::string> specs = {"list:2,4", "list:3,9", "list:4,6,2", "list:5,5", "list:8,12"};
    for (const auto& spec : specs) {
        auto moduli = parse_moduli_spec(spec);
        uint32_t depth = static_cast<uint32_t>(moduli.finite_length().value());
        FiniteTruncation t(moduli, depth);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<GroupElement> gens;
            size_t gen_count = 1 + rng.below(3);
            for (size_t i = 0; i < gen_count; ++i) {
                std::vector<std::pair<uint32_t, BigInt>> entries;
                for (uint32_t n = 1; n <= depth; ++n)
                    entries.emplace_back(n, BigInt(rng.below(t.moduli().at(n).convert_to<uint64_t>())));
                gens.push_back(GroupElement::make(t.moduli(), entries));
            }
            std::vector<std::pair<uint32_t, BigInt>> xe;
            for (uint32_t n = 1; n <= depth; ++n)
                xe.emplace_back(n, BigInt(rng.below(t.moduli().at(n).convert_to<uint64_t>())));
            auto x = GroupElement::make(t.moduli(), xe);

            auto la = subgroup_membership(gens, x, t, SolveMethod::linear_algebra);
            auto bf = subgroup_membership(gens, x, t, SolveMethod::brute_force);
            CHECK(la.has_value() == bf.has_value());
            for (const auto& coeffs : {la, bf}) {
                if (!coeffs) continue;
                GroupElement sum = GroupElement::zero(t.moduli());
                for (size_t i = 0; i < gens.size(); ++i) sum = sum + int_mul((*coeffs)[i], gens[i]);
                CHECK(sum == x);
            }
        }
    }
}

TEST_CASE("minimal multiple: documented examples") {
    auto z4 = trunc_of("list:4", 1);
    auto e = GroupElement::unit(z4.moduli(), 1);
    auto two_e = GroupElement::unit(z4.moduli(), 1, 2);
    auto r1 = minimal_multiple_in({two_e}, e, z4);
    REQUIRE(r1.has_value());
    CHECK(r1->k == 2);
    CHECK(r1->coefficients == std::vector<BigInt>{1});

    auto z2z3 = trunc_of("list:2,3", 2);
    auto r2 = minimal_multiple_in({GroupElement::unit(z2z3.moduli(), 1)},
                                  GroupElement::unit(z2z3.moduli(), 2), z2z3);
    CHECK_FALSE(r2.has_value()); // Independent

    auto z9 = trunc_of("list:9", 1);
    auto r3 = minimal_multiple_in({GroupElement::unit(z9.moduli(), 1, 3)},
                                  GroupElement::unit(z9.moduli(), 1), z9);
    REQUIRE(r3.has_value());
    CHECK(r3->k == 3);
}

TEST_CASE("minimal multiple: brute force agrees on small groups") {
    auto t = trunc_of("list:4,6", 2);
    DetRng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<GroupElement> gens{GroupElement::make(
            t.moduli(), {{1, BigInt(rng.below(4))}, {2, BigInt(rng.below(6))}})};
        auto a = GroupElement::make(t.moduli(), {{1, BigInt(rng.below(4))}, {2, BigInt(rng.below(6))}});
        if (a.is_zero()) continue;
        auto la = minimal_multiple_in(gens, a, t, SolveMethod::linear_algebra);
        auto bf = minimal_multiple_in(gens, a, t, SolveMethod::brute_force);
        CHECK(la.has_value() == bf.has_value());
        if (la && bf) CHECK(la->k == bf->k);
    }
}

TEST_CASE("annihilator: documented examples and the index identity") {
    auto z4 = trunc_of("list:4", 1);
    auto ann = annihilator({GroupElement::unit(z4.moduli(), 1, 2)}, z4);
    REQUIRE(ann.size() == 2);
    CHECK(ann[0].residue_at(1) == 0);
    CHECK(ann[1].residue_at(1) == 2);

    CHECK(annihilator({}, z4).size() == 4); // trivial subgroup: full dual

    auto z2 = trunc_of("list:2", 1);
    auto full = annihilator({GroupElement::unit(z2.moduli(), 1)}, z2);
    REQUIRE(full.size() == 1);
    CHECK(full[0].is_zero());

    // |annihilator(H)| * |H| == |T| on every subgroup of a few small groups
    for (const auto& spec : {"list:8", "list:2,4", "list:3,3"}) {
        auto moduli = parse_moduli_spec(spec);
        FiniteTruncation t(moduli, static_cast<uint32_t>(moduli.finite_length().value()));
        for (const auto& gens : all_subgroups(t)) {
            auto closure = subgroup_closure(gens, t, BigInt(1000));
            auto a = annihilator(gens, t);
            CHECK(BigInt(a.size()) * BigInt(closure.elements.size()) == t.cardinality());
        }
    }
}

TEST_CASE("double annihilator recovers the subgroup, |T| <= 64") {
    for (const auto& spec : {"list:8", "list:12", "list:2,4", "list:2,2,2", "list:3,3", "list:2,32"}) {
        auto moduli = parse_moduli_spec(spec);
        FiniteTruncation t(moduli, static_cast<uint32_t>(moduli.finite_length().value()));
        for (const auto& gens : all_subgroups(t)) {
            auto closure = subgroup_closure(gens, t, BigInt(1000));
            auto ann = annihilator(gens, t);
            std::vector<GroupElement> second;
            t.for_each_element(BigInt(64), [&](const GroupElement& x) {
                for (const auto& chi : ann)
                    if (!pairing(chi, x).is_zero()) return;
                second.push_back(x);
            });
            CHECK(second.size() == closure.elements.size());
            for (const auto& x : second) CHECK(closure.find(t, x).has_value());
        }
    }
}

TEST_CASE("is_dually_closed: witness or InH") {
    auto z4 = trunc_of("list:4", 1);
    auto half = GroupElement::unit(z4.moduli(), 1, 2);

    auto w1 = is_dually_closed({half}, GroupElement::unit(z4.moduli(), 1), z4);
    REQUIRE(w1.has_value());
    CHECK(w1->residue_at(1) == 2);
    CHECK(pairing(*w1, GroupElement::unit(z4.moduli(), 1)) == torus(1, 2));

    CHECK_FALSE(is_dually_closed({half}, half, z4).has_value()); // InH

    auto z3 = trunc_of("list:3", 1);
    auto w2 = is_dually_closed({}, GroupElement::unit(z3.moduli(), 1), z3);
    REQUIRE(w2.has_value());
    CHECK(w2->residue_at(1) == 1);
}

TEST_CASE("pairing is bilinear and kills coordinate orders") {
    auto moduli = parse_moduli_spec("arith:start=2,step=1");
    DetRng rng(99);
    auto random_entries = [&](int max_n) {
        std::vector<std::pair<uint32_t, BigInt>> entries;
        for (int i = 0; i < 4; ++i) {
            uint32_t n = 1 + static_cast<uint32_t>(rng.below(max_n));
            entries.emplace_back(n, BigInt(rng.below(moduli.at(n).convert_to<uint64_t>())));
        }
        return entries;
    };
    for (int trial = 0; trial < 60; ++trial) {
        auto chi = Character::make(moduli, random_entries(8));
        auto psi = Character::make(moduli, random_entries(8));
        auto x = GroupElement::make(moduli, random_entries(8));
        auto y = GroupElement::make(moduli, random_entries(8));
        CHECK(pairing(chi + psi, x) == pairing(chi, x) + pairing(psi, x));
        CHECK(pairing(chi, x + y) == pairing(chi, x) + pairing(chi, y));
    }
    // order annihilation per coordinate
    for (uint32_t n = 1; n <= 6; ++n) {
        auto chi = Character::unit(moduli, n, 1 + BigInt(n));
        auto x = GroupElement::unit(moduli, n);
        CHECK(int_mul(moduli.at(n), pairing(chi, x)).is_zero());
    }
}

TEST_CASE("element and character serialization") {
    auto moduli = parse_moduli_spec("geom:base=2");
    auto x = GroupElement::make(moduli, {{5, 8}, {6, 16}});
    CHECK(x.literal() == "5:8,6:16");
    CHECK(GroupElement::zero(moduli).literal() == "0");
    auto j = json_element(x);
    CHECK(j["5"] == "8");
    CHECK(j["6"] == "16");
}
