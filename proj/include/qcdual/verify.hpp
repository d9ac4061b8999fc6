#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcdual/literals.hpp"
#include "qcdual/report.hpp"

namespace qcdual {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    ordered_json details = ordered_json::object();
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

namespace verify_detail {

// Raw recomputation of chi(x) that does not go through pairing(): plain
// rational accumulation over the witness support.
inline Rational raw_pairing_mod1(const Character& chi, const GroupElement& x) {
    Rational sum = 0;
    for (const auto& [n, k] : x.support()) sum += Rational(chi.residue_at(n) * k, x.moduli().at(n));
    // reduce into (-1/2, 1/2]
    BigInt z = ceil_rat(sum - Rational(1, 2));
    return sum - Rational(z);
}

inline FiniteTruncation cyclic(unsigned m) {
    return FiniteTruncation(ModuliSequence::explicit_list({BigInt(m)}), 1);
}

inline FiniteTruncation z2_x_z4() {
    return FiniteTruncation(ModuliSequence::explicit_list({BigInt(2), BigInt(4)}), 2);
}

struct MaskCalculus {
    FiniteTruncation t;
    std::vector<GroupElement> elements;
    std::vector<Character> duals;
    std::vector<uint64_t> chi_ok;  // per element: mask of characters mapping it into T_+
    std::vector<uint64_t> elem_ok; // per character: mask of elements it maps into T_+
    uint64_t full_elems = 0, full_chis = 0;

    explicit MaskCalculus(const FiniteTruncation& trunc) : t(trunc) {
        elements = t.elements(BigInt(64));
        duals = t.dual_enumerate(BigInt(64));
        chi_ok.assign(elements.size(), 0);
        elem_ok.assign(duals.size(), 0);
        for (size_t e = 0; e < elements.size(); ++e)
            for (size_t c = 0; c < duals.size(); ++c)
                if (pairing(duals[c], elements[e]).in_t_plus()) {
                    chi_ok[e] |= 1ull << c;
                    elem_ok[c] |= 1ull << e;
                }
        full_elems = elements.size() == 64 ? ~0ull : (1ull << elements.size()) - 1;
        full_chis = duals.size() == 64 ? ~0ull : (1ull << duals.size()) - 1;
    }

    uint64_t polar_mask(uint64_t elem_mask) const {
        uint64_t out = full_chis;
        for (size_t e = 0; e < elements.size(); ++e)
            if (elem_mask & (1ull << e)) out &= chi_ok[e];
        return out;
    }
    uint64_t prepolar_mask(uint64_t chi_mask) const {
        uint64_t out = full_elems;
        for (size_t c = 0; c < duals.size(); ++c)
            if (chi_mask & (1ull << c)) out &= elem_ok[c];
        return out;
    }
    uint64_t hull_mask(uint64_t elem_mask) const { return prepolar_mask(polar_mask(elem_mask)); }

    ElementSet set_of(uint64_t mask) const {
        std::vector<GroupElement> members;
        for (size_t e = 0; e < elements.size(); ++e)
            if (mask & (1ull << e)) members.push_back(elements[e]);
        return ElementSet::make(t, std::move(members));
    }
    uint64_t mask_of(const ElementSet& s) const {
        uint64_t mask = 0;
        for (size_t e = 0; e < elements.size(); ++e)
            if (s.contains(elements[e])) mask |= 1ull << e;
        return mask;
    }
    uint64_t mask_of(const CharacterSet& s) const {
        uint64_t mask = 0;
        for (size_t c = 0; c < duals.size(); ++c)
            if (s.contains(duals[c])) mask |= 1ull << c;
        return mask;
    }
};

inline std::vector<FiniteTruncation> criterion1_groups() {
    std::vector<FiniteTruncation> groups;
    for (unsigned m = 2; m <= 8; ++m) groups.push_back(cyclic(m));
    groups.push_back(z2_x_z4());
    return groups;
}

// Random character over the given moduli whose shape is steered so that
// every branch of the witness algorithm appears among the samples.
inline Character random_prefix_character(DetRng& rng, const ModuliSequence& moduli, const BigInt& m,
                                         uint32_t n0, unsigned style) {
    BigInt m_n0 = moduli.at(n0);
    std::vector<std::pair<uint32_t, BigInt>> entries;
    auto nonzero_window = [&](uint32_t n) {
        BigInt mn = moduli.at(n);
        BigInt k = 1 + rng.big_below(mn - 1); // 1..m_n-1, never 0 mod m_n
        return k;
    };
    switch (style % 4) {
        case 0: { // unconstrained residues, usually a short circuit
            uint32_t count = 6 + static_cast<uint32_t>(rng.below(10));
            uint32_t span = n0 + 30;
            for (uint32_t i = 0; i < count; ++i) {
                uint32_t n = 1 + static_cast<uint32_t>(rng.below(span));
                entries.emplace_back(n, nonzero_window(n));
            }
            break;
        }
        case 1: { // bucket-0 shapes: |chi_n| <= m_n/m_{n0}
            uint32_t count = static_cast<uint32_t>(2 * m.convert_to<uint64_t>() + 1 + rng.below(4));
            for (uint32_t i = 0; i < count; ++i) {
                uint32_t n = n0 + i;
                BigInt cap = moduli.at(n) / m_n0;
                if (cap < 1) cap = 1;
                BigInt k = 1 + rng.big_below(cap);
                entries.emplace_back(n, rng.coin() ? k : -k);
            }
            break;
        }
        case 2: { // bucket-1 shapes: m_n/m_{n0} < |chi_n| <= 2 m_n/m_{n0}
            uint64_t count = m_n0.convert_to<uint64_t>() + rng.below(3);
            uint32_t n = n0;
            uint64_t placed = 0;
            while (placed < count) {
                BigInt mn = moduli.at(n);
                BigInt lo = mn / m_n0 + 1;
                BigInt hi = (2 * mn) / m_n0;
                if (hi >= lo) {
                    BigInt k = lo + rng.big_below(hi - lo + 1);
                    entries.emplace_back(n, rng.coin() ? k : -k);
                    ++placed;
                }
                ++n;
            }
            break;
        }
        default: { // mixture of small and unconstrained residues
            uint32_t small = 2 * static_cast<uint32_t>(m.convert_to<uint64_t>()) +
                             static_cast<uint32_t>(rng.below(3));
            for (uint32_t i = 0; i < small; ++i) entries.emplace_back(n0 + i, rng.coin() ? 1 : -1);
            uint32_t wild = static_cast<uint32_t>(rng.below(4));
            for (uint32_t i = 0; i < wild; ++i) {
                uint32_t n = 1 + static_cast<uint32_t>(rng.below(n0 + 20));
                entries.emplace_back(n, nonzero_window(n));
            }
            break;
        }
    }
    return Character::make(moduli, entries, /*prefix_of_infinite=*/true);
}

} // namespace verify_detail

// Criterion 1: bipolar calculus over every subset of Z_m (m = 2..8) and of
// Z_2 (+) Z_4, exhaustively, cross-checked against an independent bitmask
// oracle built from raw pairings.
inline CriterionResult criterion_bipolar_calculus() {
    using namespace verify_detail;
    CriterionResult result{1, "bipolar calculus on small groups", false, {}, {}};
    uint64_t subsets_checked = 0, pairs_checked = 0;
    for (const auto& t : criterion1_groups()) {
        MaskCalculus calc(t);
        uint64_t full = calc.full_elems;
        std::vector<uint64_t> oracle_polar(full + 1);
        for (uint64_t mask = 0; mask <= full; ++mask) {
            auto s = calc.set_of(mask);
            auto p = polar(s, t);
            oracle_polar[mask] = calc.polar_mask(mask);
            result.check(calc.mask_of(p) == oracle_polar[mask],
                         "polar mismatch vs oracle at mask " + std::to_string(mask));
            auto hull = qc_hull(s, t);
            uint64_t hull_mask = calc.mask_of(hull);
            result.check((mask & hull_mask) == mask, "hull not extensive at mask " + std::to_string(mask));
            result.check(calc.hull_mask(mask) == hull_mask, "hull mismatch vs oracle");
            result.check(calc.mask_of(qc_hull(hull, t)) == hull_mask,
                         "hull not idempotent at mask " + std::to_string(mask));
            // triple polar: polar(prepolar(polar(S))) == polar(S)
            auto triple = polar(prepolar(p, t), t);
            result.check(calc.mask_of(triple) == oracle_polar[mask],
                         "triple polar identity failed at mask " + std::to_string(mask));
            ++subsets_checked;
            if (!result.failures.empty()) break;
        }
        if (!result.failures.empty()) break;
        for (uint64_t a = 0; a <= full; ++a)
            for (uint64_t b = 0; b <= full; ++b) {
                if ((a & b) != a) continue; // need a subset of b
                ++pairs_checked;
                if ((oracle_polar[b] & oracle_polar[a]) != oracle_polar[b]) {
                    result.check(false, "polar not antitone at masks " + std::to_string(a) + " <= " +
                                            std::to_string(b));
                    break;
                }
            }
        if (!result.failures.empty()) break;
    }
    result.details["subsets_checked"] = subsets_checked;
    result.details["antitone_pairs_checked"] = pairs_checked;
    result.pass = result.failures.empty();
    return result;
}

// Criterion 2: the quasi-convex atlas of Z_4 is exactly
// {0}, {0,1/2}, {0,+-1/4}, Z_4; the atlases of Z_2 and Z_3 have 2 sets.
inline CriterionResult criterion_atlas() {
    using namespace verify_detail;
    CriterionResult result{2, "quasi-convex atlas of Z_2, Z_3, Z_4", false, {}, {}};
    auto z4 = cyclic(4);
    auto atlas = enumerate_quasiconvex(z4);
    result.check(atlas.size() == 4, "Z_4 atlas has " + std::to_string(atlas.size()) + " sets, expected 4");
    auto mk = [&](std::vector<BigInt> residues) {
        std::vector<GroupElement> members;
        for (const auto& r : residues) members.push_back(GroupElement::unit(z4.moduli(), 1, r));
        return ElementSet::make(z4, std::move(members));
    };
    std::vector<ElementSet> expected = {mk({0}), mk({0, 2}), mk({0, 1, -1}), mk({0, 1, 2, -1})};
    if (atlas.size() == expected.size()) {
        for (size_t i = 0; i < expected.size(); ++i)
            result.check(atlas[i] == expected[i], "Z_4 atlas entry " + std::to_string(i) + " differs");
    }
    result.check(enumerate_quasiconvex(cyclic(2)).size() == 2, "Z_2 atlas count != 2");
    result.check(enumerate_quasiconvex(cyclic(3)).size() == 2, "Z_3 atlas count != 2");
    ordered_json sizes = ordered_json::array();
    for (const auto& s : atlas) sizes.push_back(s.size());
    result.details["z4_atlas_sizes"] = std::move(sizes);
    result.pass = result.failures.empty();
    return result;
}

// Criterion 3: for every quasi-convex U of every criterion-1 group,
// (U^>)^perp is a subgroup contained in U.
inline CriterionResult criterion_linearity_extraction() {
    using namespace verify_detail;
    CriterionResult result{3, "open subgroup inside every quasi-convex set", false, {}, {}};
    uint64_t sets_checked = 0;
    for (const auto& t : criterion1_groups()) {
        for (const auto& u : enumerate_quasiconvex(t)) {
            auto w = open_subgroup_inside(u, t);
            result.check(w.subset_of(u), "W not inside U");
            result.check(w.contains(GroupElement::zero(t.moduli())), "W misses 0");
            for (const auto& a : w.members()) {
                result.check(w.contains(-a), "W not symmetric");
                for (const auto& b : w.members())
                    result.check(w.contains(a + b), "W not closed under addition");
            }
            ++sets_checked;
        }
        if (!result.failures.empty()) break;
    }
    result.details["quasiconvex_sets_checked"] = sets_checked;
    result.pass = result.failures.empty();
    return result;
}

// Criterion 4: witness soundness over randomized infinite-prefix characters.
// Every successful run is re-verified with raw arithmetic: x in V_m,
// |chi(x)| > 1/4, case-1 partial sums in (1/4, 3/4), case-2 totals in
// (1/4, 1/2] with the per-term chain 3/(20m) <= chi_n x_n <= 1/(4m).
inline CriterionResult criterion_witness_soundness(uint64_t seed, uint32_t samples_per_config = 200) {
    using namespace verify_detail;
    CriterionResult result{4, "witness soundness on randomized prefixes", false, {}, {}};
    std::vector<ModuliSequence> configs = {parse_moduli_spec("geom:base=2"),
                                           parse_moduli_spec("arith:start=2,step=1")};
    ordered_json per_config = ordered_json::array();
    for (size_t mc = 0; mc < configs.size(); ++mc) {
        const auto& moduli = configs[mc];
        for (BigInt m = 1; m <= 3; ++m) {
            DetRng rng(seed * 1000003 + mc * 101 + m.convert_to<uint64_t>());
            uint32_t n0 = compute_n0(moduli, m);
            uint64_t successes = 0, insufficient = 0;
            uint64_t case_counts[3] = {0, 0, 0};
            for (uint32_t j = 0; j < samples_per_config; ++j) {
                Character chi = random_prefix_character(rng, moduli, m, n0, j % 4);
                WitnessReport report{WitnessCase::case1, 0, std::nullopt, 1,
                                     GroupElement::zero(moduli), TorusPoint{}, {}};
                try {
                    report = witness_not_continuous(chi, m, moduli);
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::insufficient_support) {
                        ++insufficient;
                        continue;
                    }
                    throw;
                }
                ++successes;
                ++case_counts[static_cast<int>(report.case_used)];
                const auto& x = report.witness;
                // independent recomputation
                for (const auto& [n, k] : x.support()) {
                    result.check(n >= report.n0, "witness support below n0");
                    result.check(abs_rat(Rational(k, moduli.at(n))) <= Rational(1, 4 * m),
                                 "witness coordinate outside V_m window");
                }
                Rational value = raw_pairing_mod1(chi, x);
                result.check(abs_rat(value) > Rational(1, 4), "witness pairing inside T_+");
                result.check(report.all_bounds_hold(), "report carries a failing bound");
                if (report.case_used == WitnessCase::case1) {
                    Rational partial = 0;
                    for (const auto& [n, k] : x.support()) {
                        result.check(abs(k) == 1, "case1 coordinate not a sign");
                        Rational term(chi.residue_at(n) * k, moduli.at(n));
                        result.check(term > 0 && term <= Rational(1, 4), "case1 term outside (0, 1/4]");
                        partial += term;
                    }
                    result.check(partial > Rational(1, 4) && partial < Rational(3, 4),
                                 "case1 partial sum outside (1/4, 3/4)");
                } else if (report.case_used == WitnessCase::case2) {
                    Rational total = 0;
                    result.check(BigInt(x.support().size()) == 2 * m, "case2 support size != 2m");
                    for (const auto& [n, k] : x.support()) {
                        Rational term(chi.residue_at(n) * k, moduli.at(n));
                        result.check(term >= Rational(3, 20 * m), "case2 term below 3/(20m)");
                        result.check(term <= Rational(1, 4 * m), "case2 term above 1/(4m)");
                        total += term;
                    }
                    result.check(total > Rational(1, 4) && total <= Rational(1, 2),
                                 "case2 total outside (1/4, 1/2]");
                } else {
                    result.check(x.support().size() == 1 && abs(x.support()[0].second) == 1,
                                 "short circuit witness shape wrong");
                }
                if (!result.failures.empty()) break;
            }
            result.check(case_counts[0] > 0, "short_circuit never exercised");
            result.check(case_counts[1] > 0, "case1 never exercised");
            result.check(case_counts[2] > 0, "case2 never exercised");
            ordered_json cfg = ordered_json::object();
            cfg["moduli"] = moduli.spec_string();
            cfg["m"] = m.str();
            cfg["successes"] = successes;
            cfg["insufficient_support"] = insufficient;
            cfg["short_circuit"] = case_counts[0];
            cfg["case1"] = case_counts[1];
            cfg["case2"] = case_counts[2];
            per_config.push_back(std::move(cfg));
            if (!result.failures.empty()) break;
        }
        if (!result.failures.empty()) break;
    }
    result.details["configs"] = std::move(per_config);
    result.pass = result.failures.empty();
    return result;
}

// Criterion 5: the two directions are consistent. A finite-support
// character gets a certificate m with chi(V_m) == {0} verified
// exhaustively at depth n1+2, and the witness algorithm on the same finite
// table reports InsufficientSupport for that m.
inline CriterionResult criterion_two_directions(uint64_t seed, uint32_t samples_per_config = 50) {
    using namespace verify_detail;
    CriterionResult result{5, "certificate vs witness consistency", false, {}, {}};
    std::vector<ModuliSequence> configs = {parse_moduli_spec("geom:base=2"),
                                           parse_moduli_spec("arith:start=2,step=1")};
    uint64_t checked = 0;
    for (size_t mc = 0; mc < configs.size(); ++mc) {
        const auto& moduli = configs[mc];
        DetRng rng(seed * 7770000 + mc);
        for (uint32_t j = 0; j < samples_per_config; ++j) {
            std::vector<std::pair<uint32_t, BigInt>> entries;
            uint32_t count = 1 + static_cast<uint32_t>(rng.below(5));
            for (uint32_t i = 0; i < count; ++i) {
                uint32_t n = 1 + static_cast<uint32_t>(rng.below(8));
                BigInt mn = moduli.at(n);
                entries.emplace_back(n, 1 + rng.big_below(mn - 1));
            }
            Character chi = Character::make(moduli, entries);
            auto cert = continuity_certificate(chi, moduli);
            result.check(cert.verified, "certificate verification skipped (over budget)");
            result.check(cert.m == moduli.at(chi.max_index() + 1), "certificate m is not m_{n1}");
            bool got_insufficient = false;
            try {
                witness_not_continuous(chi.with_prefix_flag(true), cert.m, moduli);
            } catch (const Error& e) {
                got_insufficient = e.kind() == ErrorKind::insufficient_support;
            }
            result.check(got_insufficient,
                         "witness algorithm did not report InsufficientSupport at the certified m");
            ++checked;
            if (!result.failures.empty()) break;
        }
        if (!result.failures.empty()) break;
    }
    result.details["characters_checked"] = checked;
    result.pass = result.failures.empty();
    return result;
}

// Criterion 6: the discontinuous-character builder on (+) Z_{2^n} at depth
// 50 accepts at least 40 canonical generators with |f(a)| > 1/4, passes 500
// sampled relations, and reports the Z_4 boundary obstruction as a skip.
inline CriterionResult criterion_discontinuous(uint64_t seed, uint32_t relation_samples = 500) {
    using namespace verify_detail;
    CriterionResult result{6, "discontinuous character on (+) Z_{2^n}", false, {}, {}};
    FiniteTruncation ambient(parse_moduli_spec("geom:base=2"), 50);
    std::vector<GroupElement> seq;
    for (uint32_t n = 1; n <= 50; ++n) seq.push_back(GroupElement::unit(ambient.moduli(), n));
    auto table = build_discontinuous_character(ambient, seq, seq.size());
    result.check(table.accepted.size() >= 40,
                 "accepted only " + std::to_string(table.accepted.size()) + " of 50");
    for (const auto& e : table.accepted)
        result.check(e.value.abs() > Rational(1, 4), "accepted value inside T_+");

    DetRng rng(seed * 424243);
    std::vector<BigInt> orders;
    for (const auto& e : table.accepted) orders.push_back(e.a.order());
    uint64_t relations_passed = 0;
    for (uint32_t r = 0; r < relation_samples; ++r) {
        std::vector<BigInt> lhs(table.accepted.size(), 0), rhs;
        uint32_t touched = 1 + static_cast<uint32_t>(rng.below(5));
        for (uint32_t i = 0; i < touched; ++i) {
            size_t at = rng.below(table.accepted.size());
            lhs[at] += BigInt(rng.below(13)) - 6;
        }
        rhs = lhs;
        uint32_t shifted = 1 + static_cast<uint32_t>(rng.below(3));
        for (uint32_t i = 0; i < shifted; ++i) {
            size_t at = rng.below(table.accepted.size());
            rhs[at] += (BigInt(rng.below(5)) - 2) * orders[at];
        }
        auto violation = homomorphism_check(table, {Relation{lhs, rhs}}, ambient);
        if (violation)
            result.check(false, "relation " + std::to_string(r) + " violated: f(lhs)=" +
                                    violation->lhs_value.str() + " f(rhs)=" + violation->rhs_value.str());
        else
            ++relations_passed;
        if (!result.failures.empty()) break;
    }

    // the Z_4 boundary obstruction: f(2e) = 1/2 forces both candidate values
    // for f(e) onto the boundary of T_+, so e must be skipped, not failed
    FiniteTruncation z4(ModuliSequence::explicit_list({BigInt(4)}), 1);
    auto obstruction = build_discontinuous_character(
        z4, {GroupElement::unit(z4.moduli(), 1, 2), GroupElement::unit(z4.moduli(), 1, 1)}, 2);
    result.check(obstruction.accepted.size() == 1, "Z_4 case should accept exactly 2e");
    result.check(obstruction.skipped.size() == 1 &&
                     obstruction.skipped[0].reason == SkipReason::boundary_obstruction,
                 "Z_4 boundary case not reported as a boundary-obstruction skip");

    result.details["accepted"] = table.accepted.size();
    result.details["skipped"] = table.skipped.size();
    result.details["relations_passed"] = relations_passed;
    result.pass = result.failures.empty();
    return result;
}

// Criterion 7: tau_c vs the product topology over geom:base=2 at depth 8:
// tau_c strictly finer, one containment certificate per product basic, and
// a strictness witness whose deepest coordinate has |x_N| = 1/2.
inline CriterionResult criterion_topology_comparison() {
    using namespace verify_detail;
    CriterionResult result{7, "tau_c strictly finer than the product at depth 8", false, {}, {}};
    auto moduli = parse_moduli_spec("geom:base=2");
    FiniteTruncation t(moduli, 8);
    auto tau_c = TopologyDescriptor::uniform_on_c(moduli);
    auto product = TopologyDescriptor::product(moduli);
    auto report = compare_at_truncation(tau_c, product, t, /*basis_budget=*/64);
    result.check(report.verdict == ComparisonVerdict::tau1_finer,
                 std::string("verdict is ") + verdict_name(report.verdict));
    size_t product_basics = basis_family(product, t, 64).size();
    result.check(report.tau1_refines_tau2.certificates.size() == product_basics,
                 "missing containment certificates");
    result.check(report.tau2_refines_tau1.gap.has_value(), "no strictness witness");
    if (report.tau2_refines_tau1.gap) {
        const auto& w = report.tau2_refines_tau1.gap->witness;
        result.check(w.coordinate(t.depth()).abs() == Rational(1, 2),
                     "strictness witness |x_N| != 1/2");
        result.check(!vm_contains(BigInt(1), w, moduli), "strictness witness lies in V_1");
    }
    result.details["verdict"] = verdict_name(report.verdict);
    result.details["certificates"] = report.tau1_refines_tau2.certificates.size();
    if (report.tau2_refines_tau1.gap)
        result.details["witness"] = json_element(report.tau2_refines_tau1.gap->witness);
    result.pass = result.failures.empty();
    return result;
}

inline std::vector<CriterionResult> run_criteria_1_to_7(uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(criterion_bipolar_calculus());
    out.push_back(criterion_atlas());
    out.push_back(criterion_linearity_extraction());
    out.push_back(criterion_witness_soundness(seed));
    out.push_back(criterion_two_directions(seed));
    out.push_back(criterion_discontinuous(seed));
    out.push_back(criterion_topology_comparison());
    return out;
}

} // namespace qcdual
