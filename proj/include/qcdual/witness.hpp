#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcdual/element.hpp"

namespace qcdual {

// One exact comparison from a witness run, kept so reports can be
// re-verified externally without trusting the boolean.
struct BoundCheck {
    std::string label;
    Rational lhs;
    std::string relation; // "<", "<=", ">", ">="
    Rational rhs;
    bool holds = false;
};

inline BoundCheck make_check(std::string label, Rational lhs, std::string relation, Rational rhs) {
    BoundCheck c{std::move(label), std::move(lhs), std::move(relation), std::move(rhs), false};
    if (c.relation == "<") c.holds = c.lhs < c.rhs;
    else if (c.relation == "<=") c.holds = c.lhs <= c.rhs;
    else if (c.relation == ">") c.holds = c.lhs > c.rhs;
    else if (c.relation == ">=") c.holds = c.lhs >= c.rhs;
    else fail(ErrorKind::internal, "unknown relation " + c.relation);
    return c;
}

enum class WitnessCase { short_circuit, case1, case2 };

inline const char* witness_case_name(WitnessCase c) {
    switch (c) {
        case WitnessCase::short_circuit: return "short_circuit";
        case WitnessCase::case1: return "case1";
        case WitnessCase::case2: return "case2";
    }
    return "?";
}

struct WitnessReport {
    WitnessCase case_used;
    uint32_t n0;
    std::optional<BigInt> chosen_k; // bucket index; absent for short_circuit
    BigInt m;
    GroupElement witness;
    TorusPoint pairing_value;
    std::vector<BoundCheck> trace;

    bool all_bounds_hold() const {
        for (const auto& c : trace)
            if (!c.holds) return false;
        return true;
    }
};

// x in V_m: every coordinate has |x_n| <= 1/(4m), checked exactly.
inline bool vm_contains(const BigInt& m, const GroupElement& x, const ModuliSequence& moduli) {
    if (m < 1) fail(ErrorKind::invalid_params, "V_m requires m >= 1");
    if (!(x.moduli() == moduli)) fail(ErrorKind::moduli_mismatch, "element over different moduli");
    Rational bound(1, 4 * m);
    for (const auto& [n, k] : x.support())
        if (abs_rat(Rational(k, moduli.at(n))) > bound) return false;
    return true;
}

// Least n with m_n/(4m) >= 5/2, i.e. m_n >= 10m; equivalently
// 1/m_n <= 1/(10m) from that index on.
inline uint32_t compute_n0(const ModuliSequence& moduli, const BigInt& m, uint32_t scan_limit = 10000) {
    if (m < 1) fail(ErrorKind::invalid_params, "m must be >= 1");
    if (!moduli.is_monotone()) fail(ErrorKind::non_monotone_moduli, "compute_n0 requires monotone moduli");
    uint32_t limit = scan_limit;
    if (auto len = moduli.finite_length(); len && *len < limit) limit = *len;
    BigInt threshold = 10 * m;
    for (uint32_t n = 1; n <= limit; ++n)
        if (moduli.at(n) >= threshold) return n;
    fail(ErrorKind::no_index_within_limit,
         "no index n <= " + std::to_string(limit) + " with m_n >= " + threshold.str());
}

// Bucket the support indices n >= n0 by which slice of [0, 1/2] the exact
// ratio |chi_n|/m_n falls into: A_k collects k/m_{n0} < |chi_n|/m_n <= (k+1)/m_{n0}.
inline std::map<BigInt, std::vector<uint32_t>> partition_support(const Character& chi, uint32_t n0,
                                                                 const ModuliSequence& moduli) {
    if (!(chi.moduli() == moduli)) fail(ErrorKind::moduli_mismatch, "character over different moduli");
    std::map<BigInt, std::vector<uint32_t>> buckets;
    BigInt m_n0 = moduli.at(n0);
    for (const auto& [n, c] : chi.support()) {
        if (n < n0) continue;
        Rational scaled = Rational(abs(c) * m_n0, moduli.at(n)); // ratio * m_{n0}
        BigInt k = ceil_rat(scaled) - 1;
        buckets[k].push_back(n);
    }
    return buckets;
}

// Produce x in V_m with chi(x) outside T_+, for a character presented as a
// finite prefix of an infinite-support one.
//
//  (0) n0 as above.
//  (1) short circuit: a single support index at or beyond n0 with ratio
//      |chi_n|/m_n > 1/4 already gives a witness with one coordinate.
//  (2) case 1: the smallest bucket index k >= 1 holding at least m_{n0}
//      support indices; walk them in increasing order with x_n =
//      sign(chi_n)/m_n until the exact partial sum enters (1/4, 3/4).
//  (3) case 2: 2m indices from bucket 0 with the floor formula
//      x_n = floor(m_n/(4m|chi_n|)) * sign(chi_n) / m_n; per-term value in
//      [3/(20m), 1/(4m)], total in (1/4, 1/2].
// Anything else means the prefix is too short: InsufficientSupport.
inline WitnessReport witness_not_continuous(const Character& chi, const BigInt& m,
                                            const ModuliSequence& moduli,
                                            uint32_t scan_limit = 10000) {
    if (!chi.prefix_of_infinite())
        fail(ErrorKind::invalid_params,
             "witness_not_continuous expects a character flagged as an infinite-support prefix");
    if (!(chi.moduli() == moduli)) fail(ErrorKind::moduli_mismatch, "character over different moduli");
    if (!moduli.is_monotone()) fail(ErrorKind::non_monotone_moduli, "witness requires monotone moduli");
    if (m < 1) fail(ErrorKind::invalid_params, "m must be >= 1");

    uint32_t n0 = compute_n0(moduli, m, scan_limit);
    BigInt m_n0 = moduli.at(n0);
    std::vector<BoundCheck> trace;
    trace.push_back(make_check("n0 choice: m_n0/(4m) >= 5/2", Rational(m_n0, 4 * m), ">=", Rational(5, 2)));

    auto finish = [&](WitnessCase used, std::optional<BigInt> chosen_k, GroupElement witness) {
        TorusPoint value = pairing(chi, witness);
        trace.push_back(make_check("witness escapes T_+: |chi(x)| > 1/4", value.abs(), ">", Rational(1, 4)));
        Rational max_coord = 0;
        for (const auto& [n, k] : witness.support())
            max_coord = std::max(max_coord, abs_rat(Rational(k, moduli.at(n))));
        trace.push_back(make_check("witness in V_m: max |x_n| <= 1/(4m)", max_coord, "<=", Rational(1, 4 * m)));
        WitnessReport report{used, n0, std::move(chosen_k), m, std::move(witness), value, std::move(trace)};
        if (!report.all_bounds_hold())
            fail(ErrorKind::internal, "witness construction produced a failing bound");
        return report;
    };

    // (1) short circuit
    for (const auto& [n, c] : chi.support()) {
        if (n < n0) continue;
        Rational ratio(abs(c), moduli.at(n));
        if (ratio > Rational(1, 4)) {
            trace.push_back(make_check("short circuit: |chi_n|/m_n > 1/4 at n=" + std::to_string(n),
                                       ratio, ">", Rational(1, 4)));
            trace.push_back(make_check("short circuit: 1/m_n <= 1/(10m)", Rational(1, moduli.at(n)),
                                       "<=", Rational(1, 10 * m)));
            return finish(WitnessCase::short_circuit, std::nullopt,
                          GroupElement::unit(moduli, n, c > 0 ? 1 : -1));
        }
    }

    auto buckets = partition_support(chi, n0, moduli);

    // (2) case 1: smallest k >= 1 with at least m_{n0} indices
    for (const auto& [k, indices] : buckets) {
        if (k < 1) continue;
        if (BigInt(indices.size()) < m_n0) continue;
        std::vector<std::pair<uint32_t, BigInt>> coords;
        Rational partial = 0;
        for (uint32_t n : indices) {
            BigInt c = chi.residue_at(n);
            coords.emplace_back(n, c > 0 ? 1 : -1);
            Rational term(abs(c), moduli.at(n));
            trace.push_back(make_check("case1 term <= 1/4 at n=" + std::to_string(n), term, "<=", Rational(1, 4)));
            partial += term;
            if (partial > Rational(1, 4)) break;
        }
        trace.push_back(make_check("case1 partial sum > 1/4", partial, ">", Rational(1, 4)));
        trace.push_back(make_check("case1 partial sum < 3/4", partial, "<", Rational(3, 4)));
        return finish(WitnessCase::case1, k, GroupElement::make(moduli, coords));
    }

    // (3) case 2: 2m indices from bucket 0
    auto a0 = buckets.find(BigInt(0));
    if (a0 != buckets.end() && BigInt(a0->second.size()) >= 2 * m) {
        std::vector<std::pair<uint32_t, BigInt>> coords;
        Rational total = 0;
        BigInt needed = 2 * m;
        for (uint32_t n : a0->second) {
            if (needed == 0) break;
            --needed;
            BigInt c = chi.residue_at(n);
            BigInt mag = moduli.at(n) / (4 * m * abs(c)); // floor
            coords.emplace_back(n, c > 0 ? mag : -mag);
            Rational term(abs(c) * mag, moduli.at(n));
            trace.push_back(
                make_check("case2 term >= 3/(20m) at n=" + std::to_string(n), term, ">=", Rational(3, 20 * m)));
            trace.push_back(
                make_check("case2 term <= 1/(4m) at n=" + std::to_string(n), term, "<=", Rational(1, 4 * m)));
            total += term;
        }
        trace.push_back(make_check("case2 total > 1/4", total, ">", Rational(1, 4)));
        trace.push_back(make_check("case2 total <= 1/2", total, "<=", Rational(1, 2)));
        return finish(WitnessCase::case2, BigInt(0), GroupElement::make(moduli, coords));
    }

    fail(ErrorKind::insufficient_support,
         "prefix has no usable bucket: supply a longer prefix of the infinite-support character");
}

struct ContinuityCertificate {
    BigInt m;                // V_m kills the character
    uint32_t n1;             // support lies strictly below n1
    BigInt elements_checked; // size of the verified V_m slice; 0 when over budget
    bool verified = false;
};

// Easy direction: a finite-support character with support below n1 is
// killed by V_{m_{n1}}, since every coordinate below n1 of a V_m element
// is forced to zero. Verified exhaustively over V_m at depth n1 + 2
// (enumerating only the residues the window allows per coordinate).
inline ContinuityCertificate continuity_certificate(const Character& chi, const ModuliSequence& moduli,
                                                    const BigInt& budget = BigInt(1000000)) {
    if (chi.prefix_of_infinite())
        fail(ErrorKind::invalid_params, "continuity_certificate expects a genuinely finite-support character");
    if (!(chi.moduli() == moduli)) fail(ErrorKind::moduli_mismatch, "character over different moduli");
    if (!moduli.is_monotone()) fail(ErrorKind::non_monotone_moduli, "certificate requires monotone moduli");

    uint32_t n1 = chi.max_index() + 1;
    uint32_t verify_depth = n1 + 2;
    if (auto len = moduli.finite_length()) {
        if (n1 > *len) fail(ErrorKind::invalid_params, "support exceeds finite moduli list");
        if (verify_depth > *len) verify_depth = *len;
    }
    BigInt m = moduli.at(n1);

    // per-coordinate windows |k_n| <= floor(m_n / (4m))
    std::vector<BigInt> windows(verify_depth);
    BigInt count = 1;
    for (uint32_t n = 1; n <= verify_depth; ++n) {
        windows[n - 1] = moduli.at(n) / (4 * m);
        count *= 2 * windows[n - 1] + 1;
    }
    if (count > budget) return ContinuityCertificate{m, n1, 0, false};

    std::vector<BigInt> k(verify_depth);
    for (uint32_t n = 1; n <= verify_depth; ++n) k[n - 1] = -windows[n - 1];
    for (;;) {
        std::vector<std::pair<uint32_t, BigInt>> entries;
        for (uint32_t n = 1; n <= verify_depth; ++n)
            if (k[n - 1] != 0) entries.emplace_back(n, k[n - 1]);
        GroupElement x = GroupElement::make(moduli, entries);
        if (!vm_contains(m, x, moduli)) fail(ErrorKind::internal, "window enumeration left V_m");
        if (!pairing(chi, x).is_zero())
            fail(ErrorKind::internal, "certificate violated: chi(" + x.literal() + ") != 0 inside V_m");
        uint32_t i = verify_depth;
        while (i > 0) {
            if (++k[i - 1] <= windows[i - 1]) break;
            k[i - 1] = -windows[i - 1];
            --i;
        }
        if (i == 0) break;
    }
    return ContinuityCertificate{m, n1, count, true};
}

} // namespace qcdual
