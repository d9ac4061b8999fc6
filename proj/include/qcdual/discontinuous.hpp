#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcdual/subgroup.hpp"

namespace qcdual {

enum class SkipReason { in_subgroup, boundary_obstruction };

inline const char* skip_reason_name(SkipReason r) {
    return r == SkipReason::in_subgroup ? "in_subgroup" : "boundary_obstruction";
}

struct AcceptedEntry {
    GroupElement a;
    TorusPoint value; // f(a), always with |f(a)| > 1/4
    bool independent = false;
    std::optional<BigInt> k;          // dependent case: minimal k with k*a in the earlier span
    std::vector<BigInt> coefficients; // dependent case: k*a = sum coefficients_i * accepted_i
};

struct SkippedEntry {
    GroupElement a;
    SkipReason reason;
    size_t position; // index in the candidate sequence
};

struct CharacterTable {
    FiniteTruncation ambient;
    std::vector<AcceptedEntry> accepted;
    std::vector<SkippedEntry> skipped;

    // f extended by linearity: sum coeffs_i * f(accepted_i).
    TorusPoint value_of(const std::vector<BigInt>& coeffs) const {
        TorusPoint v;
        for (size_t i = 0; i < coeffs.size() && i < accepted.size(); ++i)
            v = v + int_mul(coeffs[i], accepted[i].value);
        return v;
    }
};

namespace detail {

// Candidate values for f(a) when <a> is independent from the current span:
// the ord(a) circle points t with ord(a)*t = 0. The |t|-maximizing choice is
// floor(ord/2)/ord, which is positive and lies outside T_+ for every
// ord >= 2 (1/2 for even orders, (ord-1)/(2 ord) >= 1/3 otherwise).
inline TorusPoint independent_value(const BigInt& ord) {
    return TorusPoint::normalize(Rational(ord / 2, ord));
}

// Dependent case: the k solutions of k*t = v are (w + i)/k for the integers
// i keeping the result inside (-1/2, 1/2], where w is the representative of
// v. |t| is maximized at one of the two ends of that progression.
inline TorusPoint dependent_value(const BigInt& k, const TorusPoint& v) {
    const Rational& w = v.value();
    BigInt i_hi = floor_rat(Rational(k, 2) - w);
    BigInt i_lo = floor_rat(Rational(-k, 2) - w) + 1;
    TorusPoint hi = TorusPoint::normalize((w + Rational(i_hi)) / Rational(k));
    TorusPoint lo = TorusPoint::normalize((w + Rational(i_lo)) / Rational(k));
    // tie prefers the positive representative
    return hi.abs() >= lo.abs() ? hi : lo;
}

} // namespace detail

// Inductive construction of a homomorphism f with f(a) outside T_+ on as
// many of the candidates as the arithmetic allows. Candidates already in
// the current span are skipped; so are candidates whose every consistent
// value lands on the boundary of T_+ (the subsequence freedom of the
// construction). Both kinds of skip are recorded, never silently absorbed.
inline CharacterTable build_discontinuous_character(const FiniteTruncation& ambient,
                                                    const std::vector<GroupElement>& seq,
                                                    size_t limit,
                                                    const BigInt& budget = BigInt(1000000)) {
    CharacterTable table{ambient, {}, {}};
    std::vector<GroupElement> span_gens;
    size_t processed = 0;
    for (size_t pos = 0; pos < seq.size() && processed < limit; ++pos, ++processed) {
        const GroupElement& a = seq[pos];
        if (a.is_zero()) fail(ErrorKind::zero_element, "candidate " + std::to_string(pos) + " is zero");
        detail::check_in_truncation(a, ambient, "candidate");

        if (subgroup_membership(span_gens, a, ambient, SolveMethod::automatic, budget)) {
            table.skipped.push_back({a, SkipReason::in_subgroup, pos});
            continue;
        }

        auto minimal = minimal_multiple_in(span_gens, a, ambient, SolveMethod::automatic, budget);
        if (!minimal) {
            // <a> meets the span trivially: free choice of f(a) among the
            // ord(a)-torsion points of the circle.
            AcceptedEntry entry{a, detail::independent_value(a.order()), true, std::nullopt, {}};
            if (!(int_mul(a.order(), entry.value).is_zero()) || entry.value.abs() <= Rational(1, 4))
                fail(ErrorKind::internal, "independent value construction broke its contract");
            table.accepted.push_back(std::move(entry));
            span_gens.push_back(a);
            continue;
        }

        TorusPoint v = table.value_of(minimal->coefficients);
        TorusPoint t = detail::dependent_value(minimal->k, v);
        if (!(int_mul(minimal->k, t) == v))
            fail(ErrorKind::internal, "dependent value does not satisfy k*t = v");
        if (t.abs() <= Rational(1, 4)) {
            // every consistent value lies inside the closed arc T_+
            table.skipped.push_back({a, SkipReason::boundary_obstruction, pos});
            continue;
        }
        table.accepted.push_back({a, t, false, minimal->k, minimal->coefficients});
        span_gens.push_back(a);
    }
    if (table.accepted.empty())
        fail(ErrorKind::all_candidates_skipped, "no candidate admitted a value outside T_+");
    return table;
}

// A relation: sum lhs_i * a_i == sum rhs_i * a_i over the accepted elements.
struct Relation {
    std::vector<BigInt> lhs;
    std::vector<BigInt> rhs;
};

struct ViolatedRelation {
    size_t relation_index;
    TorusPoint lhs_value;
    TorusPoint rhs_value;
};

// Checks each relation first in the ambient group (supplying a non-relation
// is a usage error), then through the value table.
inline std::optional<ViolatedRelation> homomorphism_check(const CharacterTable& table,
                                                          const std::vector<Relation>& relations,
                                                          const FiniteTruncation& ambient) {
    for (size_t r = 0; r < relations.size(); ++r) {
        const auto& rel = relations[r];
        GroupElement lhs = GroupElement::zero(ambient.moduli());
        GroupElement rhs = GroupElement::zero(ambient.moduli());
        for (size_t i = 0; i < rel.lhs.size() && i < table.accepted.size(); ++i)
            lhs = lhs + int_mul(rel.lhs[i], table.accepted[i].a);
        for (size_t i = 0; i < rel.rhs.size() && i < table.accepted.size(); ++i)
            rhs = rhs + int_mul(rel.rhs[i], table.accepted[i].a);
        if (!(lhs == rhs))
            fail(ErrorKind::invalid_params,
                 "relation " + std::to_string(r) + " does not hold in the ambient group");
        TorusPoint fl = table.value_of(rel.lhs);
        TorusPoint fr = table.value_of(rel.rhs);
        if (!(fl == fr)) return ViolatedRelation{r, fl, fr};
    }
    return std::nullopt;
}

} // namespace qcdual
