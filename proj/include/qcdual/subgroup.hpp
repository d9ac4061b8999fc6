#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "qcdual/element.hpp"
#include "qcdual/linsolve.hpp"

namespace qcdual {

enum class SolveMethod { automatic, linear_algebra, brute_force };

namespace detail {

inline void check_in_truncation(const GroupElement& x, const FiniteTruncation& t, const char* what) {
    if (!t.contains(x)) fail(ErrorKind::moduli_mismatch, std::string(what) + " not inside the truncation");
}

// One congruence row per coordinate n <= depth: sum_i c_i * g_i[n] == x[n] (mod m_n).
inline CongruenceSolver membership_solver(const std::vector<GroupElement>& gens,
                                          const FiniteTruncation& t) {
    size_t rows = t.depth();
    std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(gens.size(), 0));
    std::vector<BigInt> moduli(rows);
    for (uint32_t n = 1; n <= t.depth(); ++n) {
        moduli[n - 1] = t.moduli().at(n);
        for (size_t i = 0; i < gens.size(); ++i) a[n - 1][i] = gens[i].residue_at(n);
    }
    return CongruenceSolver(std::move(a), std::move(moduli));
}

inline std::vector<BigInt> residue_rhs(const GroupElement& x, const FiniteTruncation& t) {
    std::vector<BigInt> b(t.depth());
    for (uint32_t n = 1; n <= t.depth(); ++n) b[n - 1] = x.residue_at(n);
    return b;
}

} // namespace detail

// Breadth-first closure of <gens>; elements keyed by raw residue tuple, each
// with the first coefficient vector that reached it. Deterministic.
struct SubgroupClosure {
    std::vector<GroupElement> elements;            // insertion order, elements[0] == 0
    std::vector<std::vector<BigInt>> coefficients; // aligned with elements
    std::map<std::vector<BigInt>, size_t> index;   // raw tuple -> position

    std::optional<size_t> find(const FiniteTruncation& t, const GroupElement& x) const {
        auto it = index.find(t.raw_tuple(x));
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
};

inline SubgroupClosure subgroup_closure(const std::vector<GroupElement>& gens,
                                        const FiniteTruncation& t, const BigInt& budget) {
    for (const auto& g : gens) detail::check_in_truncation(g, t, "generator");
    SubgroupClosure closure;
    GroupElement zero = GroupElement::zero(t.moduli());
    closure.elements.push_back(zero);
    closure.coefficients.emplace_back(gens.size(), 0);
    closure.index.emplace(t.raw_tuple(zero), 0);
    std::deque<size_t> queue{0};
    while (!queue.empty()) {
        size_t at = queue.front();
        queue.pop_front();
        for (size_t i = 0; i < gens.size(); ++i) {
            GroupElement next = closure.elements[at] + gens[i];
            auto key = t.raw_tuple(next);
            if (closure.index.count(key)) continue;
            if (BigInt(closure.elements.size()) >= budget)
                fail(ErrorKind::budget_exceeded, "subgroup closure exceeds budget " + budget.str());
            auto coeffs = closure.coefficients[at];
            coeffs[i] += 1;
            closure.index.emplace(std::move(key), closure.elements.size());
            closure.elements.push_back(std::move(next));
            closure.coefficients.push_back(std::move(coeffs));
            queue.push_back(closure.elements.size() - 1);
        }
    }
    return closure;
}

// Integer coefficients (c_i) with sum c_i * gens_i == x, or nullopt when
// x is outside <gens>. The linear-algebra path is total; the brute-force
// path enumerates the closure and is subject to the budget.
inline std::optional<std::vector<BigInt>> subgroup_membership(
    const std::vector<GroupElement>& gens, const GroupElement& x, const FiniteTruncation& t,
    SolveMethod method = SolveMethod::automatic, const BigInt& budget = BigInt(1000000)) {
    for (const auto& g : gens) detail::check_in_truncation(g, t, "generator");
    detail::check_in_truncation(x, t, "element");
    if (method == SolveMethod::brute_force) {
        auto closure = subgroup_closure(gens, t, budget);
        auto at = closure.find(t, x);
        if (!at) return std::nullopt;
        return closure.coefficients[*at];
    }
    auto solver = detail::membership_solver(gens, t);
    return solver.solve(detail::residue_rhs(x, t));
}

struct MinimalMultiple {
    BigInt k;                       // smallest k >= 1 with k*a in <gens>, k a proper divisor of ord(a)
    std::vector<BigInt> coefficients; // expression k*a = sum coefficients_i * gens_i
};

namespace detail {

// Prime factorization by trial division; the moduli this artifact works
// with are desk-scale smooth, so this never needs more.
inline std::map<BigInt, unsigned> factorize(BigInt n) {
    std::map<BigInt, unsigned> factors;
    for (BigInt p = 2; p * p <= n; p == 2 ? p = 3 : p += 2) {
        while (n % p == 0) {
            ++factors[p];
            n /= p;
        }
    }
    if (n > 1) ++factors[n];
    return factors;
}

inline std::vector<BigInt> sorted_divisors(const BigInt& n) {
    auto factors = factorize(n);
    std::vector<BigInt> divs{1};
    for (const auto& [p, e] : factors) {
        size_t base = divs.size();
        BigInt pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

} // namespace detail

// The set {k : k*a in <gens>} is a subgroup k0*Z of Z with k0 dividing
// ord(a), so scanning the divisors of ord(a) in increasing order finds k0.
// k0 == ord(a) means <a> meets <gens> trivially: Independent (nullopt).
inline std::optional<MinimalMultiple> minimal_multiple_in(
    const std::vector<GroupElement>& gens, const GroupElement& a, const FiniteTruncation& t,
    SolveMethod method = SolveMethod::automatic, const BigInt& budget = BigInt(1000000)) {
    if (a.is_zero()) fail(ErrorKind::zero_element, "minimal_multiple_in requires a != 0");
    detail::check_in_truncation(a, t, "element");
    for (const auto& g : gens) detail::check_in_truncation(g, t, "generator");
    BigInt ord = a.order();

    if (method == SolveMethod::brute_force) {
        auto closure = subgroup_closure(gens, t, budget);
        for (BigInt k = 1; k < ord; ++k) {
            auto at = closure.find(t, int_mul(k, a));
            if (at) return MinimalMultiple{k, closure.coefficients[*at]};
        }
        return std::nullopt;
    }

    auto solver = detail::membership_solver(gens, t);
    for (const auto& d : detail::sorted_divisors(ord)) {
        if (d == ord) break;
        auto coeffs = solver.solve(detail::residue_rhs(int_mul(d, a), t));
        if (coeffs) return MinimalMultiple{d, std::move(*coeffs)};
    }
    return std::nullopt;
}

// {chi : chi vanishes on <H_gens>}, in dual enumeration order. Annihilating
// the generators annihilates the subgroup they generate.
inline std::vector<Character> annihilator(const std::vector<GroupElement>& h_gens,
                                          const FiniteTruncation& t,
                                          const BigInt& budget = BigInt(1000000)) {
    for (const auto& g : h_gens) detail::check_in_truncation(g, t, "generator");
    std::vector<Character> out;
    for (const auto& chi : t.dual_enumerate(budget)) {
        bool kills = true;
        for (const auto& g : h_gens)
            if (!pairing(chi, g).is_zero()) {
                kills = false;
                break;
            }
        if (kills) out.push_back(chi);
    }
    return out;
}

// Witness character separating x from <H_gens>, or nullopt when x lies in
// the subgroup. For finite truncations a witness always exists.
inline std::optional<Character> is_dually_closed(const std::vector<GroupElement>& h_gens,
                                                 const GroupElement& x, const FiniteTruncation& t,
                                                 const BigInt& budget = BigInt(1000000)) {
    if (subgroup_membership(h_gens, x, t, SolveMethod::automatic, budget)) return std::nullopt;
    for (const auto& chi : annihilator(h_gens, t, budget))
        if (!pairing(chi, x).is_zero()) return chi;
    fail(ErrorKind::internal, "finite dual failed to separate a point outside the subgroup");
}

} // namespace qcdual
