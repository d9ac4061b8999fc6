#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qcdual/moduli.hpp"
#include "qcdual/torus.hpp"

namespace qcdual {

namespace detail {

// Shared sparse storage for elements of (+) Z_{m_n} and for characters:
// a finite support map n -> residue, residues kept in the canonical window
// (-m_n/2, m_n/2] and never zero.
struct ResidueTable {
    ModuliSequence moduli;
    std::vector<std::pair<uint32_t, BigInt>> entries; // sorted by index, residues canonical

    static BigInt canonical_residue(BigInt k, const BigInt& m) {
        k %= m;
        if (2 * k > m) k -= m;
        if (2 * k <= -m) k += m;
        return k;
    }

    static ResidueTable make(const ModuliSequence& moduli,
                             const std::vector<std::pair<uint32_t, BigInt>>& raw) {
        std::map<uint32_t, BigInt> acc;
        for (const auto& [n, k] : raw) {
            if (n < 1) fail(ErrorKind::invalid_params, "coordinate indices start at 1");
            acc[n] += k;
        }
        ResidueTable t{moduli, {}};
        for (auto& [n, k] : acc) {
            BigInt c = canonical_residue(k, moduli.at(n));
            if (c != 0) t.entries.emplace_back(n, std::move(c));
        }
        return t;
    }

    BigInt residue_at(uint32_t n) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), n,
                                   [](const auto& e, uint32_t v) { return e.first < v; });
        if (it != entries.end() && it->first == n) return it->second;
        return 0;
    }

    bool is_zero() const { return entries.empty(); }

    uint32_t max_index() const { return entries.empty() ? 0 : entries.back().first; }

    ResidueTable combined(const ResidueTable& other, int sign) const {
        std::vector<std::pair<uint32_t, BigInt>> raw = entries;
        for (const auto& [n, k] : other.entries) raw.emplace_back(n, sign < 0 ? BigInt(-k) : k);
        return make(moduli, raw);
    }

    ResidueTable scaled(const BigInt& c) const {
        std::vector<std::pair<uint32_t, BigInt>> raw;
        raw.reserve(entries.size());
        for (const auto& [n, k] : entries) raw.emplace_back(n, c * k);
        return make(moduli, raw);
    }

    // lcm over the support of the coordinate orders m_n / gcd(k_n, m_n).
    BigInt order() const {
        BigInt ord = 1;
        for (const auto& [n, k] : entries) {
            BigInt m = moduli.at(n);
            BigInt o = m / gcd(abs(k), m);
            ord = lcm(ord, o);
        }
        return ord;
    }

    friend bool operator==(const ResidueTable& a, const ResidueTable& b) {
        return a.moduli == b.moduli && a.entries == b.entries;
    }

    std::string literal() const {
        if (entries.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [n, k] : entries) {
            if (!first) out << ",";
            out << n << ":" << k;
            first = false;
        }
        return out.str();
    }
};

} // namespace detail

class GroupElement {
public:
    static GroupElement make(const ModuliSequence& moduli,
                             const std::vector<std::pair<uint32_t, BigInt>>& raw) {
        return GroupElement(detail::ResidueTable::make(moduli, raw));
    }
    static GroupElement zero(const ModuliSequence& moduli) { return make(moduli, {}); }
    static GroupElement unit(const ModuliSequence& moduli, uint32_t n, const BigInt& k = 1) {
        return make(moduli, {{n, k}});
    }

    const ModuliSequence& moduli() const { return table_.moduli; }
    const std::vector<std::pair<uint32_t, BigInt>>& support() const { return table_.entries; }
    BigInt residue_at(uint32_t n) const { return table_.residue_at(n); }
    bool is_zero() const { return table_.is_zero(); }
    uint32_t max_index() const { return table_.max_index(); }
    BigInt order() const { return table_.order(); }

    // Coordinate value x_n = k_n / m_n as a circle point.
    TorusPoint coordinate(uint32_t n) const {
        return TorusPoint::normalize(Rational(residue_at(n), table_.moduli.at(n)));
    }

    friend GroupElement operator+(const GroupElement& a, const GroupElement& b) {
        a.check_same(b);
        return GroupElement(a.table_.combined(b.table_, +1));
    }
    friend GroupElement operator-(const GroupElement& a, const GroupElement& b) {
        a.check_same(b);
        return GroupElement(a.table_.combined(b.table_, -1));
    }
    GroupElement operator-() const { return GroupElement(table_.scaled(-1)); }
    friend GroupElement int_mul(const BigInt& c, const GroupElement& a) {
        return GroupElement(a.table_.scaled(c));
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.table_ == b.table_;
    }

    std::string literal() const { return table_.literal(); }

private:
    explicit GroupElement(detail::ResidueTable t) : table_(std::move(t)) {}

    void check_same(const GroupElement& other) const {
        if (!(table_.moduli == other.table_.moduli))
            fail(ErrorKind::moduli_mismatch, "elements over different moduli sequences");
    }

    detail::ResidueTable table_;
};

class Character {
public:
    static Character make(const ModuliSequence& moduli,
                          const std::vector<std::pair<uint32_t, BigInt>>& raw,
                          bool prefix_of_infinite = false) {
        return Character(detail::ResidueTable::make(moduli, raw), prefix_of_infinite);
    }
    static Character zero(const ModuliSequence& moduli) { return make(moduli, {}); }
    static Character unit(const ModuliSequence& moduli, uint32_t n, const BigInt& k = 1) {
        return make(moduli, {{n, k}});
    }

    const ModuliSequence& moduli() const { return table_.moduli; }
    const std::vector<std::pair<uint32_t, BigInt>>& support() const { return table_.entries; }
    BigInt residue_at(uint32_t n) const { return table_.residue_at(n); }
    bool is_zero() const { return table_.is_zero(); }
    uint32_t max_index() const { return table_.max_index(); }
    BigInt order() const { return table_.order(); }

    // True when this finite table presents a prefix of an infinite-support
    // character; the witness algorithm requires its input be flagged so.
    bool prefix_of_infinite() const { return prefix_; }
    Character with_prefix_flag(bool flag) const { return Character(table_, flag); }

    friend Character operator+(const Character& a, const Character& b) {
        a.check_same(b);
        return Character(a.table_.combined(b.table_, +1), a.prefix_ || b.prefix_);
    }
    Character operator-() const { return Character(table_.scaled(-1), prefix_); }

    friend bool operator==(const Character& a, const Character& b) {
        return a.table_ == b.table_ && a.prefix_ == b.prefix_;
    }

    std::string literal() const { return table_.literal(); }

private:
    Character(detail::ResidueTable t, bool prefix) : table_(std::move(t)), prefix_(prefix) {}

    void check_same(const Character& other) const {
        if (!(table_.moduli == other.table_.moduli))
            fail(ErrorKind::moduli_mismatch, "characters over different moduli sequences");
    }

    detail::ResidueTable table_;
    bool prefix_ = false;
};

// chi(x) = sum over the common support of chi_n * k_n / m_n, exactly.
inline TorusPoint pairing(const Character& chi, const GroupElement& x) {
    if (!(chi.moduli() == x.moduli()))
        fail(ErrorKind::moduli_mismatch, "pairing across different moduli sequences");
    Rational sum = 0;
    auto xi = x.support().begin();
    for (const auto& [n, c] : chi.support()) {
        while (xi != x.support().end() && xi->first < n) ++xi;
        if (xi == x.support().end()) break;
        if (xi->first == n) sum += Rational(c * xi->second, chi.moduli().at(n));
    }
    return TorusPoint::normalize(sum);
}

// The finite stage (+)_{n<=N} Z_{m_n} of the direct sum.
class FiniteTruncation {
public:
    FiniteTruncation(ModuliSequence moduli, uint32_t depth) : moduli_(std::move(moduli)), depth_(depth) {
        if (depth < 1) fail(ErrorKind::invalid_params, "truncation depth must be >= 1");
        if (auto len = moduli_.finite_length(); len && depth > *len)
            fail(ErrorKind::invalid_params, "truncation depth beyond finite moduli list");
    }

    const ModuliSequence& moduli() const { return moduli_; }
    uint32_t depth() const { return depth_; }

    BigInt cardinality() const {
        BigInt c = 1;
        for (uint32_t n = 1; n <= depth_; ++n) c *= moduli_.at(n);
        return c;
    }

    BigInt exponent() const {
        BigInt e = 1;
        for (uint32_t n = 1; n <= depth_; ++n) e = lcm(e, moduli_.at(n));
        return e;
    }

    bool contains(const GroupElement& x) const {
        return x.moduli() == moduli_ && x.max_index() <= depth_;
    }
    bool contains(const Character& chi) const {
        return chi.moduli() == moduli_ && chi.max_index() <= depth_;
    }

    // Deterministic lexicographic enumeration: coordinate 1 is the most
    // significant digit, each coordinate running through the raw residues
    // 0..m_n-1 (so e.g. Z_4 appears as 0, 1, 2, -1 in canonical form).
    void for_each_element(const BigInt& budget,
                          const std::function<void(const GroupElement&)>& fn) const {
        check_budget(budget);
        odometer([&](const std::vector<BigInt>& raw) { fn(from_raw(raw)); });
    }

    std::vector<GroupElement> elements(const BigInt& budget) const {
        std::vector<GroupElement> out;
        for_each_element(budget, [&](const GroupElement& x) { out.push_back(x); });
        return out;
    }

    std::vector<Character> dual_enumerate(const BigInt& budget) const {
        check_budget(budget);
        std::vector<Character> out;
        odometer([&](const std::vector<BigInt>& raw) {
            std::vector<std::pair<uint32_t, BigInt>> entries;
            for (uint32_t n = 1; n <= depth_; ++n)
                if (raw[n - 1] != 0) entries.emplace_back(n, raw[n - 1]);
            out.push_back(Character::make(moduli_, entries));
        });
        return out;
    }

    // Raw residue tuple (r_1..r_N), each in [0, m_n): the sort key used for
    // all deterministic set orderings.
    std::vector<BigInt> raw_tuple(const GroupElement& x) const {
        std::vector<BigInt> raw(depth_);
        for (uint32_t n = 1; n <= depth_; ++n) {
            BigInt k = x.residue_at(n);
            if (k < 0) k += moduli_.at(n);
            raw[n - 1] = k;
        }
        return raw;
    }
    std::vector<BigInt> raw_tuple(const Character& chi) const {
        std::vector<BigInt> raw(depth_);
        for (uint32_t n = 1; n <= depth_; ++n) {
            BigInt k = chi.residue_at(n);
            if (k < 0) k += moduli_.at(n);
            raw[n - 1] = k;
        }
        return raw;
    }

    friend bool operator==(const FiniteTruncation& a, const FiniteTruncation& b) {
        return a.depth_ == b.depth_ && a.moduli_ == b.moduli_;
    }

private:
    void check_budget(const BigInt& budget) const {
        if (cardinality() > budget)
            fail(ErrorKind::budget_exceeded,
                 "truncation cardinality " + cardinality().str() + " exceeds budget " + budget.str());
    }

    GroupElement from_raw(const std::vector<BigInt>& raw) const {
        std::vector<std::pair<uint32_t, BigInt>> entries;
        for (uint32_t n = 1; n <= depth_; ++n)
            if (raw[n - 1] != 0) entries.emplace_back(n, raw[n - 1]);
        return GroupElement::make(moduli_, entries);
    }

    void odometer(const std::function<void(const std::vector<BigInt>&)>& fn) const {
        std::vector<BigInt> radix(depth_);
        for (uint32_t n = 1; n <= depth_; ++n) radix[n - 1] = moduli_.at(n);
        std::vector<BigInt> raw(depth_, 0);
        for (;;) {
            fn(raw);
            // increment with coordinate 1 most significant
            uint32_t i = depth_;
            while (i > 0) {
                if (++raw[i - 1] < radix[i - 1]) break;
                raw[i - 1] = 0;
                --i;
            }
            if (i == 0) return;
        }
    }

    ModuliSequence moduli_;
    uint32_t depth_;
};

} // namespace qcdual
