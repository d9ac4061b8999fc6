#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "qcdual/element.hpp"
#include "qcdual/subgroup.hpp"

namespace qcdual {

namespace detail {

template <typename T>
std::vector<T> sort_dedup_by_raw(const FiniteTruncation& t, std::vector<T> items) {
    std::sort(items.begin(), items.end(), [&](const T& a, const T& b) {
        return t.raw_tuple(a) < t.raw_tuple(b);
    });
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

} // namespace detail

// Explicit finite set of elements of a truncation, canonically ordered by
// raw residue tuple so set output is reproducible.
class ElementSet {
public:
    static ElementSet make(const FiniteTruncation& t, std::vector<GroupElement> members) {
        for (const auto& x : members) detail::check_in_truncation(x, t, "set member");
        return ElementSet(t, detail::sort_dedup_by_raw(t, std::move(members)));
    }
    static ElementSet whole_group(const FiniteTruncation& t, const BigInt& budget) {
        return ElementSet(t, t.elements(budget));
    }

    const FiniteTruncation& truncation() const { return trunc_; }
    const std::vector<GroupElement>& members() const { return members_; }
    size_t size() const { return members_.size(); }

    bool contains(const GroupElement& x) const {
        auto key = trunc_.raw_tuple(x);
        return std::binary_search(members_.begin(), members_.end(), key,
                                  raw_less{&trunc_});
    }

    bool subset_of(const ElementSet& other) const {
        for (const auto& x : members_)
            if (!other.contains(x)) return false;
        return true;
    }

    friend bool operator==(const ElementSet& a, const ElementSet& b) {
        return a.trunc_ == b.trunc_ && a.members_ == b.members_;
    }

    // size first, then lexicographic on the sorted member tuples
    bool before(const ElementSet& other) const {
        if (members_.size() != other.members_.size()) return members_.size() < other.members_.size();
        for (size_t i = 0; i < members_.size(); ++i) {
            auto a = trunc_.raw_tuple(members_[i]);
            auto b = trunc_.raw_tuple(other.members_[i]);
            if (a != b) return a < b;
        }
        return false;
    }

private:
    struct raw_less {
        const FiniteTruncation* t;
        bool operator()(const GroupElement& x, const std::vector<BigInt>& key) const {
            return t->raw_tuple(x) < key;
        }
        bool operator()(const std::vector<BigInt>& key, const GroupElement& x) const {
            return key < t->raw_tuple(x);
        }
    };

    ElementSet(FiniteTruncation t, std::vector<GroupElement> members)
        : trunc_(std::move(t)), members_(std::move(members)) {}

    FiniteTruncation trunc_;
    std::vector<GroupElement> members_;
};

class CharacterSet {
public:
    static CharacterSet make(const FiniteTruncation& t, std::vector<Character> members) {
        for (const auto& chi : members)
            if (!t.contains(chi)) fail(ErrorKind::moduli_mismatch, "character not inside the truncation");
        return CharacterSet(t, detail::sort_dedup_by_raw(t, std::move(members)));
    }

    const FiniteTruncation& truncation() const { return trunc_; }
    const std::vector<Character>& members() const { return members_; }
    size_t size() const { return members_.size(); }

    bool contains(const Character& chi) const {
        auto key = trunc_.raw_tuple(chi);
        for (const auto& c : members_)
            if (trunc_.raw_tuple(c) == key) return true;
        return false;
    }

    bool subset_of(const CharacterSet& other) const {
        for (const auto& chi : members_)
            if (!other.contains(chi)) return false;
        return true;
    }

    friend bool operator==(const CharacterSet& a, const CharacterSet& b) {
        return a.trunc_ == b.trunc_ && a.members_ == b.members_;
    }

private:
    CharacterSet(FiniteTruncation t, std::vector<Character> members)
        : trunc_(std::move(t)), members_(std::move(members)) {}

    FiniteTruncation trunc_;
    std::vector<Character> members_;
};

// M^> : characters sending every member of S into the closed arc T_+.
inline CharacterSet polar(const ElementSet& s, const FiniteTruncation& t,
                          const BigInt& budget = BigInt(1000000)) {
    std::vector<Character> out;
    for (const auto& chi : t.dual_enumerate(budget)) {
        bool ok = true;
        for (const auto& x : s.members())
            if (!pairing(chi, x).in_t_plus()) {
                ok = false;
                break;
            }
        if (ok) out.push_back(chi);
    }
    return CharacterSet::make(t, std::move(out));
}

// N^< : elements sent into T_+ by every character of N.
inline ElementSet prepolar(const CharacterSet& n, const FiniteTruncation& t,
                           const BigInt& budget = BigInt(1000000)) {
    std::vector<GroupElement> out;
    t.for_each_element(budget, [&](const GroupElement& x) {
        for (const auto& chi : n.members())
            if (!pairing(chi, x).in_t_plus()) return;
        out.push_back(x);
    });
    return ElementSet::make(t, std::move(out));
}

// Quasi-convex hull = bipolar. Brute force is the specification here.
inline ElementSet qc_hull(const ElementSet& s, const FiniteTruncation& t,
                          const BigInt& budget = BigInt(1000000)) {
    return prepolar(polar(s, t, budget), t, budget);
}

// nullopt when S is quasi-convex; otherwise the first hull element (in
// canonical order) missing from S.
inline std::optional<GroupElement> is_quasiconvex(const ElementSet& s, const FiniteTruncation& t,
                                                  const BigInt& budget = BigInt(1000000)) {
    auto hull = qc_hull(s, t, budget);
    for (const auto& x : hull.members())
        if (!s.contains(x)) return x;
    return std::nullopt;
}

// The open subgroup (U^>)^perp sitting inside a quasi-convex U.
inline ElementSet open_subgroup_inside(const ElementSet& u, const FiniteTruncation& t,
                                       const BigInt& budget = BigInt(1000000)) {
    if (auto defect = is_quasiconvex(u, t, budget))
        fail(ErrorKind::not_quasiconvex, "input set is not quasi-convex (hull adds " + defect->literal() + ")");
    auto p = polar(u, t, budget);
    std::vector<GroupElement> out;
    t.for_each_element(budget, [&](const GroupElement& x) {
        for (const auto& chi : p.members())
            if (!pairing(chi, x).is_zero()) return;
        out.push_back(x);
    });
    return ElementSet::make(t, std::move(out));
}

// All quasi-convex subsets of the truncation. Every prepolar is an
// intersection of singleton prepolars, so the atlas is the closure of
// { prepolar({chi}) : chi in dual } U { whole group } under intersection.
// Elements are tracked as bitmasks over the enumeration order.
inline std::vector<ElementSet> enumerate_quasiconvex(const FiniteTruncation& t,
                                                     const BigInt& max_cardinality = BigInt(32)) {
    if (t.cardinality() > max_cardinality)
        fail(ErrorKind::budget_exceeded,
             "quasi-convex atlas limited to |T| <= " + max_cardinality.str());
    auto elements = t.elements(max_cardinality);
    auto duals = t.dual_enumerate(max_cardinality);
    size_t n = elements.size();
    uint64_t full = n == 64 ? ~0ull : ((1ull << n) - 1);

    std::vector<uint64_t> singles;
    for (const auto& chi : duals) {
        uint64_t mask = 0;
        for (size_t i = 0; i < n; ++i)
            if (pairing(chi, elements[i]).in_t_plus()) mask |= 1ull << i;
        singles.push_back(mask);
    }

    std::set<uint64_t> atlas{full};
    std::deque<uint64_t> queue{full};
    while (!queue.empty()) {
        uint64_t cur = queue.front();
        queue.pop_front();
        for (uint64_t s : singles) {
            uint64_t next = cur & s;
            if (atlas.insert(next).second) queue.push_back(next);
        }
    }

    std::vector<ElementSet> out;
    for (uint64_t mask : atlas) {
        std::vector<GroupElement> members;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) members.push_back(elements[i]);
        out.push_back(ElementSet::make(t, std::move(members)));
    }
    std::sort(out.begin(), out.end(), [](const ElementSet& a, const ElementSet& b) {
        return a.before(b);
    });
    return out;
}

} // namespace qcdual
