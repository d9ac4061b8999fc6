#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qcdual/discontinuous.hpp"
#include "qcdual/quasiconvex.hpp"
#include "qcdual/topology.hpp"
#include "qcdual/witness.hpp"

namespace qcdual {

using ordered_json = nlohmann::ordered_json;

// Residues go out as decimal strings: they can exceed what JSON numbers
// carry exactly, and reports must be re-verifiable without rounding.
inline ordered_json json_sparse(const std::vector<std::pair<uint32_t, BigInt>>& entries) {
    ordered_json out = ordered_json::object();
    for (const auto& [n, k] : entries) out[std::to_string(n)] = k.str();
    return out;
}

inline ordered_json json_element(const GroupElement& x) { return json_sparse(x.support()); }
inline ordered_json json_character(const Character& chi) { return json_sparse(chi.support()); }

inline ordered_json json_torus(const TorusPoint& t) { return to_pq(t.value()); }

inline ordered_json json_trace(const std::vector<BoundCheck>& trace) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : trace) {
        ordered_json entry = ordered_json::object();
        entry["label"] = c.label;
        entry["lhs"] = to_pq(c.lhs);
        entry["rel"] = c.relation;
        entry["rhs"] = to_pq(c.rhs);
        entry["holds"] = c.holds;
        arr.push_back(std::move(entry));
    }
    return arr;
}

inline ordered_json json_element_set(const ElementSet& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& x : s.members()) arr.push_back(json_element(x));
    return arr;
}

inline ordered_json json_character_set(const CharacterSet& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& chi : s.members()) arr.push_back(json_character(chi));
    return arr;
}

inline ordered_json json_witness_report(const WitnessReport& r) {
    ordered_json out = ordered_json::object();
    out["case_used"] = witness_case_name(r.case_used);
    out["n0"] = r.n0;
    if (r.chosen_k) out["chosen_k"] = r.chosen_k->str();
    out["m"] = r.m.str();
    out["witness"] = json_element(r.witness);
    out["pairing"] = json_torus(r.pairing_value);
    out["trace"] = json_trace(r.trace);
    out["all_bounds_hold"] = r.all_bounds_hold();
    return out;
}

inline ordered_json json_comparison(const ComparisonReport& r) {
    auto direction = [](const DirectionResult& d) {
        ordered_json out = ordered_json::object();
        out["refines"] = d.refines;
        out["decisive"] = d.decisive;
        ordered_json certs = ordered_json::array();
        for (const auto& c : d.certificates) {
            ordered_json e = ordered_json::object();
            e["outer"] = c.outer;
            e["inner"] = c.inner;
            certs.push_back(std::move(e));
        }
        out["certificates"] = std::move(certs);
        if (d.gap) {
            ordered_json g = ordered_json::object();
            g["uncovered"] = d.gap->uncovered;
            g["minimal_basic"] = d.gap->minimal_basic;
            g["witness"] = json_element(d.gap->witness);
            out["gap"] = std::move(g);
        }
        return out;
    };
    ordered_json out = ordered_json::object();
    out["verdict"] = verdict_name(r.verdict);
    out["tau1_refines_tau2"] = direction(r.tau1_refines_tau2);
    out["tau2_refines_tau1"] = direction(r.tau2_refines_tau1);
    return out;
}

inline ordered_json json_character_table(const CharacterTable& table) {
    ordered_json out = ordered_json::object();
    ordered_json accepted = ordered_json::array();
    for (const auto& e : table.accepted) {
        ordered_json entry = ordered_json::object();
        entry["a"] = json_element(e.a);
        entry["f"] = json_torus(e.value);
        entry["independent"] = e.independent;
        if (e.k) {
            entry["k"] = e.k->str();
            ordered_json coeffs = ordered_json::array();
            for (const auto& c : e.coefficients) coeffs.push_back(c.str());
            entry["coefficients"] = std::move(coeffs);
        }
        accepted.push_back(std::move(entry));
    }
    out["accepted"] = std::move(accepted);
    ordered_json skipped = ordered_json::array();
    for (const auto& e : table.skipped) {
        ordered_json entry = ordered_json::object();
        entry["a"] = json_element(e.a);
        entry["reason"] = skip_reason_name(e.reason);
        entry["position"] = e.position;
        skipped.push_back(std::move(entry));
    }
    out["skipped"] = std::move(skipped);
    return out;
}

// Deterministic splittable RNG for all sampled checks; never uses
// platform-dependent distributions, so identical seeds give identical
// reports on any build.
class DetRng {
public:
    explicit DetRng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

    // uniform-ish in [0, n), exact for arbitrary-size n; modulo skew is
    // irrelevant here, determinism is the contract
    BigInt big_below(const BigInt& n) {
        if (n <= 0) return 0;
        BigInt r = 0;
        unsigned bits = 0;
        unsigned need = static_cast<unsigned>(boost::multiprecision::msb(n)) + 65;
        while (bits < need) {
            r = (r << 64) | BigInt(next());
            bits += 64;
        }
        return r % n;
    }

    bool coin() { return (next() & 1) != 0; }

private:
    uint64_t state_;
};

} // namespace qcdual
