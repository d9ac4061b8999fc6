#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcdual/element.hpp"
#include "qcdual/topology.hpp"

namespace qcdual {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t at = s.find(sep, start);
        if (at == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, at - start));
        start = at + 1;
    }
}

inline BigInt parse_int(const std::string& s, const std::string& where) {
    if (s.empty()) fail(ErrorKind::parse_error, where + ": expected integer, got empty string");
    size_t i = s[0] == '-' || s[0] == '+' ? 1 : 0;
    if (i == s.size()) fail(ErrorKind::parse_error, where + ": expected digits after sign in '" + s + "'");
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            fail(ErrorKind::parse_error,
                 where + ": unexpected character '" + std::string(1, s[i]) + "' at position " +
                     std::to_string(i) + " of '" + s + "', expected digit");
    return BigInt(s);
}

} // namespace detail

// Moduli spec grammar:
//   list:<ints> | arith:start=<a>,step=<d> | geom:base=<b> | primes
inline ModuliSequence parse_moduli_spec(const std::string& s) {
    if (s == "primes") return ModuliSequence::primes();
    if (s.rfind("list:", 0) == 0) {
        std::vector<BigInt> values;
        for (const auto& part : detail::split(s.substr(5), ','))
            values.push_back(detail::parse_int(part, "moduli list"));
        return ModuliSequence::explicit_list(std::move(values));
    }
    if (s.rfind("arith:", 0) == 0) {
        auto parts = detail::split(s.substr(6), ',');
        if (parts.size() != 2 || parts[0].rfind("start=", 0) != 0 || parts[1].rfind("step=", 0) != 0)
            fail(ErrorKind::parse_error,
                 "at position 6 of '" + s + "': expected 'start=<a>,step=<d>'");
        return ModuliSequence::arithmetic(detail::parse_int(parts[0].substr(6), "arith start"),
                                          detail::parse_int(parts[1].substr(5), "arith step"));
    }
    if (s.rfind("geom:", 0) == 0) {
        auto rest = s.substr(5);
        if (rest.rfind("base=", 0) != 0)
            fail(ErrorKind::parse_error, "at position 5 of '" + s + "': expected 'base=<b>'");
        return ModuliSequence::geometric(detail::parse_int(rest.substr(5), "geom base"));
    }
    fail(ErrorKind::parse_error,
         "at position 0 of '" + s + "': expected one of 'list:', 'arith:', 'geom:', 'primes'");
}

// Sparse coordinate literal: "0" for the zero vector, else "n:r[,n:r]*".
inline std::vector<std::pair<uint32_t, BigInt>> parse_sparse_literal(const std::string& s) {
    std::vector<std::pair<uint32_t, BigInt>> entries;
    if (s.empty() || s == "0") return entries;
    for (const auto& part : detail::split(s, ',')) {
        auto colon = part.find(':');
        if (colon == std::string::npos)
            fail(ErrorKind::parse_error, "coordinate '" + part + "': expected 'n:residue'");
        BigInt n = detail::parse_int(part.substr(0, colon), "coordinate index");
        if (n < 1 || n > 1000000) fail(ErrorKind::parse_error, "coordinate index out of range: " + n.str());
        entries.emplace_back(static_cast<uint32_t>(n), detail::parse_int(part.substr(colon + 1), "residue"));
    }
    return entries;
}

inline GroupElement parse_element_literal(const ModuliSequence& moduli, const std::string& s) {
    return GroupElement::make(moduli, parse_sparse_literal(s));
}

inline Character parse_character_literal(const ModuliSequence& moduli, const std::string& s,
                                         bool prefix_of_infinite = false) {
    return Character::make(moduli, parse_sparse_literal(s), prefix_of_infinite);
}

// Element sets: ';'-joined element literals; empty string is the empty set.
inline std::vector<GroupElement> parse_element_list(const ModuliSequence& moduli, const std::string& s) {
    std::vector<GroupElement> out;
    if (s.empty()) return out;
    for (const auto& part : detail::split(s, ';')) out.push_back(parse_element_literal(moduli, part));
    return out;
}

inline std::vector<Character> parse_character_list(const ModuliSequence& moduli, const std::string& s) {
    std::vector<Character> out;
    if (s.empty()) return out;
    for (const auto& part : detail::split(s, ';')) out.push_back(parse_character_literal(moduli, part));
    return out;
}

// Topology descriptor literals:
//   product | uniform-c | chain:tail | weak:[<char>;<char>...]:<eps> | ext:tail<k>:<inner>
inline TopologyDescriptor parse_topology_literal(const ModuliSequence& moduli, const std::string& s) {
    if (s == "product") return TopologyDescriptor::product(moduli);
    if (s == "uniform-c") return TopologyDescriptor::uniform_on_c(moduli);
    if (s == "chain:tail") return TopologyDescriptor::tail_chain(moduli);
    if (s.rfind("weak:[", 0) == 0) {
        auto close = s.find(']', 6);
        if (close == std::string::npos || close + 1 >= s.size() || s[close + 1] != ':')
            fail(ErrorKind::parse_error, "weak literal: expected 'weak:[chars]:eps' in '" + s + "'");
        auto chars = parse_character_list(moduli, s.substr(6, close - 6));
        auto eps = parse_rational(s.substr(close + 2));
        return TopologyDescriptor::weak(moduli, std::move(chars), eps);
    }
    if (s.rfind("ext:tail", 0) == 0) {
        auto colon = s.find(':', 8);
        if (colon == std::string::npos)
            fail(ErrorKind::parse_error, "ext literal: expected 'ext:tail<k>:<inner>' in '" + s + "'");
        BigInt k = detail::parse_int(s.substr(8, colon - 8), "ext tail index");
        if (k < 0 || k > 1000000) fail(ErrorKind::parse_error, "ext tail index out of range");
        auto inner = parse_topology_literal(moduli, s.substr(colon + 1));
        return TopologyDescriptor::extension(moduli, ChainSubgroup::tail(static_cast<uint32_t>(k)),
                                             std::move(inner));
    }
    fail(ErrorKind::parse_error,
         "topology literal '" + s +
             "': expected product | uniform-c | chain:tail | weak:[...]:eps | ext:tail<k>:<inner>");
}

} // namespace qcdual
