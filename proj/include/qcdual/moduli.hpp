#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qcdual/rational.hpp"

namespace qcdual {

// The sequence (m_n) of cyclic orders, n starting at 1. Either an explicit
// finite list or one of the infinite rules; the rule is the value identity,
// so two sequences compare equal iff they were built from the same rule.
class ModuliSequence {
public:
    struct ExplicitList {
        std::vector<BigInt> values;
    };
    struct Arithmetic {
        BigInt start, step; // m_n = start + (n-1)*step
    };
    struct Geometric {
        BigInt base; // m_n = base^n
    };
    struct Primes {}; // m_n = n-th prime

    static ModuliSequence explicit_list(std::vector<BigInt> values) {
        for (const auto& v : values)
            if (v < 2) fail(ErrorKind::modulus_below_two, "list entry " + v.str());
        if (values.empty()) fail(ErrorKind::invalid_params, "empty moduli list");
        return ModuliSequence(ExplicitList{std::move(values)});
    }

    static ModuliSequence arithmetic(BigInt start, BigInt step) {
        if (start < 2) fail(ErrorKind::modulus_below_two, "arithmetic start " + start.str());
        if (step < 0) fail(ErrorKind::modulus_below_two, "negative step eventually drops below 2");
        return ModuliSequence(Arithmetic{std::move(start), std::move(step)});
    }

    static ModuliSequence geometric(BigInt base) {
        if (base < 2) fail(ErrorKind::modulus_below_two, "geometric base " + base.str());
        return ModuliSequence(Geometric{std::move(base)});
    }

    static ModuliSequence primes() { return ModuliSequence(Primes{}); }

    // m_n, 1-based. Out-of-range access on a finite list is a usage error.
    BigInt at(uint32_t n) const {
        if (n < 1) fail(ErrorKind::invalid_params, "moduli index starts at 1");
        const auto& rule = impl_->rule;
        if (const auto* list = std::get_if<ExplicitList>(&rule)) {
            if (n > list->values.size())
                fail(ErrorKind::invalid_params, "index " + std::to_string(n) + " beyond finite moduli list");
            return list->values[n - 1];
        }
        if (const auto* a = std::get_if<Arithmetic>(&rule)) return a->start + BigInt(n - 1) * a->step;
        if (const auto* g = std::get_if<Geometric>(&rule)) return boost::multiprecision::pow(g->base, n);
        return nth_prime(n);
    }

    std::optional<uint32_t> finite_length() const {
        if (const auto* list = std::get_if<ExplicitList>(&impl_->rule))
            return static_cast<uint32_t>(list->values.size());
        return std::nullopt;
    }

    bool is_monotone() const { return impl_->monotone; }
    bool is_unbounded() const { return impl_->unbounded; }

    // Round-trips through parse_moduli_spec.
    std::string spec_string() const {
        const auto& rule = impl_->rule;
        if (const auto* list = std::get_if<ExplicitList>(&rule)) {
            std::ostringstream out;
            out << "list:";
            for (size_t i = 0; i < list->values.size(); ++i) {
                if (i) out << ",";
                out << list->values[i];
            }
            return out.str();
        }
        if (const auto* a = std::get_if<Arithmetic>(&rule))
            return "arith:start=" + a->start.str() + ",step=" + a->step.str();
        if (const auto* g = std::get_if<Geometric>(&rule)) return "geom:base=" + g->base.str();
        return "primes";
    }

    friend bool operator==(const ModuliSequence& x, const ModuliSequence& y) {
        if (x.impl_ == y.impl_) return true;
        return x.spec_string() == y.spec_string();
    }

private:
    using Rule = std::variant<ExplicitList, Arithmetic, Geometric, Primes>;

    struct Impl {
        Rule rule;
        bool monotone = false;
        bool unbounded = false;
        mutable std::vector<BigInt> prime_cache;
        mutable std::mutex prime_mutex;
    };

    explicit ModuliSequence(Rule rule) {
        auto impl = std::make_shared<Impl>();
        impl->rule = std::move(rule);
        if (const auto* list = std::get_if<ExplicitList>(&impl->rule)) {
            impl->monotone = true;
            for (size_t i = 1; i < list->values.size(); ++i)
                if (list->values[i] < list->values[i - 1]) impl->monotone = false;
            impl->unbounded = false;
        } else if (const auto* a = std::get_if<Arithmetic>(&impl->rule)) {
            impl->monotone = a->step >= 0;
            impl->unbounded = a->step >= 1;
        } else {
            impl->monotone = true;
            impl->unbounded = true;
        }
        impl_ = std::move(impl);
    }

    BigInt nth_prime(uint32_t n) const {
        std::lock_guard<std::mutex> lock(impl_->prime_mutex);
        auto& cache = impl_->prime_cache;
        if (cache.empty()) cache.push_back(2);
        while (cache.size() < n) {
            BigInt candidate = cache.back() + 1;
            for (;; ++candidate) {
                bool prime = true;
                for (const auto& p : cache) {
                    if (p * p > candidate) break;
                    if (candidate % p == 0) {
                        prime = false;
                        break;
                    }
                }
                if (prime) break;
            }
            cache.push_back(candidate);
        }
        return cache[n - 1];
    }

    std::shared_ptr<const Impl> impl_;
};

} // namespace qcdual
