#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcdual/quasiconvex.hpp"
#include "qcdual/subgroup.hpp"
#include "qcdual/witness.hpp"

namespace qcdual {

// One member of a decreasing chain of subgroups: either the tail subgroup
// {x : x_n = 0 for n <= k} (k == 0 is the whole group) or an explicit
// generated subgroup.
struct ChainSubgroup {
    std::optional<uint32_t> tail_from;
    std::vector<GroupElement> generators;

    static ChainSubgroup tail(uint32_t k) { return ChainSubgroup{k, {}}; }
    static ChainSubgroup generated(std::vector<GroupElement> gens) {
        return ChainSubgroup{std::nullopt, std::move(gens)};
    }

    std::string describe() const {
        if (tail_from) return "tail" + std::to_string(*tail_from);
        if (generators.empty()) return "zero";
        std::string out = "gens(";
        for (size_t i = 0; i < generators.size(); ++i) {
            if (i) out += ";";
            out += generators[i].literal();
        }
        return out + ")";
    }
};

// Symbolic topology descriptors. These never hold point sets; every claim
// about them is certified at an explicit finite truncation.
class TopologyDescriptor {
public:
    enum class Kind { product, linear_chain, uniform_on_c, weak, extension };

    static TopologyDescriptor product(ModuliSequence moduli) {
        TopologyDescriptor d(Kind::product);
        d.moduli_ = std::move(moduli);
        return d;
    }

    // The tail chain H_k = {x : x_n = 0, n <= k}, k = 1, 2, ...
    static TopologyDescriptor tail_chain(ModuliSequence moduli) {
        TopologyDescriptor d(Kind::linear_chain);
        d.moduli_ = std::move(moduli);
        d.tail_family_ = true;
        return d;
    }

    static TopologyDescriptor linear_chain(ModuliSequence moduli, std::vector<ChainSubgroup> members) {
        TopologyDescriptor d(Kind::linear_chain);
        d.moduli_ = std::move(moduli);
        d.chain_ = std::move(members);
        return d;
    }

    static TopologyDescriptor uniform_on_c(ModuliSequence moduli) {
        if (!moduli.is_monotone() || !moduli.is_unbounded())
            fail(ErrorKind::invalid_params, "uniform-on-c requires monotone unbounded moduli");
        TopologyDescriptor d(Kind::uniform_on_c);
        d.moduli_ = std::move(moduli);
        return d;
    }

    static TopologyDescriptor weak(ModuliSequence moduli, std::vector<Character> chars,
                                   Rational threshold = Rational(1, 4)) {
        if (threshold <= 0) fail(ErrorKind::invalid_params, "weak threshold must be positive");
        TopologyDescriptor d(Kind::weak);
        d.moduli_ = std::move(moduli);
        d.weak_chars_ = std::move(chars);
        d.weak_threshold_ = std::move(threshold);
        return d;
    }

    static TopologyDescriptor extension(ModuliSequence moduli, ChainSubgroup subgroup,
                                        TopologyDescriptor inner) {
        TopologyDescriptor d(Kind::extension);
        d.moduli_ = std::move(moduli);
        d.ext_subgroup_ = std::move(subgroup);
        d.ext_inner_ = std::make_shared<TopologyDescriptor>(std::move(inner));
        return d;
    }

    Kind kind() const { return kind_; }
    const ModuliSequence& moduli() const { return moduli_; }
    const std::vector<ChainSubgroup>& chain() const { return chain_; }
    bool tail_family() const { return tail_family_; }
    const std::vector<Character>& weak_chars() const { return weak_chars_; }
    const Rational& weak_threshold() const { return weak_threshold_; }
    const ChainSubgroup& ext_subgroup() const { return ext_subgroup_; }
    const TopologyDescriptor& ext_inner() const { return *ext_inner_; }

    std::string literal() const {
        switch (kind_) {
            case Kind::product: return "product";
            case Kind::uniform_on_c: return "uniform-c";
            case Kind::linear_chain: {
                if (tail_family_) return "chain:tail";
                std::string out = "chain:";
                for (size_t i = 0; i < chain_.size(); ++i) {
                    if (i) out += ",";
                    out += chain_[i].describe();
                }
                return out;
            }
            case Kind::weak: {
                std::string out = "weak:[";
                for (size_t i = 0; i < weak_chars_.size(); ++i) {
                    if (i) out += ";";
                    out += weak_chars_[i].literal();
                }
                return out + "]:" + to_pq(weak_threshold_);
            }
            case Kind::extension:
                return "ext:" + ext_subgroup_.describe() + ":" + ext_inner_->literal();
        }
        return "?";
    }

private:
    explicit TopologyDescriptor(Kind kind) : kind_(kind), moduli_(ModuliSequence::primes()) {}

    Kind kind_;
    ModuliSequence moduli_;
    std::vector<ChainSubgroup> chain_;
    bool tail_family_ = false;
    std::vector<Character> weak_chars_;
    Rational weak_threshold_ = Rational(1, 4);
    ChainSubgroup ext_subgroup_;
    std::shared_ptr<const TopologyDescriptor> ext_inner_;
};

// A basic zero-neighborhood with a decidable membership predicate. The
// variants constrained coordinatewise ("boxes") also expose their residue
// windows, which containment checks use to avoid full enumeration.
class Neighborhood {
public:
    struct VmParams {
        BigInt m;
    };
    struct ProductParams {
        uint32_t depth;  // coordinates 1..depth constrained
        Rational bound;  // |x_n| <= bound there; 0 pins the coordinate
    };
    struct SubgroupParams {
        ChainSubgroup subgroup;
    };
    struct WeakParams {
        std::vector<Character> chars;
        Rational eps;
    };
    struct ExtensionParams {
        ChainSubgroup subgroup;
        std::shared_ptr<const Neighborhood> inner; // null: the subgroup itself
    };
    using Params = std::variant<VmParams, ProductParams, SubgroupParams, WeakParams, ExtensionParams>;

    Neighborhood(ModuliSequence moduli, Params params, std::string label)
        : moduli_(std::move(moduli)), params_(std::move(params)), label_(std::move(label)) {}

    const std::string& label() const { return label_; }
    const ModuliSequence& moduli() const { return moduli_; }

    bool contains(const GroupElement& x) const {
        if (!(x.moduli() == moduli_)) fail(ErrorKind::moduli_mismatch, "element over different moduli");
        if (const auto* vm = std::get_if<VmParams>(&params_)) return vm_contains(vm->m, x, moduli_);
        if (const auto* p = std::get_if<ProductParams>(&params_)) {
            for (const auto& [n, k] : x.support()) {
                if (n > p->depth) continue;
                if (abs_rat(Rational(k, moduli_.at(n))) > p->bound) return false;
            }
            return true;
        }
        if (const auto* s = std::get_if<SubgroupParams>(&params_)) return subgroup_contains(s->subgroup, x);
        if (const auto* w = std::get_if<WeakParams>(&params_)) {
            for (const auto& chi : w->chars)
                if (pairing(chi, x).abs() > w->eps) return false;
            return true;
        }
        const auto& e = std::get<ExtensionParams>(params_);
        if (!subgroup_contains(e.subgroup, x)) return false;
        return e.inner ? e.inner->contains(x) : true;
    }

    // Per-coordinate residue window |k_n| <= w, or nullopt when the variant
    // is not coordinatewise (weak sets, generated subgroups).
    std::optional<BigInt> residue_window(uint32_t n) const {
        BigInt m_n = moduli_.at(n);
        BigInt full = m_n / 2;
        if (const auto* vm = std::get_if<VmParams>(&params_)) return m_n / (4 * vm->m);
        if (const auto* p = std::get_if<ProductParams>(&params_)) {
            if (n > p->depth) return full;
            return std::min(full, floor_rat(p->bound * Rational(m_n)));
        }
        if (const auto* s = std::get_if<SubgroupParams>(&params_)) {
            if (!s->subgroup.tail_from) return std::nullopt;
            return n <= *s->subgroup.tail_from ? BigInt(0) : full;
        }
        if (std::holds_alternative<WeakParams>(params_)) return std::nullopt;
        const auto& e = std::get<ExtensionParams>(params_);
        if (!e.subgroup.tail_from) return std::nullopt;
        BigInt w = n <= *e.subgroup.tail_from ? BigInt(0) : full;
        if (e.inner) {
            auto iw = e.inner->residue_window(n);
            if (!iw) return std::nullopt;
            w = std::min(w, *iw);
        }
        return w;
    }

    bool is_box(uint32_t depth) const {
        for (uint32_t n = 1; n <= depth; ++n)
            if (!residue_window(n)) return false;
        return true;
    }

private:
    bool subgroup_contains(const ChainSubgroup& h, const GroupElement& x) const {
        if (h.tail_from) {
            for (const auto& [n, k] : x.support())
                if (n <= *h.tail_from && k != 0) return false;
            return true;
        }
        uint32_t depth = std::max<uint32_t>(x.max_index(), 1);
        for (const auto& g : h.generators) depth = std::max(depth, g.max_index());
        FiniteTruncation t(moduli_, depth);
        return subgroup_membership(h.generators, x, t).has_value();
    }

    ModuliSequence moduli_;
    Params params_;
    std::string label_;
};

// Descriptor-specific basic-neighborhood constructor.
struct BasicParams {
    BigInt level = 1;       // uniform-on-c: m; weak: shrink factor t
    uint32_t depth = 0;     // product: pinned prefix length
    Rational bound = 0;     // product: per-coordinate bound
    size_t index = 0;       // linear chain / extension member (extension: 0 is H itself)
};

inline Neighborhood basic_nbhd(const TopologyDescriptor& desc, const BasicParams& params) {
    using Kind = TopologyDescriptor::Kind;
    switch (desc.kind()) {
        case Kind::uniform_on_c: {
            if (params.level < 1) fail(ErrorKind::invalid_params, "V_m needs m >= 1");
            return Neighborhood(desc.moduli(), Neighborhood::VmParams{params.level},
                                "V_" + params.level.str());
        }
        case Kind::product: {
            if (params.bound < 0) fail(ErrorKind::invalid_params, "product bound must be >= 0");
            return Neighborhood(desc.moduli(), Neighborhood::ProductParams{params.depth, params.bound},
                                "P(depth=" + std::to_string(params.depth) + ",bound=" + to_pq(params.bound) + ")");
        }
        case Kind::linear_chain: {
            ChainSubgroup member = ChainSubgroup::tail(0);
            if (desc.tail_family()) {
                member = ChainSubgroup::tail(static_cast<uint32_t>(params.index + 1));
            } else {
                if (params.index >= desc.chain().size())
                    fail(ErrorKind::invalid_params, "chain index out of range");
                member = desc.chain()[params.index];
            }
            std::string label = "H[" + member.describe() + "]";
            return Neighborhood(desc.moduli(), Neighborhood::SubgroupParams{std::move(member)}, label);
        }
        case Kind::weak: {
            if (params.level < 1) fail(ErrorKind::invalid_params, "weak shrink factor must be >= 1");
            Rational eps = desc.weak_threshold() / Rational(params.level);
            return Neighborhood(desc.moduli(), Neighborhood::WeakParams{desc.weak_chars(), eps},
                                "W(eps=" + to_pq(eps) + ")");
        }
        case Kind::extension: {
            if (params.index == 0)
                return Neighborhood(desc.moduli(),
                                    Neighborhood::ExtensionParams{desc.ext_subgroup(), nullptr},
                                    "E[" + desc.ext_subgroup().describe() + "]");
            BasicParams inner_params = params;
            inner_params.index -= 1;
            auto inner = std::make_shared<Neighborhood>(basic_nbhd(desc.ext_inner(), inner_params));
            std::string label = "E[" + desc.ext_subgroup().describe() + " & " + inner->label() + "]";
            return Neighborhood(desc.moduli(),
                                Neighborhood::ExtensionParams{desc.ext_subgroup(), std::move(inner)}, label);
        }
    }
    fail(ErrorKind::internal, "unhandled descriptor kind");
}

// The nested family of basics a descriptor instantiates at a truncation.
// Basics that would pin every coordinate of the stage (product depth >= N,
// tail index >= N) degenerate to {0} there and misrepresent the infinite
// object, so the families stop one short of the truncation depth.
inline std::vector<Neighborhood> basis_family(const TopologyDescriptor& desc,
                                              const FiniteTruncation& t, size_t basis_budget) {
    using Kind = TopologyDescriptor::Kind;
    std::vector<Neighborhood> out;
    switch (desc.kind()) {
        case Kind::uniform_on_c:
            for (size_t m = 1; m <= basis_budget; ++m)
                out.push_back(basic_nbhd(desc, BasicParams{.level = BigInt(m)}));
            break;
        case Kind::product:
            for (uint32_t d = 1; d + 1 <= t.depth() && out.size() < basis_budget; ++d)
                out.push_back(basic_nbhd(desc, BasicParams{.depth = d, .bound = Rational(0)}));
            break;
        case Kind::linear_chain:
            if (desc.tail_family()) {
                for (uint32_t k = 1; k + 1 <= t.depth() && out.size() < basis_budget; ++k)
                    out.push_back(basic_nbhd(desc, BasicParams{.index = k - 1}));
            } else {
                for (size_t i = 0; i < desc.chain().size() && out.size() < basis_budget; ++i)
                    out.push_back(basic_nbhd(desc, BasicParams{.index = i}));
            }
            break;
        case Kind::weak:
            for (size_t tlevel = 1; tlevel <= basis_budget; ++tlevel)
                out.push_back(basic_nbhd(desc, BasicParams{.level = BigInt(tlevel)}));
            break;
        case Kind::extension: {
            out.push_back(basic_nbhd(desc, BasicParams{.index = 0}));
            for (auto& inner : basis_family(desc.ext_inner(), t, basis_budget)) {
                if (out.size() >= basis_budget) break;
                std::string label = "E[" + desc.ext_subgroup().describe() + " & " + inner.label() + "]";
                out.push_back(Neighborhood(
                    desc.moduli(),
                    Neighborhood::ExtensionParams{desc.ext_subgroup(),
                                                  std::make_shared<Neighborhood>(std::move(inner))},
                    label));
            }
            break;
        }
    }
    return out;
}

// Does A contain B on the truncation? nullopt = yes; otherwise a witness
// x in B \ A. Boxes are compared window by window (first violating
// coordinate, largest allowed residue); everything else enumerates.
inline std::optional<GroupElement> nbhd_contains(const Neighborhood& a, const Neighborhood& b,
                                                 const FiniteTruncation& t,
                                                 const BigInt& budget = BigInt(1000000)) {
    if (!(a.moduli() == t.moduli()) || !(b.moduli() == t.moduli()))
        fail(ErrorKind::moduli_mismatch, "neighborhoods over different moduli");
    if (a.is_box(t.depth()) && b.is_box(t.depth())) {
        for (uint32_t n = 1; n <= t.depth(); ++n) {
            BigInt full = t.moduli().at(n) / 2;
            BigInt wa = std::min(full, *a.residue_window(n));
            BigInt wb = std::min(full, *b.residue_window(n));
            if (wb > wa) return GroupElement::unit(t.moduli(), n, wb);
        }
        return std::nullopt;
    }
    std::optional<GroupElement> witness;
    t.for_each_element(budget, [&](const GroupElement& x) {
        if (!witness && b.contains(x) && !a.contains(x)) witness = x;
    });
    return witness;
}

enum class ComparisonVerdict { equal, tau1_finer, tau2_finer, incomparable, inconclusive_at_budget };

inline const char* verdict_name(ComparisonVerdict v) {
    switch (v) {
        case ComparisonVerdict::equal: return "equal";
        case ComparisonVerdict::tau1_finer: return "tau1_finer";
        case ComparisonVerdict::tau2_finer: return "tau2_finer";
        case ComparisonVerdict::incomparable: return "incomparable";
        case ComparisonVerdict::inconclusive_at_budget: return "inconclusive_at_budget";
    }
    return "?";
}

struct ContainmentCertificate {
    std::string outer; // basic of the coarser family
    std::string inner; // basic of the finer family found inside it
};

struct StrictnessWitness {
    std::string uncovered;    // basic the other family cannot get inside
    GroupElement witness;     // element of the other family's minimal basic outside it
    std::string minimal_basic;
};

struct DirectionResult {
    bool refines = false;
    bool decisive = false; // failure cannot be cured by a larger budget
    std::vector<ContainmentCertificate> certificates;
    std::optional<StrictnessWitness> gap;
};

struct ComparisonReport {
    ComparisonVerdict verdict = ComparisonVerdict::inconclusive_at_budget;
    DirectionResult tau1_refines_tau2;
    DirectionResult tau2_refines_tau1;
};

namespace detail {

// Can famA shrink below its last instantiated member on this truncation?
// Product/tail families are exhausted by construction once they reach
// depth-1; an explicit chain is the whole descriptor; V_m and weak families
// keep shrinking unless the minimal member already equals its limit.
inline bool family_exhausted(const TopologyDescriptor& desc, const std::vector<Neighborhood>& family,
                             const FiniteTruncation& t, const BigInt& budget) {
    using Kind = TopologyDescriptor::Kind;
    switch (desc.kind()) {
        case Kind::product:
            return family.size() + 1 >= t.depth();
        case Kind::linear_chain:
            if (!desc.tail_family()) return true;
            return family.size() + 1 >= t.depth();
        case Kind::uniform_on_c: {
            if (family.empty()) return false;
            for (uint32_t n = 1; n <= t.depth(); ++n)
                if (*family.back().residue_window(n) > 0) return false;
            return true; // minimal member is already {0}
        }
        case Kind::weak: {
            if (family.empty()) return false;
            if (t.cardinality() > budget) return false;
            // limit of the family is the joint kernel of the characters
            bool stable = true;
            t.for_each_element(budget, [&](const GroupElement& x) {
                if (!stable || !family.back().contains(x)) return;
                for (const auto& chi : desc.weak_chars())
                    if (!pairing(chi, x).is_zero()) {
                        stable = false;
                        return;
                    }
            });
            return stable;
        }
        case Kind::extension: {
            if (family.empty()) return false;
            // family = {H} followed by the inner basics; exhausted only when
            // the inner family was fully instantiated and is itself exhausted
            auto inner = basis_family(desc.ext_inner(), t, family.size());
            if (inner.size() + 1 > family.size()) return false;
            return family_exhausted(desc.ext_inner(), inner, t, budget);
        }
    }
    return false;
}

inline DirectionResult direction_check(const TopologyDescriptor& fine_desc,
                                       const std::vector<Neighborhood>& fine,
                                       const std::vector<Neighborhood>& coarse,
                                       const FiniteTruncation& t, const BigInt& budget) {
    DirectionResult result;
    result.refines = true;
    std::optional<size_t> first_uncovered;
    for (size_t b = 0; b < coarse.size(); ++b) {
        bool covered = false;
        for (size_t a = 0; a < fine.size(); ++a) {
            if (!nbhd_contains(coarse[b], fine[a], t, budget)) {
                result.certificates.push_back({coarse[b].label(), fine[a].label()});
                covered = true;
                break;
            }
        }
        if (!covered) {
            result.refines = false;
            if (!first_uncovered) first_uncovered = b;
        }
    }
    if (result.refines) {
        result.decisive = true;
        return result;
    }
    // not refining is decisive only when the fine family cannot shrink further
    if (!fine.empty() && family_exhausted(fine_desc, fine, t, budget)) {
        result.decisive = true;
        auto witness = nbhd_contains(coarse[*first_uncovered], fine.back(), t, budget);
        if (!witness) fail(ErrorKind::internal, "uncovered basic has no witness against the minimal basic");
        result.gap = StrictnessWitness{coarse[*first_uncovered].label(), *witness, fine.back().label()};
    }
    return result;
}

} // namespace detail

// Certified comparison of two descriptors at a finite stage, over the
// budgeted basis families. tau1_finer / tau2_finer are strict (refinement
// certified one way, decisively refuted the other); anything not decided
// within the budgets is reported as such instead of guessed.
inline ComparisonReport compare_at_truncation(const TopologyDescriptor& tau1,
                                              const TopologyDescriptor& tau2,
                                              const FiniteTruncation& t, size_t basis_budget = 16,
                                              const BigInt& enum_budget = BigInt(1000000)) {
    auto fam1 = basis_family(tau1, t, basis_budget);
    auto fam2 = basis_family(tau2, t, basis_budget);
    ComparisonReport report;
    report.tau1_refines_tau2 = detail::direction_check(tau1, fam1, fam2, t, enum_budget);
    report.tau2_refines_tau1 = detail::direction_check(tau2, fam2, fam1, t, enum_budget);
    const auto& d12 = report.tau1_refines_tau2;
    const auto& d21 = report.tau2_refines_tau1;
    if (d12.refines && d21.refines) report.verdict = ComparisonVerdict::equal;
    else if (d12.refines && d21.decisive) report.verdict = ComparisonVerdict::tau1_finer;
    else if (d21.refines && d12.decisive) report.verdict = ComparisonVerdict::tau2_finer;
    else if (d12.decisive && d21.decisive) report.verdict = ComparisonVerdict::incomparable;
    else report.verdict = ComparisonVerdict::inconclusive_at_budget;
    return report;
}

struct ChainIndexRow {
    std::string member;
    std::vector<BigInt> indices; // one per truncation, in the given order
    bool stabilized = false;
};

struct PrecompactReport {
    std::vector<ChainIndexRow> rows;
    bool bounded_indices = false;
    std::optional<std::string> divergent_member;
};

// Finite-index evidence for precompactness of a linear chain: the index of
// each chain subgroup across an increasing family of truncations. Indices
// that stabilize are evidence for precompactness; a divergent member is the
// witness against it.
inline PrecompactReport linear_chain_precompact(const TopologyDescriptor& chain,
                                                const std::vector<FiniteTruncation>& stages,
                                                const BigInt& budget = BigInt(1000000)) {
    if (chain.kind() != TopologyDescriptor::Kind::linear_chain)
        fail(ErrorKind::invalid_params, "linear_chain_precompact needs a chain descriptor");
    if (stages.empty()) fail(ErrorKind::invalid_params, "need at least one truncation");

    std::vector<ChainSubgroup> members;
    if (chain.tail_family()) {
        uint32_t max_k = stages.front().depth();
        for (const auto& s : stages) max_k = std::min(max_k, s.depth());
        for (uint32_t k = 1; k + 1 <= max_k; ++k) members.push_back(ChainSubgroup::tail(k));
    } else {
        members = chain.chain();
    }

    PrecompactReport report;
    report.bounded_indices = true;
    for (const auto& member : members) {
        ChainIndexRow row{member.describe(), {}, false};
        for (const auto& stage : stages) {
            BigInt subgroup_size;
            if (member.tail_from) {
                subgroup_size = 1;
                for (uint32_t n = *member.tail_from + 1; n <= stage.depth(); ++n)
                    subgroup_size *= stage.moduli().at(n);
            } else {
                subgroup_size = BigInt(subgroup_closure(member.generators, stage, budget).elements.size());
            }
            row.indices.push_back(stage.cardinality() / subgroup_size);
        }
        size_t k = row.indices.size();
        row.stabilized = k >= 2 ? row.indices[k - 1] == row.indices[k - 2] : true;
        if (!row.stabilized && report.bounded_indices) {
            report.bounded_indices = false;
            report.divergent_member = row.member;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace qcdual
