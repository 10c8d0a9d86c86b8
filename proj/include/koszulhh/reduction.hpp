#pragma once

#include "koszulhh/algebra.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace koszulhh {

struct ReductionRule {
    Path lhs;
    PathElement rhs;
};

struct Limits {
    std::size_t max_steps = 1'000'000;  // rewrite steps per normal form
    std::size_t max_basis = 10'000;     // irreducible paths
};

/// Validated reduction system: no lhs is a subpath of another, every rule is
/// parallel, and right-hand sides are stored fully reduced.
class ReductionSystem {
public:
    ReductionSystem() = default;
    ReductionSystem(Quiver q, Field f, std::vector<ReductionRule> rules, Limits limits = {});

    const Quiver& quiver() const { return quiver_; }
    Field field() const { return field_; }
    const Limits& limits() const { return limits_; }
    const std::vector<ReductionRule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }

    /// Rule whose lhs equals p exactly.
    std::optional<std::size_t> rule_for(const Path& p) const;
    /// Occurrence (position, rule) with maximal / minimal starting position.
    std::optional<std::pair<std::size_t, std::size_t>> rightmost_occurrence(const Path& p) const;
    std::optional<std::pair<std::size_t, std::size_t>> leftmost_occurrence(const Path& p) const;
    bool is_irreducible(const Path& p) const { return !rightmost_occurrence(p).has_value(); }

private:
    Quiver quiver_;
    Field field_{};
    std::vector<ReductionRule> rules_;
    std::map<Path, std::size_t> index_;
    std::size_t max_lhs_ = 0;
    Limits limits_{};
};

struct RewriteStep {
    Path path;             // the term rewritten
    std::size_t position;  // arrow offset of the lhs occurrence
    std::size_t rule;
};

struct NormalFormTrace {
    PathElement input;
    std::vector<RewriteStep> steps;
    PathElement result;
};

enum class Strategy { Rightmost, Leftmost };

/// Normal form by rightmost-first reduction. Throws MathError when the step cap
/// is exceeded or a rewrite cycle is detected.
PathElement normal_form(const PathElement& x, const ReductionSystem& R);
PathElement normal_form(const Path& p, const ReductionSystem& R);

/// Step-by-step reduction with an explicit strategy. At each step the largest
/// reducible term (canonical order) is rewritten at the strategy's occurrence.
PathElement normal_form(const PathElement& x, const ReductionSystem& R, Strategy s, NormalFormTrace* trace = nullptr);

/// Applies the recorded steps to trace.input.
PathElement replay(const NormalFormTrace& trace, const ReductionSystem& R);

/// Product in Λ: normal form of the kQ product.
PathElement multiply(const PathElement& x, const PathElement& y, const ReductionSystem& R);

struct Overlap {
    Path p, q, r;
    std::size_t left_rule;   // rule with lhs pq
    std::size_t right_rule;  // rule with lhs qr
    Path word(const Quiver& quiver) const;
};

std::vector<Overlap> overlaps(const ReductionSystem& R);

struct DiamondFailure {
    Overlap overlap;
    PathElement left_branch;   // nf(φ_{pq} r)
    PathElement right_branch;  // nf(p φ_{qr})
};

struct DiamondReport {
    bool resolvable = true;
    std::vector<Overlap> overlaps;
    std::vector<DiamondFailure> failures;
};

DiamondReport check_diamond(const ReductionSystem& R);

class IrreducibleBasis {
public:
    IrreducibleBasis() = default;
    explicit IrreducibleBasis(std::vector<Path> paths);

    const std::vector<Path>& paths() const { return paths_; }
    std::size_t size() const { return paths_.size(); }
    std::optional<std::size_t> index_of(const Path& p) const;
    /// Irreducible paths from `origin` to `terminal`, in basis order.
    std::vector<Path> parallel(VertexId origin, VertexId terminal) const;

private:
    std::vector<Path> paths_;
    std::map<Path, std::size_t> index_;
};

/// Breadth-first enumeration of Irr_S in canonical order.
IrreducibleBasis irr_basis(const ReductionSystem& R);

/// Irreducible paths of length at most max_length; works for
/// infinite-dimensional quotients.
IrreducibleBasis irr_basis_up_to(const ReductionSystem& R, std::size_t max_length);

/// Rules (leading path, -(rest)/leading coefficient) after inter-reducing the
/// relations in document order. Leading path: maximal length, then the
/// smallest arrow sequence.
ReductionSystem default_reduction_system(const PresentedAlgebra& A, Limits limits = {});

/// The document's reduction rules if present, otherwise the default system.
ReductionSystem reduction_system_for(const SpecDocument& doc, Limits limits = {});

}  // namespace koszulhh
