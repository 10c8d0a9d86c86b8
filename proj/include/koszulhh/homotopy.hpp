#pragma once

#include "koszulhh/cohomology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace koszulhh {

/// ψ(ε^m_r) ∋ scalar · left ε^{m-n+1}_target right.
struct LiftTerm {
    std::size_t target;
    Path left;
    Path right;
    Scalar scalar;
    friend bool operator==(const LiftTerm&, const LiftTerm&) = default;
};

/// Homotopy lifting ψ_η of an n-cocycle, stored for degrees n..max_degree.
/// ψ vanishes on K_m for m < n.
struct HomotopyLifting {
    int n = 0;
    int max_degree = 0;
    std::vector<std::vector<std::vector<LiftTerm>>> table;  // table[m][r]; empty below n

    const std::vector<LiftTerm>& at(int m, std::size_t r) const;
    FactorMap as_map(const KComplex& K) const;
};

/// Internal degree of each homogeneous summand: |path| − internal degree of the generator.
std::vector<std::pair<int, Cochain>> homogeneous_parts(const KComplex& K, const Cochain& eta);

/// Solves dψ − (−1)^{1−n} ψd = (η⊗1 − 1⊗η)Δ degree by degree, m = n..maxdeg.
/// Unknowns are u ε^{m-n+1}_j v with |u| + |v| fixed by the internal grading;
/// among all solutions the basic one (free unknowns zero) is returned.
HomotopyLifting solve_homotopy_lifting(const KComplex& K, const Cochain& eta, int maxdeg);

/// Keeps the degrees stored in `seed` and solves the remaining ones.
HomotopyLifting extend_homotopy_lifting(const KComplex& K, const Cochain& eta, const HomotopyLifting& seed, int maxdeg);

struct HomotopyResidual {
    int degree;
    std::size_t index;
    std::string residual;  // "0" when the relation holds
};

struct HomotopyReport {
    std::vector<HomotopyResidual> rows;
    bool ok() const;
};

HomotopyReport verify_homotopy(const KComplex& K, const HomotopyLifting& psi, const Cochain& eta);

/// Applies a cochain to a chain with no remaining tensor factors after evaluation.
PathElement evaluate(const KComplex& K, const Cochain& eta, const Chain& x);

/// B[r][r'] with ψ(ε^m_r) = Σ_{r'} B[r][r'] ε^{m-n+1}_{r'} (single-scalar shape).
using ScalarLift = std::vector<std::vector<Scalar>>;

struct RecurrenceIdentity {
    std::string branch;  // "left" or "right"
    std::size_t r, target;
    ArrowId arrow;
    std::string lhs;     // instantiated left side with the solved values
    Scalar value;        // both sides evaluate to this
};

struct RecurrenceWitness {
    int m;
    ScalarLift left_branch;   // solved from the left-coefficient equations
    ScalarLift right_branch;  // solved from the right-coefficient equations
    std::vector<RecurrenceIdentity> identities;
};

struct RecurrenceResult {
    ScalarLift b;
    RecurrenceWitness witness;
};

/// One step of the scalar recurrence for a cocycle whose values are linear in
/// the arrows: from B' at degree m−1 (empty for m = n) computes B at degree m.
/// Left-coefficient equations:
///   Σ_{r'} B[r][r'] Dl(m−n+1, r'→r'', w) − s Σ_j B'[j][r''] Dl(m, r→j, w) = Σ_p c_{p,r''}(m,r,n) E[p][w]
/// Right-coefficient equations:
///   Σ_{r'} B[r][r'] Dr(m−n+1, r'→r'', w) − s Σ_j B'[j][r''] Dr(m, r→j, w) = −(−1)^{n(m−n)} Σ_p c_{r'',p}(m,r,m−n) E[p][w]
/// with s = (−1)^{1−n}, Dl/Dr the arrow coefficients of d and E the arrow
/// coefficients of η. Each branch is solved on its own; MathError if a branch is
/// underdetermined or inconsistent, or the two disagree.
RecurrenceResult recurrence_step(const KComplex& K, const Cochain& eta, int m, const ScalarLift& b_prev);

/// Scalar table of a lifting of single-scalar shape; nullopt otherwise.
std::optional<ScalarLift> scalar_lift(const KComplex& K, const HomotopyLifting& psi, int m);

struct BracketResult {
    int n, m;
    Cochain eta_psi_theta;
    Cochain theta_psi_eta;
    Scalar sign;  // (−1)^{(m−1)(n−1)}
    Cochain result;
    std::optional<Cochain> reduced;  // coboundary-reduced when the cochain space is finite
};

/// [η,θ] = η ψ_θ − (−1)^{(m−1)(n−1)} θ ψ_η on ε^{n+m−1}.
BracketResult bracket(const KComplex& K, const Cochain& eta, const Cochain& theta, const HomotopyLifting& psi_eta,
                      const HomotopyLifting& psi_theta);

struct MCEntry {
    std::size_t index;
    PathElement d_eta;
    PathElement eta_psi_eta;
    PathElement sum;
};

struct MCResult {
    bool holds;
    std::vector<MCEntry> entries;
};

/// d*η + ηψ_η on every ε^3_i; the lifting must verify through degree 3.
MCResult maurer_cartan_check(const KComplex& K, const Cochain& eta, const HomotopyLifting& psi);

nlohmann::json lifting_to_json(const KComplex& K, const HomotopyLifting& psi);

}  // namespace koszulhh
