#pragma once

#include "koszulhh/chain.hpp"
#include "koszulhh/reduction.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace koszulhh {

struct Generator {
    VertexId origin;
    VertexId terminal;
    int internal_degree;
};

/// d(ε^n_i) ∋ scalar · left ε^{n-1}_target right.
struct DiffTerm {
    std::size_t target;
    Path left;
    Path right;
    Scalar scalar;
};

/// Δ(ε^n_i) ∋ scalar · left ε^v_p middle ⊗ ε^{n-v}_q right.
struct DiagTerm {
    int v;
    std::size_t p;
    std::size_t q;
    Path left;
    Path middle;
    Path right;
    Scalar scalar;
};

/// Sparse c_{pq}(n,i,r).
class ComultTable {
public:
    using Key = std::array<std::size_t, 5>;  // n, i, r, p, q

    Scalar get(std::size_t n, std::size_t i, std::size_t r, std::size_t p, std::size_t q) const;
    void set(std::size_t n, std::size_t i, std::size_t r, std::size_t p, std::size_t q, const Scalar& c);
    const std::map<Key, Scalar>& entries() const { return entries_; }
    friend bool operator==(const ComultTable&, const ComultTable&) = default;

private:
    std::map<Key, Scalar> entries_;
};

/// A projective bimodule resolution of Λ with a diagonal, truncated at max_degree.
/// Degree-0 generators are the vertices.
struct KComplex {
    std::shared_ptr<const ReductionSystem> system;
    int max_degree = 0;
    std::vector<std::vector<Generator>> gens;
    std::vector<std::vector<PathElement>> tensors;  // f̃^n_i; empty for manual resolutions
    ComultTable comult;                             // Koszul-built only
    std::vector<std::vector<std::vector<DiffTerm>>> diff;
    std::vector<std::vector<std::vector<DiagTerm>>> diag;

    const ReductionSystem& R() const { return *system; }
    const Quiver& quiver() const { return system->quiver(); }
    Field field() const { return system->field(); }
    bool has_tensors() const { return !tensors.empty(); }
    std::size_t count(int n) const { return gens.at(static_cast<std::size_t>(n)).size(); }
    const Generator& gen(int n, std::size_t i) const { return gens.at(static_cast<std::size_t>(n)).at(i); }
    void check_degree(int n) const;

    Chain generator(int n, std::size_t i) const;
    FactorMap differential_map() const;
    FactorMap diagonal_map() const;
};

struct KoszulOptions {
    std::size_t max_block = 4096;  // paths per (origin, terminal) block
    /// Replacement tensor bases per degree (must span the computed space).
    std::map<int, std::vector<PathElement>> overrides;
};

/// The Koszul resolution of a quadratic algebra whose relations are the rule
/// differences s - φ_s of R.
KComplex build_koszul(std::shared_ptr<const ReductionSystem> R, int N, const KoszulOptions& opts = {});
KComplex build_koszul(const PresentedAlgebra& A, int N, const KoszulOptions& opts = {});

struct FamilyData {
    std::vector<std::vector<PathElement>> tensors;  // degrees 0..N
    ComultTable comult;
};

/// Closed-form generators and diagonal scalars of A_q = kQ/<a², b², ab - q ba, ac>
/// over the quiver with arrows a, b: 1→1 and c: 1→2 (in that order).
FamilyData family_generators(const Quiver& q, const Scalar& qparam, int N);

/// The quiver spec of A_q.
PresentedAlgebra family_algebra(const Scalar& qparam, Field f = {});

/// Bilinear extension of the differential on Σ left ε^n right.
Chain differential_apply(const KComplex& K, int n, const Chain& x);
Chain differential_apply(const KComplex& K, int n, const Chain& x, LambdaProducts& L);

/// Sparse diagonal of ε^n_i including the v=0 and v=n terms.
const std::vector<DiagTerm>& diagonal_apply(const KComplex& K, int n, std::size_t i);

struct CheckEntry {
    std::string property;
    int degree;
    bool pass;
    std::string witness;  // first failing generator and residual
};

struct VerifyReport {
    std::vector<CheckEntry> entries;
    bool ok() const;
    bool ok_except(const std::string& property) const;
    std::string summary() const;
};

/// d² = 0, counit, coassociativity and (d⊗1 + 1⊗d)Δ = Δd in every constructed
/// degree; reconstruction of the c-table when tensors are present.
VerifyReport verify_complex(const KComplex& K);

/// Loads a resolution section and verifies it; throws MathError when d² = 0, the
/// counit or (d⊗1 + 1⊗d)Δ = Δd fails. Coassociativity is not required: diagonals
/// of non-Koszul resolutions are in general only coassociative up to homotopy.
KComplex load_manual_resolution(std::shared_ptr<const ReductionSystem> R, const nlohmann::json& section);
KComplex load_manual_resolution_unchecked(std::shared_ptr<const ReductionSystem> R, const nlohmann::json& section);

nlohmann::json export_resolution(const KComplex& K);

/// Terms of the reduced bar complex: coeffs[0] ⊗ ... ⊗ coeffs.back(), with a
/// split index marking the merged coefficient of B ⊗_Λ B (-1 for B alone).
struct BarKey {
    std::vector<Path> parts;
    int split = -1;
    friend auto operator<=>(const BarKey&, const BarKey&) = default;
};
using BarElement = std::map<BarKey, Scalar>;

BarElement bar_embed(const KComplex& K, int n, std::size_t i);

struct BarReport {
    std::vector<CheckEntry> entries;
    bool ok() const;
};

/// δι = ιd and (ι⊗ι)Δ_K = Δ_B ι for degrees up to min(max_degree, 4).
BarReport verify_bar_embedding(const KComplex& K, int max_degree = 4);

}  // namespace koszulhh
