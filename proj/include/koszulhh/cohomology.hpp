#pragma once

#include "koszulhh/linalg.hpp"
#include "koszulhh/resolution.hpp"

#include <json.hpp>

namespace koszulhh {

/// A bimodule map K_n → Λ, one value per generator ε^n_i.
struct Cochain {
    int degree = 0;
    std::vector<PathElement> values;
    friend bool operator==(const Cochain&, const Cochain&) = default;
    bool is_zero() const;
};

Cochain zero_cochain(const KComplex& K, int n);

/// Throws PreconditionError unless each value is reduced and lies in o(f_i) Λ t(f_i).
void validate_cochain(const KComplex& K, const Cochain& c);

struct CochainBasisEntry {
    std::size_t generator;
    Path path;
};

struct CochainSpace {
    int degree;
    std::vector<CochainBasisEntry> basis;
    std::size_t dimension() const { return basis.size(); }
};

/// Basis pairs (i, irreducible path parallel to f^n_i), ordered by i then Irr_S.
CochainSpace cochain_space(const KComplex& K, int n);

Vector to_vector(const CochainSpace& space, const Cochain& c);
Cochain from_vector(const KComplex& K, const CochainSpace& space, const Vector& v);

/// d*φ = φ ∘ d, evaluated directly (no finite basis needed).
Cochain coboundary(const KComplex& K, const Cochain& c);

/// Matrix of d*_{n+1}: C^n → C^{n+1}; column k is d* of the k-th basis cochain.
Matrix induced_matrix(const KComplex& K, int n);

struct CohomologyBasis {
    int degree;
    std::size_t kernel_dim;
    std::size_t image_dim;
    std::vector<Cochain> representatives;
    CochainSpace space;
    Echelon image;  // row space = Im d*_n inside C^n
    std::size_t dimension() const { return representatives.size(); }
};

/// HH^n = ker d*_{n+1} / im d*_n with representatives picked greedily by support
/// size, then basis order, among single-term cocycles and the kernel basis.
CohomologyBasis cohomology_basis(const KComplex& K, int n);

bool is_cocycle(const KComplex& K, const Cochain& c);
bool is_coboundary(const CohomologyBasis& H, const Cochain& c);

/// Projection along Im d* onto the span of the representatives (completed by
/// standard basis vectors); fixes every representative and kills coboundaries.
Cochain cobound_reduce(const KComplex& K, const CohomologyBasis& H, const Cochain& c);
Cochain cobound_reduce(const KComplex& K, const Cochain& c);

nlohmann::json cochain_to_json(const KComplex& K, const Cochain& c);
/// Accepts {"degree": n, "values": [...]} or a bare array whose length fixes the degree.
Cochain cochain_from_json(const KComplex& K, const nlohmann::json& j);

std::string format_cochain(const KComplex& K, const Cochain& c);

}  // namespace koszulhh
