#pragma once

#include "koszulhh/reduction.hpp"

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace koszulhh {

/// Basis token ε^degree_index.
struct Factor {
    int degree;
    std::size_t index;
    friend auto operator<=>(const Factor&, const Factor&) = default;
};

/// c0 ε_1 c1 ε_2 ... ε_k ck: k generator tokens separated by k+1 irreducible
/// Λ-coefficients (tensor products over Λ).
struct TensorKey {
    std::vector<Factor> factors;
    std::vector<Path> coeffs;
    friend auto operator<=>(const TensorKey&, const TensorKey&) = default;
    int total_degree() const;
};

class Chain {
public:
    using Terms = std::map<TensorKey, Scalar>;

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add(const TensorKey& k, const Scalar& c);
    Chain& operator+=(const Chain& o);
    Chain& operator-=(const Chain& o);
    Chain& operator*=(const Scalar& s);
    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
    friend Chain operator*(Chain a, const Scalar& s) { return a *= s; }
    friend bool operator==(const Chain&, const Chain&) = default;

private:
    Terms terms_;
};

/// One term of the image of a basis token: scalar · c0 ε.. ck.
struct FactorImage {
    Scalar scalar;
    std::vector<Factor> factors;
    std::vector<Path> coeffs;  // factors.size() + 1 paths
};

using FactorMap = std::function<std::vector<FactorImage>(const Factor&)>;

/// Λ-multiplication with a memo of products of irreducible paths. Not safe for
/// concurrent use; create one per thread.
class LambdaProducts {
public:
    explicit LambdaProducts(const ReductionSystem& R) : R_(&R) {}
    const ReductionSystem& system() const { return *R_; }
    const PathElement& product(const Path& a, const Path& b);
    PathElement product(const PathElement& a, const PathElement& b);

private:
    const ReductionSystem* R_;
    std::map<std::pair<Path, Path>, PathElement> memo_;
};

/// Replaces the token at `position` of every term by its image, multiplying the
/// neighbouring coefficients in Λ. Each term picks up the Koszul sign
/// (-1)^{map_degree · (degrees of the tokens before position)}.
Chain apply_at(const Chain& x, std::size_t position, const FactorMap& f, int map_degree, LambdaProducts& L);

/// Multiply the outer coefficients: left · x · right.
Chain act(const Path& left, const Chain& x, const Path& right, LambdaProducts& L);

Chain token(const Factor& f, VertexId origin, VertexId terminal);

std::string format_chain(const Quiver& q, const Chain& x);

}  // namespace koszulhh
