#pragma once

#include "koszulhh/homotopy.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace koszulhh {

using ParamId = std::size_t;

/// Affine-linear expression Σ c_p · p + constant over parameters.
struct LinExpr {
    std::map<ParamId, Scalar> coeffs;
    Scalar constant;

    static LinExpr param(ParamId p, Field f);
    bool is_zero() const;
    bool is_constant() const { return coeffs.empty(); }
    LinExpr& operator+=(const LinExpr& o);
    LinExpr& operator-=(const LinExpr& o);
    LinExpr& operator*=(const Scalar& s);
    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, const Scalar& s) { return a *= s; }
    friend bool operator==(const LinExpr&, const LinExpr&) = default;
};

/// Σ_paths LinExpr · path; zero coefficients are never stored.
class SymElement {
public:
    using Terms = std::map<Path, LinExpr>;
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add(const Path& p, const LinExpr& c);
    SymElement& operator+=(const SymElement& o);
    SymElement& operator-=(const SymElement& o);
    friend bool operator==(const SymElement&, const SymElement&) = default;
    /// Coefficients with every parameter replaced by its value.
    PathElement evaluate(const std::vector<Scalar>& values, Field f) const;

private:
    Terms terms_;
};

/// φ̃(s) ∋ param · path for an irreducible path parallel to s.
struct DeformParam {
    std::size_t rule;
    Path path;
    std::string name;
};

struct FirstOrderDeformation {
    std::vector<DeformParam> params;
    std::vector<SymElement> tilde;  // φ̃(s) per rule
};

/// One parameter per (rule, parallel irreducible path), rules in order.
FirstOrderDeformation symbolic_deformation(const ReductionSystem& R);

/// Λ-part and τ-part of a product modulo τ².
struct StarResult {
    PathElement lambda;
    SymElement tau;
};

/// u ⋆ v by rightmost reductions; each firing of s → φ_s adds A φ̃(s) B to the
/// τ-part, which is then reduced with the undeformed rules.
StarResult star_first_order(const Path& u, const Path& v, const FirstOrderDeformation& phi, const ReductionSystem& R);

/// Bilinear extension: (X + Yτ) ⋆ (X' + Y'τ) = X ⋆ X' + (XY' + YX')τ.
StarResult star(const StarResult& x, const StarResult& y, const FirstOrderDeformation& phi, const ReductionSystem& R);

struct Constraint {
    std::size_t overlap;
    Path path;
    LinExpr expr;  // = 0
};

struct LinearConstraintSet {
    std::vector<Constraint> equations;
    std::vector<std::string> lambda_failures;  // nonzero τ⁰ differences
    bool consistent = true;
    std::string contradiction;
    std::vector<ParamId> eliminated;
    std::vector<ParamId> free;
    std::map<ParamId, LinExpr> substitution;  // eliminated → expression in free params
};

/// (u⋆v)⋆w − u⋆(v⋆w) on every overlap; one equation per path coefficient of the
/// τ-part. Solved with the latest parameters eliminated first.
LinearConstraintSet mc_constraints(const ReductionSystem& R, const FirstOrderDeformation& phi);

struct MCFamily {
    FirstOrderDeformation symbolic;
    LinearConstraintSet constraints;
    std::vector<SymElement> tilde;  // φ̃ over the free parameters
    std::size_t dimension() const { return constraints.free.size(); }
};

MCFamily solve_mc_first_order(const ReductionSystem& R);

/// Θ(arrow) ∋ param · path.
struct GaugeParam {
    ArrowId arrow;
    Path path;
    std::string name;
};

struct GaugeReduction {
    std::vector<GaugeParam> gauge;
    std::vector<SymElement> shifts;        // φ̃′(s) − φ̃(s), linear in gauge parameters
    Matrix image;                          // shifts in free-parameter coordinates, echelon form
    std::vector<ParamId> eliminated;       // set to zero in the reduced family
    std::vector<ParamId> free;
    std::vector<SymElement> tilde;         // reduced family
    std::size_t dimension() const { return free.size(); }
};

/// Quotients the family by the shifts induced by T(x) = x + Θ(x)τ. Needs
/// characteristic ≠ 2.
GaugeReduction gauge_reduce(const MCFamily& family, const ReductionSystem& R);

struct CrosscheckEntry {
    ParamId param;
    std::string name;
    Cochain cochain;
    bool cocycle = false;
    bool maurer_cartan = false;
    std::string note;
};

struct CrosscheckReport {
    std::vector<CrosscheckEntry> entries;
    bool ok() const;
};

/// Turns each free direction of the reduced family into a degree-2 cochain via
/// s − φ_s ↔ f²_i and runs the Maurer-Cartan check on it.
CrosscheckReport crosscheck_mc(const KComplex& K, const MCFamily& family, const GaugeReduction& reduced);

std::string format_expr(const LinExpr& e, const std::vector<std::string>& names);
std::string format_sym(const Quiver& q, const SymElement& x, const std::vector<std::string>& names);

nlohmann::json deformation_to_json(const ReductionSystem& R, const MCFamily& family, const GaugeReduction& reduced);
nlohmann::json crosscheck_to_json(const KComplex& K, const CrosscheckReport& report);

}  // namespace koszulhh
