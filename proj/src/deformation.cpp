#include "koszulhh/deformation.hpp"

#include "koszulhh/errors.hpp"

#include <algorithm>

namespace koszulhh {

using nlohmann::json;

LinExpr LinExpr::param(ParamId p, Field f)
{
    LinExpr e;
    e.coeffs[p] = Scalar(1).in(f);
    e.constant = Scalar(0).in(f);
    return e;
}

bool LinExpr::is_zero() const { return coeffs.empty() && constant.is_zero(); }

LinExpr& LinExpr::operator+=(const LinExpr& o)
{
    for (const auto& [p, c] : o.coeffs) {
        auto& slot = coeffs[p];
        slot += c;
        if (slot.is_zero()) coeffs.erase(p);
    }
    constant += o.constant;
    return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) { return *this += o * Scalar(-1); }

LinExpr& LinExpr::operator*=(const Scalar& s)
{
    if (s.is_zero()) {
        coeffs.clear();
        constant *= s;
        return *this;
    }
    for (auto& [p, c] : coeffs) c *= s;
    constant *= s;
    return *this;
}

void SymElement::add(const Path& p, const LinExpr& c)
{
    auto& slot = terms_[p];
    slot += c;
    if (slot.is_zero()) terms_.erase(p);
}

SymElement& SymElement::operator+=(const SymElement& o)
{
    for (const auto& [p, c] : o.terms_) add(p, c);
    return *this;
}

SymElement& SymElement::operator-=(const SymElement& o)
{
    for (const auto& [p, c] : o.terms_) add(p, c * Scalar(-1));
    return *this;
}

PathElement SymElement::evaluate(const std::vector<Scalar>& values, Field f) const
{
    PathElement out;
    for (const auto& [p, e] : terms_) {
        Scalar v = e.constant.in(f);
        for (const auto& [id, c] : e.coeffs) v += c * values.at(id);
        out.add(p, v);
    }
    return out;
}

namespace {

Scalar unit(Field f) { return Scalar(1).in(f); }

SymElement scale(const SymElement& x, const Scalar& s)
{
    SymElement out;
    for (const auto& [p, e] : x.terms()) out.add(p, e * s);
    return out;
}

// Σ e_q · nf(left q right) for an unreduced symbolic element.
SymElement reduce_sym(const SymElement& x, const ReductionSystem& R, const Path* left = nullptr,
                      const Path* right = nullptr)
{
    SymElement out;
    for (const auto& [q, e] : x.terms()) {
        Path w = q;
        if (left) {
            auto c = compose(*left, w);
            if (!c) continue;
            w = *c;
        }
        if (right) {
            auto c = compose(w, *right);
            if (!c) continue;
            w = *c;
        }
        PathElement nf = normal_form(w, R);
        for (const auto& [r, k] : nf.terms()) out.add(r, e * k);
    }
    return out;
}

std::string param_name(const Quiver& q, const Path& s, const Path& p)
{
    return "t(" + format_path(q, s) + ";" + format_path(q, p) + ")";
}

LinExpr substitute(const LinExpr& e, const std::map<ParamId, LinExpr>& sub)
{
    LinExpr out;
    out.constant = e.constant;
    for (const auto& [p, c] : e.coeffs) {
        auto it = sub.find(p);
        if (it == sub.end()) {
            LinExpr t;
            t.coeffs[p] = c;
            t.constant = c * Scalar(0);
            out += t;
        } else {
            out += it->second * c;
        }
    }
    return out;
}

SymElement substitute(const SymElement& x, const std::map<ParamId, LinExpr>& sub)
{
    SymElement out;
    for (const auto& [p, e] : x.terms()) out.add(p, substitute(e, sub));
    return out;
}

}  // namespace

FirstOrderDeformation symbolic_deformation(const ReductionSystem& R)
{
    FirstOrderDeformation phi;
    IrreducibleBasis irr = irr_basis(R);
    for (std::size_t k = 0; k < R.size(); ++k) {
        const Path& s = R.rules()[k].lhs;
        SymElement t;
        for (const auto& p : irr.parallel(s.origin, s.terminal)) {
            ParamId id = phi.params.size();
            phi.params.push_back({k, p, param_name(R.quiver(), s, p)});
            t.add(p, LinExpr::param(id, R.field()));
        }
        phi.tilde.push_back(std::move(t));
    }
    return phi;
}

namespace {

StarResult reduce_deformed(PathElement x, const FirstOrderDeformation& phi, const ReductionSystem& R)
{
    const Quiver& q = R.quiver();
    SymElement raw;
    for (std::size_t n = 0;; ++n) {
        std::optional<std::pair<Path, std::pair<std::size_t, std::size_t>>> step;
        for (auto it = x.terms().rbegin(); it != x.terms().rend() && !step; ++it)
            if (auto occ = R.rightmost_occurrence(it->first)) step.emplace(it->first, *occ);
        if (!step) break;
        if (n >= R.limits().max_steps) throw MathError("rewrite step cap exceeded");
        const auto& [w, occ] = *step;
        const auto& [pos, rule] = occ;
        const Path& s = R.rules()[rule].lhs;
        Path A = w.subpath(q, 0, pos);
        Path B = w.subpath(q, pos + s.length(), w.length() - pos - s.length());
        Scalar c = x.coefficient(w);
        x.add(w, -c);
        x += multiply(multiply(PathElement(A), R.rules()[rule].rhs), PathElement(B)) * c;
        for (const auto& [p, e] : phi.tilde.at(rule).terms()) {
            auto ap = compose(A, p);
            auto apb = ap ? compose(*ap, B) : std::nullopt;
            if (!apb) throw MathError("deformation value is not parallel to its rule");
            raw.add(*apb, e * c);
        }
    }
    return {x, reduce_sym(raw, R)};
}

}  // namespace

StarResult star_first_order(const Path& u, const Path& v, const FirstOrderDeformation& phi, const ReductionSystem& R)
{
    if (!R.is_irreducible(u) || !R.is_irreducible(v)) throw PreconditionError("star product needs irreducible paths");
    auto uv = compose(u, v);
    if (!uv) return {};
    return reduce_deformed(PathElement(*uv, unit(R.field())), phi, R);
}

StarResult star(const StarResult& x, const StarResult& y, const FirstOrderDeformation& phi, const ReductionSystem& R)
{
    StarResult out;
    for (const auto& [u, a] : x.lambda.terms())
        for (const auto& [v, b] : y.lambda.terms()) {
            StarResult uv = star_first_order(u, v, phi, R);
            out.lambda += uv.lambda * (a * b);
            out.tau += scale(uv.tau, a * b);
        }
    for (const auto& [u, a] : x.lambda.terms()) out.tau += scale(reduce_sym(y.tau, R, &u, nullptr), a);
    for (const auto& [v, b] : y.lambda.terms()) out.tau += scale(reduce_sym(x.tau, R, nullptr, &v), b);
    return out;
}

namespace {

StarResult single(const Path& p, Field f) { return {PathElement(p, unit(f)), {}}; }

// Solves A x + c = 0 with pivots taken from the highest-index parameters.
void solve_constraints(LinearConstraintSet& set, std::size_t nparams, Field f)
{
    Matrix m(0, nparams + 1, f);
    for (const auto& eq : set.equations) {
        Vector row(nparams + 1, Scalar(0).in(f));
        row[0] = eq.expr.constant.in(f);
        for (const auto& [p, c] : eq.expr.coeffs) row[p + 1] = c;
        m.append_row(row);
    }
    Echelon e = rref(m, PivotOrder::Last);
    std::vector<bool> pivot(nparams, false);
    for (std::size_t r = 0; r < e.rank(); ++r) {
        std::size_t pc = e.pivots[r];
        if (pc == 0) {
            set.consistent = false;
            set.contradiction = "0 = 1 after elimination";
            continue;
        }
        ParamId id = pc - 1;
        pivot[id] = true;
        LinExpr sol;
        sol.constant = -e.reduced.at(r, 0);
        for (std::size_t c = 1; c <= nparams; ++c)
            if (c != pc && !e.reduced.at(r, c).is_zero()) sol.coeffs[c - 1] = -e.reduced.at(r, c);
        set.substitution[id] = sol;
    }
    for (ParamId id = 0; id < nparams; ++id) (pivot[id] ? set.eliminated : set.free).push_back(id);
}

}  // namespace

LinearConstraintSet mc_constraints(const ReductionSystem& R, const FirstOrderDeformation& phi)
{
    LinearConstraintSet set;
    Field f = R.field();
    auto ovs = overlaps(R);
    for (std::size_t k = 0; k < ovs.size(); ++k) {
        const auto& o = ovs[k];
        StarResult left = star(star_first_order(o.p, o.q, phi, R), single(o.r, f), phi, R);
        StarResult right = star(single(o.p, f), star_first_order(o.q, o.r, phi, R), phi, R);
        PathElement dl = left.lambda - right.lambda;
        if (!dl.is_zero())
            set.lambda_failures.push_back(format_path(R.quiver(), o.word(R.quiver())) + ": " +
                                          format_element(R.quiver(), dl));
        SymElement dt = left.tau;
        dt -= right.tau;
        for (const auto& [p, e] : dt.terms()) set.equations.push_back({k, p, e});
    }
    solve_constraints(set, phi.params.size(), f);
    return set;
}

MCFamily solve_mc_first_order(const ReductionSystem& R)
{
    MCFamily family;
    family.symbolic = symbolic_deformation(R);
    family.constraints = mc_constraints(R, family.symbolic);
    if (!family.constraints.consistent)
        throw MathError("first-order Maurer-Cartan constraints are inconsistent: " + family.constraints.contradiction);
    if (!family.constraints.lambda_failures.empty())
        throw MathError("undeformed product is not associative on " + family.constraints.lambda_failures.front());
    for (const auto& t : family.symbolic.tilde) family.tilde.push_back(substitute(t, family.constraints.substitution));
    return family;
}

GaugeReduction gauge_reduce(const MCFamily& family, const ReductionSystem& R)
{
    Field f = R.field();
    if (f.characteristic() == 2) throw PreconditionError("gauge reduction needs characteristic other than 2");
    const Quiver& q = R.quiver();
    GaugeReduction out;
    IrreducibleBasis irr = irr_basis(R);
    std::vector<SymElement> theta(static_cast<std::size_t>(q.arrow_count()));
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arr = q.arrow(a);
        for (const auto& p : irr.parallel(arr.origin, arr.terminal)) {
            ParamId id = out.gauge.size();
            out.gauge.push_back({a, p, "th(" + arr.name + ";" + format_path(q, p) + ")"});
            theta[static_cast<std::size_t>(a)].add(p, LinExpr::param(id, f));
        }
    }
    // Derivation extension of Θ to a path, reduced.
    auto theta_hat = [&](const Path& w) {
        SymElement acc;
        for (std::size_t i = 0; i < w.length(); ++i) {
            Path A = w.subpath(q, 0, i), B = w.subpath(q, i + 1, w.length() - i - 1);
            acc += reduce_sym(theta[static_cast<std::size_t>(w.arrows[i])], R, &A, &B);
        }
        return acc;
    };
    std::map<std::pair<std::size_t, Path>, ParamId> index;
    for (ParamId id = 0; id < family.symbolic.params.size(); ++id)
        index[{family.symbolic.params[id].rule, family.symbolic.params[id].path}] = id;

    std::size_t nparams = family.symbolic.params.size();
    std::vector<Vector> directions(out.gauge.size(), Vector(nparams, Scalar(0).in(f)));
    for (std::size_t k = 0; k < R.size(); ++k) {
        SymElement shift = theta_hat(R.rules()[k].lhs);
        for (const auto& [p, c] : R.rules()[k].rhs.terms()) shift -= scale(theta_hat(p), c);
        for (const auto& [p, e] : shift.terms())
            for (const auto& [g, c] : e.coeffs) directions[g][index.at({k, p})] += c;
        out.shifts.push_back(std::move(shift));
    }
    const auto& cons = family.constraints;
    for (const auto& v : directions)
        for (const auto& eq : cons.equations) {
            Scalar s = Scalar(0).in(f);
            for (const auto& [p, c] : eq.expr.coeffs) s += c * v[p];
            if (!s.is_zero()) throw MathError("gauge shift violates the Maurer-Cartan constraints");
        }
    Matrix coords(0, cons.free.size(), f);
    for (const auto& v : directions) {
        Vector row;
        for (ParamId id : cons.free) row.push_back(v[id]);
        coords.append_row(row);
    }
    Echelon e = rref(coords, PivotOrder::Last);
    out.image = e.reduced;
    std::vector<bool> gone(cons.free.size(), false);
    for (std::size_t r = 0; r < e.rank(); ++r) gone[e.pivots[r]] = true;
    std::map<ParamId, LinExpr> zero_out;
    for (std::size_t i = 0; i < cons.free.size(); ++i) {
        if (gone[i]) {
            out.eliminated.push_back(cons.free[i]);
            LinExpr z;
            z.constant = Scalar(0).in(f);
            zero_out[cons.free[i]] = z;
        } else {
            out.free.push_back(cons.free[i]);
        }
    }
    for (const auto& t : family.tilde) out.tilde.push_back(substitute(t, zero_out));
    return out;
}

bool CrosscheckReport::ok() const
{
    return std::all_of(entries.begin(), entries.end(),
                       [](const CrosscheckEntry& e) { return e.cocycle && e.maurer_cartan; });
}

CrosscheckReport crosscheck_mc(const KComplex& K, const MCFamily& family, const GaugeReduction& reduced)
{
    const ReductionSystem& R = K.R();
    Field f = R.field();
    if (family.tilde.size() != R.size() || reduced.tilde.size() != R.size() ||
        family.symbolic.params.size() != symbolic_deformation(R).params.size())
        throw PreconditionError("deformation family belongs to another reduction system");
    if (K.count(2) != R.size())
        throw PreconditionError("degree-2 generators (" + std::to_string(K.count(2)) + ") do not match the rules (" +
                                std::to_string(R.size()) + ")");
    if (!K.has_tensors()) throw PreconditionError("crosscheck needs the tensor form of the generators");
    if (K.max_degree < 3) throw PreconditionError("crosscheck needs the resolution through degree 3");
    // f²_i = Σ_s M[i][s] (s − φ_s).
    std::vector<std::vector<Scalar>> M(K.count(2), std::vector<Scalar>(R.size(), Scalar(0).in(f)));
    for (std::size_t i = 0; i < K.count(2); ++i) {
        PathElement rest = K.tensors[2][i];
        for (std::size_t s = 0; s < R.size(); ++s) {
            M[i][s] = K.tensors[2][i].coefficient(R.rules()[s].lhs);
            if (M[i][s].is_zero()) continue;
            rest -= (PathElement(R.rules()[s].lhs, unit(f)) - R.rules()[s].rhs) * M[i][s];
        }
        if (!rest.is_zero()) throw PreconditionError("generator f2_" + std::to_string(i) + " is not a combination of the rules");
    }
    CrosscheckReport report;
    for (ParamId id : reduced.free) {
        std::vector<Scalar> values(family.symbolic.params.size(), Scalar(0).in(f));
        values[id] = unit(f);
        Cochain c = zero_cochain(K, 2);
        for (std::size_t s = 0; s < R.size(); ++s) {
            PathElement v = reduced.tilde[s].evaluate(values, f);
            for (std::size_t i = 0; i < K.count(2); ++i)
                if (!M[i][s].is_zero()) c.values[i] += v * M[i][s];
        }
        CrosscheckEntry entry{id, family.symbolic.params[id].name, c, false, false, ""};
        entry.cocycle = is_cocycle(K, c);
        if (!entry.cocycle) {
            entry.note = "direction is not a cocycle on the resolution";
        } else {
            auto psi = solve_homotopy_lifting(K, c, 3);
            entry.maurer_cartan = maurer_cartan_check(K, c, psi).holds;
            if (!entry.maurer_cartan) entry.note = "d*eta + eta psi_eta is nonzero";
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::string format_expr(const LinExpr& e, const std::vector<std::string>& names)
{
    std::string s;
    auto piece = [&](const Scalar& c, const std::string& name) {
        Scalar coef = c;
        bool negative = coef.field().is_rational() && coef.value() < 0;
        if (negative) coef = -coef;
        s += s.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
        if (name.empty())
            s += coef.str();
        else
            s += (coef.is_one() ? "" : coef.str() + "*") + name;
    };
    for (const auto& [p, c] : e.coeffs) piece(c, names.at(p));
    if (!e.constant.is_zero()) piece(e.constant, "");
    return s.empty() ? "0" : s;
}

std::string format_sym(const Quiver& q, const SymElement& x, const std::vector<std::string>& names)
{
    if (x.is_zero()) return "0";
    std::string s;
    for (const auto& [p, e] : x.terms()) {
        std::string c = format_expr(e, names);
        bool single = c.find(' ') == std::string::npos;
        bool negative = single && c.front() == '-';
        if (negative) c.erase(0, 1);
        s += s.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
        s += (single ? c : "(" + c + ")") + "*" + format_path(q, p);
    }
    return s;
}

namespace {

std::vector<std::string> names_of(const FirstOrderDeformation& phi)
{
    std::vector<std::string> out;
    for (const auto& p : phi.params) out.push_back(p.name);
    return out;
}

}  // namespace

json deformation_to_json(const ReductionSystem& R, const MCFamily& family, const GaugeReduction& reduced)
{
    const Quiver& q = R.quiver();
    auto names = names_of(family.symbolic);
    std::vector<std::string> gnames;
    for (const auto& g : reduced.gauge) gnames.push_back(g.name);
    auto table = [&](const std::vector<SymElement>& t, const std::vector<std::string>& n) {
        json out = json::object();
        for (std::size_t k = 0; k < R.size(); ++k) out[format_path(q, R.rules()[k].lhs)] = format_sym(q, t[k], n);
        return out;
    };
    auto list = [&](const std::vector<ParamId>& ids) {
        json out = json::array();
        for (ParamId id : ids) out.push_back(names[id]);
        return out;
    };
    json constraints = json::array();
    for (const auto& eq : family.constraints.equations) constraints.push_back(format_expr(eq.expr, names) + " = 0");
    json substitution = json::object();
    for (const auto& [id, e] : family.constraints.substitution) substitution[names[id]] = format_expr(e, names);
    return {{"parameters", names.size()},
            {"symbolic", table(family.symbolic.tilde, names)},
            {"constraints", constraints},
            {"substitution", substitution},
            {"free", list(family.constraints.free)},
            {"family", table(family.tilde, names)},
            {"gauge_parameters", gnames},
            {"gauge_shifts", table(reduced.shifts, gnames)},
            {"gauge_rank", reduced.eliminated.size()},
            {"gauge_eliminated", list(reduced.eliminated)},
            {"reduced_free", list(reduced.free)},
            {"reduced_family", table(reduced.tilde, names)},
            {"dimension", reduced.dimension()}};
}

json crosscheck_to_json(const KComplex& K, const CrosscheckReport& report)
{
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"parameter", e.name},
                           {"cochain", cochain_to_json(K, e.cochain)},
                           {"cocycle", e.cocycle},
                           {"maurer_cartan", e.maurer_cartan},
                           {"note", e.note}});
    return {{"ok", report.ok()}, {"directions", entries}};
}

}  // namespace koszulhh
