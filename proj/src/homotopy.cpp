#include "koszulhh/homotopy.hpp"

#include "koszulhh/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace koszulhh {

using nlohmann::json;

namespace {

Scalar one(const KComplex& K) { return Scalar(1).in(K.field()); }
Scalar zero(const KComplex& K) { return Scalar(0).in(K.field()); }
Scalar sign(const KComplex& K, long long e) { return Scalar(e % 2 == 0 ? 1 : -1).in(K.field()); }

std::string tag(int m, std::size_t r) { return "E" + std::to_string(m) + "_" + std::to_string(r); }

FactorMap cochain_map(const Cochain& eta)
{
    return [&eta](const Factor& f) {
        std::vector<FactorImage> out;
        if (f.degree != eta.degree) return out;
        for (const auto& [p, c] : eta.values.at(f.index).terms()) out.push_back({c, {}, {p}});
        return out;
    };
}

FactorMap lifting_map(const HomotopyLifting& psi)
{
    return [&psi](const Factor& f) {
        std::vector<FactorImage> out;
        if (f.degree < psi.n) return out;
        if (f.degree > psi.max_degree)
            throw PreconditionError("lifting is only known through degree " + std::to_string(psi.max_degree));
        for (const auto& t : psi.at(f.degree, f.index))
            out.push_back({t.scalar, {Factor{f.degree - psi.n + 1, t.target}}, {t.left, t.right}});
        return out;
    };
}

// (η⊗1 − 1⊗η)Δ(ε^m_r).
Chain diagonal_side(const KComplex& K, const Cochain& eta, int m, std::size_t r, LambdaProducts& L)
{
    Chain delta = apply_at(K.generator(m, r), 0, K.diagonal_map(), 0, L);
    auto e = cochain_map(eta);
    return apply_at(delta, 0, e, eta.degree, L) - apply_at(delta, 1, e, eta.degree, L);
}

// dψ(ε^m_r) − (−1)^{1−n} ψ(dε^m_r).
Chain lifting_side(const KComplex& K, const HomotopyLifting& psi, int m, std::size_t r, LambdaProducts& L)
{
    auto p = lifting_map(psi);
    Chain g = K.generator(m, r);
    Chain out;
    if (m >= psi.n) {
        Chain pg = apply_at(g, 0, p, 1 - psi.n, L);
        if (m - psi.n + 1 >= 1) out += differential_apply(K, m - psi.n + 1, pg, L);
    }
    if (m >= 1) out -= apply_at(differential_apply(K, m, g, L), 0, p, 1 - psi.n, L) * sign(K, 1 - psi.n);
    return out;
}

int path_length(const Path& p) { return static_cast<int>(p.length()); }

struct PathsByLength {
    const ReductionSystem* R;
    std::size_t bound = 0;
    IrreducibleBasis basis;
    bool loaded = false;

    std::vector<Path> get(VertexId o, VertexId t, int len)
    {
        if (len < 0) return {};
        if (!loaded || static_cast<std::size_t>(len) > bound) {
            bound = std::max<std::size_t>(static_cast<std::size_t>(len), 2 * bound);
            basis = irr_basis_up_to(*R, bound);
            loaded = true;
        }
        std::vector<Path> out;
        for (const auto& p : basis.parallel(o, t))
            if (path_length(p) == len) out.push_back(p);
        return out;
    }
};

// Solves degrees from..psi.max_degree in place; unknowns u ε_j v for every internal shift of η.
void solve_degrees(const KComplex& K, const Cochain& eta, int from, HomotopyLifting& psi, LambdaProducts& L,
                   PathsByLength& paths)
{
    int n = eta.degree;
    std::set<int> shifts;
    for (const auto& [shift, part] : homogeneous_parts(K, eta)) shifts.insert(shift);
    Scalar s = sign(K, 1 - n);
    auto p = lifting_map(psi);
    for (int m = from; m <= psi.max_degree; ++m) {
        int k = m - n + 1;
        for (std::size_t r = 0; r < K.count(m); ++r) {
            const auto& g = K.gen(m, r);
            Chain rhs = diagonal_side(K, eta, m, r, L);
            if (m >= 1) rhs += apply_at(differential_apply(K, m, K.generator(m, r), L), 0, p, 1 - n, L) * s;
            if (rhs.is_zero()) continue;

            struct Unknown {
                std::size_t j;
                Path u, v;
            };
            std::vector<Unknown> unknowns;
            std::vector<Chain> columns;
            for (std::size_t j = 0; j < K.count(k); ++j) {
                const auto& h = K.gen(k, j);
                for (int shift : shifts) {
                    int total = g.internal_degree - h.internal_degree + shift;
                    for (int a = 0; a <= total; ++a)
                        for (const auto& u : paths.get(g.origin, h.origin, a))
                            for (const auto& v : paths.get(h.terminal, g.terminal, total - a)) {
                                unknowns.push_back({j, u, v});
                                Chain x;
                                x.add(TensorKey{{Factor{k, j}}, {u, v}}, one(K));
                                columns.push_back(k >= 1 ? differential_apply(K, k, x, L) : Chain{});
                            }
                }
            }
            std::map<TensorKey, std::size_t> rows;
            for (const auto& [key, c] : rhs.terms()) rows.emplace(key, 0);
            for (const auto& col : columns)
                for (const auto& [key, c] : col.terms()) rows.emplace(key, 0);
            std::size_t idx = 0;
            for (auto& [key, i] : rows) i = idx++;
            Matrix A(rows.size(), unknowns.size(), K.field());
            for (std::size_t c = 0; c < columns.size(); ++c)
                for (const auto& [key, v] : columns[c].terms()) A.at(rows.at(key), c) = v;
            Vector b(rows.size(), zero(K));
            for (const auto& [key, v] : rhs.terms()) b[rows.at(key)] = v;
            auto x = solve(A, b);
            if (!x)
                throw MathError("no homotopy lifting value for " + tag(m, r) + " (cocycle or diagonal inconsistent)");
            auto& dst = psi.table[static_cast<std::size_t>(m)][r];
            dst.clear();
            for (std::size_t c = 0; c < unknowns.size(); ++c)
                if (!(*x)[c].is_zero()) dst.push_back({unknowns[c].j, unknowns[c].u, unknowns[c].v, (*x)[c]});
        }
    }
}

void check_range(const KComplex& K, const Cochain& eta, int maxdeg)
{
    validate_cochain(K, eta);
    int n = eta.degree;
    if (maxdeg < n - 1) throw PreconditionError("maxdeg is below the cocycle degree");
    if (maxdeg > K.max_degree || maxdeg - n + 1 > K.max_degree)
        throw PreconditionError("resolution is built only through degree " + std::to_string(K.max_degree));
    if (n + 1 <= K.max_degree && !is_cocycle(K, eta)) throw PreconditionError("cochain is not a cocycle");
}

Chain lift_chain(const HomotopyLifting& psi, int m, std::size_t r)
{
    Chain out;
    for (const auto& t : psi.at(m, r)) out.add(TensorKey{{Factor{m - psi.n + 1, t.target}}, {t.left, t.right}}, t.scalar);
    return out;
}

}  // namespace

const std::vector<LiftTerm>& HomotopyLifting::at(int m, std::size_t r) const
{
    static const std::vector<LiftTerm> none;
    if (m < n || m > max_degree) return none;
    const auto& row = table.at(static_cast<std::size_t>(m));
    return r < row.size() ? row[r] : none;
}

FactorMap HomotopyLifting::as_map(const KComplex&) const { return lifting_map(*this); }

std::vector<std::pair<int, Cochain>> homogeneous_parts(const KComplex& K, const Cochain& eta)
{
    std::map<int, Cochain> parts;
    for (std::size_t i = 0; i < eta.values.size(); ++i)
        for (const auto& [p, c] : eta.values[i].terms()) {
            int shift = path_length(p) - K.gen(eta.degree, i).internal_degree;
            auto it = parts.try_emplace(shift, zero_cochain(K, eta.degree)).first;
            it->second.values[i].add(p, c);
        }
    return {parts.begin(), parts.end()};
}

HomotopyLifting solve_homotopy_lifting(const KComplex& K, const Cochain& eta, int maxdeg)
{
    check_range(K, eta, maxdeg);
    HomotopyLifting seed{eta.degree, eta.degree - 1, {}};
    return extend_homotopy_lifting(K, eta, seed, maxdeg);
}

HomotopyLifting extend_homotopy_lifting(const KComplex& K, const Cochain& eta, const HomotopyLifting& seed, int maxdeg)
{
    check_range(K, eta, maxdeg);
    if (seed.n != eta.degree) throw PreconditionError("seed lifting belongs to another cocycle degree");
    HomotopyLifting psi{seed.n, maxdeg, seed.table};
    psi.table.resize(static_cast<std::size_t>(maxdeg) + 1);
    for (int m = std::max(psi.n, 0); m <= maxdeg; ++m) psi.table[static_cast<std::size_t>(m)].resize(K.count(m));
    LambdaProducts L(K.R());
    PathsByLength paths{&K.R(), 0, {}, false};
    solve_degrees(K, eta, std::max(seed.max_degree + 1, psi.n), psi, L, paths);
    return psi;
}

bool HomotopyReport::ok() const
{
    return std::all_of(rows.begin(), rows.end(), [](const HomotopyResidual& r) { return r.residual == "0"; });
}

HomotopyReport verify_homotopy(const KComplex& K, const HomotopyLifting& psi, const Cochain& eta)
{
    HomotopyReport report;
    if (psi.n != eta.degree) {
        report.rows.push_back({eta.degree, 0, "lifting belongs to a degree-" + std::to_string(psi.n) + " cocycle"});
        return report;
    }
    LambdaProducts L(K.R());
    for (int m = std::max(psi.n - 1, 0); m <= std::min(psi.max_degree, K.max_degree); ++m)
        for (std::size_t r = 0; r < K.count(m); ++r) {
            Chain res = lifting_side(K, psi, m, r, L) - diagonal_side(K, eta, m, r, L);
            report.rows.push_back({m, r, res.is_zero() ? "0" : format_chain(K.quiver(), res)});
        }
    return report;
}

PathElement evaluate(const KComplex& K, const Cochain& eta, const Chain& x)
{
    for (const auto& [key, c] : x.terms())
        if (key.factors.size() != 1 || key.factors[0].degree != eta.degree)
            throw PreconditionError("cochain of degree " + std::to_string(eta.degree) +
                                    " applied to a chain of another degree");
    LambdaProducts L(K.R());
    PathElement out;
    Chain y = apply_at(x, 0, cochain_map(eta), 0, L);
    for (const auto& [key, c] : y.terms()) out.add(key.coeffs.at(0), c);
    return out;
}

std::optional<ScalarLift> scalar_lift(const KComplex& K, const HomotopyLifting& psi, int m)
{
    int k = m - psi.n + 1;
    if (m > psi.max_degree || k < 0) return std::nullopt;
    ScalarLift B(K.count(m), std::vector<Scalar>(K.count(k), zero(K)));
    for (std::size_t r = 0; r < K.count(m); ++r)
        for (const auto& t : psi.at(m, r)) {
            if (!t.left.is_vertex() || !t.right.is_vertex()) return std::nullopt;
            B[r][t.target] += t.scalar;
        }
    return B;
}

namespace {

// Coefficient of the arrow `w` in x when x is a combination of vertices and arrows.
struct ArrowLinear {
    std::map<std::pair<std::size_t, ArrowId>, Scalar> left;   // (target, arrow)
    std::map<std::pair<std::size_t, ArrowId>, Scalar> right;
};

ArrowLinear arrow_linear(const KComplex& K, int k, std::size_t i)
{
    ArrowLinear out;
    for (const auto& t : K.diff[static_cast<std::size_t>(k)][i]) {
        if (t.left.length() == 1 && t.right.is_vertex())
            out.left[{t.target, t.left.arrows[0]}] += t.scalar;
        else if (t.right.length() == 1 && t.left.is_vertex())
            out.right[{t.target, t.right.arrows[0]}] += t.scalar;
        else
            throw MathError("differential of " + tag(k, i) + " is not linear in the arrows");
    }
    return out;
}

Scalar lookup(const std::map<std::pair<std::size_t, ArrowId>, Scalar>& m, std::size_t t, ArrowId w, const Scalar& z)
{
    auto it = m.find({t, w});
    return it == m.end() ? z : it->second;
}

// c_{pq}(m, r, v) read from the diagonal; coefficients must be vertices.
Scalar diag_scalar(const KComplex& K, int m, std::size_t r, int v, std::size_t p, std::size_t q)
{
    Scalar out = zero(K);
    for (const auto& t : K.diag[static_cast<std::size_t>(m)][r]) {
        if (t.v != v || t.p != p || t.q != q) continue;
        if (!t.left.is_vertex() || !t.middle.is_vertex() || !t.right.is_vertex())
            throw MathError("diagonal of " + tag(m, r) + " has path coefficients in the split " + std::to_string(v));
        out += t.scalar;
    }
    return out;
}

}  // namespace

RecurrenceResult recurrence_step(const KComplex& K, const Cochain& eta, int m, const ScalarLift& b_prev)
{
    validate_cochain(K, eta);
    int n = eta.degree;
    int k = m - n + 1;
    if (m < n || m < 1 || m > K.max_degree || k < 1) throw PreconditionError("recurrence degree out of range");
    // E[p][w]: η(ε^n_p) = Σ_w E[p][w] w.
    std::vector<std::map<ArrowId, Scalar>> E(K.count(n));
    for (std::size_t p = 0; p < K.count(n); ++p)
        for (const auto& [path, c] : eta.values[p].terms()) {
            if (path.length() != 1) throw PreconditionError("recurrence needs cocycle values that are single arrows");
            E[p][path.arrows[0]] += c;
        }
    std::size_t prev_count = K.count(m - 1), low = K.count(k - 1), high = K.count(k);
    auto bp = [&](std::size_t j, std::size_t q) {
        if (b_prev.empty()) return zero(K);
        if (b_prev.size() != prev_count || b_prev.at(j).size() != low)
            throw PreconditionError("previous scalars have the wrong shape");
        return b_prev[j][q];
    };
    Scalar s = sign(K, 1 - n);
    Scalar outer = -sign(K, static_cast<long long>(n) * (m - n));

    std::vector<ArrowLinear> Dk(high);
    for (std::size_t j = 0; j < high; ++j) Dk[j] = arrow_linear(K, k, j);
    RecurrenceResult result;
    result.witness.m = m;
    result.witness.left_branch.assign(K.count(m), std::vector<Scalar>(high, zero(K)));
    result.witness.right_branch = result.witness.left_branch;
    result.b = result.witness.left_branch;

    int shift = 0;
    for (std::size_t p = 0; p < E.size(); ++p)
        if (!E[p].empty()) shift = 1 - K.gen(n, p).internal_degree;
    for (std::size_t r = 0; r < K.count(m); ++r) {
        ArrowLinear Dm = arrow_linear(K, m, r);
        const auto& g = K.gen(m, r);
        // Unknowns: targets parallel to ε^m_r of the right internal degree.
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < high; ++j) {
            const auto& h = K.gen(k, j);
            if (h.origin == g.origin && h.terminal == g.terminal && g.internal_degree - h.internal_degree + shift == 0)
                cols.push_back(j);
        }
        struct Branch {
            std::string name;
            Matrix A;
            Vector b;
            std::vector<std::pair<std::size_t, ArrowId>> eqs;
        };
        Branch branches[2] = {{"left", Matrix(0, cols.size(), K.field()), {}, {}},
                              {"right", Matrix(0, cols.size(), K.field()), {}, {}}};
        for (std::size_t t = 0; t < low; ++t)
            for (ArrowId w = 0; w < K.quiver().arrow_count(); ++w)
                for (int side = 0; side < 2; ++side) {
                    Vector row(cols.size(), zero(K));
                    for (std::size_t c = 0; c < cols.size(); ++c)
                        row[c] = lookup(side == 0 ? Dk[cols[c]].left : Dk[cols[c]].right, t, w, zero(K));
                    Scalar rhs = zero(K);
                    for (std::size_t j = 0; j < prev_count; ++j) {
                        Scalar d = lookup(side == 0 ? Dm.left : Dm.right, j, w, zero(K));
                        if (!d.is_zero()) rhs += s * bp(j, t) * d;
                    }
                    for (std::size_t p = 0; p < E.size(); ++p) {
                        auto it = E[p].find(w);
                        if (it == E[p].end()) continue;
                        if (side == 0)
                            rhs += diag_scalar(K, m, r, n, p, t) * it->second;
                        else
                            rhs += outer * diag_scalar(K, m, r, m - n, t, p) * it->second;
                    }
                    if (is_zero(row) && rhs.is_zero()) continue;
                    branches[side].A.append_row(row);
                    branches[side].b.push_back(rhs);
                    branches[side].eqs.push_back({t, w});
                }
        std::optional<Vector> sol[2];
        bool determined[2];
        for (int side = 0; side < 2; ++side) {
            auto& br = branches[side];
            sol[side] = solve(br.A, br.b);
            if (!sol[side])
                throw MathError("recurrence " + br.name + " branch is inconsistent at " + tag(m, r));
            determined[side] = rank(br.A) == cols.size();
            auto& dst = side == 0 ? result.witness.left_branch : result.witness.right_branch;
            for (std::size_t c = 0; c < cols.size(); ++c) dst[r][cols[c]] = (*sol[side])[c];
        }
        if (!determined[0] && !determined[1])
            throw MathError("recurrence does not determine the scalars at " + tag(m, r));
        Vector chosen = determined[0] ? *sol[0] : *sol[1];
        for (int side = 0; side < 2; ++side) {
            auto& br = branches[side];
            Vector lhs = br.A * chosen;
            if (lhs != br.b) throw MathError("recurrence branches disagree at " + tag(m, r));
            for (std::size_t e = 0; e < br.eqs.size(); ++e) {
                std::ostringstream os;
                bool first = true;
                for (std::size_t c = 0; c < cols.size(); ++c) {
                    if (br.A.at(e, c).is_zero()) continue;
                    os << (first ? "" : " + ") << "b(" << cols[c] << ")*" << br.A.at(e, c);
                    first = false;
                }
                if (first) os << "0";
                result.witness.identities.push_back(
                    {br.name, r, br.eqs[e].first, br.eqs[e].second, os.str(), br.b[e]});
            }
        }
        for (std::size_t c = 0; c < cols.size(); ++c) result.b[r][cols[c]] = chosen[c];
    }
    return result;
}

BracketResult bracket(const KComplex& K, const Cochain& eta, const Cochain& theta, const HomotopyLifting& psi_eta,
                      const HomotopyLifting& psi_theta)
{
    validate_cochain(K, eta);
    validate_cochain(K, theta);
    int n = eta.degree, m = theta.degree, N = n + m - 1;
    if (psi_eta.n != n || psi_theta.n != m) throw PreconditionError("liftings do not match the cocycles");
    if (N < 0 || N > K.max_degree || N > psi_eta.max_degree || N > psi_theta.max_degree)
        throw PreconditionError("bracket needs liftings through degree " + std::to_string(N));
    BracketResult out{n, m, zero_cochain(K, N), zero_cochain(K, N), sign(K, static_cast<long long>(m - 1) * (n - 1)),
                      zero_cochain(K, N), std::nullopt};
    for (std::size_t i = 0; i < K.count(N); ++i) {
        out.eta_psi_theta.values[i] = evaluate(K, eta, lift_chain(psi_theta, N, i));
        out.theta_psi_eta.values[i] = evaluate(K, theta, lift_chain(psi_eta, N, i));
        out.result.values[i] = out.eta_psi_theta.values[i] - out.theta_psi_eta.values[i] * out.sign;
    }
    if (N + 1 <= K.max_degree) {
        try {
            out.reduced = cobound_reduce(K, out.result);
        } catch (const MathError&) {
            // infinite-dimensional cochain space
        }
    }
    return out;
}

MCResult maurer_cartan_check(const KComplex& K, const Cochain& eta, const HomotopyLifting& psi)
{
    validate_cochain(K, eta);
    if (eta.degree != 2) throw PreconditionError("Maurer-Cartan check needs a degree-2 cochain");
    if (K.max_degree < 3 || psi.n != 2 || psi.max_degree < 3)
        throw PreconditionError("Maurer-Cartan check needs a lifting through degree 3");
    HomotopyLifting cut = psi;
    cut.max_degree = 3;
    cut.table.resize(4);
    if (!verify_homotopy(K, cut, eta).ok()) throw PreconditionError("lifting does not verify through degree 3");
    Cochain d = coboundary(K, eta);
    MCResult out{true, {}};
    for (std::size_t i = 0; i < K.count(3); ++i) {
        PathElement e = evaluate(K, eta, lift_chain(psi, 3, i));
        PathElement sum = d.values[i] + e;
        if (!sum.is_zero()) out.holds = false;
        out.entries.push_back({i, d.values[i], e, sum});
    }
    return out;
}

json lifting_to_json(const KComplex& K, const HomotopyLifting& psi)
{
    json maps = json::array();
    for (int m = std::max(psi.n, 0); m <= psi.max_degree; ++m)
        for (std::size_t r = 0; r < K.count(m); ++r) {
            Chain c = lift_chain(psi, m, r);
            maps.push_back({{"degree", m}, {"index", r}, {"value", c.is_zero() ? "0" : format_chain(K.quiver(), c)}});
        }
    return {{"cocycle_degree", psi.n}, {"max_degree", psi.max_degree}, {"maps", maps}};
}

}  // namespace koszulhh
