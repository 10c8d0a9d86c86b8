#include "koszulhh/resolution.hpp"

#include "koszulhh/errors.hpp"
#include "koszulhh/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace koszulhh {

using nlohmann::json;

Scalar ComultTable::get(std::size_t n, std::size_t i, std::size_t r, std::size_t p, std::size_t q) const
{
    auto it = entries_.find({n, i, r, p, q});
    return it == entries_.end() ? Scalar(0) : it->second;
}

void ComultTable::set(std::size_t n, std::size_t i, std::size_t r, std::size_t p, std::size_t q, const Scalar& c)
{
    if (c.is_zero())
        entries_.erase({n, i, r, p, q});
    else
        entries_[{n, i, r, p, q}] = c;
}

void KComplex::check_degree(int n) const
{
    if (n < 0 || n > max_degree)
        throw PreconditionError("degree " + std::to_string(n) + " outside the constructed range 0.." +
                                std::to_string(max_degree));
}

Chain KComplex::generator(int n, std::size_t i) const
{
    check_degree(n);
    const auto& g = gen(n, i);
    return token({n, i}, g.origin, g.terminal);
}

FactorMap KComplex::differential_map() const
{
    return [this](const Factor& f) {
        std::vector<FactorImage> out;
        if (f.degree == 0) return out;
        check_degree(f.degree);
        for (const auto& t : diff[static_cast<std::size_t>(f.degree)][f.index])
            out.push_back({t.scalar, {Factor{f.degree - 1, t.target}}, {t.left, t.right}});
        return out;
    };
}

FactorMap KComplex::diagonal_map() const
{
    return [this](const Factor& f) {
        check_degree(f.degree);
        std::vector<FactorImage> out;
        for (const auto& t : diag[static_cast<std::size_t>(f.degree)][f.index])
            out.push_back({t.scalar, {Factor{t.v, t.p}, Factor{f.degree - t.v, t.q}}, {t.left, t.middle, t.right}});
        return out;
    };
}

namespace {

using Block = std::pair<VertexId, VertexId>;

std::map<Block, std::vector<Path>> paths_by_block(const Quiver& q, std::size_t length)
{
    std::vector<Path> level;
    for (VertexId v = 0; v < q.vertex_count(); ++v) level.push_back(Path::vertex(v));
    for (std::size_t l = 0; l < length; ++l) {
        std::vector<Path> next;
        for (const auto& p : level)
            for (ArrowId a = 0; a < q.arrow_count(); ++a)
                if (auto pa = compose(p, Path::arrow(q, a))) next.push_back(std::move(*pa));
        level = std::move(next);
    }
    std::map<Block, std::vector<Path>> out;
    for (auto& p : level) out[{p.origin, p.terminal}].push_back(std::move(p));
    for (auto& [b, v] : out) std::sort(v.begin(), v.end());
    return out;
}

Vector coordinates(const PathElement& x, const std::vector<Path>& basis, Field f)
{
    Vector v(basis.size(), Scalar(0).in(f));
    for (const auto& [p, c] : x.terms()) {
        auto it = std::lower_bound(basis.begin(), basis.end(), p);
        if (it == basis.end() || !(*it == p)) throw MathError("tensor term outside its block");
        v[static_cast<std::size_t>(it - basis.begin())] = c;
    }
    return v;
}

PathElement from_coordinates(const Vector& v, const std::vector<Path>& basis)
{
    PathElement x;
    for (std::size_t k = 0; k < v.size(); ++k) x.add(basis[k], v[k]);
    return x;
}

Matrix rows_matrix(const std::vector<Vector>& rows, std::size_t cols, Field f)
{
    Matrix m(0, cols, f);
    for (const auto& r : rows) m.append_row(r);
    return m;
}

/// Rows spanning {y : u·y = 0 for all u in U}.
std::vector<Vector> annihilator(const std::vector<Vector>& U, std::size_t cols, Field f)
{
    return nullspace(rows_matrix(U, cols, f));
}

std::vector<PathElement> echelon_basis(const std::vector<Vector>& span, const std::vector<Path>& basis, Field f)
{
    std::vector<PathElement> out;
    if (span.empty()) return out;
    Echelon e = rref(rows_matrix(span, basis.size(), f));
    for (std::size_t r = 0; r < e.rank(); ++r) out.push_back(from_coordinates(e.reduced.row(r), basis));
    return out;
}

std::vector<PathElement> relation_space(const ReductionSystem& R)
{
    std::vector<PathElement> rels;
    for (const auto& rule : R.rules()) {
        if (rule.lhs.length() != 2) throw PreconditionError("Koszul construction needs quadratic relations");
        for (const auto& [p, c] : rule.rhs.terms())
            if (p.length() != 2) throw PreconditionError("Koszul construction needs homogeneous quadratic relations");
        PathElement x(rule.lhs, Scalar(1).in(R.field()));
        x -= rule.rhs;
        rels.push_back(std::move(x));
    }
    return rels;
}

std::vector<Generator> endpoints(const std::vector<PathElement>& fs, int degree)
{
    std::vector<Generator> out;
    for (const auto& f : fs) {
        const Path& p = f.terms().begin()->first;
        out.push_back({p.origin, p.terminal, degree});
    }
    return out;
}

Scalar power(const Scalar& x, long long e)
{
    Scalar r = Scalar(1).in(x.field());
    for (long long k = 0; k < e; ++k) r *= x;
    return r;
}

}  // namespace

KComplex build_koszul(const PresentedAlgebra& A, int N, const KoszulOptions& opts)
{
    if (!A.quadratic) throw PreconditionError("Koszul construction needs a quadratic algebra");
    return build_koszul(std::make_shared<const ReductionSystem>(default_reduction_system(A)), N, opts);
}

KComplex build_koszul(std::shared_ptr<const ReductionSystem> Rp, int N, const KoszulOptions& opts)
{
    if (N < 2) throw PreconditionError("max degree must be at least 2");
    const ReductionSystem& R = *Rp;
    const Quiver& Q = R.quiver();
    Field F = R.field();
    KComplex K;
    K.system = Rp;
    K.max_degree = N;
    K.tensors.resize(static_cast<std::size_t>(N) + 1);

    for (VertexId v = 0; v < Q.vertex_count(); ++v) K.tensors[0].emplace_back(Path::vertex(v), Scalar(1).in(F));
    for (ArrowId a = 0; a < Q.arrow_count(); ++a) K.tensors[1].emplace_back(Path::arrow(Q, a), Scalar(1).in(F));

    std::vector<PathElement> rels = relation_space(R);
    for (int n = 2; n <= N; ++n) {
        auto blocks = paths_by_block(Q, static_cast<std::size_t>(n));
        auto shorter = paths_by_block(Q, static_cast<std::size_t>(n - 2));
        std::vector<PathElement> found;
        for (const auto& [block, basis] : blocks) {
            if (basis.size() > opts.max_block)
                throw MathError("degree " + std::to_string(n) + " block exceeds " + std::to_string(opts.max_block) +
                                " paths");
            std::vector<Vector> right;  // V^{n-2} R
            for (const auto& [sb, ps] : shorter) {
                if (sb.first != block.first) continue;
                for (const auto& p : ps)
                    for (const auto& r : rels) {
                        PathElement pr = multiply(PathElement(p, Scalar(1).in(F)), r);
                        if (pr.is_zero() || pr.terms().begin()->first.terminal != block.second) continue;
                        right.push_back(coordinates(pr, basis, F));
                    }
            }
            std::vector<Vector> space;
            if (n == 2) {
                space = right;
            } else {
                std::vector<Vector> left;  // K_{n-1} V
                for (const auto& f : K.tensors[static_cast<std::size_t>(n - 1)])
                    for (ArrowId a = 0; a < Q.arrow_count(); ++a) {
                        PathElement fa = multiply(f, PathElement(Path::arrow(Q, a), Scalar(1).in(F)));
                        if (fa.is_zero()) continue;
                        const Path& p = fa.terms().begin()->first;
                        if (p.origin != block.first || p.terminal != block.second) continue;
                        left.push_back(coordinates(fa, basis, F));
                    }
                if (left.empty() || right.empty()) continue;
                auto ann = annihilator(left, basis.size(), F);
                auto ann2 = annihilator(right, basis.size(), F);
                ann.insert(ann.end(), ann2.begin(), ann2.end());
                space = nullspace(rows_matrix(ann, basis.size(), F));
            }
            auto part = echelon_basis(space, basis, F);
            found.insert(found.end(), part.begin(), part.end());
        }
        if (auto it = opts.overrides.find(n); it != opts.overrides.end()) {
            const auto& given = it->second;
            if (given.size() != found.size())
                throw MathError("override for degree " + std::to_string(n) + " has " + std::to_string(given.size()) +
                                " elements, expected " + std::to_string(found.size()));
            for (const auto& g : given) {
                if (!is_uniform(g) || g.is_zero()) throw MathError("override generators must be nonzero and uniform");
                const Path& p = g.terms().begin()->first;
                auto basis = blocks.at({p.origin, p.terminal});
                std::vector<Vector> span;
                for (const auto& f : found)
                    if (f.terms().begin()->first.parallel_to(p)) span.push_back(coordinates(f, basis, F));
                Echelon e = rref(rows_matrix(span, basis.size(), F));
                if (!in_row_space(e, coordinates(g, basis, F)))
                    throw MathError("override generator outside the degree-" + std::to_string(n) + " Koszul space");
            }
            found = given;
            for (auto& g : found) {
                PathElement h;
                for (const auto& [p, c] : g.terms()) h.add(p, c.in(F));
                g = std::move(h);
            }
        }
        K.tensors[static_cast<std::size_t>(n)] = std::move(found);
    }

    K.gens.resize(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) K.gens[static_cast<std::size_t>(n)] = endpoints(K.tensors[static_cast<std::size_t>(n)], n);

    // c_{pq}(n,i,r): coordinates of f^n_i in the products f^r_p f^{n-r}_q.
    for (int n = 0; n <= N; ++n) {
        auto blocks = paths_by_block(Q, static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < K.count(n); ++i) {
            const auto& g = K.gen(n, i);
            const auto& basis = blocks.at({g.origin, g.terminal});
            Vector target = coordinates(K.tensors[static_cast<std::size_t>(n)][i], basis, F);
            for (int r = 0; r <= n; ++r) {
                std::vector<std::pair<std::size_t, std::size_t>> unknowns;
                Matrix M(basis.size(), 0, F);
                std::vector<Vector> cols;
                for (std::size_t p = 0; p < K.count(r); ++p) {
                    if (K.gen(r, p).origin != g.origin) continue;
                    for (std::size_t q = 0; q < K.count(n - r); ++q) {
                        if (K.gen(n - r, q).terminal != g.terminal || K.gen(n - r, q).origin != K.gen(r, p).terminal)
                            continue;
                        unknowns.emplace_back(p, q);
                        cols.push_back(coordinates(multiply(K.tensors[static_cast<std::size_t>(r)][p],
                                                            K.tensors[static_cast<std::size_t>(n - r)][q]),
                                                   basis, F));
                    }
                }
                Matrix A = rows_matrix(cols, basis.size(), F).transpose();
                if (cols.empty()) A = Matrix(basis.size(), 0, F);
                auto sol = solve(A, target);
                if (!sol)
                    throw MathError("f^" + std::to_string(n) + "_" + std::to_string(i) +
                                    " is not a combination of degree-" + std::to_string(r) + " and degree-" +
                                    std::to_string(n - r) + " products (algebra may not be Koszul)");
                for (std::size_t k = 0; k < unknowns.size(); ++k)
                    K.comult.set(static_cast<std::size_t>(n), i, static_cast<std::size_t>(r), unknowns[k].first,
                                 unknowns[k].second, (*sol)[k]);
            }
        }
    }

    K.diff.resize(static_cast<std::size_t>(N) + 1);
    K.diag.resize(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        auto un = static_cast<std::size_t>(n);
        K.diff[un].resize(K.count(n));
        K.diag[un].resize(K.count(n));
    }
    for (const auto& [key, c] : K.comult.entries()) {
        auto [n, i, r, p, q] = key;
        int nn = static_cast<int>(n), rr = static_cast<int>(r);
        const auto& g = K.gen(nn, i);
        K.diag[n][i].push_back({rr, p, q, Path::vertex(g.origin), Path::vertex(K.gen(rr, p).terminal),
                                Path::vertex(g.terminal), c});
        if (n == 0) continue;
        if (r == 1)
            K.diff[n][i].push_back({q, Path::arrow(Q, static_cast<ArrowId>(p)), Path::vertex(g.terminal), c});
        if (r == n - 1)
            K.diff[n][i].push_back({p, Path::vertex(g.origin), Path::arrow(Q, static_cast<ArrowId>(q)),
                                    n % 2 == 0 ? c : -c});
    }
    return K;
}

PresentedAlgebra family_algebra(const Scalar& qparam, Field f)
{
    Quiver Q({"1", "2"}, {{"a", 0, 0}, {"b", 0, 0}, {"c", 0, 1}});
    auto path = [&](std::string_view s) { return parse_path(Q, s); };
    Scalar one = Scalar(1).in(f);
    PathElement comm(path("a*b"), one);
    comm.add(path("b*a"), -qparam.in(f));
    return PresentedAlgebra(Q, f, {PathElement(path("a*a"), one), PathElement(path("b*b"), one), comm,
                                   PathElement(path("a*c"), one)});
}

FamilyData family_generators(const Quiver& Q, const Scalar& qparam, int N)
{
    auto a = Q.find_arrow("a"), b = Q.find_arrow("b"), c = Q.find_arrow("c");
    if (!a || !b || !c || Q.vertex_count() != 2) throw PreconditionError("quiver is not the A_q quiver");
    Field F = qparam.field();
    Scalar one = Scalar(1).in(F);
    PathElement A(Path::arrow(Q, *a), one), B(Path::arrow(Q, *b), one), C(Path::arrow(Q, *c), one);
    Scalar mq = -qparam;

    FamilyData out;
    out.tensors.resize(static_cast<std::size_t>(N) + 1);
    out.tensors[0] = {PathElement(Path::vertex(0), one), PathElement(Path::vertex(1), one)};
    out.tensors[1] = {A, B, C};
    for (int n = 2; n <= N; ++n) {
        const auto& prev = out.tensors[static_cast<std::size_t>(n - 1)];
        std::vector<PathElement> cur;
        cur.push_back(multiply(prev[0], A));
        for (int s = 1; s < n; ++s)
            cur.push_back(multiply(prev[static_cast<std::size_t>(s - 1)], B) +
                          power(mq, s) * multiply(prev[static_cast<std::size_t>(s)], A));
        cur.push_back(multiply(prev[static_cast<std::size_t>(n - 1)], B));
        PathElement an = PathElement(Path::vertex(0), one);
        for (int k = 0; k < n - 1; ++k) an = multiply(an, A);
        cur.push_back(multiply(an, C));
        out.tensors[static_cast<std::size_t>(n)] = std::move(cur);
    }

    auto set = [&](int n, int s, int r, int p, int q, const Scalar& v) {
        out.comult.set(static_cast<std::size_t>(n), static_cast<std::size_t>(s), static_cast<std::size_t>(r),
                       static_cast<std::size_t>(p), static_cast<std::size_t>(q), v);
    };
    set(0, 0, 0, 0, 0, one);
    set(0, 1, 0, 1, 1, one);
    for (int n = 1; n <= N; ++n) {
        for (int r = 0; r <= n; ++r) set(n, 0, r, 0, 0, one);
        for (int s = 1; s < n; ++s)
            for (int w = 0; w <= n; ++w)
                for (int j = std::max(0, s + w - n); j <= std::min(w, s); ++j)
                    set(n, s, w, j, s - j, power(mq, static_cast<long long>(j) * (n - s + j - w)));
        for (int t = 0; t <= n; ++t) set(n, n, t, t, n - t, one);
        for (int t = 0; t < n; ++t) set(n, n + 1, t, 0, n - t + 1, one);
        set(n, n + 1, n, n + 1, 1, one);
    }
    return out;
}

Chain differential_apply(const KComplex& K, int n, const Chain& x)
{
    LambdaProducts L(K.R());
    return differential_apply(K, n, x, L);
}

Chain differential_apply(const KComplex& K, int n, const Chain& x, LambdaProducts& L)
{
    K.check_degree(n);
    for (const auto& [key, c] : x.terms())
        if (key.factors.size() != 1 || key.factors[0].degree != n)
            throw PreconditionError("element is not a section of K_" + std::to_string(n));
    return apply_at(x, 0, K.differential_map(), -1, L);
}

const std::vector<DiagTerm>& diagonal_apply(const KComplex& K, int n, std::size_t i)
{
    K.check_degree(n);
    return K.diag[static_cast<std::size_t>(n)].at(i);
}

bool VerifyReport::ok() const
{
    return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.pass; });
}

bool VerifyReport::ok_except(const std::string& property) const
{
    return std::all_of(entries.begin(), entries.end(),
                       [&](const CheckEntry& e) { return e.pass || e.property == property; });
}

std::string VerifyReport::summary() const
{
    std::ostringstream os;
    for (const auto& e : entries)
        if (!e.pass) os << e.property << " fails in degree " << e.degree << ": " << e.witness << "\n";
    return os.str();
}

VerifyReport verify_complex(const KComplex& K)
{
    VerifyReport report;
    LambdaProducts L(K.R());
    const Quiver& Q = K.quiver();
    auto d = K.differential_map();
    auto delta = K.diagonal_map();
    FactorMap counit = [&K](const Factor& f) {
        std::vector<FactorImage> out;
        if (f.degree == 0) out.push_back({Scalar(1), {}, {Path::vertex(K.gen(0, f.index).origin)}});
        return out;
    };
    auto record = [&](const std::string& prop, int n, const std::string& witness) {
        report.entries.push_back({prop, n, witness.empty(), witness});
    };

    for (int n = 0; n <= K.max_degree; ++n) {
        std::string d2, cu, coass, dg, recon;
        for (std::size_t i = 0; i < K.count(n); ++i) {
            std::string tag = "E" + std::to_string(n) + "_" + std::to_string(i) + ": ";
            Chain g = K.generator(n, i);
            if (n >= 2 && d2.empty()) {
                Chain x = apply_at(apply_at(g, 0, d, -1, L), 0, d, -1, L);
                if (!x.is_zero()) d2 = tag + format_chain(Q, x);
            }
            Chain D = apply_at(g, 0, delta, 0, L);
            if (cu.empty()) {
                Chain l = apply_at(D, 0, counit, 0, L), r = apply_at(D, 1, counit, 0, L);
                if (!(l == g)) cu = tag + "(counit x 1)D = " + format_chain(Q, l);
                else if (!(r == g)) cu = tag + "(1 x counit)D = " + format_chain(Q, r);
            }
            if (coass.empty()) {
                Chain x = apply_at(D, 0, delta, 0, L) - apply_at(D, 1, delta, 0, L);
                if (!x.is_zero()) coass = tag + format_chain(Q, x);
            }
            if (n >= 1 && dg.empty()) {
                Chain x = apply_at(apply_at(g, 0, d, -1, L), 0, delta, 0, L) - apply_at(D, 0, d, -1, L) -
                          apply_at(D, 1, d, -1, L);
                if (!x.is_zero()) dg = tag + format_chain(Q, x);
            }
            if (K.has_tensors() && recon.empty()) {
                for (int r = 0; r <= n && recon.empty(); ++r) {
                    PathElement sum;
                    for (std::size_t p = 0; p < K.count(r); ++p)
                        for (std::size_t q = 0; q < K.count(n - r); ++q) {
                            Scalar c = K.comult.get(static_cast<std::size_t>(n), i, static_cast<std::size_t>(r), p, q);
                            if (!c.is_zero())
                                sum += multiply(K.tensors[static_cast<std::size_t>(r)][p],
                                                K.tensors[static_cast<std::size_t>(n - r)][q]) * c;
                        }
                    if (!(sum == K.tensors[static_cast<std::size_t>(n)][i]))
                        recon = tag + "r=" + std::to_string(r) + " gives " + format_element(Q, sum);
                }
            }
        }
        if (n >= 2) record("d^2 = 0", n, d2);
        record("counit", n, cu);
        record("coassociativity", n, coass);
        if (n >= 1) record("(d x 1 + 1 x d)D = Dd", n, dg);
        if (K.has_tensors()) record("comultiplicative reconstruction", n, recon);
    }
    return report;
}

namespace {

Scalar json_scalar(const json& j, Field f)
{
    if (j.is_number_integer()) return Scalar(j.get<long long>()).in(f);
    if (j.is_string()) return Scalar::parse(j.get<std::string>(), f);
    throw ParseError("scalar must be an integer or a string");
}

VertexId json_vertex(const Quiver& Q, const json& j)
{
    std::string name = j.is_string() ? j.get<std::string>() : j.dump();
    auto v = Q.find_vertex(name);
    if (!v) throw ParseError("unknown vertex '" + name + "'");
    return *v;
}

Path json_path(const ReductionSystem& R, const json& j, const char* what)
{
    Path p = parse_path(R.quiver(), j.get<std::string>());
    if (!R.is_irreducible(p)) throw ParseError(std::string(what) + " path '" + j.get<std::string>() + "' is reducible");
    return p;
}

}  // namespace

KComplex load_manual_resolution_unchecked(std::shared_ptr<const ReductionSystem> Rp, const json& section)
{
    const ReductionSystem& R = *Rp;
    const Quiver& Q = R.quiver();
    Field F = R.field();
    KComplex K;
    K.system = Rp;
    try {
        const json& gens = section.at("generators");
        if (!gens.is_array() || gens.empty()) throw ParseError("resolution needs generators for degree 0 upwards");
        for (std::size_t n = 0; n < gens.size(); ++n) {
            std::vector<Generator> level;
            if (gens[n].is_number_integer()) {
                if (Q.vertex_count() != 1) throw ParseError("generator counts need endpoint data on multi-vertex quivers");
                for (long long k = 0; k < gens[n].get<long long>(); ++k)
                    level.push_back({0, 0, static_cast<int>(n)});
            } else {
                for (const auto& g : gens[n])
                    level.push_back({json_vertex(Q, g.at("from")), json_vertex(Q, g.at("to")),
                                     g.value("internal_degree", static_cast<int>(n))});
            }
            K.gens.push_back(std::move(level));
        }
        K.max_degree = static_cast<int>(K.gens.size()) - 1;
        auto N = K.gens.size();
        K.diff.resize(N);
        K.diag.resize(N);
        for (std::size_t n = 0; n < N; ++n) {
            K.diff[n].resize(K.gens[n].size());
            K.diag[n].resize(K.gens[n].size());
        }
        auto index = [&](const json& j, int n, const char* what) {
            auto k = j.get<long long>();
            if (n < 0 || n > K.max_degree || k < 0 || static_cast<std::size_t>(k) >= K.count(n))
                throw ParseError(std::string("resolution: ") + what + " index out of range");
            return static_cast<std::size_t>(k);
        };
        for (const auto& e : section.value("differential", json::array())) {
            int n = e.at("degree").get<int>();
            if (n < 1) throw ParseError("resolution: differential degree must be at least 1");
            std::size_t i = index(e.at("from_index"), n, "from"), j = index(e.at("to_index"), n - 1, "to");
            const auto& g = K.gen(n, i);
            const auto& h = K.gen(n - 1, j);
            Path left = e.contains("left") ? json_path(R, e["left"], "left") : Path::vertex(g.origin);
            Path right = e.contains("right") ? json_path(R, e["right"], "right") : Path::vertex(g.terminal);
            if (left.origin != g.origin || left.terminal != h.origin || right.origin != h.terminal ||
                right.terminal != g.terminal)
                throw ParseError("resolution: differential coefficients do not match generator endpoints");
            K.diff[static_cast<std::size_t>(n)][i].push_back({j, left, right, json_scalar(e.value("scalar", json(1)), F)});
        }
        for (const auto& e : section.value("diagonal", json::array())) {
            int n = e.at("degree").get<int>(), v = e.at("v").get<int>();
            if (v < 0 || v > n) throw ParseError("resolution: diagonal split out of range");
            std::size_t i = index(e.at("index"), n, "diagonal");
            std::size_t p = index(e.at("p"), v, "p"), q = index(e.at("q"), n - v, "q");
            const auto& g = K.gen(n, i);
            Path left = e.contains("left") ? json_path(R, e["left"], "left") : Path::vertex(g.origin);
            Path middle = e.contains("middle") ? json_path(R, e["middle"], "middle") : Path::vertex(K.gen(v, p).terminal);
            Path right = e.contains("right") ? json_path(R, e["right"], "right") : Path::vertex(g.terminal);
            if (left.origin != g.origin || left.terminal != K.gen(v, p).origin ||
                middle.origin != K.gen(v, p).terminal || middle.terminal != K.gen(n - v, q).origin ||
                right.origin != K.gen(n - v, q).terminal || right.terminal != g.terminal)
                throw ParseError("resolution: diagonal coefficients do not match generator endpoints");
            K.diag[static_cast<std::size_t>(n)][i].push_back(
                {v, p, q, left, middle, right, json_scalar(e.value("scalar", json(1)), F)});
        }
        for (std::size_t v = 0; v < K.count(0); ++v)
            if (K.diag[0][v].empty()) {
                Path e = Path::vertex(K.gen(0, v).origin);
                K.diag[0][v].push_back({0, v, v, e, e, e, Scalar(1).in(F)});
            }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed resolution section: ") + e.what());
    }
    return K;
}

KComplex load_manual_resolution(std::shared_ptr<const ReductionSystem> R, const json& section)
{
    KComplex K = load_manual_resolution_unchecked(std::move(R), section);
    VerifyReport report = verify_complex(K);
    if (!report.ok_except("coassociativity")) throw MathError("resolution fails verification:\n" + report.summary());
    return K;
}

json export_resolution(const KComplex& K)
{
    const Quiver& Q = K.quiver();
    json gens = json::array();
    for (int n = 0; n <= K.max_degree; ++n) {
        json level = json::array();
        for (const auto& g : K.gens[static_cast<std::size_t>(n)])
            level.push_back({{"from", Q.vertex_name(g.origin)}, {"to", Q.vertex_name(g.terminal)},
                             {"internal_degree", g.internal_degree}});
        gens.push_back(level);
    }
    json diff = json::array(), diag = json::array();
    for (int n = 0; n <= K.max_degree; ++n)
        for (std::size_t i = 0; i < K.count(n); ++i) {
            for (const auto& t : K.diff[static_cast<std::size_t>(n)][i])
                diff.push_back({{"degree", n}, {"from_index", i}, {"to_index", t.target},
                                {"left", format_path(Q, t.left)}, {"right", format_path(Q, t.right)},
                                {"scalar", t.scalar.str()}});
            for (const auto& t : K.diag[static_cast<std::size_t>(n)][i])
                diag.push_back({{"degree", n}, {"index", i}, {"v", t.v}, {"p", t.p}, {"q", t.q},
                                {"left", format_path(Q, t.left)}, {"middle", format_path(Q, t.middle)},
                                {"right", format_path(Q, t.right)}, {"scalar", t.scalar.str()}});
        }
    return {{"generators", gens}, {"differential", diff}, {"diagonal", diag}};
}

namespace {

/// Expands a product of per-position elements into bar basis terms.
void add_expanded(BarElement& out, const std::vector<PathElement>& parts, int split, const Scalar& c)
{
    std::vector<std::pair<std::vector<Path>, Scalar>> acc{{{}, c}};
    for (const auto& part : parts) {
        std::vector<std::pair<std::vector<Path>, Scalar>> next;
        for (const auto& [ps, s] : acc)
            for (const auto& [p, x] : part.terms()) {
                auto q = ps;
                q.push_back(p);
                next.emplace_back(std::move(q), s * x);
            }
        acc = std::move(next);
    }
    for (auto& [ps, s] : acc) {
        BarKey k{std::move(ps), split};
        auto [it, inserted] = out.try_emplace(k, s);
        if (!inserted) {
            it->second += s;
            if (it->second.is_zero()) out.erase(it);
        }
    }
}

/// Drops vertex terms: products of inner bar factors live in Λ/kQ_0.
PathElement augmentation_ideal(PathElement x)
{
    PathElement out;
    for (const auto& [p, c] : x.terms())
        if (!p.is_vertex()) out.add(p, c);
    return out;
}

PathElement single(const Path& p) { return PathElement(p, Scalar(1)); }

}  // namespace

BarElement bar_embed(const KComplex& K, int n, std::size_t i)
{
    if (!K.has_tensors()) throw PreconditionError("bar embedding needs the tensor form of the generators");
    if (n > 4) throw PreconditionError("bar embedding is limited to degree 4");
    K.check_degree(n);
    const auto& g = K.gen(n, i);
    BarElement out;
    if (n == 0) {
        add_expanded(out, {single(Path::vertex(g.origin)), single(Path::vertex(g.origin))}, -1, Scalar(1));
        return out;
    }
    for (const auto& [p, c] : K.tensors[static_cast<std::size_t>(n)][i].terms()) {
        std::vector<PathElement> parts{single(Path::vertex(p.origin))};
        for (ArrowId a : p.arrows) parts.push_back(single(Path::arrow(K.quiver(), a)));
        parts.push_back(single(Path::vertex(p.terminal)));
        add_expanded(out, parts, -1, c);
    }
    return out;
}

bool BarReport::ok() const
{
    return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.pass; });
}

BarReport verify_bar_embedding(const KComplex& K, int max_degree)
{
    BarReport report;
    LambdaProducts L(K.R());
    auto mul = [&](const PathElement& x, const PathElement& y) { return L.product(x, y); };
    int top = std::min({max_degree, K.max_degree, 4});

    for (int n = 0; n <= top; ++n) {
        std::string dwit, cwit;
        for (std::size_t i = 0; i < K.count(n); ++i) {
            BarElement emb = bar_embed(K, n, i);
            if (n >= 1) {
                BarElement lhs, rhs;
                for (const auto& [key, c] : emb) {
                    const auto& ps = key.parts;
                    std::size_t m = ps.size() - 2;
                    for (std::size_t k = 0; k <= m; ++k) {
                        std::vector<PathElement> parts;
                        for (std::size_t t = 0; t < k; ++t) parts.push_back(single(ps[t]));
                        PathElement prod = mul(single(ps[k]), single(ps[k + 1]));
                        if (k >= 1 && k + 1 <= m) prod = augmentation_ideal(prod);
                        parts.push_back(prod);
                        for (std::size_t t = k + 2; t < ps.size(); ++t) parts.push_back(single(ps[t]));
                        add_expanded(lhs, parts, -1, k % 2 == 0 ? c : -c);
                    }
                }
                for (const auto& t : K.diff[static_cast<std::size_t>(n)][i]) {
                    for (const auto& [key, c] : bar_embed(K, n - 1, t.target)) {
                        std::vector<PathElement> parts;
                        for (const auto& p : key.parts) parts.push_back(single(p));
                        parts.front() = mul(single(t.left), parts.front());
                        parts.back() = mul(parts.back(), single(t.right));
                        add_expanded(rhs, parts, -1, c * t.scalar);
                    }
                }
                if (!(lhs == rhs) && dwit.empty()) dwit = "E" + std::to_string(n) + "_" + std::to_string(i);
            }
            BarElement lhs, rhs;
            for (const auto& [key, c] : emb) {
                const auto& ps = key.parts;
                for (std::size_t k = 0; k + 1 < ps.size(); ++k) {
                    if (n == 0 && k > 0) break;
                    std::vector<PathElement> parts;
                    for (std::size_t t = 0; t <= k; ++t) parts.push_back(single(ps[t]));
                    parts.push_back(single(Path::vertex(ps[k].terminal)));
                    for (std::size_t t = k + 1; t < ps.size(); ++t) parts.push_back(single(ps[t]));
                    add_expanded(lhs, parts, static_cast<int>(k) + 1, c);
                }
            }
            for (const auto& t : K.diag[static_cast<std::size_t>(n)][i]) {
                for (const auto& [k1, c1] : bar_embed(K, t.v, t.p))
                    for (const auto& [k2, c2] : bar_embed(K, n - t.v, t.q)) {
                        std::vector<PathElement> parts;
                        parts.push_back(mul(single(t.left), single(k1.parts.front())));
                        for (std::size_t s = 1; s + 1 < k1.parts.size(); ++s) parts.push_back(single(k1.parts[s]));
                        parts.push_back(mul(mul(single(k1.parts.back()), single(t.middle)), single(k2.parts.front())));
                        for (std::size_t s = 1; s + 1 < k2.parts.size(); ++s) parts.push_back(single(k2.parts[s]));
                        parts.push_back(mul(single(k2.parts.back()), single(t.right)));
                        add_expanded(rhs, parts, static_cast<int>(k1.parts.size()) - 1, c1 * c2 * t.scalar);
                    }
            }
            if (!(lhs == rhs) && cwit.empty()) cwit = "E" + std::to_string(n) + "_" + std::to_string(i);
        }
        if (n >= 1) report.entries.push_back({"bar: delta iota = iota d", n, dwit.empty(), dwit});
        report.entries.push_back({"bar: (iota x iota)D_K = D_B iota", n, cwit.empty(), cwit});
    }
    return report;
}

}  // namespace koszulhh
