#include "koszulhh/cohomology.hpp"

#include "koszulhh/errors.hpp"

#include <algorithm>

namespace koszulhh {

using nlohmann::json;

bool Cochain::is_zero() const
{
    return std::all_of(values.begin(), values.end(), [](const PathElement& v) { return v.is_zero(); });
}

Cochain zero_cochain(const KComplex& K, int n)
{
    K.check_degree(n);
    return Cochain{n, std::vector<PathElement>(K.count(n))};
}

void validate_cochain(const KComplex& K, const Cochain& c)
{
    K.check_degree(c.degree);
    if (c.values.size() != K.count(c.degree))
        throw PreconditionError("degree-" + std::to_string(c.degree) + " cochain needs " +
                                std::to_string(K.count(c.degree)) + " values, got " + std::to_string(c.values.size()));
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        const auto& g = K.gen(c.degree, i);
        for (const auto& [p, s] : c.values[i].terms()) {
            if (p.origin != g.origin || p.terminal != g.terminal)
                throw PreconditionError("value " + std::to_string(i) + " term " + format_path(K.quiver(), p) +
                                        " does not run from o(f_i) to t(f_i)");
            if (!K.R().is_irreducible(p))
                throw PreconditionError("value " + std::to_string(i) + " term " + format_path(K.quiver(), p) +
                                        " is not reduced");
        }
    }
}

CochainSpace cochain_space(const KComplex& K, int n)
{
    K.check_degree(n);
    IrreducibleBasis irr = irr_basis(K.R());
    CochainSpace space{n, {}};
    for (std::size_t i = 0; i < K.count(n); ++i) {
        const auto& g = K.gen(n, i);
        for (const auto& p : irr.parallel(g.origin, g.terminal)) space.basis.push_back({i, p});
    }
    return space;
}

Vector to_vector(const CochainSpace& space, const Cochain& c)
{
    Vector v;
    v.reserve(space.dimension());
    for (const auto& e : space.basis) v.push_back(c.values.at(e.generator).coefficient(e.path));
    return v;
}

Cochain from_vector(const KComplex& K, const CochainSpace& space, const Vector& v)
{
    Cochain c = zero_cochain(K, space.degree);
    for (std::size_t k = 0; k < space.dimension(); ++k) c.values[space.basis[k].generator].add(space.basis[k].path, v[k]);
    return c;
}

namespace {

Cochain coboundary(const KComplex& K, const Cochain& c, LambdaProducts& L)
{
    int n = c.degree + 1;
    K.check_degree(n);
    Cochain out = zero_cochain(K, n);
    for (std::size_t j = 0; j < K.count(n); ++j)
        for (const auto& t : K.diff[static_cast<std::size_t>(n)][j]) {
            const PathElement& v = c.values.at(t.target);
            if (v.is_zero()) continue;
            out.values[j] += L.product(L.product(PathElement(t.left), v), PathElement(t.right)) * t.scalar;
        }
    return out;
}

Matrix image_rows(const KComplex& K, int n, const CochainSpace& space)
{
    // Rows spanning Im d*_n ⊂ C^n.
    Matrix rows(0, space.dimension(), K.field());
    if (n == 0) return rows;
    Matrix m = induced_matrix(K, n - 1);
    for (std::size_t c = 0; c < m.cols(); ++c) rows.append_row(m.column(c));
    return rows;
}

std::size_t support(const Vector& v)
{
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](const Scalar& s) { return !s.is_zero(); }));
}

}  // namespace

Cochain coboundary(const KComplex& K, const Cochain& c)
{
    validate_cochain(K, c);
    LambdaProducts L(K.R());
    return coboundary(K, c, L);
}

Matrix induced_matrix(const KComplex& K, int n)
{
    K.check_degree(n + 1);
    CochainSpace from = cochain_space(K, n), to = cochain_space(K, n + 1);
    LambdaProducts L(K.R());
    Matrix m(to.dimension(), from.dimension(), K.field());
    for (std::size_t k = 0; k < from.dimension(); ++k) {
        Cochain phi = zero_cochain(K, n);
        phi.values[from.basis[k].generator] = PathElement(from.basis[k].path, Scalar(1).in(K.field()));
        Vector col = to_vector(to, coboundary(K, phi, L));
        for (std::size_t r = 0; r < col.size(); ++r) m.at(r, k) = col[r];
    }
    return m;
}

CohomologyBasis cohomology_basis(const KComplex& K, int n)
{
    K.check_degree(n + 1);
    CochainSpace space = cochain_space(K, n);
    Matrix d = induced_matrix(K, n);
    Echelon image = rref(image_rows(K, n, space));
    auto kernel = nullspace(d);

    std::vector<Vector> candidates;
    for (std::size_t k = 0; k < space.dimension(); ++k) {
        Vector col = d.column(k);
        if (!is_zero(col)) continue;
        Vector e(space.dimension(), Scalar(0).in(K.field()));
        e[k] = Scalar(1).in(K.field());
        candidates.push_back(std::move(e));
    }
    std::vector<Vector> rest = kernel;
    std::stable_sort(rest.begin(), rest.end(), [](const Vector& a, const Vector& b) { return support(a) < support(b); });
    candidates.insert(candidates.end(), rest.begin(), rest.end());

    CohomologyBasis H{n, kernel.size(), image.rank(), {}, space, image};
    Matrix span = image.reduced;
    for (const auto& v : candidates) {
        if (H.representatives.size() + image.rank() == kernel.size()) break;
        Echelon e = rref(span);
        if (in_row_space(e, v)) continue;
        span.append_row(v);
        H.representatives.push_back(from_vector(K, space, v));
    }
    if (H.representatives.size() + image.rank() != kernel.size())
        throw MathError("image of d* is not contained in the kernel (d*² ≠ 0)");
    return H;
}

bool is_cocycle(const KComplex& K, const Cochain& c) { return coboundary(K, c).is_zero(); }

bool is_coboundary(const CohomologyBasis& H, const Cochain& c)
{
    return in_row_space(H.image, to_vector(H.space, c));
}

Cochain cobound_reduce(const KComplex& K, const CohomologyBasis& H, const Cochain& c)
{
    validate_cochain(K, c);
    if (c.degree != H.degree) throw PreconditionError("cochain degree does not match the cohomology basis");
    // Basis of C^n: image rows, representatives, then standard vectors; drop the image coordinates.
    std::size_t dim = H.space.dimension();
    Matrix cols(0, dim, K.field());
    for (std::size_t r = 0; r < H.image.rank(); ++r) cols.append_row(H.image.reduced.row(r));
    for (const auto& rep : H.representatives) cols.append_row(to_vector(H.space, rep));
    for (std::size_t k = 0; k < dim && cols.rows() < dim; ++k) {
        Vector e(dim, Scalar(0).in(K.field()));
        e[k] = Scalar(1).in(K.field());
        Matrix trial = cols;
        trial.append_row(e);
        if (rank(trial) == trial.rows()) cols = std::move(trial);
    }
    auto coeffs = solve(cols.transpose(), to_vector(H.space, c));
    if (!coeffs) throw MathError("cochain space basis is incomplete");
    Vector out(dim, Scalar(0).in(K.field()));
    for (std::size_t r = H.image.rank(); r < cols.rows(); ++r)
        for (std::size_t k = 0; k < dim; ++k)
            if (!cols.at(r, k).is_zero()) out[k] += (*coeffs)[r] * cols.at(r, k);
    return from_vector(K, H.space, out);
}

Cochain cobound_reduce(const KComplex& K, const Cochain& c)
{
    validate_cochain(K, c);
    return cobound_reduce(K, cohomology_basis(K, c.degree), c);
}

json cochain_to_json(const KComplex& K, const Cochain& c)
{
    json values = json::array();
    for (const auto& v : c.values) values.push_back(format_element(K.quiver(), v));
    return {{"degree", c.degree}, {"values", values}};
}

Cochain cochain_from_json(const KComplex& K, const json& j)
{
    const json* values = &j;
    std::optional<int> degree;
    if (j.is_object()) {
        if (!j.contains("values")) throw ParseError("cochain object needs a \"values\" array");
        values = &j["values"];
        if (j.contains("degree")) degree = j["degree"].get<int>();
    }
    if (!values->is_array()) throw ParseError("cochain values must be an array of strings");
    if (!degree) {
        std::vector<int> matches;
        for (int n = 0; n <= K.max_degree; ++n)
            if (K.count(n) == values->size()) matches.push_back(n);
        if (matches.size() != 1) throw ParseError("cochain degree is ambiguous; give {\"degree\": n, \"values\": [...]}");
        degree = matches[0];
    }
    Cochain c{*degree, {}};
    for (const auto& v : *values) {
        if (!v.is_string()) throw ParseError("cochain values must be strings");
        c.values.push_back(normal_form(parse_element(K.quiver(), v.get<std::string>(), K.field()), K.R()));
    }
    validate_cochain(K, c);
    return c;
}

std::string format_cochain(const KComplex& K, const Cochain& c)
{
    std::string s = "(";
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (i) s += ", ";
        s += format_element(K.quiver(), c.values[i]);
    }
    return s + ")";
}

}  // namespace koszulhh
