#include "koszulhh/chain.hpp"

#include "koszulhh/errors.hpp"

namespace koszulhh {

int TensorKey::total_degree() const
{
    int d = 0;
    for (const auto& f : factors) d += f.degree;
    return d;
}

void Chain::add(const TensorKey& k, const Scalar& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

Chain& Chain::operator+=(const Chain& o)
{
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
}

Chain& Chain::operator-=(const Chain& o)
{
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
}

Chain& Chain::operator*=(const Scalar& s)
{
    if (s.is_zero()) terms_.clear();
    for (auto& [k, c] : terms_) c *= s;
    return *this;
}

const PathElement& LambdaProducts::product(const Path& a, const Path& b)
{
    auto key = std::pair(a, b);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    PathElement r;
    if (auto ab = compose(a, b)) r = normal_form(*ab, *R_);
    return memo_.emplace(std::move(key), std::move(r)).first->second;
}

PathElement LambdaProducts::product(const PathElement& a, const PathElement& b)
{
    PathElement out;
    for (const auto& [p, x] : a.terms())
        for (const auto& [q, y] : b.terms()) out += product(p, q) * (x * y);
    return out;
}

Chain apply_at(const Chain& x, std::size_t position, const FactorMap& f, int map_degree, LambdaProducts& L)
{
    Chain out;
    for (const auto& [key, c] : x.terms()) {
        if (position >= key.factors.size()) throw PreconditionError("tensor position out of range");
        int before = 0;
        for (std::size_t k = 0; k < position; ++k) before += key.factors[k].degree;
        Scalar sign = ((map_degree * before) % 2 == 0) ? Scalar(1) : Scalar(-1);
        for (const auto& img : f(key.factors[position])) {
            if (img.coeffs.size() != img.factors.size() + 1) throw PreconditionError("malformed factor image");
            // Left and right neighbours absorb the image's outer coefficients.
            PathElement leftc = L.product(key.coeffs[position], img.coeffs.front());
            if (leftc.is_zero()) continue;
            if (img.factors.empty()) {
                PathElement merged = L.product(leftc, PathElement(key.coeffs[position + 1]));
                for (const auto& [p, a] : merged.terms()) {
                    TensorKey nk;
                    nk.factors.assign(key.factors.begin(), key.factors.begin() + static_cast<std::ptrdiff_t>(position));
                    nk.factors.insert(nk.factors.end(), key.factors.begin() + static_cast<std::ptrdiff_t>(position) + 1,
                                      key.factors.end());
                    nk.coeffs.assign(key.coeffs.begin(), key.coeffs.begin() + static_cast<std::ptrdiff_t>(position));
                    nk.coeffs.push_back(p);
                    nk.coeffs.insert(nk.coeffs.end(), key.coeffs.begin() + static_cast<std::ptrdiff_t>(position) + 2,
                                     key.coeffs.end());
                    out.add(nk, c * sign * img.scalar * a);
                }
                continue;
            }
            const PathElement& rightc = L.product(img.coeffs.back(), key.coeffs[position + 1]);
            if (rightc.is_zero()) continue;
            for (const auto& [lp, la] : leftc.terms())
                for (const auto& [rp, ra] : rightc.terms()) {
                    TensorKey nk;
                    nk.factors.assign(key.factors.begin(), key.factors.begin() + static_cast<std::ptrdiff_t>(position));
                    nk.factors.insert(nk.factors.end(), img.factors.begin(), img.factors.end());
                    nk.factors.insert(nk.factors.end(), key.factors.begin() + static_cast<std::ptrdiff_t>(position) + 1,
                                      key.factors.end());
                    nk.coeffs.assign(key.coeffs.begin(), key.coeffs.begin() + static_cast<std::ptrdiff_t>(position));
                    nk.coeffs.push_back(lp);
                    nk.coeffs.insert(nk.coeffs.end(), img.coeffs.begin() + 1, img.coeffs.end() - 1);
                    nk.coeffs.push_back(rp);
                    nk.coeffs.insert(nk.coeffs.end(), key.coeffs.begin() + static_cast<std::ptrdiff_t>(position) + 2,
                                     key.coeffs.end());
                    out.add(nk, c * sign * img.scalar * la * ra);
                }
        }
    }
    return out;
}

Chain act(const Path& left, const Chain& x, const Path& right, LambdaProducts& L)
{
    Chain out;
    for (const auto& [key, c] : x.terms()) {
        if (key.factors.empty()) {
            PathElement m = L.product(L.product(PathElement(left), PathElement(key.coeffs[0])), PathElement(right));
            for (const auto& [mp, ma] : m.terms()) out.add(TensorKey{{}, {mp}}, c * ma);
            continue;
        }
        const PathElement& l = L.product(left, key.coeffs.front());
        if (l.is_zero()) continue;
        const PathElement& r = L.product(key.coeffs.back(), right);
        for (const auto& [lp, la] : l.terms())
            for (const auto& [rp, ra] : r.terms()) {
                TensorKey nk = key;
                nk.coeffs.front() = lp;
                nk.coeffs.back() = rp;
                out.add(nk, c * la * ra);
            }
    }
    return out;
}

Chain token(const Factor& f, VertexId origin, VertexId terminal)
{
    Chain c;
    c.add(TensorKey{{f}, {Path::vertex(origin), Path::vertex(terminal)}}, Scalar(1));
    return c;
}

std::string format_chain(const Quiver& q, const Chain& x)
{
    if (x.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [key, c] : x.terms()) {
        bool negative = c.field().is_rational() && c.value() < 0;
        Scalar a = negative ? -c : c;
        s += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
        if (!a.is_one()) s += a.str() + "*";
        for (std::size_t k = 0; k < key.factors.size(); ++k) {
            if (k) s += " (x) ";
            if (!key.coeffs[k].is_vertex()) s += format_path(q, key.coeffs[k]) + "*";
            s += "E" + std::to_string(key.factors[k].degree) + "_" + std::to_string(key.factors[k].index);
        }
        if (key.factors.empty())
            s += format_path(q, key.coeffs.front());
        else if (!key.coeffs.back().is_vertex())
            s += "*" + format_path(q, key.coeffs.back());
        first = false;
    }
    return s;
}

}  // namespace koszulhh
