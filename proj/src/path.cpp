#include "koszulhh/path.hpp"

#include "koszulhh/errors.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

namespace koszulhh {

Quiver::Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows))
{
    std::set<std::string> seen;
    for (const auto& v : vertices_) {
        if (!seen.insert("e_" + v).second) throw ParseError("duplicate vertex '" + v + "'");
    }
    for (const auto& a : arrows_) {
        if (a.origin < 0 || a.origin >= vertex_count() || a.terminal < 0 || a.terminal >= vertex_count())
            throw ParseError("arrow '" + a.name + "' references an unknown vertex");
        if (!seen.insert(a.name).second) throw ParseError("duplicate arrow or vertex name '" + a.name + "'");
    }
}

std::optional<VertexId> Quiver::find_vertex(std::string_view name) const
{
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i] == name) return static_cast<VertexId>(i);
    return std::nullopt;
}

std::optional<ArrowId> Quiver::find_arrow(std::string_view name) const
{
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].name == name) return static_cast<ArrowId>(i);
    return std::nullopt;
}

Path Path::arrow(const Quiver& q, ArrowId a)
{
    const auto& ar = q.arrow(a);
    return {ar.origin, ar.terminal, {a}};
}

Path Path::subpath(const Quiver& q, std::size_t pos, std::size_t len) const
{
    if (len == 0) {
        VertexId v = pos == 0 ? origin : q.arrow(arrows[pos - 1]).terminal;
        return vertex(v);
    }
    Path p;
    p.arrows.assign(arrows.begin() + static_cast<std::ptrdiff_t>(pos),
                    arrows.begin() + static_cast<std::ptrdiff_t>(pos + len));
    p.origin = q.arrow(p.arrows.front()).origin;
    p.terminal = q.arrow(p.arrows.back()).terminal;
    return p;
}

bool Path::occurs_at(const Path& needle, std::size_t pos) const
{
    if (needle.is_vertex()) return false;
    if (pos + needle.length() > length()) return false;
    return std::equal(needle.arrows.begin(), needle.arrows.end(), arrows.begin() + static_cast<std::ptrdiff_t>(pos));
}

bool Path::contains(const Path& needle) const
{
    if (needle.length() > length()) return false;
    for (std::size_t i = 0; i + needle.length() <= length(); ++i)
        if (occurs_at(needle, i)) return true;
    return false;
}

std::strong_ordering operator<=>(const Path& a, const Path& b)
{
    if (auto c = a.length() <=> b.length(); c != 0) return c;
    if (auto c = a.arrows <=> b.arrows; c != 0) return c;
    return std::tie(a.origin, a.terminal) <=> std::tie(b.origin, b.terminal);
}

std::optional<Path> compose(const Path& p, const Path& q)
{
    if (p.terminal != q.origin) return std::nullopt;
    Path r{p.origin, q.terminal, p.arrows};
    r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
    return r;
}

PathElement::PathElement(const Path& p, Scalar c) { add(p, c); }

Scalar PathElement::coefficient(const Path& p) const
{
    auto it = terms_.find(p);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void PathElement::add(const Path& p, const Scalar& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

PathElement& PathElement::operator+=(const PathElement& o)
{
    for (const auto& [p, c] : o.terms_) add(p, c);
    return *this;
}

PathElement& PathElement::operator-=(const PathElement& o)
{
    for (const auto& [p, c] : o.terms_) add(p, -c);
    return *this;
}

PathElement& PathElement::operator*=(const Scalar& s)
{
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [p, c] : terms_) c *= s;
    return *this;
}

const Path& PathElement::leading_path() const
{
    if (terms_.empty()) throw PreconditionError("zero element has no leading term");
    std::size_t maxlen = terms_.rbegin()->first.length();
    for (const auto& [p, c] : terms_)
        if (p.length() == maxlen) return p;
    return terms_.rbegin()->first;
}

PathElement multiply(const PathElement& x, const PathElement& y)
{
    PathElement r;
    for (const auto& [p, a] : x.terms())
        for (const auto& [q, b] : y.terms())
            if (auto pq = compose(p, q)) r.add(*pq, a * b);
    return r;
}

std::vector<UniformPart> uniform_parts(const PathElement& x)
{
    std::map<std::tuple<VertexId, VertexId, std::size_t>, PathElement> groups;
    for (const auto& [p, c] : x.terms()) groups[{p.origin, p.terminal, p.length()}].add(p, c);
    std::vector<UniformPart> out;
    for (auto& [key, el] : groups)
        out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::move(el)});
    return out;
}

bool is_uniform(const PathElement& x) { return uniform_parts(x).size() <= 1; }

std::string format_path(const Quiver& q, const Path& p)
{
    if (p.is_vertex()) return "e_" + q.vertex_name(p.origin);
    std::string s;
    for (std::size_t i = 0; i < p.arrows.size(); ++i) {
        if (i) s += '*';
        s += q.arrow(p.arrows[i]).name;
    }
    return s;
}

std::string format_element(const Quiver& q, const PathElement& x)
{
    if (x.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [p, c] : x.terms()) {
        Scalar coef = c;
        bool negative = coef.field().is_rational() && coef.value() < 0;
        if (negative) coef = -coef;
        if (first)
            s += negative ? "-" : "";
        else
            s += negative ? " - " : " + ";
        if (!coef.is_one()) s += coef.str() + "*";
        s += format_path(q, p);
        first = false;
    }
    return s;
}

namespace {

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

bool is_numeric(std::string_view s)
{
    if (s.empty()) return false;
    bool digit = false;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)))
            digit = true;
        else if (c != '/')
            return false;
    }
    return digit;
}

std::string_view trim(std::string_view s, std::size_t& offset)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
        ++offset;
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Path resolve_factor(const Quiver& q, std::string_view name, std::size_t offset)
{
    for (char c : name)
        if (!is_name_char(c)) throw ParseError("invalid character in name '" + std::string(name) + "'", offset);
    if (auto a = q.find_arrow(name)) return Path::arrow(q, *a);
    if (name.starts_with("e_"))
        if (auto v = q.find_vertex(name.substr(2))) return Path::vertex(*v);
    throw ParseError("unknown arrow or vertex '" + std::string(name) + "'", offset);
}

// Parses one '*'-separated product; returns coefficient and optional path.
std::pair<Scalar, std::optional<Path>> parse_product(const Quiver& q, std::string_view text, std::size_t base,
                                                     Field f)
{
    Scalar coef = Scalar(1).in(f);
    std::optional<Path> path;
    std::size_t pos = 0;
    while (true) {
        std::size_t star = text.find('*', pos);
        std::size_t off = base + pos;
        std::string_view tok = text.substr(pos, star == std::string_view::npos ? std::string_view::npos : star - pos);
        tok = trim(tok, off);
        if (tok.empty()) throw ParseError("empty factor", off);
        if (is_numeric(tok)) {
            if (path) throw ParseError("scalar after path factor", off);
            coef *= Scalar::parse(tok, f);
        } else {
            Path p = resolve_factor(q, tok, off);
            if (!path) {
                path = p;
            } else {
                auto c = compose(*path, p);
                if (!c) throw ParseError("non-composable path '" + std::string(text) + "'", off);
                path = *c;
            }
        }
        if (star == std::string_view::npos) break;
        pos = star + 1;
    }
    return {coef, path};
}

}  // namespace

Path parse_path(const Quiver& q, std::string_view text)
{
    std::size_t off = 0;
    auto t = trim(text, off);
    auto [coef, path] = parse_product(q, t, off, Field{});
    if (!path || !coef.is_one()) throw ParseError("expected a path, got '" + std::string(text) + "'");
    return *path;
}

PathElement parse_element(const Quiver& q, std::string_view text, Field f)
{
    PathElement out;
    std::size_t i = 0;
    std::size_t n = text.size();
    bool any = false;
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= n) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else if (any) {
            throw ParseError("expected '+' or '-'", i);
        }
        std::size_t start = i;
        while (i < n && text[i] != '+' && text[i] != '-') ++i;
        std::size_t off = start;
        auto term = trim(text.substr(start, i - start), off);
        if (term.empty()) throw ParseError("empty term", start);
        auto [coef, path] = parse_product(q, term, off, f);
        if (!path) {
            if (coef.is_zero()) {
                any = true;
                continue;
            }
            throw ParseError("scalar term without a path", off);
        }
        out.add(*path, sign == 1 ? coef : -coef);
        any = true;
    }
    if (!any) throw ParseError("empty linear combination");
    return out;
}

}  // namespace koszulhh
