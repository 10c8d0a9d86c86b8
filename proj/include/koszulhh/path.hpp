#pragma once

#include "koszulhh/scalar.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace koszulhh {

using VertexId = int;
using ArrowId = int;

struct Arrow {
    std::string name;
    VertexId origin;
    VertexId terminal;
};

/// Finite quiver. Vertex and arrow order fixes every downstream index.
class Quiver {
public:
    Quiver() = default;
    Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int arrow_count() const { return static_cast<int>(arrows_.size()); }
    const std::string& vertex_name(VertexId v) const { return vertices_.at(v); }
    const Arrow& arrow(ArrowId a) const { return arrows_.at(a); }
    const std::vector<Arrow>& arrows() const { return arrows_; }

    std::optional<VertexId> find_vertex(std::string_view name) const;
    std::optional<ArrowId> find_arrow(std::string_view name) const;

private:
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
};

/// A path read left to right. Length-zero paths are vertex idempotents.
struct Path {
    VertexId origin = 0;
    VertexId terminal = 0;
    std::vector<ArrowId> arrows;

    static Path vertex(VertexId v) { return {v, v, {}}; }
    static Path arrow(const Quiver& q, ArrowId a);

    std::size_t length() const { return arrows.size(); }
    bool is_vertex() const { return arrows.empty(); }
    bool parallel_to(const Path& o) const { return origin == o.origin && terminal == o.terminal; }

    /// Arrows [pos, pos+len) as a path; pos/len must be in range.
    Path subpath(const Quiver& q, std::size_t pos, std::size_t len) const;
    /// True if `needle` occurs at arrow offset `pos`.
    bool occurs_at(const Path& needle, std::size_t pos) const;
    bool contains(const Path& needle) const;

    /// Canonical order: length, then arrow ids lexicographically, then endpoints.
    friend std::strong_ordering operator<=>(const Path& a, const Path& b);
    friend bool operator==(const Path& a, const Path& b) = default;
};

/// Concatenation p·q, or nullopt when t(p) != o(q).
std::optional<Path> compose(const Path& p, const Path& q);

/// Finite linear combination of paths with non-zero exact coefficients.
class PathElement {
public:
    using Terms = std::map<Path, Scalar>;

    PathElement() = default;
    explicit PathElement(const Path& p, Scalar c = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Scalar coefficient(const Path& p) const;

    void add(const Path& p, const Scalar& c);
    PathElement& operator+=(const PathElement& o);
    PathElement& operator-=(const PathElement& o);
    PathElement& operator*=(const Scalar& s);

    friend PathElement operator+(PathElement a, const PathElement& b) { return a += b; }
    friend PathElement operator-(PathElement a, const PathElement& b) { return a -= b; }
    friend PathElement operator*(PathElement a, const Scalar& s) { return a *= s; }
    friend PathElement operator*(const Scalar& s, PathElement a) { return a *= s; }
    PathElement operator-() const { return *this * Scalar(-1); }

    friend bool operator==(const PathElement&, const PathElement&) = default;

    /// Term with the largest length; among those, the smallest arrow sequence.
    const Path& leading_path() const;

private:
    Terms terms_;
};

/// Bilinear extension of compose (product in kQ).
PathElement multiply(const PathElement& x, const PathElement& y);

struct UniformPart {
    VertexId origin;
    VertexId terminal;
    std::size_t length;
    PathElement element;
};

/// Split into maximal summands sharing origin, terminal and length.
std::vector<UniformPart> uniform_parts(const PathElement& x);

bool is_uniform(const PathElement& x);

std::string format_path(const Quiver& q, const Path& p);
std::string format_element(const Quiver& q, const PathElement& x);
Path parse_path(const Quiver& q, std::string_view text);
PathElement parse_element(const Quiver& q, std::string_view text, Field f = {});

}  // namespace koszulhh
