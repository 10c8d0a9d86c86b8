#pragma once

#include "koszulhh/path.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace koszulhh {

/// kQ/I with I generated by uniform relations.
struct PresentedAlgebra {
    Quiver quiver;
    Field field;
    std::vector<PathElement> relations;
    bool quadratic = false;

    /// Validates uniformity and sets the quadratic flag.
    PresentedAlgebra(Quiver q, Field f, std::vector<PathElement> rels);
    PresentedAlgebra() = default;

    Scalar scalar(long long v) const { return Scalar(v).in(field); }
};

struct RuleText {
    std::string lhs;
    std::string rhs;
};

/// Parsed quiver spec document.
struct SpecDocument {
    PresentedAlgebra algebra;
    std::vector<RuleText> reduction_rules;
    std::optional<nlohmann::json> resolution;
};

/// Parses the JSON quiver spec document. Throws ParseError with a byte offset
/// for JSON syntax errors, PreconditionError for a non-prime modulus.
SpecDocument parse_spec(std::string_view text);

/// Same, with an explicit field overriding the document's `field`.
SpecDocument parse_spec(std::string_view text, std::optional<Field> field_override);

Field parse_field(const nlohmann::json& j);
Field parse_field_flag(std::string_view text);  // "Q" or "Fp:p"

}  // namespace koszulhh
