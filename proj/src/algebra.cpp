#include "koszulhh/algebra.hpp"

#include "koszulhh/errors.hpp"

namespace koszulhh {

using nlohmann::json;

PresentedAlgebra::PresentedAlgebra(Quiver q, Field f, std::vector<PathElement> rels)
    : quiver(std::move(q)), field(f), relations(std::move(rels))
{
    quadratic = true;
    for (std::size_t i = 0; i < relations.size(); ++i) {
        const auto& r = relations[i];
        if (r.is_zero()) throw ParseError("relation " + std::to_string(i) + " is zero");
        for (const auto& [p, c] : r.terms())
            if (p.origin != r.terms().begin()->first.origin || p.terminal != r.terms().begin()->first.terminal)
                throw ParseError("relation " + std::to_string(i) + " is not uniform (paths not parallel)");
        for (const auto& [p, c] : r.terms())
            if (p.length() != 2) quadratic = false;
    }
}

Field parse_field(const json& j)
{
    if (j.is_string()) {
        if (j.get<std::string>() == "Q") return Field::rationals();
        throw ParseError("unknown field '" + j.get<std::string>() + "'");
    }
    if (j.is_object() && j.contains("Fp") && j["Fp"].is_number_integer()) {
        auto p = j["Fp"].get<long long>();
        if (p <= 0) throw PreconditionError("modulus must be positive");
        return Field::prime(static_cast<std::uint64_t>(p));
    }
    throw ParseError("field must be \"Q\" or {\"Fp\": p}");
}

Field parse_field_flag(std::string_view text)
{
    if (text == "Q") return Field::rationals();
    if (text.starts_with("Fp:")) {
        std::string digits(text.substr(3));
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad field flag '" + std::string(text) + "'");
        return Field::prime(std::stoull(digits));
    }
    throw ParseError("bad field flag '" + std::string(text) + "' (expected Q or Fp:p)");
}

SpecDocument parse_spec(std::string_view text) { return parse_spec(text, std::nullopt); }

SpecDocument parse_spec(std::string_view text, std::optional<Field> field_override)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON syntax error: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ParseError("spec document must be a JSON object");

    try {
        Field field = field_override ? *field_override : parse_field(doc.value("field", json("Q")));

        std::vector<std::string> vertices;
        for (const auto& v : doc.at("vertices")) vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());

        std::vector<Arrow> arrows;
        std::vector<std::string> names(vertices);
        auto vertex_index = [&](const json& j, const std::string& arrow) {
            std::string name = j.is_string() ? j.get<std::string>() : j.dump();
            for (std::size_t i = 0; i < vertices.size(); ++i)
                if (vertices[i] == name) return static_cast<VertexId>(i);
            throw ParseError("arrow '" + arrow + "' references unknown vertex '" + name + "'");
        };
        for (const auto& a : doc.value("arrows", json::array())) {
            std::string name = a.at("name").get<std::string>();
            arrows.push_back({name, vertex_index(a.at("from"), name), vertex_index(a.at("to"), name)});
        }
        Quiver quiver(std::move(vertices), std::move(arrows));

        std::vector<PathElement> rels;
        for (const auto& r : doc.value("relations", json::array())) {
            std::string raw = r.get<std::string>();
            std::size_t at = text.find("\"" + raw + "\"");
            if (at != std::string_view::npos) ++at;
            try {
                rels.push_back(parse_element(quiver, raw, field));
                if (rels.back().is_zero()) throw ParseError("zero relation");
                if (!is_uniform(rels.back())) throw ParseError("not uniform");
            } catch (const ParseError& e) {
                std::size_t pos = e.position() != ParseError::npos && at != std::string_view::npos ? at + e.position() : at;
                std::string msg = e.what();
                if (e.position() != ParseError::npos) msg = msg.substr(0, msg.rfind(" (at offset"));
                throw ParseError("relation \"" + raw + "\": " + msg, pos);
            }
        }

        SpecDocument out{PresentedAlgebra(std::move(quiver), field, std::move(rels)), {}, std::nullopt};
        for (const auto& r : doc.value("reduction_rules", json::array()))
            out.reduction_rules.push_back({r.at("lhs").get<std::string>(), r.at("rhs").get<std::string>()});
        if (doc.contains("resolution")) out.resolution = doc["resolution"];
        return out;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed spec document: ") + e.what());
    }
}

}  // namespace koszulhh
