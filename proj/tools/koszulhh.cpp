// koszulhh: command-line front end for the koszulhh library.

#include "koszulhh/algebra.hpp"
#include "koszulhh/cohomology.hpp"
#include "koszulhh/deformation.hpp"
#include "koszulhh/errors.hpp"
#include "koszulhh/homotopy.hpp"
#include "koszulhh/reduction.hpp"
#include "koszulhh/resolution.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace koszulhh;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::string input;
    std::string command;
    int max_degree = 5;
    std::string field;
    std::string format = "json";
    std::optional<int> degree;
    std::string cocycle, left, right;
    bool crosscheck = false;
    Limits limits;
    std::size_t max_block = KoszulOptions{}.max_block;
};

struct Outcome {
    json report;
    bool math_ok = true;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A cochain argument is a file name or, failing that, inline JSON.
json read_cochain_arg(const std::string& arg, const char* flag)
{
    if (arg.empty()) throw PreconditionError(std::string(flag) + " is required");
    std::string text;
    if (std::filesystem::exists(arg)) text = read_file(arg);
    else if (arg.front() == '[' || arg.front() == '{') text = arg;
    else throw PreconditionError("cannot read '" + arg + "'");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(flag) + ": " + e.what(), e.byte);
    }
}

std::string str(const Scalar& s)
{
    std::ostringstream os;
    os << s;
    return os.str();
}

class Session {
public:
    explicit Session(const RunConfig& cfg) : cfg_(cfg)
    {
        std::optional<Field> field;
        if (!cfg.field.empty()) field = parse_field_flag(cfg.field);
        doc_ = parse_spec(read_file(cfg.input), field);
    }

    const SpecDocument& doc() const { return doc_; }

    std::shared_ptr<const ReductionSystem> system()
    {
        if (!R_) R_ = std::make_shared<const ReductionSystem>(reduction_system_for(doc_, cfg_.limits));
        return R_;
    }

    const KComplex& complex()
    {
        if (!K_) {
            if (doc_.resolution) K_ = load_manual_resolution_unchecked(system(), *doc_.resolution);
            else {
                if (cfg_.max_degree < 1) throw PreconditionError("--max-degree must be at least 1");
                KoszulOptions opts;
                opts.max_block = cfg_.max_block;
                K_ = build_koszul(system(), cfg_.max_degree, opts);
            }
        }
        return *K_;
    }

    Cochain cochain(const std::string& arg, const char* flag)
    {
        return cochain_from_json(complex(), read_cochain_arg(arg, flag));
    }

private:
    const RunConfig& cfg_;
    SpecDocument doc_;
    std::shared_ptr<const ReductionSystem> R_;
    std::optional<KComplex> K_;
};

json rules_json(const ReductionSystem& R)
{
    json rules = json::array();
    for (const auto& r : R.rules())
        rules.push_back({{"lhs", format_path(R.quiver(), r.lhs)}, {"rhs", format_element(R.quiver(), r.rhs)}});
    return rules;
}

Outcome cmd_validate(Session& s)
{
    const auto& A = s.doc().algebra;
    const Quiver& Q = A.quiver;
    json vertices = json::array(), arrows = json::array(), relations = json::array();
    for (int v = 0; v < Q.vertex_count(); ++v) vertices.push_back(Q.vertex_name(static_cast<VertexId>(v)));
    for (const auto& a : Q.arrows())
        arrows.push_back({{"name", a.name}, {"from", Q.vertex_name(a.origin)}, {"to", Q.vertex_name(a.terminal)}});
    for (const auto& r : A.relations) relations.push_back(format_element(Q, r));
    return {{{"field", A.field.name()},
             {"vertices", vertices},
             {"arrows", arrows},
             {"relations", relations},
             {"quadratic", A.quadratic},
             {"manual_resolution", s.doc().resolution.has_value()},
             {"valid", true}},
            true};
}

Outcome cmd_diamond(Session& s)
{
    const auto& R = *s.system();
    const Quiver& Q = R.quiver();
    auto report = check_diamond(R);
    json overlaps = json::array(), failures = json::array();
    for (const auto& o : report.overlaps)
        overlaps.push_back({{"word", format_path(Q, o.word(Q))},
                            {"left_rule", format_path(Q, R.rules()[o.left_rule].lhs)},
                            {"right_rule", format_path(Q, R.rules()[o.right_rule].lhs)}});
    for (const auto& f : report.failures)
        failures.push_back({{"word", format_path(Q, f.overlap.word(Q))},
                            {"left_branch", format_element(Q, f.left_branch)},
                            {"right_branch", format_element(Q, f.right_branch)}});
    return {{{"rules", rules_json(R)}, {"overlaps", overlaps}, {"resolvable", report.resolvable}, {"failures", failures}},
            report.resolvable};
}

Outcome cmd_basis(Session& s)
{
    const auto& R = *s.system();
    auto B = irr_basis(R);
    json paths = json::array();
    for (const auto& p : B.paths()) paths.push_back(format_path(R.quiver(), p));
    return {{{"dimension", B.size()}, {"paths", paths}}, true};
}

Outcome cmd_resolution(Session& s)
{
    const auto& K = s.complex();
    auto report = verify_complex(K);
    json checks = json::array();
    for (const auto& e : report.entries) {
        json row{{"property", e.property}, {"degree", e.degree}, {"pass", e.pass}};
        if (!e.pass) row["witness"] = e.witness;
        checks.push_back(row);
    }
    return {{{"resolution", export_resolution(K)}, {"verified", report.ok()}, {"checks", checks}}, report.ok()};
}

json hh_row(const KComplex& K, int n)
{
    auto H = cohomology_basis(K, n);
    json reps = json::array();
    for (const auto& c : H.representatives) reps.push_back(cochain_to_json(K, c)["values"]);
    return {{"degree", n},
            {"cochain_dim", H.space.dimension()},
            {"kernel_dim", H.kernel_dim},
            {"image_dim", H.image_dim},
            {"dimension", H.dimension()},
            {"representatives", reps}};
}

Outcome cmd_hh(Session& s, const RunConfig& cfg)
{
    const auto& K = s.complex();
    if (cfg.degree) return {hh_row(K, *cfg.degree), true};
    json rows = json::array();
    for (int n = 0; n < K.max_degree; ++n) rows.push_back(hh_row(K, n));
    return {{{"degrees", rows}}, true};
}

json recurrence_json(const KComplex& K, const Cochain& eta, const HomotopyLifting& psi)
{
    json rows = json::array();
    ScalarLift prev;
    for (int m = psi.n; m <= psi.max_degree; ++m) {
        json row{{"degree", m}};
        auto solved = scalar_lift(K, psi, m);
        try {
            RecurrenceResult step;
            try {
                step = recurrence_step(K, eta, m, prev);
            } catch (const PreconditionError& e) {
                return {{"applicable", false}, {"reason", e.what()}};
            }
            json b = json::array();
            for (const auto& r : step.b) {
                json line = json::array();
                for (const auto& x : r) line.push_back(str(x));
                b.push_back(line);
            }
            row["b"] = b;
            row["agrees"] = solved && *solved == step.b;
            prev = step.b;
        } catch (const MathError& e) {
            // Later degrees start from the solver's scalars.
            row["error"] = e.what();
            if (!solved) {
                rows.push_back(row);
                break;
            }
            prev = *solved;
        }
        rows.push_back(row);
    }
    return {{"applicable", true}, {"steps", rows}};
}

Outcome cmd_lift(Session& s, const RunConfig& cfg)
{
    const auto& K = s.complex();
    auto eta = s.cochain(cfg.cocycle, "--cocycle");
    auto psi = solve_homotopy_lifting(K, eta, K.max_degree);
    auto report = verify_homotopy(K, psi, eta);
    json failures = json::array();
    for (const auto& r : report.rows)
        if (r.residual != "0") failures.push_back({{"degree", r.degree}, {"index", r.index}, {"residual", r.residual}});
    return {{{"cocycle", cochain_to_json(K, eta)},
             {"lifting", lifting_to_json(K, psi)},
             {"verified", report.ok()},
             {"failures", failures},
             {"recurrence", recurrence_json(K, eta, psi)}},
            report.ok()};
}

Outcome cmd_bracket(Session& s, const RunConfig& cfg)
{
    const auto& K = s.complex();
    auto eta = s.cochain(cfg.left, "--left");
    auto theta = s.cochain(cfg.right, "--right");
    auto psi_eta = solve_homotopy_lifting(K, eta, K.max_degree);
    auto psi_theta = solve_homotopy_lifting(K, theta, K.max_degree);
    auto b = bracket(K, eta, theta, psi_eta, psi_theta);
    json out{{"left", cochain_to_json(K, eta)},
             {"right", cochain_to_json(K, theta)},
             {"degree", b.result.degree},
             {"sign", str(b.sign)},
             {"left_psi_right", cochain_to_json(K, b.eta_psi_theta)["values"]},
             {"right_psi_left", cochain_to_json(K, b.theta_psi_eta)["values"]},
             {"bracket", cochain_to_json(K, b.result)["values"]},
             {"reduced", b.reduced ? cochain_to_json(K, *b.reduced)["values"] : json(nullptr)}};
    if (b.reduced) out["is_coboundary"] = b.reduced->is_zero();
    return {out, true};
}

Outcome cmd_mc_check(Session& s, const RunConfig& cfg)
{
    const auto& K = s.complex();
    auto eta = s.cochain(cfg.cocycle, "--cocycle");
    auto psi = solve_homotopy_lifting(K, eta, std::min(K.max_degree, 3));
    auto mc = maurer_cartan_check(K, eta, psi);
    const Quiver& Q = K.quiver();
    json entries = json::array();
    for (const auto& e : mc.entries)
        entries.push_back({{"index", e.index},
                           {"d_eta", format_element(Q, e.d_eta)},
                           {"eta_psi_eta", format_element(Q, e.eta_psi_eta)},
                           {"sum", format_element(Q, e.sum)}});
    return {{{"cocycle", cochain_to_json(K, eta)}, {"holds", mc.holds}, {"entries", entries}}, mc.holds};
}

Outcome cmd_deform(Session& s, const RunConfig& cfg)
{
    const auto& R = *s.system();
    auto family = solve_mc_first_order(R);
    auto reduced = gauge_reduce(family, R);
    json out = deformation_to_json(R, family, reduced);
    bool ok = true;
    if (cfg.crosscheck) {
        auto report = crosscheck_mc(s.complex(), family, reduced);
        out["crosscheck"] = crosscheck_to_json(s.complex(), report);
        ok = report.ok();
    }
    return {out, ok};
}

Outcome dispatch(const RunConfig& cfg)
{
    Session s(cfg);
    if (cfg.command == "validate") return cmd_validate(s);
    if (cfg.command == "diamond") return cmd_diamond(s);
    if (cfg.command == "basis") return cmd_basis(s);
    if (cfg.command == "resolution") return cmd_resolution(s);
    if (cfg.command == "hh") return cmd_hh(s, cfg);
    if (cfg.command == "lift") return cmd_lift(s, cfg);
    if (cfg.command == "bracket") return cmd_bracket(s, cfg);
    if (cfg.command == "mc-check") return cmd_mc_check(s, cfg);
    if (cfg.command == "deform") return cmd_deform(s, cfg);
    throw PreconditionError("unknown subcommand '" + cfg.command + "'");
}

void print_text(std::ostream& os, const json& j, const std::string& indent)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = j.is_object() ? it.key() : "-";
        const json& v = *it;
        if (v.is_structured() && !v.empty()) {
            bool flat = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); });
            if (flat) {
                os << indent << key << ":";
                for (const auto& x : v) os << " " << (x.is_string() ? x.get<std::string>() : x.dump());
                os << "\n";
            } else {
                os << indent << key << ":\n";
                print_text(os, v, indent + "  ");
            }
        } else {
            os << indent << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

void emit(const RunConfig& cfg, json report, std::ostream& os)
{
    json out{{"schema_version", kSchemaVersion}, {"command", cfg.command}};
    for (auto& [k, v] : report.items()) out[k] = std::move(v);
    if (cfg.format == "text") print_text(os, out, "");
    else os << out.dump(2) << "\n";
}

int fail(const RunConfig& cfg, const std::string& kind, const std::string& message, int code)
{
    if (cfg.format == "json")
        std::cout << json{{"schema_version", kSchemaVersion}, {"command", cfg.command}, {"error", kind}, {"message", message}}
                         .dump(2)
                  << "\n";
    std::cerr << "koszulhh: " << message << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    CLI::App app{"Hochschild cohomology, homotopy lifting and deformations of Koszul quiver algebras"};
    app.require_subcommand(1, 1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "spec document (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--max-degree", cfg.max_degree, "top resolution degree")->capture_default_str();
        sub->add_option("--field", cfg.field, "Q or Fp:p, overrides the document");
        sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
        sub->add_option("--max-steps", cfg.limits.max_steps, "rewrite steps per normal form")->capture_default_str();
        sub->add_option("--max-basis", cfg.limits.max_basis, "irreducible basis size cap")->capture_default_str();
        sub->add_option("--max-block", cfg.max_block, "solver block size cap")->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "parse and check a spec document");
    auto* diamond = app.add_subcommand("diamond", "overlaps and resolvability of the reduction system");
    auto* basis = app.add_subcommand("basis", "irreducible path basis");
    auto* resolution = app.add_subcommand("resolution", "resolution scalar tables and verification");
    auto* hh = app.add_subcommand("hh", "Hochschild cohomology dimensions and representatives");
    auto* lift = app.add_subcommand("lift", "homotopy lifting map of a cocycle");
    auto* br = app.add_subcommand("bracket", "Gerstenhaber bracket of two cocycles");
    auto* mc = app.add_subcommand("mc-check", "Maurer-Cartan condition for a 2-cocycle");
    auto* deform = app.add_subcommand("deform", "first-order deformations via the star product");
    for (auto* sub : {validate, diamond, basis, resolution, hh, lift, br, mc, deform}) common(sub);

    hh->add_option("--degree", cfg.degree, "single cohomological degree");
    lift->add_option("--cocycle", cfg.cocycle, "cochain file or inline JSON")->required();
    mc->add_option("--cocycle", cfg.cocycle, "cochain file or inline JSON")->required();
    br->add_option("--left", cfg.left, "cochain file or inline JSON")->required();
    br->add_option("--right", cfg.right, "cochain file or inline JSON")->required();
    deform->add_flag("--crosscheck", cfg.crosscheck, "compare with homotopy-lifting Maurer-Cartan elements");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        auto outcome = dispatch(cfg);
        emit(cfg, std::move(outcome.report), std::cout);
        return outcome.math_ok ? 0 : 1;
    } catch (const ParseError& e) {
        return fail(cfg, "parse", e.what(), 2);
    } catch (const PreconditionError& e) {
        return fail(cfg, "precondition", e.what(), 2);
    } catch (const MathError& e) {
        return fail(cfg, "math", e.what(), 1);
    }
}
