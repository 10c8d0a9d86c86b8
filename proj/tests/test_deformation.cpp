#include "test_support.hpp"

#include "koszulhh/deformation.hpp"
#include "koszulhh/errors.hpp"

#include <doctest.h>

#include <set>

using namespace koszulhh;

namespace {

std::shared_ptr<const ReductionSystem> system_of(const std::string& file, std::optional<Field> f = std::nullopt)
{
    auto doc = parse_spec(read_data(file), f);
    return std::make_shared<const ReductionSystem>(reduction_system_for(doc));
}

std::vector<std::string> names(const FirstOrderDeformation& phi)
{
    std::vector<std::string> out;
    for (const auto& p : phi.params) out.push_back(p.name);
    return out;
}

std::vector<std::string> names(const FirstOrderDeformation& phi, const std::vector<ParamId>& ids)
{
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(phi.params[id].name);
    return out;
}

Path path(const ReductionSystem& R, const std::string& s) { return parse_path(R.quiver(), s); }

}  // namespace

TEST_CASE("symbolic parameters are attached to parallel irreducible paths")
{
    auto R = system_of("a1.json");
    auto phi = symbolic_deformation(*R);
    CHECK(phi.params.size() == 14);
    for (const auto& p : phi.params) CHECK(p.path.parallel_to(R->rules()[p.rule].lhs));
    CHECK(format_sym(R->quiver(), phi.tilde[3], names(phi)) == "t(a*c;c)*c + t(a*c;b*c)*b*c");
}

TEST_CASE("first-order star products on A1")
{
    auto R = system_of("a1.json");
    auto phi = symbolic_deformation(*R);
    auto n = names(phi);
    auto aa = star_first_order(path(*R, "a"), path(*R, "a"), phi, *R);
    CHECK(aa.lambda.is_zero());
    CHECK(format_sym(R->quiver(), aa.tau, n) == "t(a*a;e_1)*e_1 + t(a*a;a)*a + t(a*a;b)*b + t(a*a;b*a)*b*a");

    auto ba = star_first_order(path(*R, "b"), path(*R, "a"), phi, *R);
    CHECK(format_element(R->quiver(), ba.lambda) == "b*a");
    CHECK(ba.tau.is_zero());

    StarResult a{PathElement(path(*R, "a")), {}};
    auto a_aa = star(a, aa, phi, *R);
    CHECK(a_aa.lambda.is_zero());
    CHECK(format_sym(R->quiver(), a_aa.tau, n) == "t(a*a;e_1)*a + t(a*a;b)*b*a");

    // a ⋆ ba fires ab, then aa
    auto a_ba = star_first_order(path(*R, "a"), path(*R, "b*a"), phi, *R);
    CHECK(a_ba.lambda.is_zero());
    CHECK(format_sym(R->quiver(), a_ba.tau, n) == "t(a*b;e_1)*a + t(a*a;e_1)*b + (t(a*a;a) + t(a*b;b))*b*a");

    CHECK_THROWS_AS(star_first_order(path(*R, "a*a"), path(*R, "b"), phi, *R), PreconditionError);
}

TEST_CASE("Maurer-Cartan constraints on A1")
{
    auto R = system_of("a1.json");
    auto family = solve_mc_first_order(*R);
    const auto& phi = family.symbolic;
    const auto& c = family.constraints;
    CHECK(c.consistent);
    CHECK(c.lambda_failures.empty());
    CHECK(c.equations.size() == 6);
    std::set<std::string> gone;
    for (const auto& [id, e] : c.substitution) {
        CHECK(e.is_zero());
        gone.insert(phi.params[id].name);
    }
    CHECK(gone == std::set<std::string>{"t(a*a;e_1)", "t(a*a;b)", "t(a*b;e_1)", "t(a*b;a)", "t(a*b;b)"});
    CHECK(family.dimension() == 9);
    CHECK(format_sym(R->quiver(), family.tilde[2], names(phi)) == "t(a*b;b*a)*b*a");
}

TEST_CASE("undeformed product gives no constraints")
{
    auto R = system_of("a1.json");
    auto phi = symbolic_deformation(*R);
    for (auto& t : phi.tilde) t = SymElement{};
    auto c = mc_constraints(*R, phi);
    CHECK(c.equations.empty());
    CHECK(c.consistent);
    CHECK(c.free.size() == phi.params.size());
}

TEST_CASE("dual numbers family")
{
    auto R = system_of("dual_numbers.json");
    auto family = solve_mc_first_order(*R);
    CHECK(family.constraints.equations.empty());
    CHECK(family.dimension() == 2);
    auto reduced = gauge_reduce(family, *R);
    CHECK(format_sym(R->quiver(), reduced.shifts[0], {"th(x;e_1)", "th(x;x)"}) == "2*th(x;e_1)*x");
    CHECK(reduced.dimension() == 1);
    auto K = build_koszul(R, 4);
    CHECK(reduced.dimension() == cohomology_basis(K, 2).dimension());
    CHECK(crosscheck_mc(K, family, reduced).ok());
}

TEST_CASE("path algebra without relations")
{
    auto doc = parse_spec(R"({"vertices": ["1", "2"], "arrows": [{"name": "u", "from": "1", "to": "2"}], "relations": []})");
    ReductionSystem R = reduction_system_for(doc);
    auto family = solve_mc_first_order(R);
    CHECK(family.symbolic.params.empty());
    CHECK(family.dimension() == 0);
    CHECK(gauge_reduce(family, R).dimension() == 0);
}

TEST_CASE("gauge reduction on A1")
{
    auto R = system_of("a1.json");
    auto family = solve_mc_first_order(*R);
    auto reduced = gauge_reduce(family, *R);
    std::vector<std::string> g;
    for (const auto& p : reduced.gauge) g.push_back(p.name);
    CHECK(g.size() == 10);
    const Quiver& q = R->quiver();
    CHECK(format_sym(q, reduced.shifts[0], g) == "2*th(a;e_1)*a + 2*th(a;b)*b*a");
    CHECK(format_sym(q, reduced.shifts[1], g) == "2*th(b;e_1)*b + 2*th(b;a)*b*a");
    CHECK(format_sym(q, reduced.shifts[2], g) == "0");
    CHECK(format_sym(q, reduced.shifts[3], g) == "th(a;e_1)*c + th(a;b)*b*c");
    CHECK(reduced.eliminated.size() == 4);
    CHECK(reduced.dimension() == 5);
    CHECK(names(family.symbolic, reduced.free) ==
          std::vector<std::string>{"t(a*a;a)", "t(a*a;b*a)", "t(b*b;e_1)", "t(b*b;a)", "t(a*b;b*a)"});

    // Θ = 0 shifts nothing
    std::vector<Scalar> zero(g.size(), Scalar(0));
    for (const auto& s : reduced.shifts) CHECK(s.evaluate(zero, R->field()).is_zero());

    auto K = build_koszul(R, 4);
    CHECK(reduced.dimension() == cohomology_basis(K, 2).dimension());
}

TEST_CASE("gauge reduction refuses characteristic 2")
{
    auto R = system_of("a1.json", Field::prime(2));
    auto family = solve_mc_first_order(*R);
    CHECK_THROWS_AS(gauge_reduce(family, *R), PreconditionError);
}

TEST_CASE("crosscheck against the homotopy-lifting Maurer-Cartan test")
{
    auto R = system_of("a1.json");
    auto family = solve_mc_first_order(*R);
    auto reduced = gauge_reduce(family, *R);
    auto K = build_koszul(R, 4);
    auto report = crosscheck_mc(K, family, reduced);
    CHECK(report.ok());
    std::set<std::string> got;
    for (const auto& e : report.entries) got.insert(format_cochain(K, e.cochain));
    CHECK(got == std::set<std::string>{"(a, 0, 0, 0)", "(b*a, 0, 0, 0)", "(0, 0, e_1, 0)", "(0, 0, a, 0)",
                                       "(0, b*a, 0, 0)"});

    auto D = build_koszul(system_of("dual_numbers.json"), 4);
    CHECK_THROWS_AS(crosscheck_mc(D, family, reduced), PreconditionError);
}

TEST_CASE("family members: quotient dimension matches HH2")
{
    for (long long qv : {2LL, -1LL, 3LL}) {
        auto R = std::make_shared<const ReductionSystem>(default_reduction_system(family_algebra(Scalar(qv))));
        auto family = solve_mc_first_order(*R);
        CHECK(family.constraints.lambda_failures.empty());
        auto reduced = gauge_reduce(family, *R);
        auto K = build_koszul(R, 4);
        CAPTURE(qv);
        CHECK(reduced.dimension() == cohomology_basis(K, 2).dimension());
        auto report = crosscheck_mc(K, family, reduced);
        for (const auto& e : report.entries) {
            CHECK(e.cocycle);
            if (e.maurer_cartan) continue;
            // first-order direction with a nonzero second-order obstruction
            CHECK(qv != -1);
            CHECK(e.name == "t(a*a;a)");
            auto psi = solve_homotopy_lifting(K, e.cochain, 3);
            auto br = bracket(K, e.cochain, e.cochain, psi, psi);
            CHECK_FALSE(is_coboundary(cohomology_basis(K, 3), br.result));
        }
        CHECK(report.ok() == (qv == -1));
    }
}
