#include "test_support.hpp"

#include "koszulhh/errors.hpp"
#include "koszulhh/homotopy.hpp"

#include <doctest.h>

using namespace koszulhh;

namespace {

KComplex complex_of(const std::string& file, int N)
{
    auto doc = load_data(file);
    return build_koszul(std::make_shared<const ReductionSystem>(reduction_system_for(doc)), N);
}

KComplex truncated_cubic()
{
    auto doc = load_data("truncated_cubic.json");
    auto R = std::make_shared<const ReductionSystem>(reduction_system_for(doc));
    return load_manual_resolution(R, *doc.resolution);
}

Cochain cochain(const KComplex& K, int n, std::vector<std::string> values)
{
    return cochain_from_json(K, nlohmann::json{{"degree", n}, {"values", values}});
}

struct Entry {
    int m;
    std::size_t r, target;
    std::string left, right;
    long long scalar;
};

HomotopyLifting lifting(const KComplex& K, int n, int maxdeg, const std::vector<Entry>& entries)
{
    HomotopyLifting psi{n, maxdeg, {}};
    psi.table.resize(static_cast<std::size_t>(maxdeg) + 1);
    for (int m = n; m <= maxdeg; ++m) psi.table[static_cast<std::size_t>(m)].resize(K.count(m));
    // An empty coefficient is the vertex at that end of ε^m_r.
    for (const auto& e : entries) {
        const auto& g = K.gen(e.m, e.r);
        Path left = e.left.empty() ? Path::vertex(g.origin) : parse_path(K.quiver(), e.left);
        Path right = e.right.empty() ? Path::vertex(g.terminal) : parse_path(K.quiver(), e.right);
        psi.table[static_cast<std::size_t>(e.m)][e.r].push_back({e.target, left, right, Scalar(e.scalar)});
    }
    return psi;
}

std::string value(const KComplex& K, const HomotopyLifting& psi, int m, std::size_t r)
{
    auto j = lifting_to_json(K, psi);
    for (const auto& e : j["maps"])
        if (e["degree"] == m && e["index"] == r) return e["value"];
    return "missing";
}

bool same_terms(const HomotopyLifting& a, const HomotopyLifting& b, int from, int to)
{
    for (int m = from; m <= to; ++m) {
        auto ra = a.table.at(static_cast<std::size_t>(m)), rb = b.table.at(static_cast<std::size_t>(m));
        if (ra.size() != rb.size()) return false;
        for (std::size_t r = 0; r < ra.size(); ++r) {
            auto key = [](const LiftTerm& t) { return std::tie(t.target, t.left, t.right); };
            auto less = [&](const LiftTerm& x, const LiftTerm& y) { return key(x) < key(y); };
            std::sort(ra[r].begin(), ra[r].end(), less);
            std::sort(rb[r].begin(), rb[r].end(), less);
            if (ra[r] != rb[r]) return false;
        }
    }
    return true;
}

HomotopyLifting truncate(HomotopyLifting psi, int maxdeg)
{
    psi.max_degree = maxdeg;
    psi.table.resize(static_cast<std::size_t>(std::max(maxdeg, 0)) + 1);
    return psi;
}

const std::vector<std::vector<std::string>> a1_representatives = {
    {"a", "0", "0", "0"}, {"a*b", "0", "0", "0"}, {"0", "a*b", "0", "0"}, {"0", "0", "a", "0"}, {"0", "0", "e_1", "0"}};

}  // namespace

TEST_CASE("dual numbers: liftings of x in degrees 1 and 2")
{
    auto K = complex_of("dual_numbers.json", 6);
    auto eta = cochain(K, 1, {"x"});
    auto psi = solve_homotopy_lifting(K, eta, 6);
    CHECK(verify_homotopy(K, psi, eta).ok());
    for (int m = 1; m <= 6; ++m) {
        auto B = scalar_lift(K, psi, m);
        REQUIRE(B);
        CHECK((*B)[0][0] == Scalar(m));
    }

    auto chi = cochain(K, 2, {"x"});
    auto psi_chi = solve_homotopy_lifting(K, chi, 6);
    CHECK(verify_homotopy(K, psi_chi, chi).ok());
    for (int m = 2; m <= 6; ++m) CHECK(value(K, psi_chi, m, 0) == (m % 2 == 0 ? "E" + std::to_string(m - 1) + "_0" : "0"));
}

TEST_CASE("dual numbers: recurrence reproduces b = m on both branches")
{
    auto K = complex_of("dual_numbers.json", 6);
    auto eta = cochain(K, 1, {"x"});
    ScalarLift prev;
    for (int m = 1; m <= 6; ++m) {
        auto step = recurrence_step(K, eta, m, prev);
        CHECK(step.b[0][0] == Scalar(m));
        CHECK(step.witness.left_branch == step.b);
        CHECK(step.witness.right_branch == step.b);
        CHECK_FALSE(step.witness.identities.empty());
        prev = step.b;
    }
}

TEST_CASE("truncated cubic: lifting of alpha")
{
    auto K = truncated_cubic();
    auto alpha = cochain(K, 1, {"x"});
    auto psi = solve_homotopy_lifting(K, alpha, 6);
    CHECK(verify_homotopy(K, psi, alpha).ok());
    for (int m = 1; m <= 6; ++m) {
        auto B = scalar_lift(K, psi, m);
        REQUIRE(B);
        CHECK((*B)[0][0] == Scalar(m % 2 == 0 ? -3 * (m / 2) : -3 * (m / 2) - 1));
    }

    std::vector<Entry> closed;
    for (int m = 1; m <= 5; ++m) closed.push_back({m, 0, 0, "", "", m % 2 == 0 ? -3 * (m / 2) : -3 * (m / 2) - 1});
    CHECK(verify_homotopy(K, lifting(K, 1, 5, closed), alpha).ok());
}

TEST_CASE("truncated cubic: recurrence in odd degrees")
{
    auto K = truncated_cubic();
    auto alpha = cochain(K, 1, {"x"});
    for (int k = 0; 2 * k + 1 <= 5; ++k) {
        ScalarLift prev;
        if (k > 0) prev = {{Scalar(-3 * k)}};
        auto step = recurrence_step(K, alpha, 2 * k + 1, prev);
        CHECK(step.b[0][0] == Scalar(-3 * k - 1));
    }
    // even-degree differentials carry x^2 coefficients
    CHECK_THROWS_AS(recurrence_step(K, alpha, 2, {{Scalar(-1)}}), MathError);
}

TEST_CASE("anticommuting: theta = (0, y)")
{
    auto K = complex_of("anticommuting.json", 4);
    auto theta = cochain(K, 1, {"0", "y"});
    CHECK(is_cocycle(K, theta));
    auto psi = solve_homotopy_lifting(K, theta, 3);
    CHECK(verify_homotopy(K, psi, theta).ok());
    CHECK(value(K, psi, 1, 0) == "0");
    CHECK(value(K, psi, 1, 1) == "E1_1");
    CHECK(value(K, psi, 2, 0) == "0");
    CHECK(value(K, psi, 2, 1) == "E2_1");

    auto step = recurrence_step(K, theta, 2, *scalar_lift(K, psi, 1));
    CHECK(step.b[1][1] == Scalar(1));
    CHECK(step.b == *scalar_lift(K, psi, 2));

    auto br = bracket(K, theta, theta, psi, psi);
    CHECK(br.result.is_zero());
    CHECK_FALSE(br.reduced);  // infinite-dimensional
}

TEST_CASE("A1: reference liftings that the solver reproduces")
{
    auto K = complex_of("a1.json", 4);
    auto eta = cochain(K, 2, {"a", "0", "0", "0"});
    auto table_eta = lifting(K, 2, 3, {{2, 0, 0, "", "", 1}, {3, 1, 1, "", "", 1}, {3, 4, 3, "", "", 1}});
    CHECK(verify_homotopy(K, table_eta, eta).ok());
    CHECK(same_terms(solve_homotopy_lifting(K, eta, 3), table_eta, 2, 3));

    auto chi = cochain(K, 2, {"0", "0", "a", "0"});
    auto table_chi = lifting(K, 2, 3, {{2, 2, 0, "", "", 1}, {3, 3, 1, "", "", 1}});
    CHECK(verify_homotopy(K, table_chi, chi).ok());
    CHECK(same_terms(solve_homotopy_lifting(K, chi, 3), table_chi, 2, 3));

    auto sigma = cochain(K, 2, {"0", "0", "e_1", "0"});
    auto psi_sigma = solve_homotopy_lifting(K, sigma, 4);
    CHECK(same_terms(psi_sigma, lifting(K, 2, 4, {}), 2, 4));
    CHECK(verify_homotopy(K, psi_sigma, sigma).ok());
}

TEST_CASE("A1: reference liftings of ab cocycles agree in degree 2 only")
{
    auto K = complex_of("a1.json", 4);
    auto eta = cochain(K, 2, {"a*b", "0", "0", "0"});
    auto table = lifting(K, 2, 3, {{2, 0, 1, "a", "", 1}, {2, 0, 0, "", "b", 1}, {3, 0, 1, "a", "", -1},
                                   {3, 4, 3, "b", "", 1}, {3, 4, 1, "", "c", 1}});
    auto solved = solve_homotopy_lifting(K, eta, 3);
    CHECK(verify_homotopy(K, solved, eta).ok());
    CHECK(verify_homotopy(K, truncate(table, 2), eta).ok());
    auto report = verify_homotopy(K, table, eta);
    CHECK_FALSE(report.ok());
    std::vector<std::size_t> failing;
    for (const auto& row : report.rows)
        if (row.residual != "0") failing.push_back(row.index);
    CHECK(failing == std::vector<std::size_t>{1});

    auto extended = extend_homotopy_lifting(K, eta, truncate(table, 2), 3);
    CHECK(verify_homotopy(K, extended, eta).ok());
    CHECK(value(K, extended, 3, 4) == "E2_1*c + b*E2_3");
    CHECK(value(K, extended, 3, 1) == "E2_1*b");

    auto chi = cochain(K, 2, {"0", "a*b", "0", "0"});
    auto table_chi = lifting(K, 2, 3, {{2, 1, 1, "a", "", 1}, {2, 1, 0, "", "b", 1}, {3, 1, 1, "a", "", 1},
                                       {3, 1, 0, "", "b", -2}, {3, 2, 1, "", "b", 1}});
    CHECK(verify_homotopy(K, truncate(table_chi, 2), chi).ok());
    failing.clear();
    for (const auto& row : verify_homotopy(K, table_chi, chi).rows)
        if (row.residual != "0") failing.push_back(row.index);
    CHECK(failing == std::vector<std::size_t>{2});
    auto extended_chi = extend_homotopy_lifting(K, chi, truncate(table_chi, 2), 3);
    CHECK(verify_homotopy(K, extended_chi, chi).ok());
    CHECK(value(K, extended_chi, 3, 2) == "E2_1*b + 2*b*E2_1 + 2*E2_2*a");
}

TEST_CASE("A1: Maurer-Cartan elements")
{
    auto K = complex_of("a1.json", 4);
    for (const auto& v : a1_representatives) {
        auto g = cochain(K, 2, v);
        auto psi = solve_homotopy_lifting(K, g, 3);
        CHECK(verify_homotopy(K, psi, g).ok());
        auto mc = maurer_cartan_check(K, g, psi);
        CHECK(mc.holds);
        CHECK(mc.entries.size() == 5);
    }
    auto z = zero_cochain(K, 2);
    CHECK(maurer_cartan_check(K, z, solve_homotopy_lifting(K, z, 3)).holds);

    auto g = cochain(K, 2, {"a", "0", "0", "0"});
    CHECK_THROWS_AS(maurer_cartan_check(K, g, lifting(K, 2, 3, {})), PreconditionError);
    CHECK_THROWS_AS(cochain(K, 2, {"0", "0", "0", "a"}), PreconditionError);
    CHECK_THROWS_AS(maurer_cartan_check(K, cochain(K, 1, {"a", "0", "0"}), lifting(K, 1, 3, {})), PreconditionError);
}

TEST_CASE("A1: brackets of the representatives")
{
    auto K = complex_of("a1.json", 4);
    std::vector<Cochain> reps;
    std::vector<HomotopyLifting> psis;
    for (const auto& v : a1_representatives) {
        reps.push_back(cochain(K, 2, v));
        psis.push_back(solve_homotopy_lifting(K, reps.back(), 3));
    }
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = 0; j < reps.size(); ++j) {
            auto ij = bracket(K, reps[i], reps[j], psis[i], psis[j]);
            auto ji = bracket(K, reps[j], reps[i], psis[j], psis[i]);
            CHECK(ij.sign == Scalar(-1));
            REQUIRE(ij.reduced);
            Cochain sum = ij.result;
            for (std::size_t k = 0; k < sum.values.size(); ++k) sum.values[k] += ji.result.values[k] * ij.sign;
            CHECK(cobound_reduce(K, sum).is_zero());
            if (i == j) CHECK(ij.reduced->is_zero());
        }
    auto eta = bracket(K, reps[0], reps[0], psis[0], psis[0]);
    CHECK(eta.result.is_zero());
    CHECK(bracket(K, reps[4], reps[4], psis[4], psis[4]).result.is_zero());
}

TEST_CASE("solver edge cases")
{
    auto K = complex_of("a1.json", 4);
    auto eta = cochain(K, 2, {"a", "0", "0", "0"});
    auto report = verify_homotopy(K, lifting(K, 2, 3, {}), eta);
    CHECK_FALSE(report.ok());

    auto mixed = cochain(K, 2, {"a + a*b", "0", "0", "0"});
    auto psi = solve_homotopy_lifting(K, mixed, 3);
    CHECK(verify_homotopy(K, psi, mixed).ok());
    CHECK(homogeneous_parts(K, mixed).size() == 2);

    CHECK_THROWS_AS(solve_homotopy_lifting(K, cochain(K, 2, {"0", "e_1", "0", "0"}), 3), PreconditionError);
    CHECK_THROWS_AS(solve_homotopy_lifting(K, eta, 5), PreconditionError);

    auto again = solve_homotopy_lifting(K, eta, 3);
    CHECK(lifting_to_json(K, again) == lifting_to_json(K, solve_homotopy_lifting(K, eta, 3)));
}
