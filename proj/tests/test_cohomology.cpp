#include "test_support.hpp"

#include "koszulhh/cohomology.hpp"
#include "koszulhh/errors.hpp"

#include <doctest.h>

using namespace koszulhh;

namespace {

KComplex complex_of(const std::string& file, int N, std::optional<Field> f = std::nullopt)
{
    auto doc = parse_spec(read_data(file), f);
    return build_koszul(std::make_shared<const ReductionSystem>(reduction_system_for(doc)), N);
}

Cochain cochain(const KComplex& K, int n, std::vector<std::string> values)
{
    nlohmann::json j = {{"degree", n}, {"values", values}};
    return cochain_from_json(K, j);
}

}  // namespace

TEST_CASE("cochain space dimensions")
{
    auto K = complex_of("a1.json", 4);
    CHECK(cochain_space(K, 0).dimension() == 5);
    CHECK(cochain_space(K, 1).dimension() == 10);
    CHECK(cochain_space(K, 2).dimension() == 14);
    CHECK(cochain_space(K, 3).dimension() == 18);

    auto D = complex_of("dual_numbers.json", 4);
    CHECK(cochain_space(D, 1).dimension() == 2);
    CHECK(cochain_space(D, 0).dimension() == 2);
}

TEST_CASE("induced matrices compose to zero")
{
    for (const char* file : {"a1.json", "dual_numbers.json"}) {
        auto K = complex_of(file, 5);
        for (int n = 0; n + 2 <= 5; ++n) CHECK((induced_matrix(K, n + 1) * induced_matrix(K, n)).is_zero());
    }
}

TEST_CASE("coboundary evaluation on A1")
{
    auto K = complex_of("a1.json", 4);
    auto d = coboundary(K, cochain(K, 2, {"0", "e_1", "0", "0"}));
    CHECK(format_cochain(K, d) == "(0, 2*a, -2*b, 0, 0)");
    CHECK(format_cochain(K, coboundary(K, cochain(K, 1, {"0", "1/2*a", "0"}))) == "(0, 0, b*a, 0)");
    CHECK(format_cochain(K, coboundary(K, cochain(K, 1, {"0", "1/2*e_1", "0"}))) == "(0, 0, b, 0)");
    CHECK(coboundary(K, zero_cochain(K, 2)).is_zero());
}

TEST_CASE("dual numbers cohomology")
{
    auto K = complex_of("dual_numbers.json", 5);
    CHECK(cohomology_basis(K, 0).dimension() == 2);
    for (int n = 1; n <= 4; ++n) CHECK(cohomology_basis(K, n).dimension() == 1);
    CHECK(format_cochain(K, cohomology_basis(K, 1).representatives[0]) == "(x)");
    CHECK(format_cochain(K, cohomology_basis(K, 2).representatives[0]) == "(e_1)");
    CHECK(is_cocycle(K, cochain(K, 1, {"e_1"})) == false);

    auto K2 = complex_of("dual_numbers.json", 5, Field::prime(2));
    for (int n = 1; n <= 4; ++n) CHECK(cohomology_basis(K2, n).dimension() == 2);
}

TEST_CASE("A1 second cohomology")
{
    auto K = complex_of("a1.json", 4);
    auto H = cohomology_basis(K, 2);
    CHECK(H.kernel_dim == 9);
    CHECK(H.image_dim == 4);
    REQUIRE(H.dimension() == 5);

    std::vector<std::vector<std::string>> single = {
        {"a", "0", "0", "0"}, {"a*b", "0", "0", "0"}, {"0", "a*b", "0", "0"}, {"0", "0", "a", "0"},
        {"0", "0", "e_1", "0"}, {"0", "0", "b", "0"}, {"0", "0", "a*b", "0"}, {"0", "0", "0", "c"},
        {"0", "0", "0", "b*c"}};
    std::size_t coboundaries = 0;
    for (const auto& s : single) {
        auto c = cochain(K, 2, s);
        CHECK(is_cocycle(K, c));
        if (is_coboundary(H, c)) {
            ++coboundaries;
            CHECK(cobound_reduce(K, H, c).is_zero());
        }
    }
    CHECK(coboundaries == 2);
    CHECK(is_coboundary(H, cochain(K, 2, {"0", "0", "a*b", "0"})));
    CHECK(is_coboundary(H, cochain(K, 2, {"0", "0", "b", "0"})));
    CHECK(is_coboundary(H, cochain(K, 2, {"2*a", "0", "0", "c"})));
    CHECK(is_coboundary(H, cochain(K, 2, {"2*a*b", "0", "0", "b*c"})));
    CHECK_FALSE(is_coboundary(H, cochain(K, 2, {"0", "0", "0", "c"})));
    CHECK(format_cochain(K, coboundary(K, cochain(K, 1, {"e_1", "0", "0"}))) == "(2*a, 0, 0, c)");

    // single-term kernel vectors are exactly the nine cocycles above
    auto space = cochain_space(K, 2);
    auto d = induced_matrix(K, 2);
    std::size_t zero_columns = 0;
    for (std::size_t k = 0; k < space.dimension(); ++k)
        if (is_zero(d.column(k))) ++zero_columns;
    CHECK(zero_columns == 9);

    // representatives span the same classes as the five listed cocycles
    Matrix expected(0, space.dimension());
    for (const auto& s : std::vector<std::vector<std::string>>{
             {"a", "0", "0", "0"}, {"a*b", "0", "0", "0"}, {"0", "a*b", "0", "0"}, {"0", "0", "a", "0"},
             {"0", "0", "e_1", "0"}})
        expected.append_row(to_vector(space, cochain(K, 2, s)));
    Matrix got = H.image.reduced;
    for (const auto& r : H.representatives) {
        CHECK(is_cocycle(K, r));
        CHECK(cobound_reduce(K, H, r) == r);
        got.append_row(to_vector(space, r));
    }
    Matrix both = got;
    for (std::size_t r = 0; r < expected.rows(); ++r) both.append_row(expected.row(r));
    CHECK(rank(got) == 9);
    CHECK(rank(both) == 9);
}

TEST_CASE("cohomology is independent of the generator basis")
{
    auto doc = load_data("a1.json");
    auto R = std::make_shared<const ReductionSystem>(reduction_system_for(doc));
    auto K = build_koszul(R, 4);
    KoszulOptions opts;
    auto fam = family_generators(R->quiver(), Scalar(1), 4);
    // a rescaled and reordered basis
    for (int n = 2; n <= 4; ++n) {
        auto t = fam.tensors[static_cast<std::size_t>(n)];
        std::reverse(t.begin(), t.end());
        for (auto& x : t) x *= Scalar(-2);
        opts.overrides[n] = t;
    }
    auto K2 = build_koszul(R, 4, opts);
    for (int n = 0; n <= 3; ++n) CHECK(cohomology_basis(K, n).dimension() == cohomology_basis(K2, n).dimension());
}

TEST_CASE("cochain validation and JSON")
{
    auto K = complex_of("a1.json", 4);
    CHECK_THROWS_AS(cochain(K, 2, {"0", "0", "0", "a"}), PreconditionError);
    CHECK_THROWS_AS(cochain(K, 2, {"0", "0", "0"}), PreconditionError);
    auto c = cochain(K, 2, {"a*b", "0", "0", "0"});
    CHECK(format_cochain(K, c) == "(b*a, 0, 0, 0)");
    CHECK(cochain_from_json(K, cochain_to_json(K, c)) == c);
    CHECK(cochain_from_json(K, nlohmann::json::array({"a", "0", "0", "0"})).degree == 2);
    CHECK(cobound_reduce(K, zero_cochain(K, 2)).is_zero());
    CHECK(cobound_reduce(K, cochain(K, 2, {"0", "0", "b", "0"})).is_zero());
    CHECK(cobound_reduce(K, cochain(K, 2, {"a", "0", "0", "0"})) == cochain(K, 2, {"a", "0", "0", "0"}));
}
