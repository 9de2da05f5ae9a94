#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmink/isotropic.hpp"

#include <cmath>
#include <stdexcept>

using namespace gmink;

namespace {

/// Independent root oracle: plain bisection on g(r) = r^(n-p) e^(-r^2/2) - C
/// with fixed brackets, no shared code with the library.
double bisect_root(int n, double p, double C, double lo, double hi)
{
    auto g = [&](double r) { return std::pow(r, n - p) * std::exp(-0.5 * r * r) - C; };
    REQUIRE(g(lo) * g(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(lo) * g(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("thresholds match closed forms")
{
    CHECK(isotropic_threshold(3, 1.0) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-15));
    CHECK(isotropic_threshold(2, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(isotropic_threshold(3, 2.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    // q = n - p = 1.5: threshold = e^{-0.75} * 1.5^{0.75}.
    CHECK(isotropic_threshold(3, 1.5)
          == doctest::Approx(std::exp(-0.75) * std::pow(1.5, 0.75)).epsilon(1e-15));
    CHECK_THROWS_AS(isotropic_threshold(3, 0.5), std::invalid_argument);
}

TEST_CASE("argument validation")
{
    CHECK_THROWS_AS(count_constant_solutions(1, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(count_constant_solutions(2, 0.9, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(count_constant_solutions(2, 2.0, 0.5), std::invalid_argument);  // p < n required
    CHECK_THROWS_AS(count_constant_solutions(3, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(count_constant_solutions(3, 1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_constant_roots(3, 1.0, 2.0), std::domain_error);  // above threshold
    CHECK_THROWS_AS(linearized_spectrum(2, 1.0, -1.0, 3), std::invalid_argument);
}

TEST_CASE("trichotomy in n = 3, p = 1")
{
    const double tc = 2.0 / std::exp(1.0);
    CHECK(count_constant_solutions(3, 1.0, 0.5) == 2);
    CHECK(count_constant_solutions(3, 1.0, tc) == 1);
    CHECK(count_constant_solutions(3, 1.0, 1.0) == 0);
    // Relative 1e-12 band around the threshold counts as the single root.
    CHECK(count_constant_solutions(3, 1.0, tc * (1.0 + 5e-13)) == 1);
    CHECK(count_constant_solutions(3, 1.0, tc * (1.0 - 5e-13)) == 1);
    CHECK(count_constant_solutions(3, 1.0, tc * (1.0 + 1e-10)) == 0);
    CHECK(count_constant_solutions(3, 1.0, tc * (1.0 - 1e-10)) == 2);

    // At the threshold the unique root is r = sqrt(n - p).
    const auto one = solve_constant_roots(3, 1.0, tc);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("roots satisfy the defining equation to 1e-12 and match bisection")
{
    const auto roots = solve_constant_roots(3, 1.0, 0.5);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] < roots[1]);
    for (const double r : roots)
        CHECK(std::abs(r * r * std::exp(-0.5 * r * r) - 0.5) <= 1e-12);
    CHECK(roots[0] == doctest::Approx(bisect_root(3, 1.0, 0.5, 1e-8, std::sqrt(2.0))).epsilon(1e-10));
    CHECK(roots[1] == doctest::Approx(bisect_root(3, 1.0, 0.5, std::sqrt(2.0), 10.0)).epsilon(1e-10));
}

TEST_CASE("plane roots at C = 0.04 * 2 pi")
{
    const double C = 0.25132741228718345;
    const auto roots = solve_constant_roots(2, 1.0, C);
    REQUIRE(roots.size() == 2);
    for (const double r : roots)
        CHECK(std::abs(r * std::exp(-0.5 * r * r) - C) <= 1e-13);
    CHECK(roots[0] == doctest::Approx(bisect_root(2, 1.0, C, 1e-10, 1.0)).epsilon(1e-10));
    CHECK(roots[1] == doctest::Approx(bisect_root(2, 1.0, C, 1.0, 12.0)).epsilon(1e-10));
    CHECK(std::abs(roots[0] - 0.2600) <= 5e-4);
    CHECK(std::abs(roots[1] - 2.04845) <= 5e-5);
}

TEST_CASE("tiny mass: the small root collapses to C, the large root grows")
{
    const double C = 1e-8;
    const auto roots = solve_constant_roots(2, 1.0, C);
    REQUIRE(roots.size() == 2);
    // Small root: r e^{-r^2/2} = C with r -> 0 gives r = C (1 + O(C^2)).
    CHECK(roots[0] == doctest::Approx(1e-8).epsilon(1e-6));
    CHECK(roots[1] == doctest::Approx(bisect_root(2, 1.0, C, 1.0, 12.0)).epsilon(1e-10));
    CHECK(std::abs(roots[1] - 6.3664) <= 1e-3);
    for (const double r : roots)
        CHECK(std::abs(r * std::exp(-0.5 * r * r) - C) <= 1e-12 * C / 1e-8);
}

TEST_CASE("linearized spectrum at constant roots")
{
    // r0 = 0.26, n = 2, p = 1: nu = 1 - r0^2 = 0.9324.
    SpectrumReport s = linearized_spectrum(2, 1.0, 0.26, 2);
    REQUIRE(s.lambda.size() == 3);
    CHECK(s.lambda[0] == doctest::Approx(0.9324).epsilon(1e-12));
    CHECK(s.lambda[1] == doctest::Approx(-0.0676).epsilon(1e-10));
    CHECK(s.lambda[2] == doctest::Approx(-3.0676).epsilon(1e-12));
    CHECK(s.invertible);

    // r0 = 1, n = 2, p = 1: lambda_0 = 0, not invertible.
    CHECK_FALSE(linearized_spectrum(2, 1.0, 1.0, 4).invertible);
    // r0 = sqrt(2), n = 3, p = 1: nu = 0 kills k = 0 as well.
    CHECK_FALSE(linearized_spectrum(3, 1.0, std::sqrt(2.0), 4).invertible);
    // Generic root: fine.
    CHECK(linearized_spectrum(3, 1.0, 0.8454, 6).invertible);
    // n = 3: lambda_k drops by k (k + 1).
    SpectrumReport t = linearized_spectrum(3, 1.5, 0.5, 3);
    const double nu = 1.5 - 0.25;
    for (int k = 0; k <= 3; ++k)
        CHECK(t.lambda[static_cast<std::size_t>(k)]
              == doctest::Approx(nu - k * (k + 1)).epsilon(1e-12));
}

TEST_CASE("analyze_isotropic assembles a consistent report")
{
    IsotropicReport rep = analyze_isotropic(3, 1.0, 0.5);
    CHECK(rep.n == 3);
    CHECK(rep.p == 1.0);
    CHECK(rep.C == 0.5);
    CHECK(rep.threshold == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-15));
    CHECK(rep.root_count == 2);
    REQUIRE(rep.roots.size() == 2);
    CHECK(rep.roots[0] < rep.roots[1]);

    IsotropicReport none = analyze_isotropic(3, 1.0, 1.0);
    CHECK(none.root_count == 0);
    CHECK(none.roots.empty());
}
