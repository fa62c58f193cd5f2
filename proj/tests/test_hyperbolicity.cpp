#include <doctest.h>

#include <numbers>
#include <random>

#include "klab/hyperbolicity.hpp"

using namespace klab;

TEST_CASE("degree criterion classifications")
{
    SUBCASE("rational curves are always obstructed")
    {
        for (const double kappa : {0.0, 1.0, 5.0}) {
            const auto r = demailly_bound({0, 3.5, {}}, kappa);
            CHECK(r.obstructed);
            CHECK(r.lhs == -2.0);
        }
    }

    SUBCASE("elliptic curves are obstructed for kappa > 0")
    {
        CHECK(demailly_bound({1, 2.0, {}}, 0.5).obstructed);
        CHECK(!demailly_bound({1, 2.0, {}}, 0.0).obstructed);  // 0 >= 0 at kappa = 0
    }

    SUBCASE("genus 2 with one multiplicity-4 point: 2 >= 3 fails")
    {
        const auto r = demailly_bound({2, 1.0, {4}}, 0.0);
        CHECK(r.lhs == 2.0);
        CHECK(r.rhs == 3.0);
        CHECK(r.obstructed);
    }

    SUBCASE("high genus passes")
    {
        const auto r = demailly_bound({3, 6.0, {2}}, 1.0);
        // 4 >= 6/(2 pi) + 1
        CHECK(!r.obstructed);
        CHECK(r.rhs == doctest::Approx(6.0 / (2 * std::numbers::pi) + 1.0));
    }

    SUBCASE("monotonicity: raising kappa, degree, or multiplicities never unobstructs")
    {
        std::mt19937_64 rng(401);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int trial = 0; trial < 500; ++trial) {
            CurveData c;
            c.genus = static_cast<long>(rng() % 5);
            c.degree = 0.5 + 10.0 * unif(rng);
            if (rng() % 2) c.multiplicities.push_back(2 + static_cast<int>(rng() % 4));
            const double kappa = 3.0 * unif(rng);
            const bool before = demailly_bound(c, kappa).obstructed;

            CurveData harder = c;
            harder.degree += 5.0 * unif(rng);
            if (rng() % 2) harder.multiplicities.push_back(2);
            const bool after = demailly_bound(harder, kappa + unif(rng)).obstructed;
            if (before) CHECK(after);
        }
    }

    SUBCASE("input validation")
    {
        CHECK_THROWS_AS((void)demailly_bound({1, 1.0, {}}, -0.1), std::invalid_argument);
        CHECK_THROWS_AS((void)demailly_bound({1, 0.0, {}}, 0.1), std::invalid_argument);
        CHECK_THROWS_AS((void)demailly_bound({1, 1.0, {1}}, 0.1), std::invalid_argument);
    }
}

TEST_CASE("genus formulas")
{
    CHECK(pluecker_genus(4) == 3);
    CHECK(pluecker_genus(1) == 0);
    CHECK(pluecker_genus(2) == 0);
    CHECK(pluecker_genus(5) == 6);
    CHECK_THROWS_AS((void)pluecker_genus(0), std::invalid_argument);

    CHECK(hurwitz_tangent_degree(0) == 2);
    CHECK(hurwitz_tangent_degree(1) == 0);
    CHECK(hurwitz_tangent_degree(2) == -2);
    CHECK_THROWS_AS((void)hurwitz_tangent_degree(-1), std::invalid_argument);
}

TEST_CASE("fibration parameter validation")
{
    SUBCASE("the smallest admissible parameter set passes")
    {
        const auto a = analyze_surface_example({2, 4, 5, 4});
        CHECK(a.all_ok());
        CHECK(a.smooth_fiber_genus == 3);
        CHECK(a.nodal_fiber_genus == 2);
        CHECK(a.special_fiber_obstructed);
        CHECK(validate_surface_example({2, 4, 5, 4}).passed());
    }

    SUBCASE("single violations are rejected with the right flag")
    {
        auto a = analyze_surface_example({2, 3, 5, 4});
        CHECK(!a.a_large_enough);
        CHECK(validate_surface_example({2, 3, 5, 4}).failed());

        a = analyze_surface_example({2, 4, 6, 5});
        CHECK(!a.coprime_ok);
        CHECK(validate_surface_example({2, 4, 6, 5}).failed());

        a = analyze_surface_example({2, 5, 4, 4});
        CHECK(!a.a_range_ok);
        CHECK(validate_surface_example({2, 5, 4, 4}).failed());

        a = analyze_surface_example({2, 4, 5, 3});
        CHECK(!a.degree_ok);
        CHECK(validate_surface_example({2, 4, 5, 3}).failed());
    }

    SUBCASE("compositional consistency with the constraint primitives")
    {
        std::mt19937_64 rng(409);
        for (int trial = 0; trial < 200; ++trial) {
            SurfaceExampleParams p;
            p.g = 2 + static_cast<long>(rng() % 3);
            p.a = 1 + static_cast<long>(rng() % 8);
            p.b = 1 + static_cast<long>(rng() % 9);
            p.d = 2 + static_cast<long>(rng() % 5);
            const auto a = analyze_surface_example(p);
            const bool expect = a.a_range_ok && a.coprime_ok && a.a_large_enough && a.degree_ok &&
                                a.fibers_hyperbolic && a.special_fiber_obstructed;
            CHECK(validate_surface_example(p).passed() == expect);
        }
    }
}

TEST_CASE("poincare distance")
{
    CHECK(poincare_distance(Cx{0.0}, Cx{0.0}) == 0.0);

    SUBCASE("rotations about 0 are isometries")
    {
        const Cx w{0.3, 0.4};
        const Cx rot = std::polar(1.0, 1.1) * w;
        CHECK(poincare_distance(Cx{0.0}, w) ==
              doctest::Approx(poincare_distance(Cx{0.0}, rot)).epsilon(1e-14));
    }

    SUBCASE("the squaring map contracts")
    {
        CHECK(poincare_distance(Cx{0.0}, Cx{0.25}) < poincare_distance(Cx{0.0}, Cx{0.5}));
    }

    SUBCASE("symmetry, definiteness, triangle inequality on random triples")
    {
        std::mt19937_64 rng(419);
        std::uniform_real_distribution<double> unif(-0.95, 0.95);
        auto rand_disc = [&] {
            Cx z;
            do {
                z = Cx{unif(rng), unif(rng)};
            } while (std::abs(z) >= 0.95);
            return z;
        };
        for (int trial = 0; trial < 10000; ++trial) {
            const Cx a = rand_disc(), b = rand_disc(), c = rand_disc();
            const double ab = poincare_distance(a, b);
            CHECK(ab == doctest::Approx(poincare_distance(b, a)).epsilon(1e-12));
            CHECK(ab >= 0.0);
            if (a != b) CHECK(ab > 0.0);
            CHECK(ab <= poincare_distance(a, c) + poincare_distance(c, b) + 1e-12);
        }
    }

    CHECK_THROWS_AS((void)poincare_distance(Cx{1.0}, Cx{0.0}), std::domain_error);
}

TEST_CASE("subharmonicity defect")
{
    const auto pd = make_poincare_disc();

    SUBCASE("poincare disc, f(t) = t/2, eps = 0: exact equality at kappa = 2")
    {
        PowerSeriesMap f{1, {{Cx{0.0}, Cx{0.5}}}, 4.0};
        const auto r = subharmonicity_defect(pd, f, Cx{0.0}, 0.0, 2.0);
        // laplacian = kappa |f'|^2 h = 2 * 1/4; bound identical
        CHECK(r.laplacian == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.lower_bound == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.report.passed());
        CHECK(std::abs(r.laplacian - r.lower_bound) / r.lower_bound < 1e-6);
    }

    SUBCASE("flat metric: log |f'|^2 is harmonic off the critical set")
    {
        const auto flat = make_flat(1);
        PowerSeriesMap f{1, {{Cx{0.1}, Cx{1.0}, Cx{-0.3}, Cx{0.2}}}, 10.0};
        const auto r = subharmonicity_defect(flat, f, Cx{0.4, -0.2}, 0.0, 0.0);
        CHECK(std::abs(r.laplacian) < 1e-12);
        CHECK(r.lower_bound == 0.0);
    }

    SUBCASE("flat metric with regularization: equality with eps |f''|^2 / q^2")
    {
        const auto flat = make_flat(1);
        PowerSeriesMap f{1, {{Cx{0.0}, Cx{0.8}, Cx{0.5}}}, 10.0};
        const auto r = subharmonicity_defect(flat, f, Cx{0.3}, 0.01, 0.0);
        CHECK(r.report.passed());
        CHECK(r.laplacian == doctest::Approx(r.lower_bound).epsilon(1e-10));
    }

    SUBCASE("poincare disc, f(t) = t^2 near the critical point with regularization")
    {
        PowerSeriesMap f{1, {{Cx{0.0}, Cx{0.0}, Cx{1.0}}}, 1.0};
        const auto r = subharmonicity_defect(pd, f, Cx{0.1}, 1e-3, 2.0);
        CHECK(r.report.passed());
        CHECK(r.laplacian >= 0.0);
    }

    SUBCASE("ball target in dimension 2")
    {
        const auto ball = make_complex_ball(2);
        PowerSeriesMap f{2, {{Cx{0.0}, Cx{0.5}}, {Cx{0.0}, Cx{0.1, 0.2}, Cx{0.25}}}, 1.1};
        std::mt19937_64 rng(431);
        std::uniform_real_distribution<double> unif(-0.5, 0.5);
        for (int trial = 0; trial < 25; ++trial) {
            const Cx t{unif(rng), unif(rng)};
            const auto r = subharmonicity_defect(ball, f, t, 1e-4, 2.0);
            CHECK(r.report.passed());
            CHECK(r.laplacian >= -1e-12);
        }
    }

    SUBCASE("error paths")
    {
        PowerSeriesMap crit{1, {{Cx{0.0}, Cx{0.0}, Cx{1.0}}}, 1.0};  // f' (0) = 0
        CHECK_THROWS_AS((void)subharmonicity_defect(pd, crit, Cx{0.0}, 0.0, 2.0),
                        std::invalid_argument);
        PowerSeriesMap f{1, {{Cx{0.0}, Cx{0.5}}}, 0.5};
        CHECK_THROWS_AS((void)subharmonicity_defect(pd, f, Cx{0.8}, 0.0, 2.0), std::domain_error);
    }
}
