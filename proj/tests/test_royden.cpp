#include <doctest.h>

#include <random>

#include "klab/royden.hpp"

using namespace klab;

namespace {

// shift a random symmetric tensor down until its sectional values are
// empirically negative
BiHermitianForm random_negative_form(int n, std::mt19937_64& rng)
{
    auto t = random_kahler_tensor(n, rng);
    auto form = BiHermitianForm::from_tensor(t);
    const double top = hsc_upper_bound(form, 2000, 50, rng);
    const auto shift = BiHermitianForm::constant_hsc(n, top + 0.5);
    for (size_t i = 0; i < form.t.size(); ++i) form.t[i] -= shift.t[i];
    return form;
}

}  // namespace

TEST_CASE("polarization: nu=1 reduces to the single diagonal value")
{
    std::mt19937_64 rng(211);
    const auto form = BiHermitianForm::from_tensor(random_kahler_tensor(3, rng));
    const auto frame = random_orthogonal_frame(form, 1, rng);
    const auto pr = polarization_sum(form, frame);
    const double expected = form.theta_diag(frame.vectors[0], frame.vectors[0]);
    CHECK(pr.full_sum == doctest::Approx(expected).epsilon(1e-12));
    CHECK(pr.reduced_sum == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("polarization: flat form gives 0 = 0")
{
    std::mt19937_64 rng(223);
    auto form = BiHermitianForm::constant_hsc(3, 0.0);
    const auto frame = random_orthogonal_frame(form, 3, rng);
    const auto pr = polarization_sum(form, frame);
    CHECK(pr.full_sum == 0.0);
    CHECK(pr.reduced_sum == 0.0);
}

TEST_CASE("polarization: full 4^nu enumeration equals the reduced sum")
{
    std::mt19937_64 rng(227);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 3;
        const int nu = 1 + static_cast<int>(rng() % n);
        const auto form = BiHermitianForm::from_tensor(random_kahler_tensor(n, rng));
        const auto frame = random_orthogonal_frame(form, nu, rng);  // non-unit scalings
        const auto pr = polarization_sum(form, frame);
        const double scale = std::max(std::abs(pr.full_sum), 1.0);
        CHECK(std::abs(pr.full_sum - pr.reduced_sum) <= 1e-9 * scale);
    }
}

TEST_CASE("frame validation rejects non-orthogonal or zero vectors")
{
    std::mt19937_64 rng(229);
    const auto form = BiHermitianForm::from_tensor(random_kahler_tensor(2, rng));
    FrameSpec bad;
    bad.vectors = {Eigen::VectorXcd::Ones(2), Eigen::VectorXcd::Unit(2, 0)};
    CHECK_THROWS_AS(polarization_sum(form, bad), std::invalid_argument);
    FrameSpec zero;
    zero.vectors = {Eigen::VectorXcd::Zero(2)};
    CHECK_THROWS_AS(validate_frame(form, zero), std::invalid_argument);
}

TEST_CASE("hsc_upper_bound on reference forms")
{
    std::mt19937_64 rng(233);

    SUBCASE("flat form gives 0")
    {
        const auto form = BiHermitianForm::constant_hsc(3, 0.0);
        CHECK(hsc_upper_bound(form, 200, 20, rng) == 0.0);
    }

    SUBCASE("fubini-study tensor at the origin gives the catalog constant +2")
    {
        const auto fs = make_fubini_study_chart(2);
        const auto t = chern_curvature(evaluate_jet(fs, ChartPoint{Cx{0.0}, Cx{0.0}}));
        const auto form = BiHermitianForm::from_tensor(t);
        CHECK(hsc_upper_bound(form, 2000, 50, rng) == doctest::Approx(2.0).epsilon(1e-6));
    }

    SUBCASE("constant-HSC pattern: diagonal -1, cross -1/2 gives K = -1")
    {
        const auto form = BiHermitianForm::constant_hsc(3, -1.0);
        CHECK(form.t[0] == Cx{-1.0});  // Theta(e1,e1,e1,e1)
        const Cx cross = form.t[((0 * 3 + 0) * 3 + 1) * 3 + 1];
        CHECK(cross == Cx{-0.5});
        CHECK(hsc_upper_bound(form, 2000, 50, rng) == doctest::Approx(-1.0).epsilon(1e-6));
    }
}

TEST_CASE("royden inequality on the constant-HSC form is tight")
{
    std::mt19937_64 rng(239);
    const auto form = BiHermitianForm::constant_hsc(2, -1.0);
    FrameSpec frame;
    frame.vectors = {Eigen::VectorXcd::Unit(2, 0), Eigen::VectorXcd::Unit(2, 1)};

    const auto chk = royden_inequality_check(form, frame, -1.0);
    // brute force: LHS = t_1111 + t_1122 + t_2211 + t_2222 = -1 -1/2 -1/2 -1 = -3
    CHECK(chk.lhs == doctest::Approx(-3.0).epsilon(1e-12));
    // negative-K bound: (nu+1)/(2nu) K (sum |xi|^2)^2 = (3/4)(-1)(4) = -3: equality
    CHECK(chk.rhs_negative == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(chk.negative.passed());
    // general bound: K/2 (4 + 2) = -3: also tight here
    CHECK(chk.rhs_general == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(chk.general.passed());
}

TEST_CASE("flat form with K=0 passes trivially")
{
    std::mt19937_64 rng(241);
    const auto form = BiHermitianForm::constant_hsc(3, 0.0);
    const auto frame = random_orthogonal_frame(form, 2, rng);
    const auto chk = royden_inequality_check(form, frame, 0.0);
    CHECK(chk.lhs == 0.0);
    CHECK(chk.general.passed());
    CHECK(chk.negative.passed());
}

TEST_CASE("nu=1 with K<=0: both bounds reduce to the hypothesis")
{
    std::mt19937_64 rng(251);
    const auto form = random_negative_form(3, rng);
    const double k = hsc_upper_bound(form, 5000, 100, rng);
    REQUIRE(k < 0.0);
    const auto frame = random_orthogonal_frame(form, 1, rng);
    const double n2 = form.norm2(frame.vectors[0]);
    const auto chk = royden_inequality_check(form, frame, k);
    CHECK(chk.rhs_general == doctest::Approx(k * n2 * n2).epsilon(1e-12));
    CHECK(chk.rhs_negative == doctest::Approx(k * n2 * n2).epsilon(1e-12));
    CHECK(chk.general.passed());
    CHECK(chk.negative.passed());
}

TEST_CASE("randomized property: no violations with empirical negative K")
{
    std::mt19937_64 rng(257);
    int violations = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);  // up to 4
        const auto form = random_negative_form(n, rng);
        double k = hsc_upper_bound(form, 1500, 40, rng);
        if (k >= 0.0) continue;
        const int nu = 1 + static_cast<int>(rng() % n);
        const auto frame = random_orthogonal_frame(form, nu, rng);
        auto chk = royden_inequality_check(form, frame, k);
        if (!chk.general.passed() || !chk.negative.passed()) {
            // tighten K before counting a violation: the empirical bound can
            // only under-estimate the supremum, which over-strengthens the claim
            k = tighten_upper_bound(form, frame, k, rng);
            chk = royden_inequality_check(form, frame, std::min(k, 0.0));
            if (!chk.general.passed() || (k <= 0 && !chk.negative.passed())) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("unimodular rescaling keeps the general-bound verdict")
{
    std::mt19937_64 rng(263);
    const auto form = random_negative_form(3, rng);
    const double k = hsc_upper_bound(form, 3000, 50, rng);
    auto frame = random_orthogonal_frame(form, 3, rng);
    const auto before = royden_inequality_check(form, frame, k);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    for (auto& v : frame.vectors) {
        const double ph = unif(rng);
        v *= Cx{std::cos(ph), std::sin(ph)};
    }
    const auto after = royden_inequality_check(form, frame, k);
    CHECK(before.general.passed() == after.general.passed());
    CHECK(before.lhs == doctest::Approx(after.lhs).epsilon(1e-10));
}

TEST_CASE("frame-scaling covariance of the checked quantities")
{
    std::mt19937_64 rng(269);
    const auto form = random_negative_form(2, rng);
    auto frame = random_orthogonal_frame(form, 2, rng, /*unit_scalings=*/true);
    const auto base = royden_inequality_check(form, frame, -1.0);
    // scale every vector by c: LHS and both RHS scale by |c|^4
    for (auto& v : frame.vectors) v *= Cx{0.0, 2.0};
    const auto scaled = royden_inequality_check(form, frame, -1.0);
    CHECK(scaled.lhs == doctest::Approx(16.0 * base.lhs).epsilon(1e-9));
    CHECK(scaled.rhs_general == doctest::Approx(16.0 * base.rhs_general).epsilon(1e-9));
    CHECK(scaled.rhs_negative == doctest::Approx(16.0 * base.rhs_negative).epsilon(1e-9));
}
