#include "klab/sphere_averages.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace klab {

SphereMomentTable SphereMomentTable::for_dimension(int n)
{
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    const double nn1 = static_cast<double>(n) * (n + 1);
    return {n, 1.0 / n, 2.0 / nn1, 1.0 / nn1};
}

double sphere_moment(int n, const std::vector<int>& ups, const std::vector<int>& downs)
{
    const size_t degree = ups.size() + downs.size();
    if (degree != 2 && degree != 4)
        throw std::invalid_argument("sphere_moment supports total degree 2 or 4 only");
    for (int i : ups)
        if (i < 0 || i >= n) throw std::invalid_argument("index out of range");
    for (int i : downs)
        if (i < 0 || i >= n) throw std::invalid_argument("index out of range");

    if (ups.size() != downs.size()) return 0.0;  // unbalanced conjugation

    if (ups.size() == 1) return ups[0] == downs[0] ? 1.0 / n : 0.0;

    // degree 4: avg v_a v_b conj(v_c) conj(v_d) = (d_ac d_bd + d_ad d_bc)/(n(n+1))
    const double nn1 = static_cast<double>(n) * (n + 1);
    const double pairing1 = (ups[0] == downs[0] && ups[1] == downs[1]) ? 1.0 : 0.0;
    const double pairing2 = (ups[0] == downs[1] && ups[1] == downs[0]) ? 1.0 : 0.0;
    return (pairing1 + pairing2) / nn1;
}

Eigen::VectorXcd random_sphere_vector(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(n);
    do {
        for (int i = 0; i < n; ++i) v[i] = Cx{gauss(rng), gauss(rng)};
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

double scalar_from_unitary_tensor(const CurvatureTensor& t)
{
    Cx acc{};
    for (int j = 0; j < t.n; ++j)
        for (int l = 0; l < t.n; ++l) acc += t.c(j, j, l, l);
    return std::real(acc) / ric_normalization;
}

namespace {

void require_unitary(const CurvatureTensor& t)
{
    if (!t.unitary_frame(1e-10))
        throw std::invalid_argument(
            "averaging identities need a unitary frame; orthonormalize first");
}

struct McEstimate {
    double mean;
    double stderr_;
};

template <typename F>
McEstimate monte_carlo(const MonteCarloMode& mc, int n, F sample)
{
    std::mt19937_64 rng(mc.seed);
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < mc.samples; ++i) {
        const double x = sample(random_sphere_vector(n, rng));
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / mc.samples;
    const double var = std::max(sumsq / mc.samples - mean * mean, 0.0);
    return {mean, std::sqrt(var / mc.samples)};
}

}  // namespace

VerificationReport average_hbc_identity(const CurvatureTensor& t, const TangentVector& v,
                                        std::optional<MonteCarloMode> mc)
{
    require_unitary(t);
    if (v.zero()) throw std::invalid_argument("zero direction vector");
    const int n = t.n;
    const double vnorm2 = v.components.squaredNorm();

    // Ricci contraction side
    Cx rhs_acc{};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Cx rho{};
            for (int l = 0; l < n; ++l) rho += t.c(j, k, l, l);
            rhs_acc += rho * v.components[j] * std::conj(v.components[k]);
        }
    const double rhs = std::real(rhs_acc) / (n * vnorm2);

    if (mc) {
        const auto est = monte_carlo(*mc, n, [&](const Eigen::VectorXcd& w) {
            return hbc(t, v, TangentVector{w}).value;
        });
        const double tol = 4.0 * est.stderr_;
        std::ostringstream wtn;
        wtn << "mc N=" << mc->samples << " seed=" << mc->seed;
        return make_report("avg-hbc", est.mean, rhs, tol - std::abs(est.mean - rhs), 0.0,
                           wtn.str(), "stderr=" + std::to_string(est.stderr_));
    }

    // exact side: expand HBC in monomials of w and apply the moment table
    Cx lhs_acc{};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m)
                    lhs_acc += t.c(j, k, l, m) * v.components[j] * std::conj(v.components[k]) *
                               sphere_moment(n, {l}, {m});
    const double lhs = std::real(lhs_acc) / vnorm2;
    const double tol = 1e-10;
    return make_report("avg-hbc", lhs, rhs, tol - std::abs(lhs - rhs), 0.0, "exact",
                       "n=" + std::to_string(n));
}

VerificationReport average_hsc_identity(const CurvatureTensor& t, std::optional<MonteCarloMode> mc)
{
    require_unitary(t);
    const int n = t.n;
    const double rhs =
        (2.0 / (n * (n + 1.0))) * ric_normalization * scalar_from_unitary_tensor(t);

    if (mc) {
        const auto est = monte_carlo(*mc, n, [&](const Eigen::VectorXcd& v) {
            return hsc(t, TangentVector{v}).value;
        });
        const double tol = 4.0 * est.stderr_;
        std::ostringstream wtn;
        wtn << "mc N=" << mc->samples << " seed=" << mc->seed;
        return make_report("avg-hsc", est.mean, rhs, tol - std::abs(est.mean - rhs), 0.0,
                           wtn.str(), "stderr=" + std::to_string(est.stderr_));
    }

    Cx lhs_acc{};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m)
                    lhs_acc += t.c(j, k, l, m) * sphere_moment(n, {j, l}, {k, m});
    const double lhs = std::real(lhs_acc);
    const double tol = 1e-10;
    return make_report("avg-hsc", lhs, rhs, tol - std::abs(lhs - rhs), 0.0, "exact",
                       "n=" + std::to_string(n));
}

}  // namespace klab
