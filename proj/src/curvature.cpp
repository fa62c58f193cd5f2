#include "klab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace klab {

TangentVector::TangentVector(std::initializer_list<Cx> c)
{
    components.resize(static_cast<Eigen::Index>(c.size()));
    Eigen::Index i = 0;
    for (const Cx& v : c) components[i++] = v;
}

std::vector<Cx> CurvatureTensor::lowered() const
{
    std::vector<Cx> r(coeffs.size());
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    Cx acc{};
                    for (int s = 0; s < n; ++s) acc += c(j, k, l, s) * frame_gram(s, m);
                    r[((j * n + k) * n + l) * n + m] = acc;
                }
    return r;
}

bool CurvatureTensor::unitary_frame(double tol) const
{
    return (frame_gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
}

CurvatureTensor CurvatureTensor::zero(int n)
{
    CurvatureTensor t;
    t.n = n;
    t.coeffs.assign(static_cast<size_t>(n) * n * n * n, Cx{});
    t.frame_gram = Eigen::MatrixXcd::Identity(n, n);
    return t;
}

CurvatureTensor chern_curvature(const MetricJet& jet)
{
    const int n = jet.dim();
    if (jet.d2.empty()) throw std::invalid_argument("chern_curvature needs order-2 mixed jets");

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(jet.value);
    if (!lu.isInvertible()) throw NonPositiveDefiniteMetric("singular metric matrix");
    const Eigen::MatrixXcd Om = lu.inverse();

    CurvatureTensor t;
    t.n = n;
    t.frame_gram = jet.value;
    t.coeffs.assign(static_cast<size_t>(n) * n * n * n, Cx{});

    // c_jklm = [ (d1[j] Om d1bar[k] - d2[j][k]) Om ]_{l m}
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const Eigen::MatrixXcd block = (jet.d1[j] * Om * jet.d1bar[k] - jet.d2[j][k]) * Om;
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) t.c(j, k, l, m) = block(l, m);
        }
    return t;
}

namespace {

Cx inner(const Eigen::MatrixXcd& gram, const Eigen::VectorXcd& v, const Eigen::VectorXcd& w)
{
    Cx acc{};
    for (int l = 0; l < gram.rows(); ++l)
        for (int m = 0; m < gram.cols(); ++m) acc += gram(l, m) * v[l] * std::conj(w[m]);
    return acc;
}

}  // namespace

CurvValue hbc(const CurvatureTensor& t, const TangentVector& v, const TangentVector& w)
{
    if (v.zero() || w.zero()) throw std::invalid_argument("hbc: zero direction vector");
    const int n = t.n;
    // numerator: <Theta(v, vbar) w, w>_gram = sum c_jkls v_j conj(v_k) w_l conj(w_s) gram(s,.)
    Cx num{};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const Cx vv = v.components[j] * std::conj(v.components[k]);
            for (int l = 0; l < n; ++l)
                for (int s = 0; s < n; ++s) {
                    Cx g{};
                    for (int m = 0; m < n; ++m) g += t.frame_gram(s, m) * std::conj(w.components[m]);
                    num += t.c(j, k, l, s) * vv * w.components[l] * g;
                }
        }
    const double nv = std::real(inner(t.frame_gram, v.components, v.components));
    const double nw = std::real(inner(t.frame_gram, w.components, w.components));
    const double denom = nv * nw;
    return {std::real(num) / denom, std::abs(std::imag(num)) / denom};
}

CurvValue hsc(const CurvatureTensor& t, const TangentVector& v) { return hbc(t, v, v); }

RicciData ricci_and_scalar(const CurvatureTensor& t, const MetricJet& jet)
{
    const int n = t.n;
    RicciData out;
    out.ricci = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Cx acc{};
            for (int l = 0; l < n; ++l) acc += t.c(j, k, l, l);
            out.ricci(j, k) = acc;
        }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(jet.value);
    if (!lu.isInvertible()) throw NonPositiveDefiniteMetric("singular metric matrix");
    const Eigen::MatrixXcd Om = lu.inverse();
    Cx tr{};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) tr += Om(k, j) * out.ricci(j, k);
    out.scalar = std::real(tr) / ric_normalization;
    return out;
}

namespace {

struct Idx {
    int j, k, l, m;
};

double max_abs(const std::vector<Cx>& v)
{
    double m = 0.0;
    for (const Cx& x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

double unitary_symmetry_defect(const CurvatureTensor& t)
{
    const int n = t.n;
    // orthonormalize: gram = U D U^*, L = U D^{-1/2}; lowered tensor picks up
    // L on holomorphic slots and conj(L) on antiholomorphic ones
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t.frame_gram);
    const Eigen::MatrixXcd L =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();

    const std::vector<Cx> low = t.lowered();
    auto at = [&](const std::vector<Cx>& v, int j, int k, int l, int m) -> const Cx& {
        return v[((j * n + k) * n + l) * n + m];
    };

    // staged contraction of all four slots
    std::vector<Cx> t1(low.size()), t2(low.size()), t3(low.size()), t4(low.size());
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    Cx acc{};
                    for (int j = 0; j < n; ++j) acc += at(low, j, k, l, m) * L(j, a);
                    t1[((a * n + k) * n + l) * n + m] = acc;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    Cx acc{};
                    for (int k = 0; k < n; ++k) acc += at(t1, a, k, l, m) * std::conj(L(k, b));
                    t2[((a * n + b) * n + l) * n + m] = acc;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c0 = 0; c0 < n; ++c0)
                for (int m = 0; m < n; ++m) {
                    Cx acc{};
                    for (int l = 0; l < n; ++l) acc += at(t2, a, b, l, m) * L(l, c0);
                    t3[((a * n + b) * n + c0) * n + m] = acc;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c0 = 0; c0 < n; ++c0)
                for (int d = 0; d < n; ++d) {
                    Cx acc{};
                    for (int m = 0; m < n; ++m) acc += at(t3, a, b, c0, m) * std::conj(L(m, d));
                    t4[((a * n + b) * n + c0) * n + d] = acc;
                }

    const double scale = std::max(max_abs(t4), 1e-300);
    double defect = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c0 = 0; c0 < n; ++c0)
                for (int d = 0; d < n; ++d) {
                    const Cx x = at(t4, a, b, c0, d);
                    defect = std::max(defect, std::abs(x - at(t4, c0, d, a, b)));
                    defect = std::max(defect, std::abs(x - at(t4, c0, b, a, d)));
                    defect = std::max(defect, std::abs(x - at(t4, a, d, c0, b)));
                    defect = std::max(defect, std::abs(x - std::conj(at(t4, b, a, d, c0))));
                }
    return defect / scale;
}

double weighted_pair_symmetry_defect(const CurvatureTensor& t)
{
    const int n = t.n;
    for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
            if (l != m && std::abs(t.frame_gram(l, m)) > 1e-10)
                throw std::invalid_argument("weighted symmetry check needs a diagonal frame_gram");
    Eigen::VectorXd lam(n);
    for (int l = 0; l < n; ++l) lam[l] = std::real(t.frame_gram(l, l));

    double scale = 1e-300, defect = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    scale = std::max(scale, std::abs(t.c(j, k, l, m) * lam[m]));
                    defect = std::max(defect,
                                      std::abs(t.c(j, k, l, m) * lam[m] - t.c(l, m, j, k) * lam[k]));
                }
    return defect / scale;
}

CurvatureTensor random_kahler_tensor(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Cx> raw(static_cast<size_t>(n) * n * n * n);
    for (Cx& x : raw) x = Cx{gauss(rng), gauss(rng)};

    auto at = [&](const std::vector<Cx>& v, int j, int k, int l, int m) -> const Cx& {
        return v[((j * n + k) * n + l) * n + m];
    };

    // average over the group generated by the pair/slot exchanges and the
    // hermitian flip (8 elements)
    CurvatureTensor t = CurvatureTensor::zero(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    Cx acc = at(raw, j, k, l, m) + at(raw, l, m, j, k) + at(raw, l, k, j, m) +
                             at(raw, j, m, l, k);
                    acc += std::conj(at(raw, k, j, m, l) + at(raw, m, l, k, j) +
                                     at(raw, k, l, m, j) + at(raw, m, j, k, l));
                    t.c(j, k, l, m) = acc / 8.0;
                }
    return t;
}

double hsc_extremum(const CurvatureTensor& t, bool maximize, int samples, int ascent_steps,
                    std::mt19937_64& rng)
{
    const int n = t.n;
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto objective = [&](const Eigen::VectorXcd& v) { return hsc(t, TangentVector{v}).value; };

    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    Eigen::VectorXcd best_v = Eigen::VectorXcd::Unit(n, 0);
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd v(n);
        for (int i = 0; i < n; ++i) v[i] = Cx{gauss(rng), gauss(rng)};
        if (v.norm() < 1e-12) continue;
        const double f = objective(v);
        if (maximize ? f > best : f < best) {
            best = f;
            best_v = v;
        }
    }

    // finite-difference ascent on the 2n real coordinates; the objective is
    // scale invariant so the step is taken relative to |v|
    Eigen::VectorXcd v = best_v.normalized();
    double step = 0.1;
    const double sign = maximize ? 1.0 : -1.0;
    for (int it = 0; it < ascent_steps && step > 1e-12; ++it) {
        const double f0 = objective(v);
        const double h = 1e-6;
        Eigen::VectorXcd grad(n);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXcd vp = v, vm = v;
            vp[i] += h;
            vm[i] -= h;
            const double dre = (objective(vp) - objective(vm)) / (2 * h);
            vp = v;
            vm = v;
            vp[i] += Cx{0, h};
            vm[i] -= Cx{0, h};
            const double dim_ = (objective(vp) - objective(vm)) / (2 * h);
            grad[i] = Cx{dre, dim_};
        }
        if (grad.norm() < 1e-14) break;
        Eigen::VectorXcd cand = (v + sign * step * grad / grad.norm()).normalized();
        if (sign * (objective(cand) - f0) > 0)
            v = cand;
        else
            step *= 0.5;
    }
    const double refined = objective(v);
    return maximize ? std::max(best, refined) : std::min(best, refined);
}

Eigen::MatrixXcd ricci_from_log_det(const MetricField& metric, const ChartPoint& p)
{
    const int n = metric.dim();
    Eigen::MatrixXcd rho(n, n);
    std::vector<D2> z(n), zb(n), coeff(n * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                z[i] = D2{D1{p.coords[i], i == j ? Cx{1.0} : Cx{}}, D1{}};
                zb[i] = D2{D1{std::conj(p.coords[i]), Cx{}}, D1{i == k ? Cx{1.0} : Cx{}, Cx{}}};
            }
            metric.evaluator().eval(z.data(), zb.data(), coeff.data());
            const D2 ld = log(detail::det_small(coeff, n));
            rho(j, k) = -ld.b.b;
        }
    return rho;
}

Cx mixed_discriminant(const std::vector<Eigen::MatrixXcd>& mats)
{
    const int n = static_cast<int>(mats.size());
    std::vector<int> sigma(n), tau(n);
    for (int i = 0; i < n; ++i) sigma[i] = i;

    auto parity = [](const std::vector<int>& perm) {
        int swaps = 0;
        std::vector<int> p = perm;
        for (size_t i = 0; i < p.size(); ++i)
            while (p[i] != static_cast<int>(i)) {
                std::swap(p[i], p[p[i]]);
                ++swaps;
            }
        return swaps % 2 == 0 ? 1.0 : -1.0;
    };

    Cx total{};
    do {
        const double ss = parity(sigma);
        for (int i = 0; i < n; ++i) tau[i] = i;
        do {
            Cx prod = ss * parity(tau);
            for (int i = 0; i < n; ++i) prod *= mats[i](sigma[i], tau[i]);
            total += prod;
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

}  // namespace klab
