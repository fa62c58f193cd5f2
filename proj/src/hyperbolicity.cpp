#include "klab/hyperbolicity.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace klab {

DemaillyResult demailly_bound(const CurveData& curve, double kappa)
{
    if (kappa < 0.0) throw std::invalid_argument("kappa must be >= 0");
    if (!(curve.degree > 0.0)) throw std::invalid_argument("degree must be positive");
    for (int m : curve.multiplicities)
        if (m < 2) throw std::invalid_argument("multiplicities must be >= 2");

    DemaillyResult r;
    r.lhs = 2.0 * curve.genus - 2.0;
    r.rhs = kappa / ric_normalization * curve.degree;
    for (int m : curve.multiplicities) r.rhs += m - 1;
    r.obstructed = r.lhs < r.rhs;

    std::ostringstream wtn;
    wtn << "g=" << curve.genus << " deg=" << curve.degree << " kappa=" << kappa
        << " mults=" << curve.multiplicities.size();
    r.report = make_report("demailly-criterion", r.lhs, r.rhs, r.lhs - r.rhs, 0.0, wtn.str(),
                           r.obstructed ? "obstructed" : "consistent");
    return r;
}

long pluecker_genus(long d)
{
    if (d < 1) throw std::invalid_argument("degree must be >= 1");
    return (d - 1) * (d - 2) / 2;
}

long hurwitz_tangent_degree(long g)
{
    if (g < 0) throw std::invalid_argument("genus must be >= 0");
    return 2 - 2 * g;
}

SurfaceExampleAnalysis analyze_surface_example(const SurfaceExampleParams& p)
{
    SurfaceExampleAnalysis a;
    a.a_range_ok = 0 < p.a && p.a < p.b;
    a.coprime_ok = std::gcd(p.a, p.b) == 1;
    a.a_large_enough = p.a >= 2 * p.g;
    a.degree_ok = p.d >= 4;
    a.smooth_fiber_genus = p.d >= 1 ? pluecker_genus(p.d) : 0;
    a.nodal_fiber_genus = a.smooth_fiber_genus - 1;
    a.fibers_hyperbolic =
        a.smooth_fiber_genus >= 2 && a.nodal_fiber_genus >= 2 && p.g >= 2;

    // the special fiber has genus g and one point of multiplicity a; it must
    // violate the criterion already at kappa = 0
    if (p.a >= 2 && p.g >= 0) {
        const CurveData fiber{p.g, 1.0, {static_cast<int>(p.a)}};
        a.special_fiber_obstructed = demailly_bound(fiber, 0.0).obstructed;
    } else {
        a.special_fiber_obstructed = false;
    }
    return a;
}

VerificationReport validate_surface_example(const SurfaceExampleParams& p)
{
    const auto a = analyze_surface_example(p);
    std::ostringstream note;
    note << (a.a_range_ok ? "" : "0<a<b violated; ") << (a.coprime_ok ? "" : "gcd(a,b)!=1; ")
         << (a.a_large_enough ? "" : "a<2g; ") << (a.degree_ok ? "" : "d<4; ")
         << (a.fibers_hyperbolic ? "" : "some fiber genus < 2; ")
         << (a.special_fiber_obstructed ? "" : "special fiber not obstructed; ");
    std::ostringstream wtn;
    wtn << "g=" << p.g << " a=" << p.a << " b=" << p.b << " d=" << p.d;

    VerificationReport r;
    r.claim_id = "surface-example";
    r.status = a.all_ok() ? CheckStatus::pass : CheckStatus::fail;
    r.lhs = a.smooth_fiber_genus;
    r.rhs = 2.0;  // hyperbolicity threshold for the fiber genera
    r.slack = a.all_ok() ? 1.0 : -1.0;
    r.tolerance = 0.0;
    r.witness = wtn.str();
    r.note = note.str().empty() ? "all constraints hold" : note.str();
    return r;
}

double poincare_distance(Cx z, Cx w)
{
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
        throw std::domain_error("points must lie strictly inside the unit disc");
    const double r = std::abs((z - w) / (1.0 - std::conj(w) * z));
    return std::atanh(r);
}

Eigen::VectorXcd PowerSeriesMap::value(Cx t) const
{
    Eigen::VectorXcd out(n);
    for (int l = 0; l < n; ++l) {
        Cx acc{};
        for (size_t k = coeffs[l].size(); k-- > 0;) acc = acc * t + coeffs[l][k];
        out[l] = acc;
    }
    return out;
}

Eigen::VectorXcd PowerSeriesMap::derivative(Cx t) const
{
    Eigen::VectorXcd out(n);
    for (int l = 0; l < n; ++l) {
        Cx acc{};
        for (size_t k = coeffs[l].size(); k-- > 1;)
            acc = acc * t + static_cast<double>(k) * coeffs[l][k];
        out[l] = acc;
    }
    return out;
}

Eigen::VectorXcd PowerSeriesMap::second_derivative(Cx t) const
{
    Eigen::VectorXcd out(n);
    for (int l = 0; l < n; ++l) {
        Cx acc{};
        for (size_t k = coeffs[l].size(); k-- > 2;)
            acc = acc * t + static_cast<double>(k) * static_cast<double>(k - 1) * coeffs[l][k];
        out[l] = acc;
    }
    return out;
}

namespace {

// horner evaluation of a series (or its termwise derivative) on dual scalars
template <typename T>
T series_eval(const std::vector<Cx>& c, const T& t, bool derivative, bool conjugated)
{
    T acc{};
    for (size_t k = c.size(); k-- > (derivative ? 1 : 0);) {
        const Cx base = conjugated ? std::conj(c[k]) : c[k];
        const Cx coef = derivative ? static_cast<double>(k) * base : base;
        acc = acc * t + coef;
    }
    return acc;
}

}  // namespace

SubharmonicityResult subharmonicity_defect(const MetricField& metric, const PowerSeriesMap& f,
                                           Cx t, double eps_reg, double kappa)
{
    const int n = metric.dim();
    if (f.n != n) throw std::invalid_argument("map dimension mismatch");
    if (eps_reg < 0.0) throw std::invalid_argument("eps_reg must be >= 0");
    if (std::abs(t) >= f.radius) throw std::domain_error("t outside the series radius");

    const Eigen::VectorXcd fp = f.derivative(t);
    if (eps_reg == 0.0 && fp.norm() < 1e-14)
        throw std::invalid_argument("f'(t) = 0 requires eps_reg > 0");

    // laplacian of psi = log(|f'|_w^2 + eps) by jet composition: z-side carries
    // the t direction, zbar-side the tbar direction
    const D2 tz{D1{t, Cx{1.0}}, D1{}};
    const D2 tzb{D1{std::conj(t), Cx{}}, D1{Cx{1.0}, Cx{}}};

    std::vector<D2> z(n), zb(n), fpz(n), fpzb(n), w(n * n);
    for (int l = 0; l < n; ++l) {
        z[l] = series_eval(f.coeffs[l], tz, false, false);
        zb[l] = series_eval(f.coeffs[l], tzb, false, true);
        fpz[l] = series_eval(f.coeffs[l], tz, true, false);
        fpzb[l] = series_eval(f.coeffs[l], tzb, true, true);
    }
    metric.evaluator().eval(z.data(), zb.data(), w.data());

    D2 norm2{Cx{eps_reg}};
    for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) norm2 += w[l * n + m] * fpz[l] * fpzb[m];
    const D2 psi = log(norm2);
    const double laplacian = std::real(psi.b.b);

    // displayed bound with |Df'|^2 the squared norm of the covariant derivative
    // f'' + Gamma(f', f'), Gamma^s_jl = sum_m d_j w_lm Om_ms
    const ChartPoint at{f.value(t)};
    const auto jet = evaluate_jet(metric, at, JetOrder::first);
    const Eigen::MatrixXcd om = jet.value.inverse();
    Eigen::VectorXcd cov = f.second_derivative(t);
    for (int s = 0; s < n; ++s) {
        Cx acc{};
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                Cx gamma{};
                for (int m = 0; m < n; ++m) gamma += jet.d1[j](l, m) * om(m, s);
                acc += gamma * fp[j] * fp[l];
            }
        cov[s] += acc;
    }
    auto wnorm2 = [&](const Eigen::VectorXcd& v) {
        Cx acc{};
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) acc += jet.value(l, m) * v[l] * std::conj(v[m]);
        return std::real(acc);
    };
    const double fp2 = wnorm2(fp);
    const double cov2 = wnorm2(cov);
    const double denom = (fp2 + eps_reg) * (fp2 + eps_reg);
    const double bound =
        (kappa * fp2 * fp2 * fp2 + eps_reg * (cov2 + kappa * fp2 * fp2)) / denom;

    std::ostringstream wtn;
    wtn << "t=" << t.real() << (t.imag() < 0 ? "-" : "+") << std::abs(t.imag())
        << "i eps=" << eps_reg << " kappa=" << kappa;
    SubharmonicityResult out;
    out.laplacian = laplacian;
    out.lower_bound = bound;
    out.report = make_report("subharmonicity", laplacian, bound, laplacian - bound,
                             1e-9 * std::max(1.0, std::abs(bound)), wtn.str(),
                             "metric=" + metric.name());
    return out;
}

}  // namespace klab
