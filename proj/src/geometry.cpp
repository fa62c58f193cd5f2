#include "klab/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

namespace klab {

ChartPoint::ChartPoint(std::initializer_list<Cx> c)
{
    coords.resize(static_cast<Eigen::Index>(c.size()));
    Eigen::Index i = 0;
    for (const Cx& v : c) coords[i++] = v;
}

bool ChartPoint::finite() const
{
    for (Eigen::Index i = 0; i < coords.size(); ++i)
        if (!std::isfinite(coords[i].real()) || !std::isfinite(coords[i].imag())) return false;
    return coords.size() >= 1;
}

bool ChartDomain::contains(const ChartPoint& p) const
{
    if (!p.finite()) return false;
    switch (kind) {
        case DomainKind::whole_plane:
        case DomainKind::periodic_cell:
            return true;
        case DomainKind::unit_ball:
            return p.coords.norm() < 1.0 - margin;
        case DomainKind::unit_polydisc: {
            for (Eigen::Index i = 0; i < p.coords.size(); ++i)
                if (std::abs(p.coords[i]) >= 1.0 - margin) return false;
            return true;
        }
        case DomainKind::product: {
            Eigen::Index off = 0;
            for (const auto& [sub, nd] : parts) {
                ChartPoint q{Eigen::VectorXcd(p.coords.segment(off, nd))};
                if (!sub.contains(q)) return false;
                off += nd;
            }
            return off == p.coords.size();
        }
    }
    return false;
}

ChartDomain ChartDomain::product_of(ChartDomain a, int na, ChartDomain b, int nb)
{
    ChartDomain d;
    d.kind = DomainKind::product;
    d.parts.emplace_back(std::move(a), na);
    d.parts.emplace_back(std::move(b), nb);
    return d;
}

double MetricJet::hermitian_defect() const
{
    const int n = dim();
    double worst = 0.0;
    for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
            worst = std::max(worst, std::abs(value(l, m) - std::conj(value(m, l))));
            for (int j = 0; j < n; ++j) {
                if (!d1.empty())
                    worst = std::max(worst, std::abs(d1bar[j](l, m) - std::conj(d1[j](m, l))));
                if (!d2.empty())
                    for (int k = 0; k < n; ++k)
                        worst = std::max(worst,
                                         std::abs(d2[j][k](l, m) - std::conj(d2[k][j](m, l))));
            }
        }
    return worst;
}

MetricField::MetricField(std::string name, ChartDomain domain, MetricProvenance provenance,
                         std::shared_ptr<const MetricEvaluator> evaluator)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      provenance_(provenance),
      evaluator_(std::move(evaluator))
{
}

Eigen::MatrixXcd MetricField::value_at(const ChartPoint& p) const
{
    const int n = dim();
    std::vector<Cx> z(n), zb(n), out(n * n);
    for (int i = 0; i < n; ++i) {
        z[i] = p.coords[i];
        zb[i] = std::conj(p.coords[i]);
    }
    evaluator_->eval(z.data(), zb.data(), out.data());
    Eigen::MatrixXcd m(n, n);
    for (int l = 0; l < n; ++l)
        for (int c = 0; c < n; ++c) m(l, c) = out[l * n + c];
    return m;
}

namespace {

std::string point_str(const ChartPoint& p)
{
    std::ostringstream os;
    os << "p=(";
    for (int i = 0; i < p.dim(); ++i) {
        if (i) os << ",";
        os << p.coords[i].real() << (p.coords[i].imag() < 0 ? "-" : "+")
           << std::abs(p.coords[i].imag()) << "i";
    }
    os << ")";
    return os.str();
}

void require_positive_definite(const Eigen::MatrixXcd& v, const std::string& name)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(v);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw NonPositiveDefiniteMetric("metric '" + name +
                                        "' is not positive definite at the evaluation point");
}

}  // namespace

MetricJet evaluate_jet(const MetricField& metric, const ChartPoint& p, JetOrder order)
{
    const int n = metric.dim();
    if (p.dim() != n) throw std::invalid_argument("point dimension mismatch");
    if (!metric.domain().contains(p))
        throw PointOutsideDomain("point outside the domain of metric '" + metric.name() + "'");

    const int depth_needed = static_cast<int>(order);
    if (depth_needed > metric.evaluator().max_depth())
        throw UnsupportedJetOrder("metric '" + metric.name() + "' does not support this jet order");

    MetricJet jet;
    jet.value = metric.value_at(p);
    require_positive_definite(jet.value, metric.name());
    if (order == JetOrder::value_only) return jet;

    auto fill = [n](std::vector<Eigen::MatrixXcd>& blocks) {
        blocks.assign(n, Eigen::MatrixXcd::Zero(n, n));
    };
    fill(jet.d1);
    fill(jet.d1bar);

    if (order == JetOrder::first) {
        std::vector<D1> z(n), zb(n), out(n * n);
        for (int dir = 0; dir < n; ++dir) {
            for (int side = 0; side < 2; ++side) {
                for (int i = 0; i < n; ++i) {
                    z[i] = D1{p.coords[i], side == 0 && i == dir ? Cx{1.0} : Cx{}};
                    zb[i] = D1{std::conj(p.coords[i]), side == 1 && i == dir ? Cx{1.0} : Cx{}};
                }
                metric.evaluator().eval(z.data(), zb.data(), out.data());
                auto& block = side == 0 ? jet.d1[dir] : jet.d1bar[dir];
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m) block(l, m) = out[l * n + m].b;
            }
        }
        return jet;
    }

    // order == second: seed d/dz_j on the inner dual level, d/dzbar_k on the outer
    jet.d2.assign(n, std::vector<Eigen::MatrixXcd>(n, Eigen::MatrixXcd::Zero(n, n)));
    std::vector<D2> z(n), zb(n), out(n * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                z[i] = D2{D1{p.coords[i], i == j ? Cx{1.0} : Cx{}}, D1{}};
                zb[i] = D2{D1{std::conj(p.coords[i]), Cx{}}, D1{i == k ? Cx{1.0} : Cx{}, Cx{}}};
            }
            metric.evaluator().eval(z.data(), zb.data(), out.data());
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    const D2& v = out[l * n + m];
                    jet.d2[j][k](l, m) = v.b.b;
                    if (k == 0) jet.d1[j](l, m) = v.a.b;
                    if (j == 0) jet.d1bar[k](l, m) = v.b.a;
                }
        }
    return jet;
}

VerificationReport check_kahler(const MetricField& metric, const ChartPoint& p, double tol)
{
    const MetricJet jet = evaluate_jet(metric, p, JetOrder::first);
    const int n = jet.dim();
    double worst = 0.0;
    int wj = 0, wl = 0, wm = 0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
                const double d = std::abs(jet.d1[j](l, m) - jet.d1[l](j, m));
                if (d > worst) {
                    worst = d;
                    wj = j;
                    wl = l;
                    wm = m;
                }
            }
    std::ostringstream w;
    w << point_str(p) << " worst(j,l,m)=(" << wj << "," << wl << "," << wm << ")";
    return make_report("kahler-closedness", worst, tol, tol - worst, 0.0, w.str(),
                       "metric=" + metric.name());
}

// ---- models -----------------------------------------------------------------

namespace {

struct FlatCoeffs {
    int n;
    double scale;
    template <typename T>
    void operator()(const T*, const T*, T* out) const
    {
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) out[l * n + m] = l == m ? T{scale} : T{};
    }
};

// h = s (1 - z zbar)^-2 on the unit disc
struct PoincareCoeffs {
    double scale;
    template <typename T>
    void operator()(const T* z, const T* zb, T* out) const
    {
        const T q = T{1.0} - z[0] * zb[0];
        out[0] = T{scale} / (q * q);
    }
};

// w_lm = s (delta_lm / q - zbar_l z_m / q^2), q = 1 + |z|^2
struct FubiniStudyCoeffs {
    int n;
    double scale;
    template <typename T>
    void operator()(const T* z, const T* zb, T* out) const
    {
        T q = T{1.0};
        for (int i = 0; i < n; ++i) q += z[i] * zb[i];
        const T q2 = q * q;
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
                T v = -(zb[l] * z[m]) / q2;
                if (l == m) v += T{1.0} / q;
                out[l * n + m] = v * scale;
            }
    }
};

// w_lm = s (delta_lm / q + zbar_l z_m / q^2), q = 1 - |z|^2
struct BallCoeffs {
    int n;
    double scale;
    template <typename T>
    void operator()(const T* z, const T* zb, T* out) const
    {
        T q = T{1.0};
        for (int i = 0; i < n; ++i) q -= z[i] * zb[i];
        const T q2 = q * q;
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
                T v = (zb[l] * z[m]) / q2;
                if (l == m) v += T{1.0} / q;
                out[l * n + m] = v * scale;
            }
    }
};

// g = 1 + ax cos(2 pi x) + ay cos(2 pi y) with x = (z+zb)/2, y = (z-zb)/(2i)
struct PerturbedTorusCoeffs {
    double ax, ay;
    template <typename T>
    void operator()(const T* z, const T* zb, T* out) const
    {
        const double pi = std::numbers::pi;
        T g = T{1.0};
        if (ax != 0.0) g += ax * cos(pi * (z[0] + zb[0]));
        if (ay != 0.0) g += ay * cos((pi * Cx{0.0, -1.0}) * (z[0] - zb[0]));
        out[0] = g;
    }
};

// phi = s log(1 + |z|^2)
struct FubiniStudyPotential {
    int n;
    double scale;
    template <typename T>
    T operator()(const T* z, const T* zb) const
    {
        T q = T{1.0};
        for (int i = 0; i < n; ++i) q += z[i] * zb[i];
        return scale * log(q);
    }
};

// phi = -s log(1 - |z|^2)
struct BallPotential {
    int n;
    double scale;
    template <typename T>
    T operator()(const T* z, const T* zb) const
    {
        T q = T{1.0};
        for (int i = 0; i < n; ++i) q -= z[i] * zb[i];
        return -scale * log(q);
    }
};

struct QuadraticBumpCoeffs {
    int n;
    double amp;
    template <typename T>
    void operator()(const T* z, const T* zb, T* out) const
    {
        T g = T{1.0};
        for (int i = 0; i < n; ++i) g += amp * (z[i] * zb[i]);
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) out[l * n + m] = l == m ? g : T{};
    }
};

class ProductEvaluator final : public detail::EvaluatorBase<ProductEvaluator> {
public:
    ProductEvaluator(std::shared_ptr<const MetricEvaluator> a,
                     std::shared_ptr<const MetricEvaluator> b)
        : a_(std::move(a)), b_(std::move(b))
    {
    }
    int dim() const override { return a_->dim() + b_->dim(); }
    int max_depth() const override { return std::min(a_->max_depth(), b_->max_depth()); }

    template <typename T>
    void run(const T* z, const T* zb, T* out) const
    {
        const int na = a_->dim(), nb = b_->dim(), n = na + nb;
        std::vector<T> oa(na * na), ob(nb * nb);
        a_->eval(z, zb, oa.data());
        b_->eval(z + na, zb + na, ob.data());
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) out[l * n + m] = T{};
        for (int l = 0; l < na; ++l)
            for (int m = 0; m < na; ++m) out[l * n + m] = oa[l * na + m];
        for (int l = 0; l < nb; ++l)
            for (int m = 0; m < nb; ++m) out[(na + l) * n + (na + m)] = ob[l * nb + m];
    }

private:
    std::shared_ptr<const MetricEvaluator> a_, b_;
};

class PullbackEvaluator final : public detail::EvaluatorBase<PullbackEvaluator> {
public:
    PullbackEvaluator(std::shared_ptr<const MetricEvaluator> inner, Eigen::VectorXcd center,
                      Eigen::MatrixXcd linear, std::vector<Eigen::MatrixXcd> quadratic)
        : inner_(std::move(inner)),
          center_(std::move(center)),
          linear_(std::move(linear)),
          quad_(std::move(quadratic))
    {
    }
    int dim() const override { return inner_->dim(); }
    int max_depth() const override { return inner_->max_depth(); }

    template <typename T>
    void run(const T* w, const T* wb, T* out) const
    {
        const int n = dim();
        std::vector<T> z(n), zb(n), jac(n * n), jacb(n * n), val(n * n);
        for (int l = 0; l < n; ++l) {
            T zl = T{center_[l]};
            T zbl = T{std::conj(center_[l])};
            for (int p = 0; p < n; ++p) {
                zl += linear_(l, p) * w[p];
                zbl += std::conj(linear_(l, p)) * wb[p];
            }
            if (!quad_.empty())
                for (int p = 0; p < n; ++p)
                    for (int r = 0; r < n; ++r) {
                        zl += 0.5 * quad_[l](p, r) * (w[p] * w[r]);
                        zbl += 0.5 * std::conj(quad_[l](p, r)) * (wb[p] * wb[r]);
                    }
            z[l] = zl;
            zb[l] = zbl;
            for (int p = 0; p < n; ++p) {
                T jlp = T{linear_(l, p)};
                T jblp = T{std::conj(linear_(l, p))};
                if (!quad_.empty())
                    for (int r = 0; r < n; ++r) {
                        jlp += quad_[l](p, r) * w[r];
                        jblp += std::conj(quad_[l](p, r)) * wb[r];
                    }
                jac[l * n + p] = jlp;
                jacb[l * n + p] = jblp;
            }
        }
        inner_->eval(z.data(), zb.data(), val.data());
        // out_pq = sum_lm w_lm(z) J_lp conj(J)_mq
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                T acc{};
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m)
                        acc += val[l * n + m] * jac[l * n + p] * jacb[m * n + q];
                out[p * n + q] = acc;
            }
    }

private:
    std::shared_ptr<const MetricEvaluator> inner_;
    Eigen::VectorXcd center_;
    Eigen::MatrixXcd linear_;
    std::vector<Eigen::MatrixXcd> quad_;
};

}  // namespace

MetricField make_flat(int n, double scale)
{
    return MetricField::from_coefficients("flat", n, ChartDomain::plane(), FlatCoeffs{n, scale});
}

MetricField make_poincare_disc(double scale)
{
    return MetricField::from_coefficients("poincare-disc", 1, ChartDomain::ball(),
                                          PoincareCoeffs{scale});
}

MetricField make_fubini_study_chart(int n, double scale)
{
    return MetricField::from_coefficients("fubini-study-chart", n, ChartDomain::plane(),
                                          FubiniStudyCoeffs{n, scale});
}

MetricField make_complex_ball(int n, double scale)
{
    return MetricField::from_coefficients("complex-ball", n, ChartDomain::ball(),
                                          BallCoeffs{n, scale});
}

MetricField make_fubini_study_potential(int n, double scale)
{
    return MetricField::from_potential("fubini-study-potential", n, ChartDomain::plane(),
                                       FubiniStudyPotential{n, scale});
}

MetricField make_complex_ball_potential(int n, double scale)
{
    return MetricField::from_potential("complex-ball-potential", n, ChartDomain::ball(),
                                       BallPotential{n, scale});
}

MetricField make_perturbed_torus(double ax, double ay)
{
    if (std::abs(ax) + std::abs(ay) >= 1.0)
        throw std::invalid_argument("perturbed-torus amplitudes must satisfy |ax|+|ay| < 1");
    return MetricField::from_coefficients("perturbed-torus", 1, ChartDomain::periodic(),
                                          PerturbedTorusCoeffs{ax, ay});
}

MetricField make_quadratic_bump(int n, double amp)
{
    return MetricField::from_coefficients("quadratic-bump", n, ChartDomain::plane(),
                                          QuadraticBumpCoeffs{n, amp});
}

MetricField make_product(const MetricField& a, const MetricField& b)
{
    return MetricField("product(" + a.name() + "," + b.name() + ")",
                       ChartDomain::product_of(a.domain(), a.dim(), b.domain(), b.dim()),
                       MetricProvenance::coefficient_form,
                       std::make_shared<ProductEvaluator>(a.evaluator_ptr(), b.evaluator_ptr()));
}

MetricField pullback(const MetricField& inner, Eigen::VectorXcd center, Eigen::MatrixXcd linear,
                     std::vector<Eigen::MatrixXcd> quadratic)
{
    // domain handling: the pulled-back field is evaluated near w = 0 only, so
    // membership is delegated to the ambient plane; callers stay local.
    return MetricField(inner.name() + "~pullback", ChartDomain::plane(), inner.provenance(),
                       std::make_shared<PullbackEvaluator>(inner.evaluator_ptr(), std::move(center),
                                                           std::move(linear), std::move(quadratic)));
}

std::vector<ModelMetric> model_catalog()
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {
        {"flat", "n >= 1, scale > 0", "zero", 0.0},
        {"poincare-disc", "scale s > 0; h = s(1-|z|^2)^-2 on the unit disc", "negative-constant",
         -2.0},
        {"fubini-study-chart", "n >= 1, scale s > 0", "positive-constant", 2.0},
        {"complex-ball", "n >= 1, scale s > 0; unit ball", "negative-constant", -2.0},
        {"product", "block product of two factors; flat x poincare-disc by default",
         "non-positive, not quasi-negative", nan},
        {"perturbed-torus", "|ax|+|ay| < 1; periodic unit cell", "indefinite (mean zero)", nan},
        {"quadratic-bump", "amp > -1; test fixture", "indefinite", nan},
    };
}

MetricField make_model(const std::string& name, int n, const std::vector<double>& params)
{
    auto param = [&](size_t i, double def) { return params.size() > i ? params[i] : def; };
    if (name == "flat") return make_flat(n, param(0, 1.0));
    if (name == "poincare-disc") return make_poincare_disc(param(0, 1.0));
    if (name == "fubini-study-chart") return make_fubini_study_chart(n, param(0, 1.0));
    if (name == "complex-ball") return make_complex_ball(n, param(0, 1.0));
    if (name == "perturbed-torus") return make_perturbed_torus(param(0, 0.1), param(1, 0.0));
    if (name == "quadratic-bump") return make_quadratic_bump(n, param(0, 0.3));
    if (name == "product")
        return make_product(make_flat(1, param(0, 1.0)), make_poincare_disc(param(1, 1.0)));
    throw std::invalid_argument("unknown model metric '" + name + "'");
}

}  // namespace klab
