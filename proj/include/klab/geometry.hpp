// Chart points, chart domains, hermitian metric fields with exact jet
// evaluation, and the catalog of closed-form model metrics.

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "klab/jets.hpp"
#include "klab/report.hpp"

namespace klab {

struct ChartPoint {
    Eigen::VectorXcd coords;

    ChartPoint() = default;
    explicit ChartPoint(Eigen::VectorXcd c) : coords(std::move(c)) {}
    ChartPoint(std::initializer_list<Cx> c);

    int dim() const { return static_cast<int>(coords.size()); }
    bool finite() const;
};

enum class DomainKind { whole_plane, unit_ball, unit_polydisc, periodic_cell, product };

// Open chart domains with an explicit membership predicate. The margin keeps
// evaluations strictly inside bounded domains; boundary points are rejected.
struct ChartDomain {
    DomainKind kind = DomainKind::whole_plane;
    double margin = 1e-6;
    std::vector<std::pair<ChartDomain, int>> parts;  // product factors with their dimensions

    bool contains(const ChartPoint& p) const;

    static ChartDomain plane() { return {DomainKind::whole_plane, 1e-6, {}}; }
    static ChartDomain ball(double margin = 1e-6) { return {DomainKind::unit_ball, margin, {}}; }
    static ChartDomain polydisc(double margin = 1e-6)
    {
        return {DomainKind::unit_polydisc, margin, {}};
    }
    static ChartDomain periodic() { return {DomainKind::periodic_cell, 1e-6, {}}; }
    static ChartDomain product_of(ChartDomain a, int na, ChartDomain b, int nb);
};

// Values and Wirtinger derivatives of the coefficient matrix (w_lm) at a point.
//   d1[j](l,m)    = d w_lm / d z_j
//   d1bar[k](l,m) = d w_lm / d zbar_k
//   d2[j][k](l,m) = d^2 w_lm / d z_j d zbar_k
struct MetricJet {
    Eigen::MatrixXcd value;
    std::vector<Eigen::MatrixXcd> d1;
    std::vector<Eigen::MatrixXcd> d1bar;
    std::vector<std::vector<Eigen::MatrixXcd>> d2;

    int dim() const { return static_cast<int>(value.rows()); }

    // max over entries of |d1bar[k](l,m) - conj(d1[k](m,l))|
    double hermitian_defect() const;
};

enum class JetOrder { value_only = 0, first = 1, second = 2 };

// Type-erased coefficient evaluator. Each depth evaluates the n x n
// coefficient matrix (row-major out) with nested-dual scalars; z and zbar are
// independent argument arrays.
class MetricEvaluator {
public:
    virtual ~MetricEvaluator() = default;
    virtual int dim() const = 0;
    virtual int max_depth() const = 0;
    virtual void eval(const Cx* z, const Cx* zb, Cx* out) const = 0;
    virtual void eval(const D1* z, const D1* zb, D1* out) const = 0;
    virtual void eval(const D2* z, const D2* zb, D2* out) const = 0;
    virtual void eval(const D3* z, const D3* zb, D3* out) const = 0;
    virtual void eval(const D4* z, const D4* zb, D4* out) const = 0;
};

namespace detail {

template <typename Derived>
class EvaluatorBase : public MetricEvaluator {
public:
    void eval(const Cx* z, const Cx* zb, Cx* out) const override { self().template run<Cx>(z, zb, out); }
    void eval(const D1* z, const D1* zb, D1* out) const override { self().template run<D1>(z, zb, out); }
    void eval(const D2* z, const D2* zb, D2* out) const override { self().template run<D2>(z, zb, out); }
    void eval(const D3* z, const D3* zb, D3* out) const override { self().template run<D3>(z, zb, out); }
    void eval(const D4* z, const D4* zb, D4* out) const override { self().template run<D4>(z, zb, out); }

private:
    const Derived& self() const { return static_cast<const Derived&>(*this); }
};

}  // namespace detail

// Adapts a copyable functor with a templated call operator
//   template <class T> void operator()(const T* z, const T* zb, T* out) const
template <typename F>
class FunctorEvaluator final : public detail::EvaluatorBase<FunctorEvaluator<F>> {
public:
    FunctorEvaluator(int n, F f) : n_(n), f_(std::move(f)) {}
    int dim() const override { return n_; }
    int max_depth() const override { return 4; }

    template <typename T>
    void run(const T* z, const T* zb, T* out) const { f_(z, zb, out); }

private:
    int n_;
    F f_;
};

enum class MetricProvenance { coefficient_form, potential_form };

// A hermitian metric on a chart: dimension, domain, provenance tag and the
// coefficient evaluator. Value semantics; evaluators are immutable and shared.
class MetricField {
public:
    MetricField() = default;
    MetricField(std::string name, ChartDomain domain, MetricProvenance provenance,
                std::shared_ptr<const MetricEvaluator> evaluator);

    template <typename F>
    static MetricField from_coefficients(std::string name, int n, ChartDomain domain, F f)
    {
        return MetricField(std::move(name), std::move(domain), MetricProvenance::coefficient_form,
                           std::make_shared<FunctorEvaluator<F>>(n, std::move(f)));
    }

    // phi is a scalar potential functor: template <class T> T operator()(const T* z, const T* zb)
    // The metric coefficients are its mixed second derivatives.
    template <typename F>
    static MetricField from_potential(std::string name, int n, ChartDomain domain, F phi);

    int dim() const { return evaluator_ ? evaluator_->dim() : 0; }
    const std::string& name() const { return name_; }
    const ChartDomain& domain() const { return domain_; }
    MetricProvenance provenance() const { return provenance_; }
    const MetricEvaluator& evaluator() const { return *evaluator_; }
    std::shared_ptr<const MetricEvaluator> evaluator_ptr() const { return evaluator_; }

    // coefficient matrix as plain complex values (row-major n*n, no domain check)
    Eigen::MatrixXcd value_at(const ChartPoint& p) const;

private:
    std::string name_;
    ChartDomain domain_;
    MetricProvenance provenance_ = MetricProvenance::coefficient_form;
    std::shared_ptr<const MetricEvaluator> evaluator_;
};

struct PointOutsideDomain : std::domain_error {
    using std::domain_error::domain_error;
};
struct NonPositiveDefiniteMetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedJetOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact jets of the coefficient matrix at p. Throws PointOutsideDomain,
// NonPositiveDefiniteMetric, UnsupportedJetOrder.
MetricJet evaluate_jet(const MetricField& metric, const ChartPoint& p,
                       JetOrder order = JetOrder::second);

// dw = 0 tested as symmetry of the holomorphic first derivatives:
// max_{j,l,m} |d_j w_lm - d_l w_jm| <= tol. Witness carries the worst indices.
VerificationReport check_kahler(const MetricField& metric, const ChartPoint& p, double tol = 1e-9);

// ---- model catalog ---------------------------------------------------------

struct ModelMetric {
    std::string name;
    std::string parameters;  // documented ranges
    std::string hsc_sign;    // expected sign of the holomorphic sectional curvature
    double hsc_constant;     // exact constant where one exists (NaN otherwise), scale = 1
};

// flat, poincare-disc, fubini-study-chart, complex-ball, product,
// perturbed-torus, plus the quadratic-bump test fixture
std::vector<ModelMetric> model_catalog();

MetricField make_flat(int n, double scale = 1.0);
MetricField make_poincare_disc(double scale = 1.0);
MetricField make_fubini_study_chart(int n, double scale = 1.0);
MetricField make_complex_ball(int n, double scale = 1.0);
// n=1 periodic cell [0,1)^2: g = 1 + ax*cos(2 pi x) + ay*cos(2 pi y)
MetricField make_perturbed_torus(double ax, double ay = 0.0);
// (1 + amp*|z|^2) * identity; indefinite curvature test fixture
MetricField make_quadratic_bump(int n, double amp);
MetricField make_product(const MetricField& a, const MetricField& b);

// Potential-form twins of the closed-form models: coefficients are derived
// from the Kahler potential by exact differentiation, so dw = 0 automatically.
MetricField make_fubini_study_potential(int n, double scale = 1.0);
MetricField make_complex_ball_potential(int n, double scale = 1.0);

// name-based factory used by the CLI config ("flat", "poincare-disc", ...)
MetricField make_model(const std::string& name, int n, const std::vector<double>& params);

// ---- holomorphic pullback --------------------------------------------------

// Pullback of a metric under the holomorphic map
//   z_l = center_l + sum_p L_{lp} w_p + 1/2 sum_{p,r} Q[l](p,r) w_p w_r
// with Q[l] symmetric. Used to reach normalized coordinates at a point.
MetricField pullback(const MetricField& inner, Eigen::VectorXcd center, Eigen::MatrixXcd linear,
                     std::vector<Eigen::MatrixXcd> quadratic = {});

// ---- potential-form machinery ----------------------------------------------

namespace detail {

// Lift a nested dual by two inner infinitesimal levels (used to differentiate
// a potential twice below whatever jet depth the caller requested).
template <typename T>
struct Lift2;

template <>
struct Lift2<Cx> {
    using L = D2;
    static D2 lift(const Cx& c) { return D2{D1{c, Cx{}}, D1{}}; }
    static Cx unlift(const D2& x) { return x.b.b; }  // mixed inner derivative
};

template <typename T>
struct Lift2<Dual<T>> {
    using L = Dual<typename Lift2<T>::L>;
    static L lift(const Dual<T>& x) { return {Lift2<T>::lift(x.a), Lift2<T>::lift(x.b)}; }
    static Dual<T> unlift(const L& x) { return {Lift2<T>::unlift(x.a), Lift2<T>::unlift(x.b)}; }
};

// embed a D2 constant at the leaf of a deeper dual
template <typename L>
struct EmbedD2 {
    static L embed(const D2& c)
    {
        return L{EmbedD2<typename L::Inner>::embed(c), typename L::Inner{}};
    }
};
template <>
struct EmbedD2<D2> {
    static D2 embed(const D2& c) { return c; }
};

}  // namespace detail

// Coefficients are mixed second derivatives of a scalar potential:
//   w_lm = d^2 phi / d z_l d zbar_m.
// Supports jet depth <= 2 at the interface (the potential itself is then
// evaluated at depth <= 4).
template <typename F>
class PotentialEvaluator final : public MetricEvaluator {
public:
    PotentialEvaluator(int n, F phi) : n_(n), phi_(std::move(phi)) {}
    int dim() const override { return n_; }
    int max_depth() const override { return 2; }

    void eval(const Cx* z, const Cx* zb, Cx* out) const override { run<Cx>(z, zb, out); }
    void eval(const D1* z, const D1* zb, D1* out) const override { run<D1>(z, zb, out); }
    void eval(const D2* z, const D2* zb, D2* out) const override { run<D2>(z, zb, out); }
    void eval(const D3*, const D3*, D3*) const override
    {
        throw UnsupportedJetOrder("potential-form metric supports jet depth <= 2");
    }
    void eval(const D4*, const D4*, D4*) const override
    {
        throw UnsupportedJetOrder("potential-form metric supports jet depth <= 2");
    }

private:
    template <typename T>
    void run(const T* z, const T* zb, T* out) const
    {
        using Ops = detail::Lift2<T>;
        using L = typename Ops::L;
        const L seed_z = detail::EmbedD2<L>::embed(D2{D1{Cx{}, Cx{1.0}}, D1{}});
        const L seed_zb = detail::EmbedD2<L>::embed(D2{D1{}, D1{Cx{1.0}, Cx{}}});
        std::vector<L> lz(n_), lzb(n_);
        for (int l = 0; l < n_; ++l) {
            for (int m = 0; m < n_; ++m) {
                for (int i = 0; i < n_; ++i) {
                    lz[i] = Ops::lift(z[i]);
                    lzb[i] = Ops::lift(zb[i]);
                }
                lz[l] += seed_z;
                lzb[m] += seed_zb;
                out[l * n_ + m] = Ops::unlift(phi_(lz.data(), lzb.data()));
            }
        }
    }

    int n_;
    F phi_;
};

template <typename F>
MetricField MetricField::from_potential(std::string name, int n, ChartDomain domain, F phi)
{
    return MetricField(std::move(name), std::move(domain), MetricProvenance::potential_form,
                       std::make_shared<PotentialEvaluator<F>>(n, std::move(phi)));
}

}  // namespace klab
