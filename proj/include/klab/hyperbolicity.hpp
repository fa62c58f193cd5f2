// The algebraic degree criterion for negatively curved metrics, the genus
// formulas feeding it, the singular-fiber construction constraints, the
// Poincare-distance primitives, and the subharmonicity-defect evaluator for
// holomorphic disc maps.

#pragma once

#include <vector>

#include "klab/curvature.hpp"
#include "klab/report.hpp"

namespace klab {

// A curve as ledger data: genus, degree against the ambient metric, and the
// multiplicities m_p >= 2 of the non-immersion points of its normalization.
struct CurveData {
    long genus = 0;
    double degree = 0.0;  // integral of the pulled-back form, > 0
    std::vector<int> multiplicities;
};

struct DemaillyResult {
    double lhs;       // 2g - 2
    double rhs;       // (kappa/2pi) deg + sum (m_p - 1)
    bool obstructed;  // lhs < rhs: no metric with HSC <= -kappa can contain the curve
    VerificationReport report;  // slack = lhs - rhs; pass means consistent
};

// Throws on negative kappa, nonpositive degree, or multiplicities < 2.
DemaillyResult demailly_bound(const CurveData& curve, double kappa);

// genus of a smooth plane curve of degree d: (d-1)(d-2)/2
long pluecker_genus(long d);

// degree of the tangent bundle of a genus-g curve: 2 - 2g
long hurwitz_tangent_degree(long g);

struct SurfaceExampleParams {
    long g;  // genus of the normalization of the special fiber, >= 2
    long a, b;  // singularity type, 0 < a < b coprime
    long d;  // plane-curve degree
};

struct SurfaceExampleAnalysis {
    bool a_range_ok;       // 0 < a < b
    bool coprime_ok;       // gcd(a,b) = 1
    bool a_large_enough;   // a >= 2g, i.e. a - 1 > 2g - 2
    bool degree_ok;        // d >= 4
    long smooth_fiber_genus;    // (d-1)(d-2)/2
    long nodal_fiber_genus;     // (d-1)(d-2)/2 - 1
    bool fibers_hyperbolic;     // all fiber genera >= 2
    bool special_fiber_obstructed;  // the multiplicity-a fiber violates the criterion
    bool all_ok() const
    {
        return a_range_ok && coprime_ok && a_large_enough && degree_ok && fibers_hyperbolic &&
               special_fiber_obstructed;
    }
};

SurfaceExampleAnalysis analyze_surface_example(const SurfaceExampleParams& p);
VerificationReport validate_surface_example(const SurfaceExampleParams& p);

// rho(z, w) = atanh |(z - w)/(1 - conj(w) z)| on the unit disc
double poincare_distance(Cx z, Cx w);

// holomorphic map from a disc neighborhood into C^n as component power series
struct PowerSeriesMap {
    int n = 1;
    std::vector<std::vector<Cx>> coeffs;  // coeffs[l][k]: coefficient of t^k in f_l
    double radius = 1.0;                  // convergence/validity radius

    Eigen::VectorXcd value(Cx t) const;
    Eigen::VectorXcd derivative(Cx t) const;
    Eigen::VectorXcd second_derivative(Cx t) const;
};

struct SubharmonicityResult {
    double laplacian;    // d_t dbar_t log(|f'|_w^2 + eps)
    double lower_bound;  // (kappa |f'|^6 + eps(|Df'|^2 + kappa |f'|^4)) / (|f'|^2 + eps)^2
    VerificationReport report;  // slack = laplacian - lower_bound
};

// kappa is the model oracle bound with HSC <= -kappa on the patch; eps_reg = 0
// requires f'(t) != 0.
SubharmonicityResult subharmonicity_defect(const MetricField& metric, const PowerSeriesMap& f,
                                           Cx t, double eps_reg, double kappa);

}  // namespace klab
