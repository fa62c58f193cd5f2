// Chern curvature tensor from metric jets, holomorphic sectional / bisectional
// curvature functionals, Ricci form and Chern scalar, and the Kahler symmetry
// checks.

#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <random>
#include <vector>

#include "klab/geometry.hpp"

namespace klab {

// Ricci normalization: Ric = (i / ric_normalization) * tr Theta. Fixed once,
// used by every module that mixes curvature with the trace inequalities.
inline constexpr double ric_normalization = 2.0 * std::numbers::pi;

struct TangentVector {
    Eigen::VectorXcd components;

    TangentVector() = default;
    explicit TangentVector(Eigen::VectorXcd c) : components(std::move(c)) {}
    TangentVector(std::initializer_list<Cx> c);
    int dim() const { return static_cast<int>(components.size()); }
    bool zero() const { return components.norm() == 0.0; }
};

// Coefficients c_jklm of the Chern curvature in the evaluation coordinates:
// j is the holomorphic form index, k the antiholomorphic one, (l -> m) the
// endomorphism part. frame_gram is the metric at the point (the coordinates
// are generally not unitary).
struct CurvatureTensor {
    int n = 0;
    std::vector<Cx> coeffs;  // ((j*n+k)*n+l)*n+m
    Eigen::MatrixXcd frame_gram;

    Cx c(int j, int k, int l, int m) const { return coeffs[((j * n + k) * n + l) * n + m]; }
    Cx& c(int j, int k, int l, int m) { return coeffs[((j * n + k) * n + l) * n + m]; }

    // R_jklm = sum_s c_jkls gram(s,m): the metric contraction, whose value on
    // (v, v, w, w) is the numerator of the bisectional curvature
    std::vector<Cx> lowered() const;

    bool unitary_frame(double tol = 1e-12) const;

    static CurvatureTensor zero(int n);
};

CurvatureTensor chern_curvature(const MetricJet& jet);

struct CurvValue {
    double value;          // real part
    double imag_residue;   // |imaginary part| of the normalized contraction
};

// HBC(v,w) = <Theta(v, vbar) w, w> / (|v|^2 |w|^2), norms via frame_gram
CurvValue hbc(const CurvatureTensor& t, const TangentVector& v, const TangentVector& w);
// diagonal restriction of hbc
CurvValue hsc(const CurvatureTensor& t, const TangentVector& v);

struct RicciData {
    Eigen::MatrixXcd ricci;  // rho_jk with Ric = (i/2pi) sum rho_jk dz_j ^ dzbar_k
    double scalar;           // Chern scalar curvature
};

// Endomorphism trace with the inverse metric (valid in any frame), and the
// double trace for the scalar.
RicciData ricci_and_scalar(const CurvatureTensor& t, const MetricJet& jet);

// Max defect of the full unitary-frame symmetry set, after transforming the
// lowered tensor to an orthonormal frame; relative to the largest coefficient.
double unitary_symmetry_defect(const CurvatureTensor& t);

// For a diagonal frame_gram with entries lam: max relative defect of
// c_jklm * lam_m = c_lmjk * lam_k (the pair-exchange symmetry in a merely
// orthogonal frame; its diagonal case is c_jjll lam_l = c_lljj lam_j).
double weighted_pair_symmetry_defect(const CurvatureTensor& t);

// Random tensor with the full unitary-frame Kahler symmetries, built by
// averaging a complex Gaussian tensor over the symmetry group orbit.
CurvatureTensor random_kahler_tensor(int n, std::mt19937_64& rng);

// Empirical extremum of HSC over directions: sphere sampling plus projected
// gradient refinement. A lower estimate of the true sup when maximize=true.
double hsc_extremum(const CurvatureTensor& t, bool maximize, int samples, int ascent_steps,
                    std::mt19937_64& rng);

// sum over permutation pairs of sgn(s)sgn(t) prod_i M_i(s(i), t(i)); the
// coefficient of the wedge product of (1,1)-forms against the unit volume.
Cx mixed_discriminant(const std::vector<Eigen::MatrixXcd>& mats);

// Independent route to the Ricci coefficients: rho_jk = -d_j dbar_k log det(w),
// computed by composing the metric evaluator with dual scalars (no curvature
// tensor involved).
Eigen::MatrixXcd ricci_from_log_det(const MetricField& metric, const ChartPoint& p);

namespace detail {

// cofactor-expansion determinant over any field-like scalar; fine for n <= 4
template <typename T>
T det_small(const std::vector<T>& m, int n)
{
    if (n == 1) return m[0];
    if (n == 2) return m[0] * m[3] - m[1] * m[2];
    T acc{};
    std::vector<T> minor((n - 1) * (n - 1));
    for (int c = 0; c < n; ++c) {
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c2 = 0; c2 < n; ++c2) {
                if (c2 == c) continue;
                minor[(r - 1) * (n - 1) + cc++] = m[r * n + c2];
            }
        }
        const T term = m[c] * det_small(minor, n - 1);
        acc = (c % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

}  // namespace detail

}  // namespace klab
