// Royden's polarization lemma: bounding sums of bisectional-type terms of a
// symmetric bi-hermitian form by an upper bound on its diagonal (sectional)
// values.

#pragma once

#include <random>

#include "klab/curvature.hpp"
#include "klab/report.hpp"

namespace klab {

// Quadrilinear form, sesquilinear in the first two and last two slots, with
// the unitary-frame symmetries of a Kahler curvature contraction:
//   Theta(xi, eta, zeta, tau) = sum t_jklm xi_j conj(eta_k) zeta_l conj(tau_m)
struct BiHermitianForm {
    int n = 0;
    std::vector<Cx> t;  // lowered coefficients, ((j*n+k)*n+l)*n+m
    Eigen::MatrixXcd gram;

    Cx theta(const Eigen::VectorXcd& xi, const Eigen::VectorXcd& eta, const Eigen::VectorXcd& zeta,
             const Eigen::VectorXcd& tau) const;
    // Theta(xi, xi, zeta, zeta); real for symmetric forms
    double theta_diag(const Eigen::VectorXcd& xi, const Eigen::VectorXcd& zeta) const;
    double norm2(const Eigen::VectorXcd& xi) const;
    // Theta(xi,xi,xi,xi)/|xi|^4
    double sectional(const Eigen::VectorXcd& xi) const;

    static BiHermitianForm from_tensor(const CurvatureTensor& t);
    // space form with constant sectional value c: t = (c/2)(dd + dd)
    static BiHermitianForm constant_hsc(int n, double c);
};

// nu mutually gram-orthogonal nonzero vectors, nu <= n
struct FrameSpec {
    std::vector<Eigen::VectorXcd> vectors;

    int nu() const { return static_cast<int>(vectors.size()); }
};

// throws std::invalid_argument when orthogonality or nonzeroness fails
void validate_frame(const BiHermitianForm& form, const FrameSpec& frame, double tol = 1e-10);

FrameSpec random_orthogonal_frame(const BiHermitianForm& form, int nu, std::mt19937_64& rng,
                                  bool unit_scalings = false);

struct PolarizationResult {
    double full_sum;     // (1/4^nu) sum over A in Z_4^nu of Theta(xi_A, x4)
    double reduced_sum;  // sum_a Theta(aaaa) + sum_{a!=c} [Theta(aacc) + Theta(acca)]
};

// nu capped at 8 (4^nu terms)
PolarizationResult polarization_sum(const BiHermitianForm& form, const FrameSpec& frame);

// empirical upper bound for Theta(xi,xi,xi,xi)/|xi|^4: max over sphere samples
// refined by gradient ascent; a lower estimate of the true supremum
double hsc_upper_bound(const BiHermitianForm& form, int samples, int ascent_steps,
                       std::mt19937_64& rng);

// re-estimate with extra effort, seeding the ascent from the frame directions
double tighten_upper_bound(const BiHermitianForm& form, const FrameSpec& frame, double k,
                           std::mt19937_64& rng);

struct RoydenCheck {
    double lhs;           // sum_{a,b} Theta(xi_a, xi_a, xi_b, xi_b)
    double rhs_general;   // K/2 ((sum |xi|^2)^2 + sum |xi|^4)
    double rhs_negative;  // K (nu+1)/(2 nu) (sum |xi|^2)^2, meaningful when K <= 0
    VerificationReport general;
    VerificationReport negative;  // skipped when K > 0
};

RoydenCheck royden_inequality_check(const BiHermitianForm& form, const FrameSpec& frame, double k);

}  // namespace klab
