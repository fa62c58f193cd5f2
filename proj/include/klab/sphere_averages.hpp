// Averages of curvature functionals over the unit sphere of a tangent space:
// the exact monomial moment table, and the identities expressing Ricci as the
// average of HBC and the scalar curvature as the average of HSC.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "klab/curvature.hpp"
#include "klab/report.hpp"

namespace klab {

struct SphereMomentTable {
    int n;
    double second_moment;        // avg |v_l|^2        = 1/n
    double fourth_moment_equal;  // avg |v_j|^4        = 2/(n(n+1))
    double fourth_moment_mixed;  // avg |v_j|^2|v_k|^2 = 1/(n(n+1)), j != k

    static SphereMomentTable for_dimension(int n);
};

// Average over the unit sphere S^{2n-1} in C^n of
//   prod_i v_{ups[i]} * conj(prod_i v_{downs[i]})
// for total degree 2 or 4. Unbalanced monomials integrate to zero.
// Throws std::invalid_argument on unsupported degrees or bad indices.
double sphere_moment(int n, const std::vector<int>& ups, const std::vector<int>& downs);

// uniform point on the unit sphere via a normalized complex gaussian
Eigen::VectorXcd random_sphere_vector(int n, std::mt19937_64& rng);

struct MonteCarloMode {
    long samples;
    std::uint64_t seed;
};

// avg_w HBC([v],[w]) = (1/(n|v|^2)) sum_jk rho_jk v_j conj(v_k), rho_jk = sum_l c_jkll.
// Exact mode expands HBC monomial by monomial against sphere_moment; Monte
// Carlo mode samples and passes within 4 standard errors. The tensor must be
// in a unitary frame.
VerificationReport average_hbc_identity(const CurvatureTensor& t, const TangentVector& v,
                                        std::optional<MonteCarloMode> mc = {});

// avg_v HSC([v]) = (2/(n(n+1))) sum_jl c_jjll  (= 4pi/(n(n+1)) * scal)
VerificationReport average_hsc_identity(const CurvatureTensor& t,
                                        std::optional<MonteCarloMode> mc = {});

// Chern scalar curvature of a unitary-frame tensor, (1/2pi) sum c_jjll
double scalar_from_unitary_tensor(const CurvatureTensor& t);

}  // namespace klab
