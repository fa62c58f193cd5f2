// Damped Newton solver with spectral differentiation for the approximate
// Kahler-Einstein Monge-Ampere equation on periodic charts:
//   w_eps = eps w - Ric_w + (i/2pi) d dbar u,   w_eps^n = e^u w^n,
// plus the verifiers for the solved family: the Kahler-Einstein relation,
// the sup bound, the eps -> 0 integral sweep, and the integral-inequality
// arithmetic chain.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "klab/geometry.hpp"
#include "klab/report.hpp"

namespace klab {

struct TorusMAProblem {
    int n = 1;      // complex dimension (1 or 2)
    int grid = 0;   // points per real axis, power of two >= 8
    double eps = 0.0;
    MetricField background;

    long points = 0;                      // grid^(2n)
    std::vector<Eigen::Matrix2cd> omega;  // background coefficients (top-left n x n block)
    std::vector<Eigen::Matrix2cd> ric;    // rho_lm of the background
    std::vector<double> det_omega;
};

struct MASolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Background must be periodic and positive on the grid; its Ricci matrix is
// evaluated pointwise from exact jets.
TorusMAProblem assemble_problem(const MetricField& background, int n, double eps, int grid);

struct SolveLogEntry {
    int iter;
    double residual;
    double positivity;
    double step;
};

struct MASolveState {
    Eigen::VectorXd u;
    double residual_norm = 0.0;     // max |w_eps^n/w^n - e^u|
    double positivity_margin = 0.0; // smallest eigenvalue of w_eps over the grid
    int iterations = 0;
    std::vector<SolveLogEntry> log;
};

// Throws MASolverError on max_iter exhaustion or irrecoverable positivity loss.
// initial == nullptr uses u = n log(eps).
MASolveState solve(const TorusMAProblem& problem, double tol, int max_iter,
                   const Eigen::VectorXd* initial = nullptr);

// Ric(w_eps) = -w_eps + eps w, with Ric(w_eps) from spectral -d dbar log det
VerificationReport verify_ke_relation(const TorusMAProblem& problem, const MASolveState& state,
                                      double tol = 1e-6);

// sup u <= C with e^C = max over the grid of (eps0 w - Ric_w)^n / w^n
VerificationReport verify_sup_bound(const TorusMAProblem& problem, const MASolveState& state,
                                    double eps0);

// tr_w w_eps <= (tr_{w_eps} w)^{n-1} e^u / (n-1)! at every grid point
VerificationReport elementary_trace_inequality(const TorusMAProblem& problem,
                                               const MASolveState& state);

struct EpsSweepRecord {
    int n = 1;
    std::vector<double> eps;        // decreasing
    std::vector<double> integrals;  // integral of w_eps^n over the cell
    std::vector<double> sup_u;
    double slope = 0.0;             // fitted log-log slope of integral vs eps
    double worst_trace_slack = 0.0; // most negative elementary-inequality slack
    bool complete = false;          // false when a solve aborted the sweep
};

EpsSweepRecord eps_sweep(const MetricField& background, int n, int grid,
                         const std::vector<double>& eps_list, double tol = 1e-11,
                         int max_iter = 80);

// plot-ready columns: eps, integral, sup_u, slope-so-far. Throws on empty
// records or I/O failure.
void emit_sweep_plotdata(const EpsSweepRecord& record, const std::string& path);

struct IntegralChainResult {
    double c_eps;
    VerificationReport chain;      // C_eps (n+1) kappa / (2n) <= 2 pi
    VerificationReport sup_lower;  // sup u >= -n log(4 pi n / ((n+1) kappa))
};

// kappa must be positive (the chain is vacuous otherwise). sup_u and c_eps are
// measured inputs (c_eps = inf e^{-u/n} of a solved state, or a synthetic
// value for the arithmetic checks).
IntegralChainResult integral_inequality_check(int n, double kappa, double c_eps, double sup_u);

double measured_c_eps(const MASolveState& state, int n);

// binary grid dump: magic, n, grid, eps header followed by u in row-major
// float64 (format documented in the README)
void dump_solution(const std::string& path, const TorusMAProblem& problem,
                   const MASolveState& state);
struct SolutionDump {
    int n;
    int grid;
    double eps;
    Eigen::VectorXd u;
};
SolutionDump load_solution(const std::string& path);

}  // namespace klab
