#include "klab/report.hpp"

#include <cstdio>
#include <sstream>
#include <utility>

namespace klab {

std::string to_string(CheckStatus s)
{
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped_hypothesis: return "skipped-hypothesis";
    }
    return "?";
}

namespace {

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

std::string sanitize(std::string s)
{
    for (char& c : s)
        if (c == '\n' || c == '\r' || c == '"') c = ' ';
    return s;
}

}  // namespace

std::string VerificationReport::to_line() const
{
    std::ostringstream os;
    os << "claim=" << claim_id << " status=" << to_string(status) << " lhs=" << fmt(lhs)
       << " rhs=" << fmt(rhs) << " slack=" << fmt(slack) << " tol=" << fmt(tolerance)
       << " witness=\"" << sanitize(witness) << "\"";
    if (!note.empty()) os << " note=\"" << sanitize(note) << "\"";
    return os.str();
}

VerificationReport make_report(std::string claim_id, double lhs, double rhs, double slack,
                               double tolerance, std::string witness, std::string note)
{
    VerificationReport r;
    r.claim_id = std::move(claim_id);
    r.status = slack >= -tolerance ? CheckStatus::pass : CheckStatus::fail;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = slack;
    r.tolerance = tolerance;
    r.witness = std::move(witness);
    r.note = std::move(note);
    return r;
}

VerificationReport make_skipped(std::string claim_id, std::string witness, std::string note)
{
    VerificationReport r;
    r.claim_id = std::move(claim_id);
    r.status = CheckStatus::skipped_hypothesis;
    r.witness = std::move(witness);
    r.note = std::move(note);
    return r;
}

const std::map<std::string, std::string>& claim_registry()
{
    // Slack orientation: pass means slack >= -tol, with slack defined per claim
    // as stated below.
    static const std::map<std::string, std::string> registry = {
        {"kahler-closedness",
         "d omega = 0 via symmetry of holomorphic derivatives: max|d_j w_lm - d_l w_jm| <= tol; "
         "slack = tol - defect"},
        {"jet-consistency",
         "analytic jets match central finite differences with second-order step convergence"},
        {"curvature-symmetry",
         "unitary-frame symmetries c_jklm = c_lmjk = c_lkjm = c_jmlk and c_jklm = conj(c_kjml); "
         "slack = tol - defect"},
        {"curvature-symmetry-weighted",
         "diagonal-frame weighted pair symmetry c_jklm*lam_m = c_lmjk*lam_k; slack = tol - defect"},
        {"ricci-consistency",
         "Ricci by curvature trace equals -(i/2pi) d dbar log det(metric); slack = tol - rel defect"},
        {"sign-catalog",
         "holomorphic sectional curvature sign matches the model catalog tag at sampled points"},
        {"moments-table",
         "unit-sphere moments: avg|v_l|^2 = 1/n, avg|v_j|^2|v_k|^2 = (1+delta_jk)/(n(n+1))"},
        {"moments-mc",
         "Monte Carlo sphere moments agree with the exact table within 4 standard errors"},
        {"avg-hbc",
         "average of HBC([v],[w]) over w in S^{2n-1} equals (1/(n|v|^2)) sum rho_jk v_j conj(v_k); "
         "slack = tol - |lhs-rhs|"},
        {"avg-hsc",
         "average of HSC over S^{2n-1} equals (2/(n(n+1))) sum c_jjll = (4pi/(n(n+1))) scal; "
         "slack = tol - |lhs-rhs|"},
        {"royden-polarization",
         "fourth-roots-of-unity average of Theta(xi_A,...) equals the reduced two-index sum; "
         "slack = tol - |full - reduced|"},
        {"royden-general-bound",
         "sum Theta(a,a,b,b) <= K/2 ((sum|xi|^2)^2 + sum|xi|^4); slack = rhs - lhs"},
        {"royden-negative-bound",
         "for K <= 0: sum Theta(a,a,b,b) <= K (nu+1)/(2 nu) (sum|xi|^2)^2; slack = rhs - lhs"},
        {"trace-dual-path",
         "trace S by generalized eigenvalues equals n (w')^{n-1}^w / (w')^n; slack = tol - defect"},
        {"schwarz-laplacian-identity",
         "-Lap_{w'} S = sum rho'_ll/lam_l^2 + sum |d w'_al/d z_j|^2/(lam_j lam_l^2 lam_a) "
         "- sum c_jjll/(lam_j lam_l); slack = tol - rel defect"},
        {"schwarz-term1-ricci",
         "sum rho'_ll/lam_l^2 >= 2pi(-lambda S + mu S^2/n) under Ric(w') >= -lambda w' + mu w; "
         "slack = lhs - rhs"},
        {"schwarz-term2-gradient",
         "sum |d w'_al/d z_j|^2/(lam_j lam_l^2 lam_a) >= (1/S) sum (1/lam_j)|dS/dz_j|^2; "
         "slack = lhs - rhs"},
        {"schwarz-term3-hsc",
         "sum c_jjll/(lam_j lam_l) <= -kappa (n+1)/(2n) S^2 under HSC <= -kappa; slack = rhs - lhs"},
        {"wu-yau-diffineq",
         "-Lap_{w'} log S >= (kappa(n+1)/(2n) + 2pi mu/n) S - 2pi lambda; slack = lhs - rhs"},
        {"trace-lemma",
         "T = log tr_{w_eps} w > -u/n with u = sum log lam; slack = T + u/n (0 at the n=1 boundary)"},
        {"quasi-negative-diffineq",
         "(-Lap_{w_eps} T)/(2pi) >= ((n+1)kappa(x)/(4pi n) + eps/n) e^T - 1; slack = lhs - rhs"},
        {"quasi-negative-minoration",
         "(-Lap_{w_eps} T)/(2pi) >= M(x) e^T - 1 with M = (n+1)kappa(x)/(4pi n); slack = lhs - rhs"},
        {"ma-solve",
         "Monge-Ampere residual |we^n/w^n - e^u| below solver tolerance with positive w_eps"},
        {"ma-uniqueness", "independent solver starts agree in max norm; slack = tol - |u1-u2|"},
        {"ke-relation",
         "Ric(w_eps) = -w_eps + eps w in coefficient max norm; slack = tol - defect"},
        {"sup-bound",
         "sup u_eps <= C with e^C = max (eps0 w - Ric_w)^n / w^n for eps < eps0; slack = C - sup u"},
        {"eps-slope",
         "log-log slope of integral of w_eps^n against eps equals n; slack = 0.02 n - |slope - n|"},
        {"elementary-trace-ineq",
         "tr_w w_eps <= (tr_{w_eps} w)^{n-1} e^u / (n-1)! at every grid point; slack = min point slack"},
        {"integral-chain",
         "C_eps (n+1) kappa / (2n) <= 2 pi for C_eps = inf e^{-u/n}; slack = rhs - lhs"},
        {"sup-lower-bound",
         "sup u >= -n log(4 pi n / ((n+1) kappa)); slack = sup u - bound"},
        {"demailly-criterion",
         "2g - 2 >= (kappa/2pi) deg_w C + sum (m_p - 1); slack = lhs - rhs (negative = obstructed)"},
        {"pluecker-genus", "smooth plane curve of degree d has genus (d-1)(d-2)/2"},
        {"hurwitz-degree", "deg T_C = 2 - 2g for a compact Riemann surface of genus g"},
        {"surface-example",
         "fibration parameters: 0 < a < b coprime, a >= 2g, d >= 4, all fiber genera >= 2, and the "
         "multiplicity-a fiber violates the degree criterion"},
        {"poincare-distance",
         "rho = atanh |(z-w)/(1-conj(w)z)|: symmetric, definite, triangle inequality, contracted by "
         "holomorphic self-maps"},
        {"subharmonicity",
         "dd-bar of log(|f'|_w^2 + eps) >= (kappa|f'|^6 + eps(|Df'|^2 + kappa|f'|^4))/(|f'|^2+eps)^2; "
         "slack = lhs - rhs"},
        {"cli-determinism", "identical config and seed produce byte-identical reports"},
    };
    return registry;
}

std::string summary_table(const std::vector<VerificationReport>& reports)
{
    std::ostringstream os;
    int pass = 0, fail = 0, skip = 0;
    os << "claim                              status   lhs               rhs               slack\n";
    for (const auto& r : reports) {
        char line[160];
        std::snprintf(line, sizeof line, "%-34s %-8s %+.9e %+.9e %+.9e\n", r.claim_id.c_str(),
                      to_string(r.status).c_str(), r.lhs, r.rhs, r.slack);
        os << line;
        if (r.status == CheckStatus::pass) ++pass;
        else if (r.status == CheckStatus::fail) ++fail;
        else ++skip;
    }
    os << "---\n"
       << pass << " pass, " << fail << " fail, " << skip << " skipped\n";
    return os.str();
}

}  // namespace klab
