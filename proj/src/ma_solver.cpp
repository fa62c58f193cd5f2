#include "klab/ma_solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "klab/curvature.hpp"

namespace klab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Complex-to-complex FFT workspace over the periodic cell [0,1)^{2n}, row
// major with axis order (x_1, y_1, ..., x_n, y_n) and the last axis
// contiguous. First-order symbols zero the Nyquist mode.
class Spectral {
public:
    Spectral(int n, int N) : n_(n), N_(N)
    {
        points_ = 1;
        for (int a = 0; a < 2 * n_; ++a) points_ *= N_;
        in_ = fftw_alloc_complex(points_);
        out_ = fftw_alloc_complex(points_);
        std::vector<int> dims(2 * n_, N_);
        fwd_ = fftw_plan_dft(2 * n_, dims.data(), in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft(2 * n_, dims.data(), in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
        freq_.resize(N_);
        freq1_.resize(N_);
        for (int i = 0; i < N_; ++i) {
            const int k = i <= N_ / 2 ? i : i - N_;
            freq_[i] = k;
            freq1_[i] = (N_ % 2 == 0 && i == N_ / 2) ? 0 : k;
        }
    }
    ~Spectral()
    {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(in_);
        fftw_free(out_);
    }
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    long points() const { return points_; }

    std::vector<Cx> forward(const Eigen::VectorXd& u) const
    {
        for (long p = 0; p < points_; ++p) {
            in_[p][0] = u[p];
            in_[p][1] = 0.0;
        }
        fftw_execute(fwd_);
        std::vector<Cx> spec(points_);
        for (long p = 0; p < points_; ++p) spec[p] = Cx{out_[p][0], out_[p][1]};
        return spec;
    }

    std::vector<Cx> inverse(const std::vector<Cx>& spec) const
    {
        for (long p = 0; p < points_; ++p) {
            in_[p][0] = spec[p].real();
            in_[p][1] = spec[p].imag();
        }
        fftw_execute(bwd_);
        std::vector<Cx> field(points_);
        const double scale = 1.0 / static_cast<double>(points_);
        for (long p = 0; p < points_; ++p) field[p] = Cx{out_[p][0], out_[p][1]} * scale;
        return field;
    }

    int axis_index(long p, int axis) const
    {
        long stride = 1;
        for (int a = 2 * n_ - 1; a > axis; --a) stride *= N_;
        return static_cast<int>((p / stride) % N_);
    }

    // d/dz_l symbol at spectral index p: pi (i kx + ky), Nyquist zeroed
    Cx sym_z(long p, int l) const
    {
        const double kx = freq1_[axis_index(p, 2 * l)];
        const double ky = freq1_[axis_index(p, 2 * l + 1)];
        return std::numbers::pi * Cx{ky, kx};
    }
    Cx sym_zbar(long p, int m) const
    {
        const double kx = freq1_[axis_index(p, 2 * m)];
        const double ky = freq1_[axis_index(p, 2 * m + 1)];
        return std::numbers::pi * Cx{-ky, kx};
    }
    double k_squared(long p) const
    {
        double acc = 0.0;
        for (int a = 0; a < 2 * n_; ++a) {
            const double k = freq_[axis_index(p, a)];
            acc += k * k;
        }
        return acc;
    }

    // all mixed second derivative fields d_l dbar_m u
    std::vector<std::vector<Cx>> hessian(const Eigen::VectorXd& u) const
    {
        const auto spec = forward(u);
        std::vector<std::vector<Cx>> h(n_ * n_);
        std::vector<Cx> tmp(points_);
        for (int l = 0; l < n_; ++l)
            for (int m = 0; m < n_; ++m) {
                if (m < l) {  // hermitian: H_lm = conj(H_ml)
                    h[l * n_ + m].resize(points_);
                    for (long p = 0; p < points_; ++p)
                        h[l * n_ + m][p] = std::conj(h[m * n_ + l][p]);
                    continue;
                }
                for (long p = 0; p < points_; ++p)
                    tmp[p] = spec[p] * sym_z(p, l) * sym_zbar(p, m);
                h[l * n_ + m] = inverse(tmp);
            }
        return h;
    }

    // (I - (beta/2pi) sum_l d_l dbar_l)^{-1}
    Eigen::VectorXd helmholtz_solve(const Eigen::VectorXd& r, double beta) const
    {
        auto spec = forward(r);
        for (long p = 0; p < points_; ++p) {
            double ksum = 0.0;
            for (int l = 0; l < n_; ++l) {
                const double kx = freq_[axis_index(p, 2 * l)];
                const double ky = freq_[axis_index(p, 2 * l + 1)];
                ksum += kx * kx + ky * ky;
            }
            spec[p] /= 1.0 + beta / two_pi * std::numbers::pi * std::numbers::pi * ksum;
        }
        const auto field = inverse(spec);
        Eigen::VectorXd out(points_);
        for (long p = 0; p < points_; ++p) out[p] = field[p].real();
        return out;
    }

private:
    int n_, N_;
    long points_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan fwd_, bwd_;
    std::vector<double> freq_, freq1_;
};

double block_det(const Eigen::Matrix2cd& m, int n)
{
    if (n == 1) return m(0, 0).real();
    return std::real(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
}

double block_min_eig(const Eigen::Matrix2cd& m, int n)
{
    if (n == 1) return m(0, 0).real();
    const double tr = std::real(m(0, 0) + m(1, 1));
    const double det = block_det(m, 2);
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    return 0.5 * (tr - disc);
}

Eigen::Matrix2cd block_inverse(const Eigen::Matrix2cd& m, int n)
{
    Eigen::Matrix2cd inv = Eigen::Matrix2cd::Zero();
    if (n == 1) {
        inv(0, 0) = 1.0 / m(0, 0);
        return inv;
    }
    const Cx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    inv(0, 0) = m(1, 1) / det;
    inv(1, 1) = m(0, 0) / det;
    inv(0, 1) = -m(0, 1) / det;
    inv(1, 0) = -m(1, 0) / det;
    return inv;
}

ChartPoint grid_point(const Spectral& spec, long p, int n, int N)
{
    Eigen::VectorXcd z(n);
    for (int l = 0; l < n; ++l) {
        const double x = static_cast<double>(spec.axis_index(p, 2 * l)) / N;
        const double y = static_cast<double>(spec.axis_index(p, 2 * l + 1)) / N;
        z[l] = Cx{x, y};
    }
    return ChartPoint{z};
}

// w_eps coefficient matrices for a given u
void form_metric(const TorusMAProblem& prob, const Spectral& spec, const Eigen::VectorXd& u,
                 std::vector<Eigen::Matrix2cd>& m)
{
    const auto h = spec.hessian(u);
    m.resize(prob.points);
    for (long p = 0; p < prob.points; ++p) {
        Eigen::Matrix2cd w = Eigen::Matrix2cd::Zero();
        for (int l = 0; l < prob.n; ++l)
            for (int c = 0; c < prob.n; ++c)
                w(l, c) = prob.eps * prob.omega[p](l, c) - prob.ric[p](l, c) / two_pi +
                          h[l * prob.n + c][p] / two_pi;
        m[p] = w;
    }
}

}  // namespace

TorusMAProblem assemble_problem(const MetricField& background, int n, double eps, int grid)
{
    if (n != 1 && n != 2) throw std::invalid_argument("complex dimension must be 1 or 2");
    if (background.dim() != n) throw std::invalid_argument("background dimension mismatch");
    if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
    if (grid < 8 || (grid & (grid - 1)) != 0)
        throw std::invalid_argument("grid must be a power of two >= 8");

    // periodicity probe: coefficients must repeat across the unit cell
    {
        const ChartPoint p0{Eigen::VectorXcd::Constant(n, Cx{0.3, 0.7})};
        for (int axis = 0; axis < 2 * n; ++axis) {
            Eigen::VectorXcd q = p0.coords;
            q[axis / 2] += axis % 2 == 0 ? Cx{1.0, 0.0} : Cx{0.0, 1.0};
            const double diff =
                (background.value_at(ChartPoint{q}) - background.value_at(p0)).cwiseAbs().maxCoeff();
            if (diff > 1e-12)
                throw std::invalid_argument("background is not periodic over the unit cell");
        }
    }

    TorusMAProblem prob{n, grid, eps, background, 0, {}, {}, {}};
    Spectral spec(n, grid);
    prob.points = spec.points();
    prob.omega.resize(prob.points);
    prob.ric.resize(prob.points);
    prob.det_omega.resize(prob.points);

    for (long p = 0; p < prob.points; ++p) {
        const auto pt = grid_point(spec, p, n, grid);
        const auto jet = evaluate_jet(background, pt);  // throws if not positive
        const auto rd = ricci_and_scalar(chern_curvature(jet), jet);
        Eigen::Matrix2cd w = Eigen::Matrix2cd::Zero(), r = Eigen::Matrix2cd::Zero();
        for (int l = 0; l < n; ++l)
            for (int c = 0; c < n; ++c) {
                w(l, c) = jet.value(l, c);
                r(l, c) = rd.ricci(l, c);
            }
        prob.omega[p] = w;
        prob.ric[p] = r;
        prob.det_omega[p] = block_det(w, n);
    }
    return prob;
}

MASolveState solve(const TorusMAProblem& prob, double tol, int max_iter,
                   const Eigen::VectorXd* initial)
{
    Spectral spec(prob.n, prob.grid);
    const long pts = prob.points;

    // default start: u0 = n log eps - log det w + mean(log det w), for which
    // w_eps = eps w exactly
    Eigen::VectorXd u(pts);
    if (initial) {
        if (initial->size() != pts) throw std::invalid_argument("initial guess size mismatch");
        u = *initial;
    } else {
        double mean_logdet = 0.0;
        for (long p = 0; p < pts; ++p) mean_logdet += std::log(prob.det_omega[p]);
        mean_logdet /= static_cast<double>(pts);
        for (long p = 0; p < pts; ++p)
            u[p] = prob.n * std::log(prob.eps) - std::log(prob.det_omega[p]) + mean_logdet;
    }

    std::vector<Eigen::Matrix2cd> m;
    auto metric_positivity = [&](const Eigen::VectorXd& uu, std::vector<Eigen::Matrix2cd>& mm) {
        form_metric(prob, spec, uu, mm);
        double pos = std::numeric_limits<double>::infinity();
        for (long p = 0; p < pts; ++p) pos = std::min(pos, block_min_eig(mm[p], prob.n));
        return pos;
    };
    auto g_of = [&](const std::vector<Eigen::Matrix2cd>& mm, const Eigen::VectorXd& uu,
                    Eigen::VectorXd& g) {
        g.resize(pts);
        double direct = 0.0;
        for (long p = 0; p < pts; ++p) {
            const double ratio = block_det(mm[p], prob.n) / prob.det_omega[p];
            g[p] = std::log(ratio) - uu[p];
            direct = std::max(direct, std::abs(ratio - std::exp(uu[p])));
        }
        return direct;
    };

    MASolveState st;
    double pos = metric_positivity(u, m);
    if (pos <= 0.0) throw MASolverError("initial guess breaks positivity");

    Eigen::VectorXd g;
    double residual = g_of(m, u, g);

    for (int iter = 0; iter < max_iter; ++iter) {
        st.log.push_back({iter, residual, pos, 1.0});
        if (residual <= tol) {
            st.u = u;
            st.residual_norm = residual;
            st.positivity_margin = pos;
            st.iterations = iter;
            return st;
        }

        // Newton direction: (I - (1/2pi) tr(M^-1 Hess .)) delta = G, solved by
        // preconditioned BiCGStab with the flat spectral inverse
        std::vector<Eigen::Matrix2cd> minv(pts);
        double beta = 0.0;
        for (long p = 0; p < pts; ++p) {
            minv[p] = block_inverse(m[p], prob.n);
            beta += std::real(minv[p](0, 0) + (prob.n == 2 ? minv[p](1, 1) : Cx{}));
        }
        beta /= static_cast<double>(pts) * prob.n;

        auto apply = [&](const Eigen::VectorXd& d) {
            const auto h = spec.hessian(d);
            Eigen::VectorXd out(pts);
            for (long p = 0; p < pts; ++p) {
                Cx tr{};
                for (int l = 0; l < prob.n; ++l)
                    for (int c = 0; c < prob.n; ++c) tr += minv[p](c, l) * h[l * prob.n + c][p];
                out[p] = d[p] - std::real(tr) / two_pi;
            }
            return out;
        };
        auto precond = [&](const Eigen::VectorXd& r) { return spec.helmholtz_solve(r, beta); };

        const double gnorm2 = g.norm();
        const double inner_tol = std::min(0.1, g.lpNorm<Eigen::Infinity>()) * gnorm2;
        Eigen::VectorXd delta = Eigen::VectorXd::Zero(pts);
        {
            Eigen::VectorXd r = g, rhat = g, p_v = Eigen::VectorXd::Zero(pts),
                            v = Eigen::VectorXd::Zero(pts);
            double rho = 1.0, alpha = 1.0, omega_b = 1.0;
            for (int it = 0; it < 200 && r.norm() > inner_tol; ++it) {
                const double rho1 = rhat.dot(r);
                if (std::abs(rho1) < 1e-300) break;
                const double beta_b = (rho1 / rho) * (alpha / omega_b);
                rho = rho1;
                p_v = r + beta_b * (p_v - omega_b * v);
                const Eigen::VectorXd phat = precond(p_v);
                v = apply(phat);
                alpha = rho / rhat.dot(v);
                const Eigen::VectorXd s = r - alpha * v;
                if (s.norm() <= inner_tol) {
                    delta += alpha * phat;
                    break;
                }
                const Eigen::VectorXd shat = precond(s);
                const Eigen::VectorXd t = apply(shat);
                omega_b = t.dot(s) / t.dot(t);
                delta += alpha * phat + omega_b * shat;
                r = s - omega_b * t;
            }
        }

        // damped acceptance with the positivity guard
        const double g0 = g.lpNorm<Eigen::Infinity>();
        double step = 1.0;
        bool accepted = false;
        bool positivity_blocked = false;
        std::vector<Eigen::Matrix2cd> m_try;
        Eigen::VectorXd g_try;
        while (step > std::pow(2.0, -20)) {
            const Eigen::VectorXd u_try = u + step * delta;
            const double pos_try = metric_positivity(u_try, m_try);
            if (pos_try > 0.0) {
                const double res_try = g_of(m_try, u_try, g_try);
                if (g_try.lpNorm<Eigen::Infinity>() <= (1.0 - 1e-4 * step) * g0) {
                    u = u_try;
                    m = m_try;
                    g = g_try;
                    pos = pos_try;
                    residual = res_try;
                    st.log.back().step = step;
                    accepted = true;
                    break;
                }
            } else {
                positivity_blocked = true;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (positivity_blocked)
                throw MASolverError("positivity lost irrecoverably (step floor reached)");
            std::ostringstream os;
            os << "line search stagnated at residual " << residual
               << "; requested tolerance is below the rounding floor of this grid";
            throw MASolverError(os.str());
        }
    }
    throw MASolverError("max_iter exceeded before reaching tolerance");
}

VerificationReport verify_ke_relation(const TorusMAProblem& prob, const MASolveState& state,
                                      double tol)
{
    if (state.u.size() != prob.points) throw std::invalid_argument("unsolved state");
    Spectral spec(prob.n, prob.grid);
    std::vector<Eigen::Matrix2cd> m;
    form_metric(prob, spec, state.u, m);

    Eigen::VectorXd logdet(prob.points);
    for (long p = 0; p < prob.points; ++p) logdet[p] = std::log(block_det(m[p], prob.n));
    const auto h = spec.hessian(logdet);

    // (1/2pi) rho_eps = -(1/2pi) d dbar log det(w_eps) must equal -w_eps + eps w
    double defect = 0.0;
    for (long p = 0; p < prob.points; ++p)
        for (int l = 0; l < prob.n; ++l)
            for (int c = 0; c < prob.n; ++c) {
                const Cx lhs = -h[l * prob.n + c][p] / two_pi;
                const Cx rhs = -m[p](l, c) + prob.eps * prob.omega[p](l, c);
                defect = std::max(defect, std::abs(lhs - rhs));
            }

    std::ostringstream wtn;
    wtn << "grid=" << prob.grid << " eps=" << prob.eps;
    return make_report("ke-relation", defect, tol, -defect, tol, wtn.str());
}

VerificationReport verify_sup_bound(const TorusMAProblem& prob, const MASolveState& state,
                                    double eps0)
{
    if (state.u.size() != prob.points) throw std::invalid_argument("unsolved state");
    if (eps0 <= prob.eps) throw std::invalid_argument("eps0 must exceed eps");
    double best = -std::numeric_limits<double>::infinity();
    for (long p = 0; p < prob.points; ++p) {
        const Eigen::Matrix2cd cand = eps0 * prob.omega[p] - prob.ric[p] / two_pi;
        if (block_min_eig(cand, prob.n) <= 0.0)
            throw std::invalid_argument("eps0 not admissible: eps0 w - Ric_w not positive");
        best = std::max(best, std::log(block_det(cand, prob.n) / prob.det_omega[p]));
    }
    const double sup_u = state.u.maxCoeff();
    std::ostringstream wtn;
    wtn << "eps=" << prob.eps << " eps0=" << eps0;
    return make_report("sup-bound", sup_u, best, best - sup_u, 1e-12, wtn.str());
}

VerificationReport elementary_trace_inequality(const TorusMAProblem& prob,
                                               const MASolveState& state)
{
    if (state.u.size() != prob.points) throw std::invalid_argument("unsolved state");
    Spectral spec(prob.n, prob.grid);
    std::vector<Eigen::Matrix2cd> m;
    form_metric(prob, spec, state.u, m);

    double fact = 1.0;
    for (int i = 2; i < prob.n; ++i) fact *= i;  // (n-1)!

    double worst = std::numeric_limits<double>::infinity();
    double lhs_at_worst = 0.0, rhs_at_worst = 0.0;
    for (long p = 0; p < prob.points; ++p) {
        double tr_we_w, tr_w_we;  // tr_{w_eps} w and tr_w w_eps
        if (prob.n == 1) {
            tr_we_w = std::real(prob.omega[p](0, 0) / m[p](0, 0));
            tr_w_we = std::real(m[p](0, 0) / prob.omega[p](0, 0));
        } else {
            const Eigen::Matrix2cd a = prob.omega[p], b = m[p];
            tr_we_w = std::real((block_inverse(b, 2) * a).trace());
            tr_w_we = std::real((block_inverse(a, 2) * b).trace());
        }
        const double rhs =
            std::pow(tr_we_w, prob.n - 1) * std::exp(state.u[p]) / fact;
        const double slack = rhs - tr_w_we;
        if (slack < worst) {
            worst = slack;
            lhs_at_worst = tr_w_we;
            rhs_at_worst = rhs;
        }
    }
    std::ostringstream wtn;
    wtn << "grid=" << prob.grid << " eps=" << prob.eps;
    return make_report("elementary-trace-ineq", lhs_at_worst, rhs_at_worst, worst,
                       1e-9 * std::max(1.0, std::abs(rhs_at_worst)), wtn.str());
}

EpsSweepRecord eps_sweep(const MetricField& background, int n, int grid,
                         const std::vector<double>& eps_list, double tol, int max_iter)
{
    if (eps_list.empty()) throw std::invalid_argument("empty eps list");
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (eps_list[i] >= eps_list[i - 1])
            throw std::invalid_argument("eps list must be strictly decreasing");

    EpsSweepRecord rec;
    rec.n = n;
    rec.worst_trace_slack = std::numeric_limits<double>::infinity();
    Eigen::VectorXd prev;
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;  // n!

    for (const double eps : eps_list) {
        const auto prob = assemble_problem(background, n, eps, grid);
        MASolveState st;
        try {
            st = solve(prob, tol, max_iter, prev.size() ? &prev : nullptr);
        } catch (const MASolverError&) {
            rec.complete = false;
            return rec;  // partial record
        }
        prev = st.u;

        double integral = 0.0;
        for (long p = 0; p < prob.points; ++p)
            integral += std::exp(st.u[p]) * prob.det_omega[p];
        integral *= std::pow(2.0, n) * fact / static_cast<double>(prob.points);

        rec.eps.push_back(eps);
        rec.integrals.push_back(integral);
        rec.sup_u.push_back(st.u.maxCoeff());
        rec.worst_trace_slack =
            std::min(rec.worst_trace_slack, elementary_trace_inequality(prob, st).slack);
    }

    // least-squares slope of log integral against log eps
    const size_t k = rec.eps.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < k; ++i) {
        const double x = std::log(rec.eps[i]), y = std::log(rec.integrals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rec.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    rec.complete = true;
    return rec;
}

void emit_sweep_plotdata(const EpsSweepRecord& record, const std::string& path)
{
    if (record.eps.empty()) throw std::invalid_argument("empty sweep record");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# eps integral sup_u slope_so_far\n";
    char line[160];
    for (size_t i = 0; i < record.eps.size(); ++i) {
        double slope = 0.0;
        if (i >= 1) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t j = 0; j <= i; ++j) {
                const double x = std::log(record.eps[j]), y = std::log(record.integrals[j]);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            const double m = static_cast<double>(i + 1);
            slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        }
        std::snprintf(line, sizeof line, "%.12e %.12e %.12e %.12e\n", record.eps[i],
                      record.integrals[i], record.sup_u[i], slope);
        out << line;
    }
    if (!out.flush()) throw std::runtime_error("write failure on " + path);
}

IntegralChainResult integral_inequality_check(int n, double kappa, double c_eps, double sup_u)
{
    if (kappa <= 0.0) throw std::invalid_argument("chain not applicable for kappa <= 0");
    IntegralChainResult out;
    out.c_eps = c_eps;

    const double lhs = c_eps * (n + 1.0) * kappa / (2.0 * n);
    std::ostringstream wtn;
    wtn << "n=" << n << " kappa=" << kappa << " C_eps=" << c_eps;
    out.chain = make_report("integral-chain", lhs, two_pi, two_pi - lhs, 1e-12, wtn.str());

    const double bound = -n * std::log(4.0 * std::numbers::pi * n / ((n + 1.0) * kappa));
    out.sup_lower =
        make_report("sup-lower-bound", sup_u, bound, sup_u - bound, 1e-12, wtn.str());
    return out;
}

double measured_c_eps(const MASolveState& state, int n)
{
    return std::exp(-state.u.maxCoeff() / n);
}

void dump_solution(const std::string& path, const TorusMAProblem& prob, const MASolveState& state)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    const char magic[8] = {'K', 'L', 'A', 'B', 'M', 'A', '0', '1'};
    out.write(magic, 8);
    const std::int32_t n = prob.n, grid = prob.grid;
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&grid), 4);
    out.write(reinterpret_cast<const char*>(&prob.eps), 8);
    out.write(reinterpret_cast<const char*>(state.u.data()),
              static_cast<std::streamsize>(state.u.size() * 8));
    if (!out.flush()) throw std::runtime_error("write failure on " + path);
}

SolutionDump load_solution(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, "KLABMA01", 8) != 0) throw std::runtime_error("bad dump magic");
    SolutionDump d;
    std::int32_t n, grid;
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&grid), 4);
    in.read(reinterpret_cast<char*>(&d.eps), 8);
    d.n = n;
    d.grid = grid;
    long points = 1;
    for (int a = 0; a < 2 * n; ++a) points *= grid;
    d.u.resize(points);
    in.read(reinterpret_cast<char*>(d.u.data()), static_cast<std::streamsize>(points * 8));
    if (!in) throw std::runtime_error("truncated dump");
    return d;
}

}  // namespace klab
