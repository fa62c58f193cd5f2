#include "klab/royden.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace klab {

Cx BiHermitianForm::theta(const Eigen::VectorXcd& xi, const Eigen::VectorXcd& eta,
                          const Eigen::VectorXcd& zeta, const Eigen::VectorXcd& tau) const
{
    Cx acc{};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const Cx a = xi[j] * std::conj(eta[k]);
            if (a == Cx{}) continue;
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m)
                    acc += t[((j * n + k) * n + l) * n + m] * a * zeta[l] * std::conj(tau[m]);
        }
    return acc;
}

double BiHermitianForm::theta_diag(const Eigen::VectorXcd& xi, const Eigen::VectorXcd& zeta) const
{
    return std::real(theta(xi, xi, zeta, zeta));
}

double BiHermitianForm::norm2(const Eigen::VectorXcd& xi) const
{
    Cx acc{};
    for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) acc += gram(l, m) * xi[l] * std::conj(xi[m]);
    return std::real(acc);
}

double BiHermitianForm::sectional(const Eigen::VectorXcd& xi) const
{
    const double q = norm2(xi);
    return theta_diag(xi, xi) / (q * q);
}

BiHermitianForm BiHermitianForm::from_tensor(const CurvatureTensor& src)
{
    BiHermitianForm f;
    f.n = src.n;
    f.t = src.lowered();
    f.gram = src.frame_gram;
    return f;
}

BiHermitianForm BiHermitianForm::constant_hsc(int n, double c)
{
    BiHermitianForm f;
    f.n = n;
    f.gram = Eigen::MatrixXcd::Identity(n, n);
    f.t.assign(static_cast<size_t>(n) * n * n * n, Cx{});
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    const double v = 0.5 * c *
                                     ((j == k && l == m ? 1.0 : 0.0) + (j == m && k == l ? 1.0 : 0.0));
                    f.t[((j * n + k) * n + l) * n + m] = v;
                }
    return f;
}

void validate_frame(const BiHermitianForm& form, const FrameSpec& frame, double tol)
{
    if (frame.nu() < 1 || frame.nu() > form.n)
        throw std::invalid_argument("frame must have 1 <= nu <= n vectors");
    for (int a = 0; a < frame.nu(); ++a) {
        const double na = form.norm2(frame.vectors[a]);
        if (!(na > 0.0)) throw std::invalid_argument("frame vector has zero norm");
        for (int b = a + 1; b < frame.nu(); ++b) {
            Cx ip{};
            for (int l = 0; l < form.n; ++l)
                for (int m = 0; m < form.n; ++m)
                    ip += form.gram(l, m) * frame.vectors[a][l] * std::conj(frame.vectors[b][m]);
            const double nb = form.norm2(frame.vectors[b]);
            if (std::abs(ip) > tol * std::sqrt(na * nb))
                throw std::invalid_argument("frame violates orthogonality");
        }
    }
}

FrameSpec random_orthogonal_frame(const BiHermitianForm& form, int nu, std::mt19937_64& rng,
                                  bool unit_scalings)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    FrameSpec frame;
    for (int a = 0; a < nu; ++a) {
        Eigen::VectorXcd v(form.n);
        for (int retry = 0; retry < 100; ++retry) {
            for (int i = 0; i < form.n; ++i) v[i] = Cx{gauss(rng), gauss(rng)};
            // Gram-Schmidt against the accepted vectors, in the form's gram
            for (const auto& u : frame.vectors) {
                Cx ip{};
                for (int l = 0; l < form.n; ++l)
                    for (int m = 0; m < form.n; ++m)
                        ip += form.gram(l, m) * v[l] * std::conj(u[m]);
                v -= (ip / form.norm2(u)) * u;
            }
            if (form.norm2(v) > 1e-8) break;
        }
        const double mag = unit_scalings ? 1.0 : std::exp(std::log(0.3) + unif(rng) * std::log(10.0));
        const double phase = 2.0 * std::numbers::pi * unif(rng);
        v *= (mag / std::sqrt(form.norm2(v))) * Cx{std::cos(phase), std::sin(phase)};
        frame.vectors.push_back(v);
    }
    return frame;
}

PolarizationResult polarization_sum(const BiHermitianForm& form, const FrameSpec& frame)
{
    validate_frame(form, frame);
    const int nu = frame.nu();
    if (nu > 8) throw std::invalid_argument("polarization enumeration capped at nu <= 8");

    static const Cx roots[4] = {Cx{1, 0}, Cx{0, 1}, Cx{-1, 0}, Cx{0, -1}};
    const long total = 1L << (2 * nu);  // 4^nu
    double full = 0.0;
    Eigen::VectorXcd xa(form.n);
    for (long code = 0; code < total; ++code) {
        xa.setZero();
        long c = code;
        for (int a = 0; a < nu; ++a) {
            xa += roots[c & 3] * frame.vectors[a];
            c >>= 2;
        }
        full += form.theta_diag(xa, xa);
    }
    full /= static_cast<double>(total);

    double reduced = 0.0;
    for (int a = 0; a < nu; ++a) reduced += form.theta_diag(frame.vectors[a], frame.vectors[a]);
    for (int a = 0; a < nu; ++a)
        for (int c2 = 0; c2 < nu; ++c2) {
            if (a == c2) continue;
            reduced += form.theta_diag(frame.vectors[a], frame.vectors[c2]);
            reduced += std::real(form.theta(frame.vectors[a], frame.vectors[c2],
                                            frame.vectors[c2], frame.vectors[a]));
        }
    return {full, reduced};
}

double hsc_upper_bound(const BiHermitianForm& form, int samples, int ascent_steps,
                       std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXcd best_v = Eigen::VectorXcd::Unit(form.n, 0);
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd v(form.n);
        for (int i = 0; i < form.n; ++i) v[i] = Cx{gauss(rng), gauss(rng)};
        if (v.norm() < 1e-12) continue;
        const double f = form.sectional(v);
        if (f > best) {
            best = f;
            best_v = v;
        }
    }

    Eigen::VectorXcd v = best_v.normalized();
    double step = 0.1;
    for (int it = 0; it < ascent_steps && step > 1e-12; ++it) {
        const double f0 = form.sectional(v);
        const double h = 1e-6;
        Eigen::VectorXcd grad(form.n);
        for (int i = 0; i < form.n; ++i) {
            Eigen::VectorXcd vp = v, vm = v;
            vp[i] += h;
            vm[i] -= h;
            const double dre = (form.sectional(vp) - form.sectional(vm)) / (2 * h);
            vp = v;
            vm = v;
            vp[i] += Cx{0, h};
            vm[i] -= Cx{0, h};
            const double dim_ = (form.sectional(vp) - form.sectional(vm)) / (2 * h);
            grad[i] = Cx{dre, dim_};
        }
        if (grad.norm() < 1e-14) break;
        const Eigen::VectorXcd cand = (v + step * grad / grad.norm()).normalized();
        if (form.sectional(cand) > f0)
            v = cand;
        else
            step *= 0.5;
    }
    return std::max(best, form.sectional(v));
}

double tighten_upper_bound(const BiHermitianForm& form, const FrameSpec& frame, double k,
                           std::mt19937_64& rng)
{
    double best = std::max(k, hsc_upper_bound(form, 20000, 200, rng));
    // the violating supremum may live inside the frame's span; seed from there
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < 2000; ++s) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(form.n);
        for (const auto& u : frame.vectors) v += Cx{gauss(rng), gauss(rng)} * u;
        if (v.norm() < 1e-12) continue;
        best = std::max(best, form.sectional(v));
    }
    return best;
}

RoydenCheck royden_inequality_check(const BiHermitianForm& form, const FrameSpec& frame, double k)
{
    validate_frame(form, frame);
    const int nu = frame.nu();

    double lhs = 0.0, s2 = 0.0, s4 = 0.0;
    for (int a = 0; a < nu; ++a) {
        const double na = form.norm2(frame.vectors[a]);
        s2 += na;
        s4 += na * na;
        for (int b = 0; b < nu; ++b) lhs += form.theta_diag(frame.vectors[a], frame.vectors[b]);
    }

    RoydenCheck out;
    out.lhs = lhs;
    out.rhs_general = 0.5 * k * (s2 * s2 + s4);
    out.rhs_negative = k * (nu + 1.0) / (2.0 * nu) * s2 * s2;

    const double scale = std::max({std::abs(lhs), std::abs(out.rhs_general), 1.0});
    const double tol = 1e-9 * scale;
    std::ostringstream wtn;
    wtn << "nu=" << nu << " K=" << k;

    out.general = make_report("royden-general-bound", lhs, out.rhs_general,
                              out.rhs_general - lhs, tol, wtn.str());
    if (k <= 0.0)
        out.negative = make_report("royden-negative-bound", lhs, out.rhs_negative,
                                   out.rhs_negative - lhs, tol, wtn.str());
    else
        out.negative = make_skipped("royden-negative-bound", wtn.str(), "K > 0");
    return out;
}

}  // namespace klab
