#include "klab/suites.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <random>
#include <sstream>

#include "klab/curvature.hpp"
#include "klab/hyperbolicity.hpp"
#include "klab/ma_solver.hpp"
#include "klab/royden.hpp"
#include "klab/schwarz.hpp"
#include "klab/sphere_averages.hpp"

namespace klab {

void RunConfig::apply_json_text(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "suite") suite = value.get<std::string>();
        else if (key == "seed") seed = value.get<std::uint64_t>();
        else if (key == "tol_scale") tol_scale = value.get<double>();
        else if (key == "out_dir") out_dir = value.get<std::string>();
        else if (key == "parallel") parallel = value.get<bool>();
        else if (key == "mc_samples") mc_samples = value.get<long>();
        else if (key == "averages_tensors") averages_tensors = value.get<int>();
        else if (key == "royden_trials") royden_trials = value.get<int>();
        else if (key == "royden_max_dim") royden_max_dim = value.get<int>();
        else if (key == "schwarz_points") schwarz_points = value.get<int>();
        else if (key == "fd_step") fd_step = value.get<double>();
        else if (key == "trace_lemma_samples") trace_lemma_samples = value.get<long>();
        else if (key == "ma_grid") ma_grid = value.get<int>();
        else if (key == "ma_background") ma_background = value.get<std::string>();
        else if (key == "ma_eps") ma_eps = value.get<double>();
        else if (key == "ma_eps_list") ma_eps_list = value.get<std::vector<double>>();
        else if (key == "schwarz_pairs") {
            for (const auto& e : value) {
                SchwarzPair sp;
                for (const auto& [k2, v2] : e.items()) {
                    if (k2 == "base") sp.base = v2.get<std::string>();
                    else if (k2 == "prime") sp.prime = v2.get<std::string>();
                    else if (k2 == "point") sp.point = v2.get<std::vector<double>>();
                    else if (k2 == "lambda") sp.lambda = v2.get<double>();
                    else if (k2 == "mu") sp.mu = v2.get<double>();
                    else if (k2 == "kappa") sp.kappa = v2.get<double>();
                    else if (k2 == "eps") sp.eps = v2.get<double>();
                    else throw std::invalid_argument("unknown schwarz_pairs key '" + k2 + "'");
                }
                schwarz_pairs.push_back(std::move(sp));
            }
        } else if (key == "curves") {
            for (const auto& e : value) {
                CurveEntry c;
                for (const auto& [k2, v2] : e.items()) {
                    if (k2 == "genus") c.genus = v2.get<long>();
                    else if (k2 == "degree") c.degree = v2.get<double>();
                    else if (k2 == "kappa") c.kappa = v2.get<double>();
                    else if (k2 == "multiplicities") c.multiplicities = v2.get<std::vector<int>>();
                    else if (k2 == "expect_obstructed") c.expect_obstructed = v2.get<bool>();
                    else throw std::invalid_argument("unknown curves key '" + k2 + "'");
                }
                curves.push_back(std::move(c));
            }
        } else if (key == "surface_example") {
            surface_example = value.get<std::vector<long>>();
            if (surface_example.size() != 4)
                throw std::invalid_argument("surface_example needs [g, a, b, d]");
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

RunConfig RunConfig::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    RunConfig cfg;
    cfg.apply_json_text(buf.str());
    return cfg;
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = {"curvature", "averages", "royden",
                                                   "schwarz",   "ma",       "hyperbolicity"};
    return names;
}

std::uint64_t suite_seed(std::uint64_t base, const std::string& name)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h ^ base * 0x9e3779b97f4a7c15ULL;
}

namespace {

// keeps the worst-slack report per claim, counting points / fails / skips
class Aggregator {
public:
    void add(const VerificationReport& r)
    {
        auto& slot = slots_[r.claim_id];
        slot.count += 1;
        if (r.status == CheckStatus::fail) slot.fails += 1;
        if (r.status == CheckStatus::skipped_hypothesis) {
            slot.skips += 1;
            if (slot.count == slot.skips) slot.worst = r;  // all skipped so far
            return;
        }
        if (!slot.has_real || r.slack < slot.worst.slack ||
            (r.failed() && !slot.worst.failed())) {
            slot.worst = r;
            slot.has_real = true;
        }
    }

    std::vector<VerificationReport> finalize() const
    {
        std::vector<VerificationReport> out;
        for (const auto& [claim, slot] : slots_) {
            VerificationReport r = slot.worst;
            std::ostringstream note;
            if (!r.note.empty()) note << r.note << "; ";
            note << "points=" << slot.count << " fails=" << slot.fails
                 << " skips=" << slot.skips;
            r.note = note.str();
            if (slot.fails > 0) r.status = CheckStatus::fail;
            out.push_back(std::move(r));
        }
        return out;
    }

private:
    struct Slot {
        VerificationReport worst;
        bool has_real = false;
        int count = 0, fails = 0, skips = 0;
    };
    std::map<std::string, Slot> slots_;  // ordered by claim id
};

Eigen::VectorXcd random_direction(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = Cx{gauss(rng), gauss(rng)};
    return v;
}

ChartPoint random_point_for(const MetricField& m, std::mt19937_64& rng)
{
    const int n = m.dim();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXcd z(n);
    for (int i = 0; i < n; ++i) z[i] = Cx{gauss(rng), gauss(rng)};
    switch (m.domain().kind) {
        case DomainKind::unit_ball:
        case DomainKind::unit_polydisc:
            z *= 0.7 * unif(rng) / std::max(z.norm(), 1e-12);
            break;
        case DomainKind::periodic_cell:
            for (int i = 0; i < n; ++i) z[i] = Cx{unif(rng), unif(rng)};
            break;
        case DomainKind::product: {
            Eigen::Index off = 0;
            for (const auto& [sub, nd] : m.domain().parts) {
                Eigen::VectorXcd part = z.segment(off, nd);
                if (sub.kind == DomainKind::unit_ball || sub.kind == DomainKind::unit_polydisc)
                    part *= 0.7 * unif(rng) / std::max(part.norm(), 1e-12);
                else
                    part *= 0.5;
                z.segment(off, nd) = part;
                off += nd;
            }
            break;
        }
        default:
            z *= 0.5;
    }
    return ChartPoint{z};
}

// finite-difference jet on coefficient values; the suite-level twin of the
// test oracle, used for the jet-consistency claim
MetricJet fd_jet_suite(const MetricField& m, const ChartPoint& p, double h)
{
    const int n = m.dim();
    const Cx iu{0.0, 1.0};
    auto shifted = [&](int rc1, double t1, int rc2, double t2) {
        Eigen::VectorXcd q = p.coords;
        auto bump = [&](int rc, double t) {
            if (rc < 0) return;
            if (rc < n)
                q[rc] += t;
            else
                q[rc - n] += Cx{0.0, t};
        };
        bump(rc1, t1);
        bump(rc2, t2);
        return m.value_at(ChartPoint{q});
    };
    const Eigen::MatrixXcd v0 = m.value_at(p);
    auto second = [&](int a, int b) -> Eigen::MatrixXcd {
        if (a == b) return (shifted(a, h, -1, 0) + shifted(a, -h, -1, 0) - 2.0 * v0) / (h * h);
        return (shifted(a, h, b, h) - shifted(a, h, b, -h) - shifted(a, -h, b, h) +
                shifted(a, -h, b, -h)) /
               (4.0 * h * h);
    };
    MetricJet jet;
    jet.value = v0;
    jet.d1.resize(n);
    jet.d1bar.resize(n);
    jet.d2.assign(n, std::vector<Eigen::MatrixXcd>(n));
    for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXcd dx = (shifted(j, h, -1, 0) - shifted(j, -h, -1, 0)) / (2 * h);
        const Eigen::MatrixXcd dy =
            (shifted(n + j, h, -1, 0) - shifted(n + j, -h, -1, 0)) / (2 * h);
        jet.d1[j] = 0.5 * (dx - iu * dy);
        jet.d1bar[j] = 0.5 * (dx + iu * dy);
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            jet.d2[j][k] = 0.25 * (second(j, k) + second(n + j, n + k) + iu * second(j, n + k) -
                                   iu * second(n + j, k));
    return jet;
}

double jet_distance_suite(const MetricJet& a, const MetricJet& b)
{
    const int n = a.dim();
    double worst = (a.value - b.value).cwiseAbs().maxCoeff();
    for (int j = 0; j < n; ++j) {
        worst = std::max(worst, (a.d1[j] - b.d1[j]).cwiseAbs().maxCoeff());
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, (a.d2[j][k] - b.d2[j][k]).cwiseAbs().maxCoeff());
    }
    return worst;
}

std::vector<MetricField> kahler_models()
{
    return {make_flat(2),
            make_poincare_disc(),
            make_fubini_study_chart(2),
            make_complex_ball(2),
            make_perturbed_torus(0.1, 0.05),
            make_product(make_flat(1), make_poincare_disc())};
}

std::vector<VerificationReport> curvature_suite(const RunConfig& cfg)
{
    std::mt19937_64 rng(suite_seed(cfg.seed, "curvature"));
    Aggregator agg;
    const double ts = cfg.tol_scale;

    for (const auto& m : kahler_models()) {
        for (int trial = 0; trial < 5; ++trial)
            agg.add(check_kahler(m, random_point_for(m, rng), 1e-9 * ts));

        for (int trial = 0; trial < 50; ++trial) {
            const auto p = random_point_for(m, rng);
            const auto t = chern_curvature(evaluate_jet(m, p));
            const double defect = unitary_symmetry_defect(t);
            agg.add(make_report("curvature-symmetry", defect, 1e-8 * ts, -defect, 1e-8 * ts,
                                "model=" + m.name()));
        }
    }

    // weighted pair symmetry at diagonal-frame points
    {
        const auto fs = make_fubini_study_chart(2);
        std::uniform_real_distribution<double> unif(0.05, 0.8);
        for (int trial = 0; trial < 20; ++trial) {
            const ChartPoint p{Cx{unif(rng), 0.0}, Cx{0.0, 0.0}};
            const double defect = weighted_pair_symmetry_defect(chern_curvature(evaluate_jet(fs, p)));
            agg.add(make_report("curvature-symmetry-weighted", defect, 1e-8 * ts, -defect,
                                1e-8 * ts, "model=fubini-study-chart"));
        }
    }

    // ricci consistency: tensor trace against -d dbar log det
    for (const auto& m : {make_fubini_study_potential(2), make_complex_ball_potential(2),
                          make_perturbed_torus(0.2, 0.1)}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = random_point_for(m, rng);
            const auto jet = evaluate_jet(m, p);
            const auto rd = ricci_and_scalar(chern_curvature(jet), jet);
            const auto rho = ricci_from_log_det(m, p);
            const double rel = (rd.ricci - rho).cwiseAbs().maxCoeff() /
                               std::max(rho.cwiseAbs().maxCoeff(), 1.0);
            agg.add(make_report("ricci-consistency", rel, 1e-6 * ts, -rel, 1e-6 * ts,
                                "model=" + m.name()));
        }
    }

    // sign catalog
    {
        struct Expect {
            MetricField m;
            int sign;  // -1, 0, +1; 2 = non-positive with a flat direction
        };
        const Expect expects[] = {{make_poincare_disc(), -1},
                                  {make_complex_ball(2), -1},
                                  {make_fubini_study_chart(2), +1},
                                  {make_flat(2), 0},
                                  {make_product(make_flat(1), make_poincare_disc()), 2}};
        for (const auto& e : expects) {
            double margin = std::numeric_limits<double>::infinity();
            bool ok = true;
            for (int trial = 0; trial < 20; ++trial) {
                const auto p = random_point_for(e.m, rng);
                const auto t = chern_curvature(evaluate_jet(e.m, p));
                const double h = hsc(t, TangentVector{random_direction(e.m.dim(), rng)}).value;
                switch (e.sign) {
                    case -1: ok = ok && h < 0; margin = std::min(margin, -h); break;
                    case +1: ok = ok && h > 0; margin = std::min(margin, h); break;
                    case 0: ok = ok && h == 0.0; margin = 0.0; break;
                    case 2: {
                        ok = ok && h <= 1e-12;
                        TangentVector flat_dir{Eigen::VectorXcd::Unit(e.m.dim(), 0)};
                        ok = ok && std::abs(hsc(t, flat_dir).value) < 1e-12;
                        margin = 0.0;
                        break;
                    }
                }
            }
            agg.add(make_report("sign-catalog", margin, 0.0, ok ? std::max(margin, 0.0) : -1.0,
                                0.0, "model=" + e.m.name(), "expected sign " + std::to_string(e.sign)));
        }
    }

    // jet consistency: second-order convergence of the FD cross-check
    for (const auto& m : {make_poincare_disc(), make_complex_ball(2), make_perturbed_torus(0.1, 0.0)}) {
        for (int trial = 0; trial < 3; ++trial) {
            const auto p = random_point_for(m, rng);
            const auto analytic = evaluate_jet(m, p);
            const double h = 2e-3;
            const double e1 = jet_distance_suite(analytic, fd_jet_suite(m, p, h));
            const double e2 = jet_distance_suite(analytic, fd_jet_suite(m, p, h / 2));
            if (e1 < 1e-9) continue;
            const double ratio = e1 / e2;
            const double slack = std::min(ratio - 3.5, 4.5 - ratio);
            agg.add(make_report("jet-consistency", ratio, 4.0, slack, 0.0, "model=" + m.name()));
        }
    }

    return agg.finalize();
}

std::vector<VerificationReport> averages_suite(const RunConfig& cfg)
{
    std::mt19937_64 rng(suite_seed(cfg.seed, "averages"));
    Aggregator agg;

    // exact moment table, n = 1..6
    for (int n = 1; n <= 6; ++n) {
        const auto tab = SphereMomentTable::for_dimension(n);
        double defect = std::abs(sphere_moment(n, {0, 0}, {0, 0}) - 2.0 / (n * (n + 1.0)));
        if (n > 1)
            defect = std::max(defect,
                              std::abs(sphere_moment(n, {0, 1}, {0, 1}) - 1.0 / (n * (n + 1.0))));
        defect = std::max(defect, std::abs(tab.second_moment - 1.0 / n));
        agg.add(make_report("moments-table", defect, 0.0, -defect, 0.0, "n=" + std::to_string(n)));
    }

    // Monte Carlo moments within 4 standard errors
    {
        const int n = 3;
        const long N = cfg.mc_samples;
        double m_equal = 0.0, m_mixed = 0.0, sq_equal = 0.0, sq_mixed = 0.0;
        for (long i = 0; i < N; ++i) {
            const auto v = random_sphere_vector(n, rng);
            const double a = std::norm(v[0]) * std::norm(v[0]);
            const double b = std::norm(v[0]) * std::norm(v[1]);
            m_equal += a;
            m_mixed += b;
            sq_equal += a * a;
            sq_mixed += b * b;
        }
        m_equal /= N;
        m_mixed /= N;
        const double se_e = std::sqrt(std::max(sq_equal / N - m_equal * m_equal, 0.0) / N);
        const double se_m = std::sqrt(std::max(sq_mixed / N - m_mixed * m_mixed, 0.0) / N);
        const auto tab = SphereMomentTable::for_dimension(n);
        const double d1 = std::abs(m_equal - tab.fourth_moment_equal);
        const double d2 = std::abs(m_mixed - tab.fourth_moment_mixed);
        agg.add(make_report("moments-mc", m_equal, tab.fourth_moment_equal,
                            std::min(4 * se_e - d1, 4 * se_m - d2), 0.0,
                            "n=3 N=" + std::to_string(N)));
    }

    for (int n = 1; n <= 3; ++n)
        for (int trial = 0; trial < cfg.averages_tensors; ++trial) {
            const auto t = random_kahler_tensor(n, rng);
            agg.add(average_hbc_identity(t, TangentVector{random_sphere_vector(n, rng)}));
            agg.add(average_hsc_identity(t));
        }

    return agg.finalize();
}

std::vector<VerificationReport> royden_suite(const RunConfig& cfg)
{
    std::mt19937_64 rng(suite_seed(cfg.seed, "royden"));
    Aggregator agg;

    const int trials = cfg.royden_trials;
    for (int trial = 0; trial < trials; ++trial) {
        const int n = 2 + static_cast<int>(rng() % std::max(1, cfg.royden_max_dim - 1));
        auto t = random_kahler_tensor(n, rng);
        auto form = BiHermitianForm::from_tensor(t);
        {
            const double top = hsc_upper_bound(form, 1500, 40, rng);
            const auto shift = BiHermitianForm::constant_hsc(n, top + 0.5);
            for (size_t i = 0; i < form.t.size(); ++i) form.t[i] -= shift.t[i];
        }
        double k = hsc_upper_bound(form, 1500, 40, rng);
        if (k >= 0.0) continue;
        const int nu = 1 + static_cast<int>(rng() % std::min(n, cfg.royden_max_dim));
        const auto frame = random_orthogonal_frame(form, nu, rng);

        if (trial % 10 == 0) {
            const auto pr = polarization_sum(form, frame);
            const double defect = std::abs(pr.full_sum - pr.reduced_sum);
            const double scale = std::max(std::abs(pr.full_sum), 1.0);
            agg.add(make_report("royden-polarization", pr.full_sum, pr.reduced_sum,
                                1e-9 * scale - defect, 0.0, "nu=" + std::to_string(nu)));
        }

        auto chk = royden_inequality_check(form, frame, k);
        if (chk.general.failed() || chk.negative.failed()) {
            k = std::min(tighten_upper_bound(form, frame, k, rng), 0.0);
            chk = royden_inequality_check(form, frame, k);
        }
        agg.add(chk.general);
        agg.add(chk.negative);
    }
    return agg.finalize();
}

std::vector<VerificationReport> schwarz_suite(const RunConfig& cfg)
{
    std::mt19937_64 rng(suite_seed(cfg.seed, "schwarz"));
    Aggregator agg;
    std::normal_distribution<double> gauss(0.0, 1.0);

    // dual-path trace agreement on random constant pairs
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Eigen::MatrixXcd a(n, n), b(n, n);
        for (int i = 0; i < n * n; ++i) {
            a(i / n, i % n) = Cx{gauss(rng), gauss(rng)};
            b(i / n, i % n) = Cx{gauss(rng), gauss(rng)};
        }
        a = (a * a.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(n, n)).eval();
        b = (b * b.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(n, n)).eval();
        const auto ca = a, cb = b;
        auto fa = MetricField::from_coefficients(
            "const-a", n, ChartDomain::plane(), [n, ca](const auto*, const auto*, auto* out) {
                using T = std::remove_cvref_t<decltype(out[0])>;
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m) out[l * n + m] = T{ca(l, m)};
            });
        auto fb = MetricField::from_coefficients(
            "const-b", n, ChartDomain::plane(), [n, cb](const auto*, const auto*, auto* out) {
                using T = std::remove_cvref_t<decltype(out[0])>;
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m) out[l * n + m] = T{cb(l, m)};
            });
        const auto st = trace_state({fa, fb, ChartPoint{Eigen::VectorXcd::Zero(n)}});
        const double tol = 1e-10 * std::max(1.0, st.S);
        agg.add(make_report("trace-dual-path", st.dual_path_defect, tol,
                            tol - st.dual_path_defect, 0.0, "n=" + std::to_string(n)));
    }

    // laplacian identity on the model pair matrix (includes one n=2 pair)
    {
        const std::vector<MetricPair> pairs = {
            {make_flat(1), make_quadratic_bump(1, 0.3), ChartPoint{Cx{0.2}}},
            {make_fubini_study_chart(1), make_poincare_disc(), ChartPoint{Cx{0.1}}},
            {make_poincare_disc(), make_fubini_study_chart(1), ChartPoint{Cx{0.3, 0.1}}},
            {make_complex_ball(2), make_fubini_study_chart(2),
             ChartPoint{Cx{0.2, 0.0}, Cx{0.1, -0.1}}},
        };
        for (const auto& pair : pairs) agg.add(laplacian_equality_check(pair, cfg.fd_step));
    }

    // estimate lemmas and the assembled inequality over the point matrix
    {
        const double einstein = 1.0 / std::numbers::pi;
        const auto pd = make_poincare_disc();
        const auto ball = make_complex_ball(2);
        const auto torus_base = make_perturbed_torus(0.1, 0.05);
        const auto torus_prime = make_perturbed_torus(0.15, 0.08);

        const int per_family = std::max(1, cfg.schwarz_points / 3);
        for (int trial = 0; trial < per_family; ++trial) {
            {
                const MetricPair pair{pd, pd, random_point_for(pd, rng)};
                const auto lem = estimate_lemma_checks(pair, einstein, 0.0, 2.0, 2000, rng());
                agg.add(lem.term1);
                agg.add(lem.term2);
                agg.add(lem.term3);
                agg.add(wu_yau_inequality_check(pair, einstein, 0.0, 2.0, cfg.fd_step, 2000,
                                                rng()));
            }
            {
                const MetricPair pair{ball, ball, random_point_for(ball, rng)};
                const double lam = 3.0 / ric_normalization;
                const auto lem = estimate_lemma_checks(pair, lam, 0.0, 2.0, 2000, rng());
                agg.add(lem.term1);
                agg.add(lem.term2);
                agg.add(lem.term3);
                agg.add(wu_yau_inequality_check(pair, lam, 0.0, 2.0, cfg.fd_step, 2000, rng()));
            }
            {
                const MetricPair pair{torus_base, torus_prime, random_point_for(torus_base, rng)};
                const auto nj = normalize_pair(pair);
                Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(
                    Eigen::MatrixXcd(nj.prime_ricci / ric_normalization),
                    Eigen::MatrixXcd(Eigen::VectorXcd(nj.lambda.cast<Cx>()).asDiagonal()));
                const double lam = std::max(0.0, -ges.eigenvalues().minCoeff()) + 1e-6;
                const auto lem = estimate_lemma_checks(pair, lam, 0.0, 0.0, 2000, rng());
                agg.add(lem.term1);
                agg.add(lem.term2);
                agg.add(lem.term3);
                agg.add(wu_yau_inequality_check(pair, lam, 0.0, 0.0, cfg.fd_step, 2000, rng()));
            }
        }
    }

    // trace lemma over random eigenvalue vectors
    {
        std::lognormal_distribution<double> logn(0.0, 1.5);
        double worst = std::numeric_limits<double>::infinity();
        long fails = 0;
        for (long trial = 0; trial < cfg.trace_lemma_samples; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 5);
            Eigen::VectorXd lam(n);
            double u = 0.0;
            for (int i = 0; i < n; ++i) {
                lam[i] = logn(rng);
                u += std::log(lam[i]);
            }
            const auto r = trace_lemma_check(u, lam);
            if (!r.passed() || r.slack <= 0.0) ++fails;
            worst = std::min(worst, r.slack);
        }
        agg.add(make_report("trace-lemma", worst, 0.0, fails == 0 ? worst : -1.0, 0.0,
                            "samples=" + std::to_string(cfg.trace_lemma_samples)));
        // the n=1 boundary
        const auto boundary = trace_lemma_check(0.0, Eigen::VectorXd::Ones(1));
        agg.add(boundary);
    }

    // config-selected pairs with explicit constants
    for (const auto& sp : cfg.schwarz_pairs) {
        const int n = static_cast<int>(sp.point.size() / 2);
        Eigen::VectorXcd z(n);
        for (int i = 0; i < n; ++i) z[i] = Cx{sp.point[2 * i], sp.point[2 * i + 1]};
        const MetricPair pair{make_model(sp.base, n, {}), make_model(sp.prime, n, {}),
                              ChartPoint{z}};
        const auto lem = estimate_lemma_checks(pair, sp.lambda, sp.mu, sp.kappa, 2000, rng());
        agg.add(lem.term1);
        agg.add(lem.term2);
        agg.add(lem.term3);
        agg.add(wu_yau_inequality_check(pair, sp.lambda, sp.mu, sp.kappa, cfg.fd_step, 2000,
                                        rng()));
        if (sp.eps > 0.0) {
            const auto qr = quasi_negative_inequality_check(pair, sp.kappa, sp.eps, cfg.fd_step);
            agg.add(qr.full);
            agg.add(qr.minoration);
        }
        agg.add(laplacian_equality_check(pair, cfg.fd_step));
    }

    // quasi-negative pointwise inequality
    {
        const MetricPair flat_pair{make_flat(1), make_flat(1), ChartPoint{Cx{0.3}}};
        auto qr = quasi_negative_inequality_check(flat_pair, 0.0, 0.1, cfg.fd_step);
        agg.add(qr.full);
        agg.add(qr.minoration);

        const auto pd = make_poincare_disc();
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = random_point_for(pd, rng);
            const MetricPair pair{pd, pd, p};
            const double kappa = estimate_kappa(pd, p, 2000, 50, rng);
            qr = quasi_negative_inequality_check(pair, kappa, 0.0, cfg.fd_step);
            agg.add(qr.full);
            agg.add(qr.minoration);
        }

        const auto prod = make_product(make_flat(1), make_poincare_disc());
        const auto prod_prime = make_product(make_flat(1, 1.5), make_poincare_disc(1.5));
        for (int trial = 0; trial < 5; ++trial) {
            const auto p = random_point_for(prod, rng);
            const double kappa = estimate_kappa(prod, p, 2000, 50, rng);
            qr = quasi_negative_inequality_check({prod, prod_prime, p}, kappa, 0.3, cfg.fd_step);
            agg.add(qr.full);
            agg.add(qr.minoration);
        }
    }

    return agg.finalize();
}

std::vector<VerificationReport> ma_suite(const RunConfig& cfg)
{
    Aggregator agg;

    // flat background: the constant solution is recovered to machine precision
    for (const double eps : {0.4, 0.2, 0.1}) {
        const auto prob = assemble_problem(make_flat(1), 1, eps, 32);
        const auto st = solve(prob, 1e-12, 50);
        const double u_err = (st.u.array() - std::log(eps)).abs().maxCoeff();
        std::ostringstream note;
        note << "sup_u=" << st.u.maxCoeff() << " expected=" << std::log(eps)
             << " residual=" << st.residual_norm;
        agg.add(make_report("ma-solve", st.residual_norm, 1e-12,
                            std::min(1e-12 - st.residual_norm, 1e-10 - u_err), 0.0,
                            "flat eps=" + std::to_string(eps), note.str()));
    }

    // driven background from the config
    {
        const auto bg = make_model(cfg.ma_background, 1, {});
        const auto prob = assemble_problem(bg, 1, cfg.ma_eps, cfg.ma_grid);
        const auto st = solve(prob, 1e-10, 80);
        std::ostringstream note;
        note << "sup_u=" << st.u.maxCoeff() << " iterations=" << st.iterations;
        agg.add(make_report("ma-solve", st.residual_norm, 1e-10, 1e-10 - st.residual_norm, 0.0,
                            cfg.ma_background + " eps=" + std::to_string(cfg.ma_eps), note.str()));

        // two-start uniqueness: the constant start is admissible at this eps
        const Eigen::VectorXd other =
            Eigen::VectorXd::Constant(prob.points, prob.n * std::log(prob.eps));
        const auto st1 = solve(prob, 1e-10, 120, &other);
        const double diff = (st.u - st1.u).lpNorm<Eigen::Infinity>();
        agg.add(make_report("ma-uniqueness", diff, 1e-9, 1e-9 - diff, 0.0,
                            cfg.ma_background + " eps=" + std::to_string(cfg.ma_eps)));

        agg.add(verify_ke_relation(prob, st, 1e-6 * cfg.tol_scale));
        agg.add(elementary_trace_inequality(prob, st));

        // integral-inequality chain with the negatively-curved model constant
        const double kappa = 2.0;  // poincare-disc oracle at scale 1
        const auto chain = integral_inequality_check(1, kappa, measured_c_eps(st, 1),
                                                     st.u.maxCoeff());
        agg.add(chain.chain);
        agg.add(chain.sup_lower);
    }

    // sup bound across the sweep with a single eps0 = 1 constant
    {
        const auto bg = make_model(cfg.ma_background, 1, {});
        Eigen::VectorXd prev;
        for (const double eps : cfg.ma_eps_list) {
            const auto prob = assemble_problem(bg, 1, eps, 64);
            const auto st = solve(prob, 1e-10, 80, prev.size() ? &prev : nullptr);
            prev = st.u;
            agg.add(verify_sup_bound(prob, st, 1.0));
        }
    }

    // eps sweep slopes
    {
        const auto flat_rec = eps_sweep(make_flat(1), 1, 32, cfg.ma_eps_list);
        agg.add(make_report("eps-slope", flat_rec.slope, 1.0,
                            0.02 - std::abs(flat_rec.slope - 1.0), 0.0, "flat n=1"));
        const auto rec = eps_sweep(make_model(cfg.ma_background, 1, {}), 1, 64, cfg.ma_eps_list);
        agg.add(make_report("eps-slope", rec.slope, 1.0, 0.02 - std::abs(rec.slope - 1.0), 0.0,
                            cfg.ma_background + " n=1"));
        agg.add(make_report("elementary-trace-ineq", rec.worst_trace_slack, 0.0,
                            rec.worst_trace_slack + 1e-9, 0.0, "sweep " + cfg.ma_background));
    }

    return agg.finalize();
}

std::vector<VerificationReport> hyperbolicity_suite(const RunConfig& cfg)
{
    std::mt19937_64 rng(suite_seed(cfg.seed, "hyperbolicity"));
    Aggregator agg;

    // expected classifications of the degree criterion
    {
        struct Case {
            CurveData curve;
            double kappa;
            bool expect_obstructed;
        };
        const Case cases[] = {
            {{0, 5.0, {}}, 0.0, true},             // rational curves never fit
            {{1, 3.0, {}}, 1.0, true},             // elliptic curves need kappa = 0
            {{1, 3.0, {}}, 0.0, false},            // boundary: 0 >= 0
            {{2, 1.0, {4}}, 0.0, true},            // multiplicity-4 fiber with g=2
            {{3, 10.0, {}}, 2.0, false},           // genus 3, modest degree
            {{2, 6.2831853071795864, {}}, 2.0, false},  // 2g-2 = kappa deg / 2pi boundary
        };
        for (const auto& c : cases) {
            const auto r = demailly_bound(c.curve, c.kappa);
            const bool ok = r.obstructed == c.expect_obstructed;
            agg.add(make_report("demailly-criterion", r.lhs, r.rhs, ok ? 0.0 : -1.0, 0.0,
                                r.report.witness,
                                ok ? r.report.note : "unexpected classification"));
        }
    }

    // genus formulas
    {
        const long plk[][2] = {{1, 0}, {2, 0}, {3, 1}, {4, 3}, {5, 6}};
        double defect = 0.0;
        for (const auto& c : plk) defect
            = std::max(defect, static_cast<double>(std::abs(pluecker_genus(c[0]) - c[1])));
        agg.add(make_report("pluecker-genus", defect, 0.0, -defect, 0.0, "d=1..5"));
        const long hw[][2] = {{0, 2}, {1, 0}, {2, -2}};
        defect = 0.0;
        for (const auto& c : hw)
            defect = std::max(defect,
                              static_cast<double>(std::abs(hurwitz_tangent_degree(c[0]) - c[1])));
        agg.add(make_report("hurwitz-degree", defect, 0.0, -defect, 0.0, "g=0..2"));
    }

    // config-provided curve ledgers
    for (const auto& c : cfg.curves) {
        const auto r = demailly_bound({c.genus, c.degree, c.multiplicities}, c.kappa);
        const bool ok = r.obstructed == c.expect_obstructed;
        agg.add(make_report("demailly-criterion", r.lhs, r.rhs, ok ? 0.0 : -1.0, 0.0,
                            r.report.witness,
                            ok ? r.report.note : "unexpected classification"));
    }
    if (cfg.surface_example.size() == 4)
        agg.add(validate_surface_example({cfg.surface_example[0], cfg.surface_example[1],
                                          cfg.surface_example[2], cfg.surface_example[3]}));

    // the fibration parameter set and its single-constraint violations
    {
        agg.add(validate_surface_example({2, 4, 5, 4}));
        const SurfaceExampleParams bad[] = {
            {2, 3, 5, 4},  // a < 2g
            {2, 4, 6, 5},  // gcd(a,b) != 1
            {2, 5, 4, 4},  // a >= b
            {2, 4, 5, 3},  // d < 4
        };
        for (const auto& p : bad) {
            auto r = validate_surface_example(p);
            const bool ok = r.failed();
            agg.add(make_report("surface-example", r.lhs, r.rhs, ok ? 0.0 : -1.0, 0.0, r.witness,
                                ok ? "violation rejected" : "violation NOT rejected"));
        }
    }

    // poincare distance axioms and contraction
    {
        std::uniform_real_distribution<double> unif(-0.9, 0.9);
        auto rand_disc = [&] {
            Cx z;
            do {
                z = Cx{unif(rng), unif(rng)};
            } while (std::abs(z) >= 0.9);
            return z;
        };
        double worst = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < 10000; ++trial) {
            const Cx a = rand_disc(), b = rand_disc(), c = rand_disc();
            const double ab = poincare_distance(a, b), ba = poincare_distance(b, a);
            const double ac = poincare_distance(a, c), cb = poincare_distance(c, b);
            worst = std::min(worst, 1e-12 - std::abs(ab - ba));
            worst = std::min(worst, ac + cb - ab + 1e-12);
            // holomorphic self-maps contract: f(z) = z^2
            worst = std::min(worst, ab - poincare_distance(a * a, b * b) + 1e-12);
        }
        worst = std::min(worst, poincare_distance(Cx{0.0}, Cx{0.0}) == 0.0 ? 1.0 : -1.0);
        agg.add(make_report("poincare-distance", worst, 0.0, worst, 0.0, "trials=10000"));
    }

    // subharmonicity of log |f'|^2 on curvature-bounded models
    {
        const auto pd = make_poincare_disc();
        PowerSeriesMap half{1, {{Cx{0.0}, Cx{0.5}}}, 2.0};  // f(t) = t/2
        agg.add(subharmonicity_defect(pd, half, Cx{0.0}, 0.0, 2.0).report);

        PowerSeriesMap square{1, {{Cx{0.0}, Cx{0.0}, Cx{1.0}}}, 1.0};  // f(t) = t^2
        agg.add(subharmonicity_defect(pd, square, Cx{0.1}, 1e-3, 2.0).report);

        const auto flat = make_flat(1);
        PowerSeriesMap affine{1, {{Cx{0.3}, Cx{1.0}, Cx{0.25}}}, 3.0};
        const auto r = subharmonicity_defect(flat, affine, Cx{0.2}, 0.0, 0.0);
        agg.add(r.report);

        const auto ball = make_complex_ball(2);
        PowerSeriesMap curve{2, {{Cx{0.0}, Cx{0.5}}, {Cx{0.0}, Cx{0.0}, Cx{0.25}}}, 1.2};
        agg.add(subharmonicity_defect(ball, curve, Cx{0.2, 0.1}, 0.0, 2.0).report);
        agg.add(subharmonicity_defect(ball, curve, Cx{0.0}, 1e-3, 2.0).report);
    }

    return agg.finalize();
}

}  // namespace

std::vector<VerificationReport> run_suite(const std::string& name, const RunConfig& config)
{
    std::vector<VerificationReport> reports;
    if (name == "curvature") reports = curvature_suite(config);
    else if (name == "averages") reports = averages_suite(config);
    else if (name == "royden") reports = royden_suite(config);
    else if (name == "schwarz") reports = schwarz_suite(config);
    else if (name == "ma") reports = ma_suite(config);
    else if (name == "hyperbolicity") reports = hyperbolicity_suite(config);
    else throw std::invalid_argument("unknown suite '" + name + "'");

    std::stable_sort(reports.begin(), reports.end(),
                     [](const auto& a, const auto& b) { return a.claim_id < b.claim_id; });
    for (const auto& r : reports)
        if (!claim_registry().count(r.claim_id))
            throw std::logic_error("claim id '" + r.claim_id + "' missing from the registry");
    return reports;
}

std::vector<std::pair<std::string, std::vector<VerificationReport>>> run_all(
    const RunConfig& config)
{
    std::vector<std::pair<std::string, std::vector<VerificationReport>>> out;
    if (config.parallel) {
        std::vector<std::future<std::vector<VerificationReport>>> futures;
        for (const auto& name : suite_names())
            futures.push_back(std::async(std::launch::async,
                                         [&config, name] { return run_suite(name, config); }));
        for (size_t i = 0; i < futures.size(); ++i)
            out.emplace_back(suite_names()[i], futures[i].get());
    } else {
        for (const auto& name : suite_names()) out.emplace_back(name, run_suite(name, config));
    }
    return out;
}

void write_report_file(const std::string& out_dir, const std::string& suite,
                       const std::vector<VerificationReport>& reports)
{
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / (suite + ".report");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    for (const auto& r : reports) out << r.to_line() << "\n";
    if (!out.flush()) throw std::runtime_error("write failure on " + path.string());
}

int exit_status(const std::vector<std::pair<std::string, std::vector<VerificationReport>>>& all)
{
    for (const auto& [name, reports] : all)
        for (const auto& r : reports)
            if (r.failed()) return 1;
    return 0;
}

}  // namespace klab
