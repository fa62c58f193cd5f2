// Verification suites: each runs a batch of checks over the model catalog and
// returns per-claim reports (aggregated worst-case per claim id). Shared by
// the command-line driver and the acceptance tests.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "klab/report.hpp"

namespace klab {

struct RunConfig {
    std::string suite = "all";
    std::uint64_t seed = 1;
    double tol_scale = 1.0;
    std::string out_dir;
    bool parallel = false;

    long mc_samples = 1000000;
    int averages_tensors = 100;
    int royden_trials = 1000;
    int royden_max_dim = 4;
    int schwarz_points = 200;
    double fd_step = 1e-3;
    long trace_lemma_samples = 100000;
    int ma_grid = 128;
    std::string ma_background = "perturbed-torus";
    double ma_eps = 0.5;
    std::vector<double> ma_eps_list = {0.4, 0.2, 0.1, 0.05};

    // optional extra checks driven by the config file
    struct SchwarzPair {
        std::string base, prime;
        std::vector<double> point;  // re/im per coordinate
        double lambda = 0.0, mu = 0.0, kappa = 0.0, eps = 0.0;
    };
    std::vector<SchwarzPair> schwarz_pairs;

    struct CurveEntry {
        long genus = 0;
        double degree = 1.0;
        double kappa = 0.0;
        std::vector<int> multiplicities;
        bool expect_obstructed = false;
    };
    std::vector<CurveEntry> curves;

    std::vector<long> surface_example;  // g, a, b, d

    // strict parse: unknown keys are rejected
    static RunConfig from_json_file(const std::string& path);
    void apply_json_text(const std::string& text);
};

const std::vector<std::string>& suite_names();

// deterministic given (config, seed); reports come back sorted by claim id
std::vector<VerificationReport> run_suite(const std::string& name, const RunConfig& config);

std::vector<std::pair<std::string, std::vector<VerificationReport>>> run_all(
    const RunConfig& config);

// <out_dir>/<suite>.report, one claim per line; byte-identical for identical
// (config, seed)
void write_report_file(const std::string& out_dir, const std::string& suite,
                       const std::vector<VerificationReport>& reports);

// 0 iff no report failed
int exit_status(const std::vector<std::pair<std::string, std::vector<VerificationReport>>>& all);

// stable per-suite seed derivation (FNV-1a over the suite name)
std::uint64_t suite_seed(std::uint64_t base, const std::string& name);

}  // namespace klab
