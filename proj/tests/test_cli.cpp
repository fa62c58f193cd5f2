#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "klab/suites.hpp"

using namespace klab;

namespace {

// small knobs for quick suite runs
RunConfig quick_config()
{
    RunConfig cfg;
    cfg.seed = 7;
    cfg.mc_samples = 20000;
    cfg.averages_tensors = 10;
    cfg.royden_trials = 30;
    cfg.schwarz_points = 12;
    cfg.trace_lemma_samples = 2000;
    cfg.ma_grid = 32;
    cfg.ma_eps = 0.5;
    cfg.ma_eps_list = {0.4, 0.2};
    return cfg;
}

std::string render(const std::vector<VerificationReport>& reports)
{
    std::string out;
    for (const auto& r : reports) out += r.to_line() + "\n";
    return out;
}

}  // namespace

TEST_CASE("config parsing")
{
    RunConfig cfg;
    cfg.apply_json_text(R"({"seed": 42, "royden_trials": 17, "ma_eps_list": [0.3, 0.1]})");
    CHECK(cfg.seed == 42);
    CHECK(cfg.royden_trials == 17);
    CHECK(cfg.ma_eps_list == std::vector<double>{0.3, 0.1});

    CHECK_THROWS_AS(cfg.apply_json_text(R"({"unknown_key": 1})"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.apply_json_text("[1,2]"), std::invalid_argument);
    CHECK_THROWS(cfg.apply_json_text("not json"));
}

TEST_CASE("suite seeds are stable and distinct")
{
    CHECK(suite_seed(1, "royden") == suite_seed(1, "royden"));
    CHECK(suite_seed(1, "royden") != suite_seed(2, "royden"));
    CHECK(suite_seed(1, "royden") != suite_seed(1, "schwarz"));
}

TEST_CASE("suite reruns are byte-identical")
{
    const auto cfg = quick_config();
    for (const std::string name : {"hyperbolicity", "royden"}) {
        const auto a = run_suite(name, cfg);
        const auto b = run_suite(name, cfg);
        CHECK(render(a) == render(b));
        for (const auto& r : a) CHECK(!r.failed());
    }
}

TEST_CASE("reports are sorted by claim id and registered")
{
    const auto cfg = quick_config();
    const auto reports = run_suite("hyperbolicity", cfg);
    REQUIRE(!reports.empty());
    for (size_t i = 1; i < reports.size(); ++i)
        CHECK(reports[i - 1].claim_id <= reports[i].claim_id);
    for (const auto& r : reports) CHECK(claim_registry().count(r.claim_id) == 1);
}

TEST_CASE("report files are written deterministically")
{
    const auto cfg = quick_config();
    const auto reports = run_suite("hyperbolicity", cfg);
    const std::string dir = "cli_test_out";
    write_report_file(dir, "hyperbolicity", reports);
    std::ifstream in(std::filesystem::path(dir) / "hyperbolicity.report");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == render(reports));
    std::filesystem::remove_all(dir);
}

TEST_CASE("exit status contract")
{
    std::vector<std::pair<std::string, std::vector<VerificationReport>>> all;
    all.emplace_back("x", std::vector<VerificationReport>{
                              make_report("trace-lemma", 1, 0, 1, 0, "w")});
    CHECK(exit_status(all) == 0);
    all.back().second.push_back(make_report("trace-lemma", 0, 1, -1, 0, "w"));
    CHECK(exit_status(all) == 1);
    all.back().second.back() = make_skipped("trace-lemma", "w", "hypothesis");
    CHECK(exit_status(all) == 0);
}

TEST_CASE("unknown suite is rejected")
{
    CHECK_THROWS_AS((void)run_suite("bogus", quick_config()), std::invalid_argument);
}
