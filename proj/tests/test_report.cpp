#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "charsum/report.hpp"
#include "charsum/verify.hpp"

using namespace charsum;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("charsum_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

TEST(AtomicWrite, WritesAndLeavesNoTemp) {
    TempDir tmp;
    auto target = tmp.path / "out.csv";
    atomic_write(target, "a,b\n1,2\n");
    EXPECT_EQ(slurp(target), "a,b\n1,2\n");
    EXPECT_FALSE(fs::exists(tmp.path / "out.csv.tmp"));
    atomic_write(target, "a,b\n3,4\n");
    EXPECT_EQ(slurp(target), "a,b\n3,4\n");
}

TEST(SweepPlan, JsonRoundTripAndValidation) {
    json j{{"p_list", {7, 11}},   {"d", 3},
           {"rho_list", {0.45}},  {"chi_selector", "order=2"},
           {"omega_mode", "all"}, {"seed", 99}};
    auto plan = SweepPlan::from_json(j);
    plan.validate();
    EXPECT_EQ(plan.p_list.size(), 2u);
    EXPECT_EQ(SweepPlan::from_json(plan.to_json()).seed, 99u);

    auto bad1 = plan;
    bad1.p_list = {9};
    EXPECT_THROW(bad1.validate(), Error);
    auto bad2 = plan;
    bad2.rho_list = {1.5};
    EXPECT_THROW(bad2.validate(), Error);
    auto bad3 = plan;
    bad3.omega_mode = "some";
    EXPECT_THROW(bad3.validate(), Error);
    auto bad4 = plan;
    bad4.chi_selector = "nope!";
    EXPECT_THROW(bad4.validate(), Error);
}

TEST(Sweep, EmptyPlanGivesHeaderOnly) {
    SweepPlan plan;
    plan.p_list = {};
    plan.rho_list = {};
    auto res = run_cancellation_sweep(plan);
    EXPECT_EQ(res.csv_body, kSweepCsvHeader);
    EXPECT_TRUE(res.rows.empty());
}

TEST(Sweep, DeterministicBodiesAndSidecar) {
    SweepPlan plan;
    plan.p_list = {7, 11};
    plan.d = 3;
    plan.rho_list = {0.4, 0.45};
    plan.chi_selector = "order=2";
    plan.omega_mode = "sample:40";
    plan.seed = 7;

    auto a = run_cancellation_sweep(plan);
    auto b = run_cancellation_sweep(plan);
    EXPECT_EQ(a.csv_body, b.csv_body);
    EXPECT_EQ(a.rows.size(), 4u);

    TempDir tmp;
    plan.out_csv = (tmp.path / "sweep.csv").string();
    plan.out_jsonl = (tmp.path / "sweep.jsonl").string();
    auto c = run_and_store_sweep(plan);
    EXPECT_EQ(slurp(plan.out_csv), c.csv_body);
    EXPECT_TRUE(fs::exists(plan.out_csv + ".meta.json"));
    auto meta = json::parse(slurp(plan.out_csv + ".meta.json"));
    EXPECT_EQ(meta.at("plan").at("seed"), 7);
    // rerun: CSV byte-identical, JSONL appends
    auto d = run_and_store_sweep(plan);
    EXPECT_EQ(slurp(plan.out_csv), c.csv_body);
    std::ifstream is(plan.out_jsonl);
    u64 lines = 0;
    for (std::string line; std::getline(is, line);) ++lines;
    EXPECT_EQ(lines, 8u);
}

TEST(Sweep, SeedChangesSampleBody) {
    SweepPlan plan;
    plan.p_list = {11};
    plan.rho_list = {0.45};
    plan.omega_mode = "sample:50";
    plan.seed = 1;
    auto a = run_cancellation_sweep(plan);
    plan.seed = 2;
    auto b = run_cancellation_sweep(plan);
    EXPECT_NE(a.csv_body, b.csv_body);
}

TEST(VerifySuites, RepcountFormsParsevalPass) {
    EXPECT_TRUE(verify_repcount().pass);
    EXPECT_TRUE(verify_forms().pass);
    EXPECT_TRUE(verify_parseval().pass);
}

TEST(VerifySuites, EnergyIdentityPassesQuickly) {
    auto r = verify_energy_identity(60);
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.details.at("cases").get<u64>(), 60u);
}

TEST(VerifySuites, ThresholdsFlagsTheD6ReferenceMismatch) {
    // The d = 6 reference entry (0.447) is inconsistent with the closed form
    // (0.450965...); the suite must detect exactly that and nothing else.
    auto r = verify_thresholds();
    EXPECT_FALSE(r.pass);
    u64 failures = 0;
    for (const auto& line : r.lines)
        if (line.rfind("FAIL", 0) == 0) {
            ++failures;
            EXPECT_NE(line.find("rho(6)"), std::string::npos) << line;
        }
    EXPECT_EQ(failures, 1u);
    EXPECT_NEAR(r.details.at("rho_6").get<double>(), 0.450965, 1e-5);
}

TEST(VerifySuites, UnknownSuiteRejected) {
    EXPECT_THROW(run_suite("no-such-suite"), Error);
}

}  // namespace
