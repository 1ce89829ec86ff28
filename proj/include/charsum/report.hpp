#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "charsum/sums.hpp"

namespace charsum {

/// Atomic artifact write: temp file in the target directory, then rename.
/// Interrupted runs never leave a partial file at the destination.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.empty()) fail_invalid("empty output path");
    auto parent = path.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) fail_state("cannot open " + tmp.string() + " for writing");
        os << content;
        if (!os.flush()) fail_state("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

inline void append_jsonl(const std::filesystem::path& path, const json& record) {
    auto parent = path.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream os(path, std::ios::binary | std::ios::app);
    if (!os) fail_state("cannot open " + path.string() + " for appending");
    os << record.dump() << "\n";
}

/// Timestamps live in a sidecar so artifact bodies stay byte-identical across
/// reruns of the same plan.
inline void write_metadata_sidecar(const std::filesystem::path& artifact, const json& plan) {
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    json meta{{"artifact", artifact.string()}, {"written_at_unix", secs}, {"plan", plan}};
    auto side = artifact;
    side += ".meta.json";
    atomic_write(side, meta.dump(2) + "\n");
}

/// Deterministic float formatting for CSV bodies.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Sweep plans.

struct SweepPlan {
    std::vector<u64> p_list;
    u32 d = 3;
    std::vector<double> rho_list;
    std::string chi_selector = "order=2";
    std::string omega_mode = "all";  // "all" | "sample:N"
    u64 seed = 0;
    Budget budgets = default_budget();
    std::string out_csv;    // empty: caller prints the body
    std::string out_jsonl;  // optional appendable result store

    static SweepPlan from_json(const json& j) {
        SweepPlan plan;
        if (j.contains("p_list")) plan.p_list = j.at("p_list").get<std::vector<u64>>();
        if (j.contains("d")) plan.d = j.at("d").get<u32>();
        if (j.contains("rho_list")) plan.rho_list = j.at("rho_list").get<std::vector<double>>();
        if (j.contains("chi_selector")) plan.chi_selector = j.at("chi_selector").get<std::string>();
        if (j.contains("omega_mode")) plan.omega_mode = j.at("omega_mode").get<std::string>();
        if (j.contains("seed")) plan.seed = j.at("seed").get<u64>();
        if (j.contains("budgets")) {
            const auto& b = j.at("budgets");
            if (b.contains("max_enumeration"))
                plan.budgets.max_enumeration = b.at("max_enumeration").get<u64>();
            if (b.contains("max_transform_len"))
                plan.budgets.max_transform_len = b.at("max_transform_len").get<u64>();
            if (b.contains("max_work")) plan.budgets.max_work = b.at("max_work").get<u64>();
        }
        if (j.contains("out_csv")) plan.out_csv = j.at("out_csv").get<std::string>();
        if (j.contains("out_jsonl")) plan.out_jsonl = j.at("out_jsonl").get<std::string>();
        return plan;
    }

    json to_json() const {
        return json{{"p_list", p_list},
                    {"d", d},
                    {"rho_list", rho_list},
                    {"chi_selector", chi_selector},
                    {"omega_mode", omega_mode},
                    {"seed", seed},
                    {"budgets",
                     json{{"max_enumeration", budgets.max_enumeration},
                          {"max_transform_len", budgets.max_transform_len},
                          {"max_work", budgets.max_work}}},
                    {"out_csv", out_csv},
                    {"out_jsonl", out_jsonl}};
    }

    /// (mode, sample size); "all" or "sample:N".
    std::pair<OmegaMode, u64> parse_omega_mode() const {
        if (omega_mode == "all") return {OmegaMode::All, 0};
        if (omega_mode.rfind("sample:", 0) == 0) {
            u64 nsz = std::stoull(omega_mode.substr(7));
            if (nsz == 0) fail_invalid("sample size must be positive");
            return {OmegaMode::Sample, nsz};
        }
        fail_invalid("omega mode must be 'all' or 'sample:N', got " + omega_mode);
    }

    void validate() const {
        for (u64 p : p_list) require_prime(p);
        if (d < 2) fail_invalid("sweep needs extension degree >= 2");
        for (double rho : rho_list)
            if (!(rho > 0 && rho < 1)) fail_invalid("rho must lie in (0, 1)");
        ChiSelector::parse(chi_selector);
        parse_omega_mode();
    }
};

inline const std::string kSweepCsvHeader =
    "p,d,rho,interval_len,chi,chi_class,restriction_trivial,omega_mode,n_omega,seed,"
    "max_ratio,median_ratio,argmax_omega\n";

struct SweepResult {
    std::string csv_body;     // header + rows, byte-deterministic given the plan
    std::vector<json> rows;   // same content for the JSONL store
};

/// Empirical cancellation sweep: one row per (p, rho) cell with the grid-sum
/// ratio statistics over the omega range. Cells run in plan order; equal seeds
/// reproduce byte-identical bodies.
inline SweepResult run_cancellation_sweep(const SweepPlan& plan) {
    plan.validate();
    auto [mode, sample_size] = plan.parse_omega_mode();
    ChiSelector sel = ChiSelector::parse(plan.chi_selector);
    SweepResult res;
    std::ostringstream body;
    body << kSweepCsvHeader;
    for (u64 p : plan.p_list) {
        auto ctx = make_field(p, plan.d, 0, true, plan.budgets);
        for (double rho : plan.rho_list) {
            u64 len = floor_pow(p, rho);
            IntervalSpec iv{1, len};
            auto report = omega_uniformity_scan(*ctx, iv, iv, {sel}, mode, sample_size, plan.seed,
                                                false, plan.budgets);
            const auto& st = report.per_chi.at(0);
            body << p << "," << plan.d << "," << fmt_double(rho) << "," << len << "," << st.chi_k
                 << "," << sel.describe() << "," << (st.restriction_trivial ? 1 : 0) << ","
                 << plan.omega_mode << "," << st.count << "," << plan.seed << ","
                 << fmt_double(st.max_ratio) << "," << fmt_double(st.median_ratio) << ",0x"
                 << std::hex << st.argmax_omega << std::dec << "\n";
            res.rows.push_back(json{{"p", p},
                                    {"d", plan.d},
                                    {"rho", rho},
                                    {"interval_len", len},
                                    {"chi", st.chi_k},
                                    {"chi_class", sel.describe()},
                                    {"restriction_trivial", st.restriction_trivial},
                                    {"omega_mode", plan.omega_mode},
                                    {"n_omega", st.count},
                                    {"seed", plan.seed},
                                    {"max_ratio", st.max_ratio},
                                    {"median_ratio", st.median_ratio},
                                    {"argmax_omega", st.argmax_omega}});
        }
    }
    res.csv_body = body.str();
    return res;
}

/// Run a sweep and persist its artifacts (CSV atomically, JSONL appended,
/// metadata sidecar with the timestamp).
inline SweepResult run_and_store_sweep(const SweepPlan& plan) {
    auto res = run_cancellation_sweep(plan);
    if (!plan.out_csv.empty()) {
        atomic_write(plan.out_csv, res.csv_body);
        write_metadata_sidecar(plan.out_csv, plan.to_json());
    }
    if (!plan.out_jsonl.empty())
        for (const auto& row : res.rows) append_jsonl(plan.out_jsonl, row);
    return res;
}

}  // namespace charsum
