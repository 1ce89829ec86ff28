// Command-line front end: every computation the library exposes, as
// replayable subcommands with JSON/CSV artifacts.
//
// Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 budget
// exceeded.

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "charsum/charsum.hpp"

namespace {

using namespace charsum;

IntervalSpec parse_interval(const std::string& s) {
    auto pos = s.find(':');
    if (pos == std::string::npos) fail_invalid("interval must be start:length, got " + s);
    IntervalSpec iv;
    iv.start = std::stoll(s.substr(0, pos));
    iv.length = std::stoull(s.substr(pos + 1));
    if (iv.length == 0) fail_invalid("interval length must be positive");
    return iv;
}

void emit(const json& j, const std::string& out_path) {
    std::string body = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << body;
    } else {
        atomic_write(out_path, body);
        write_metadata_sidecar(out_path, json{{"written", out_path}});
    }
}

int exit_code_for(errc kind) {
    switch (kind) {
        case errc::invalid_input: return 2;
        case errc::budget_exceeded: return 3;
        default: return 1;
    }
}

const char* errc_name(errc kind) {
    switch (kind) {
        case errc::invalid_input: return "invalid_input";
        case errc::budget_exceeded: return "budget_exceeded";
        case errc::state: return "state";
        default: return "numeric";
    }
}

struct CommonOpts {
    u64 p = 7;
    u32 d = 3;
    u64 seed = 0;
    std::string chi = "order=2";
    std::string out;
    u64 budget_override = 0;

    Budget budget() const {
        Budget b = default_budget();
        if (budget_override) b.max_enumeration = budget_override;
        return b;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_d = true) {
    cmd->add_option("--p", o.p, "prime modulus");
    if (with_d) cmd->add_option("--d", o.d, "extension degree");
    cmd->add_option("--seed", o.seed, "PRNG seed");
    cmd->add_option("--chi", o.chi, "character: exponent, order=K, restriction-trivial, trivial");
    cmd->add_option("--out", o.out, "write the artifact here (atomic)");
    cmd->add_option("--budget", o.budget_override, "enumeration budget override");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"charsum: short character sums, energies and Weil checks at desk scale"};
    app.require_subcommand(1);
    std::function<int()> run;

    // ---- field ----------------------------------------------------------
    CommonOpts f_o;
    auto* c_field = app.add_subcommand("field", "build and print a field context");
    add_common(c_field, f_o);
    c_field->callback([&] {
        run = [&]() {
            auto ctx = make_field(f_o.p, f_o.d, f_o.seed, false, f_o.budget());
            json j = ctx->to_json();
            j["size"] = ctx->size();
            j["units"] = ctx->unit_count();
            emit(j, f_o.out);
            return 0;
        };
    });

    // ---- sum-grid -------------------------------------------------------
    CommonOpts g_o;
    std::string g_omega = "0x";
    std::string g_I = "1:4", g_J = "1:4";
    auto* c_grid = app.add_subcommand("sum-grid", "grid character sum over x + omega y");
    add_common(c_grid, g_o);
    c_grid->add_option("--omega", g_omega, "omega as hex element index (canonical basis root if omitted)");
    c_grid->add_option("--I", g_I, "x interval start:length");
    c_grid->add_option("--J", g_J, "y interval start:length");
    c_grid->callback([&] {
        run = [&]() {
            auto ctx = make_field(g_o.p, g_o.d, g_o.seed, true, g_o.budget());
            FieldElem w = g_omega == "0x" ? ctx->omega : ctx->elem_from_hex(g_omega);
            u64 k = ChiSelector::parse(g_o.chi).resolve(*ctx);
            auto rec = grid_sum(*ctx, w, parse_interval(g_I), parse_interval(g_J), k);
            emit(rec.to_json(), g_o.out);
            return 0;
        };
    });

    // ---- sum-sublattice --------------------------------------------------
    CommonOpts s_o;
    std::vector<std::string> s_boxes;
    std::string s_omega = "0x";
    auto* c_sub = app.add_subcommand("sum-sublattice", "codimension-one sublattice character sum");
    add_common(c_sub, s_o);
    c_sub->add_option("--box", s_boxes, "interval start:length, repeated d-1 times");
    c_sub->add_option("--omega", s_omega, "omega as hex element index");
    c_sub->callback([&] {
        run = [&]() {
            auto ctx = make_field(s_o.p, s_o.d, s_o.seed, true, s_o.budget());
            std::vector<IntervalSpec> boxes;
            for (const auto& b : s_boxes) boxes.push_back(parse_interval(b));
            u64 k = ChiSelector::parse(s_o.chi).resolve(*ctx);
            std::optional<FieldElem> w;
            if (s_omega != "0x") w = ctx->elem_from_hex(s_omega);
            auto rec = sublattice_sum(*ctx, boxes, k, w, s_o.budget());
            emit(rec.to_json(), s_o.out);
            return 0;
        };
    });

    // ---- sum-cubic -------------------------------------------------------
    CommonOpts cu_o;
    u64 cu_a = 0, cu_b = 0, cu_c = 0;
    std::string cu_I = "1:4", cu_J = "1:4";
    auto* c_cubic = app.add_subcommand("sum-cubic", "character sum of a binary cubic form");
    add_common(c_cubic, cu_o, false);
    c_cubic->add_option("--a", cu_a, "coefficient a");
    c_cubic->add_option("--b", cu_b, "coefficient b");
    c_cubic->add_option("--c", cu_c, "coefficient c");
    c_cubic->add_option("--I", cu_I, "x interval start:length");
    c_cubic->add_option("--J", cu_J, "y interval start:length");
    c_cubic->callback([&] {
        run = [&]() {
            auto fp = make_field(cu_o.p, 1, 0, true, cu_o.budget());
            u64 k = ChiSelector::parse(cu_o.chi).resolve(*fp);
            auto rec = cubic_form_sum(cu_o.p, {cu_a, cu_b, cu_c}, parse_interval(cu_I),
                                      parse_interval(cu_J), k, cu_o.budget());
            emit(rec.to_json(), cu_o.out);
            return 0;
        };
    });

    // ---- scan-omega ------------------------------------------------------
    CommonOpts sc_o;
    std::string sc_I = "1:4", sc_J = "1:4", sc_mode = "all";
    bool sc_rows = false;
    auto* c_scan = app.add_subcommand("scan-omega", "uniformity scan of grid sums over omega");
    add_common(c_scan, sc_o);
    c_scan->add_option("--I", sc_I, "x interval start:length");
    c_scan->add_option("--J", sc_J, "y interval start:length");
    c_scan->add_option("--omega", sc_mode, "all or sample:N");
    c_scan->add_flag("--rows", sc_rows, "include per-omega ratios in the JSON report");
    c_scan->callback([&] {
        run = [&]() {
            auto ctx = make_field(sc_o.p, sc_o.d, 0, true, sc_o.budget());
            OmegaMode mode = OmegaMode::All;
            u64 sample = 0;
            if (sc_mode != "all") {
                if (sc_mode.rfind("sample:", 0) != 0)
                    fail_invalid("omega mode must be all or sample:N");
                mode = OmegaMode::Sample;
                sample = std::stoull(sc_mode.substr(7));
            }
            auto rep = omega_uniformity_scan(*ctx, parse_interval(sc_I), parse_interval(sc_J),
                                             {ChiSelector::parse(sc_o.chi)}, mode, sample,
                                             sc_o.seed, sc_rows, sc_o.budget());
            json j = rep.params;
            j["per_chi"] = json::array();
            for (const auto& st : rep.per_chi)
                j["per_chi"].push_back(json{{"chi", st.chi_k},
                                            {"restriction_trivial", st.restriction_trivial},
                                            {"count", st.count},
                                            {"max_ratio", st.max_ratio},
                                            {"median_ratio", st.median_ratio},
                                            {"argmax_omega", ctx->elem_hex(ctx->elem_at(st.argmax_omega))}});
            if (sc_rows) {
                json rows = json::array();
                for (const auto& [widx, ratio] : rep.rows)
                    rows.push_back(json{{"omega", widx}, {"ratio", ratio}});
                j["rows"] = rows;
            }
            emit(j, sc_o.out);
            return 0;
        };
    });

    // ---- energy ----------------------------------------------------------
    CommonOpts e_o;
    std::string e_method = "both";
    double e_sigma = 0.4;
    bool e_fpq = false, e_rdelta = false;
    u64 e_a = 0, e_b = 0, e_c = 0;
    std::string e_I = "1:2", e_J = "1:2", e_I0 = "1:2", e_K = "1:2", e_sets_file;
    auto* c_energy = app.add_subcommand("energy", "multiplicative energy of set tuples");
    add_common(c_energy, e_o);
    c_energy->add_option("--method", e_method, "brute, spectral or both");
    c_energy->add_flag("--fp-q", e_fpq, "E(F_p, Q) for the sigma box");
    c_energy->add_option("--sigma", e_sigma, "sigma for the Q box");
    c_energy->add_flag("--r-delta", e_rdelta, "E(R, Delta) for a factored cubic form");
    c_energy->add_option("--a", e_a, "form coefficient a");
    c_energy->add_option("--b", e_b, "form coefficient b");
    c_energy->add_option("--c", e_c, "form coefficient c");
    c_energy->add_option("--I", e_I, "interval start:length");
    c_energy->add_option("--J", e_J, "interval start:length");
    c_energy->add_option("--I0", e_I0, "interval start:length");
    c_energy->add_option("--K", e_K, "interval start:length");
    c_energy->add_option("--sets-file", e_sets_file,
                         "JSON {components:[{p,d}...], sets:[[[hex,...],...],...]}");
    std::string e_char_csv;
    c_energy->add_option("--char-csv", e_char_csv,
                         "also export each set's character-sum vector as <path>.N.csv");
    c_energy->callback([&] {
        run = [&]() {
            if (e_fpq) {
                auto ctx = make_field(e_o.p, e_o.d, 0, true, e_o.budget());
                auto r = energy_fp_q(ctx, e_sigma, e_o.budget());
                emit(r.to_json(), e_o.out);
                return 0;
            }
            if (e_rdelta) {
                auto cls = classify({e_a, e_b, e_c}, e_o.p, nullptr, e_o.budget());
                auto sets = build_tuple_sets(e_o.p, cls, parse_interval(e_I), parse_interval(e_J),
                                             parse_interval(e_I0), parse_interval(e_K),
                                             e_o.budget());
                auto r = energy_r_delta(sets.R, sets.Delta, e_o.budget());
                emit(r.to_json(), e_o.out);
                return 0;
            }
            if (e_sets_file.empty()) fail_invalid("energy needs --fp-q, --r-delta or --sets-file");
            std::ifstream is(e_sets_file);
            if (!is) fail_invalid("cannot read " + e_sets_file);
            json spec = json::parse(is);
            std::vector<FieldPtr> comps;
            for (const auto& cj : spec.at("components"))
                comps.push_back(make_field(cj.at("p").get<u64>(), cj.at("d").get<u32>(), 0, true,
                                           e_o.budget()));
            auto ring = make_ring(comps);
            std::vector<std::vector<RingElem>> sets;
            for (const auto& sj : spec.at("sets")) {
                std::vector<RingElem> s;
                for (const auto& ej : sj) {
                    RingElem e;
                    for (size_t i = 0; i < comps.size(); ++i)
                        e.push_back(comps[i]->elem_from_hex(ej.at(i).get<std::string>()));
                    s.push_back(std::move(e));
                }
                sets.push_back(std::move(s));
            }
            json out;
            bool agree = true;
            if (e_method == "brute" || e_method == "both")
                out["brute"] = energy_brute(sets, *ring, e_o.budget()).to_json();
            if (e_method == "spectral" || e_method == "both")
                out["spectral"] = energy_spectral(sets, *ring, e_o.budget()).to_json();
            if (e_method == "both") {
                agree = out["brute"].at("value") == out["spectral"].at("value");
                out["agree"] = agree;
            }
            emit(out, e_o.out);
            return agree ? 0 : 1;
        };
    });

    // ---- repcount --------------------------------------------------------
    CommonOpts r_o;
    double r_sigma = 0.4;
    std::string r_rule = "set-def";
    bool r_hist = false, r_tmax = false;
    u64 r_a = 0, r_b = 0, r_c = 0;
    std::string r_I = "1:2", r_J = "1:2", r_I0 = "1:2", r_K = "1:2";
    auto* c_rep = app.add_subcommand("repcount", "representation-count histograms");
    add_common(c_rep, r_o);
    c_rep->add_option("--sigma", r_sigma, "sigma for Q and Q0");
    c_rep->add_option("--rule", r_rule, "set-def or proof-card Q0 exponent");
    c_rep->add_flag("--hist", r_hist, "include the full histogram");
    c_rep->add_flag("--tmax", r_tmax, "translated-T representation count instead of Q x Q0");
    c_rep->add_option("--a", r_a, "form coefficient a");
    c_rep->add_option("--b", r_b, "form coefficient b");
    c_rep->add_option("--c", r_c, "form coefficient c");
    c_rep->add_option("--I", r_I, "interval start:length");
    c_rep->add_option("--J", r_J, "interval start:length");
    c_rep->add_option("--I0", r_I0, "interval start:length");
    c_rep->add_option("--K", r_K, "interval start:length");
    c_rep->callback([&] {
        run = [&]() {
            json out;
            if (r_tmax) {
                auto cls = classify({r_a, r_b, r_c}, r_o.p, nullptr, r_o.budget());
                auto sets = build_tuple_sets(r_o.p, cls, parse_interval(r_I), parse_interval(r_J),
                                             parse_interval(r_I0), parse_interval(r_K),
                                             r_o.budget());
                RingElem zeta = sets.R.elems.at(0);
                auto res = tmax_repcount(sets.T, zeta, r_hist, r_o.budget());
                out = json{{"kind", "tmax"},
                           {"p", r_o.p},
                           {"T", sets.T.elems.size()},
                           {"zeta_key", sets.ring->elem_key(zeta)},
                           {"max_count", res.max_count},
                           {"unit_pairs", res.unit_pairs}};
                if (r_hist) {
                    json h = json::object();
                    for (const auto& [key, m] : *res.histogram) h[std::to_string(key)] = m;
                    out["histogram"] = h;
                }
            } else {
                if (r_rule != "set-def" && r_rule != "proof-card")
                    fail_invalid("rule must be set-def or proof-card");
                ExponentRule rule = r_rule == "proof-card" ? ExponentRule::ProofCard
                                                           : ExponentRule::SetDef;
                auto ctx = make_field(r_o.p, r_o.d, 0, true, r_o.budget());
                auto ring = make_ring({ctx});
                std::vector<RingElem> Q, Q0;
                for (const auto& e :
                     box_elements(q_box(*ctx, r_sigma), *ctx, std::nullopt, r_o.budget()))
                    Q.push_back({e});
                for (const auto& e :
                     box_elements(q0_box(*ctx, r_sigma, rule), *ctx, std::nullopt, r_o.budget()))
                    Q0.push_back({e});
                auto res = rep_count_max(Q, Q0, *ring, r_hist, r_o.budget());
                out = json{{"kind", "q-q0"},
                           {"p", r_o.p},
                           {"d", r_o.d},
                           {"sigma", r_sigma},
                           {"rule", to_string(rule)},
                           {"Q", Q.size()},
                           {"Q0", Q0.size()},
                           {"max_count", res.max_count},
                           {"argmax", ctx->elem_hex(res.argmax[0])},
                           {"unit_pairs", res.unit_pairs}};
                if (r_hist) {
                    json h = json::object();
                    for (const auto& [key, m] : *res.histogram) h[std::to_string(key)] = m;
                    out["histogram"] = h;
                }
            }
            emit(out, r_o.out);
            return 0;
        };
    });

    // ---- burgess ---------------------------------------------------------
    CommonOpts b_o;
    double b_rho = 0.45, b_eps = 0.01;
    u32 b_k = 2;
    std::string b_rule = "set-def";
    std::vector<std::string> b_boxes;
    auto* c_burg = app.add_subcommand("burgess", "amplification decomposition bookkeeping");
    add_common(c_burg, b_o);
    c_burg->add_option("--rho", b_rho, "interval exponent rho");
    c_burg->add_option("--eps", b_eps, "epsilon");
    c_burg->add_option("--k", b_k, "Holder exponent k");
    c_burg->add_option("--rule", b_rule, "Q0 exponent rule");
    c_burg->add_option("--box", b_boxes, "J interval start:length, repeated d-1 times");
    c_burg->callback([&] {
        run = [&]() {
            auto ctx = make_field(b_o.p, b_o.d, 0, true, b_o.budget());
            u64 k = ChiSelector::parse(b_o.chi).resolve(*ctx);
            std::vector<IntervalSpec> boxes;
            for (const auto& b : b_boxes) boxes.push_back(parse_interval(b));
            ExponentRule rule =
                b_rule == "proof-card" ? ExponentRule::ProofCard : ExponentRule::SetDef;
            auto dec = burgess_decompose(ctx, b_rho, b_eps, boxes, k, b_k, rule, b_o.budget());
            emit(dec.to_json(), b_o.out);
            return 0;
        };
    });

    // ---- weil-exhaust ----------------------------------------------------
    CommonOpts w_o;
    u64 w_pmax = 31;
    u32 w_maxdeg = 3;
    std::string w_violations;
    bool w_skip_ext = false;
    auto* c_weil = app.add_subcommand("weil-exhaust", "exhaustive Weil-bound verification");
    add_common(c_weil, w_o, false);
    c_weil->add_option("--pmax", w_pmax, "largest prime for the field suite");
    c_weil->add_option("--max-deg", w_maxdeg, "largest polynomial degree");
    c_weil->add_option("--violations", w_violations, "JSONL path for violation records");
    c_weil->add_flag("--skip-ext", w_skip_ext, "skip the norm/extension suite");
    c_weil->callback([&] {
        run = [&]() {
            auto prime = weil_prime_suite(w_pmax, w_maxdeg, w_o.budget());
            std::ostringstream csv;
            csv << "suite,cells,admissible,violations\n";
            csv << "prime," << prime.cells << "," << prime.admissible << "," << prime.violations
                << "\n";
            u64 total_violations = prime.violations;
            std::vector<json> records = prime.violation_records;
            if (!w_skip_ext) {
                auto ext = weil_extension_suite(2, w_o.budget());
                csv << "extension," << ext.cells << "," << ext.admissible << ","
                    << ext.violations << "\n";
                total_violations += ext.violations;
                records.insert(records.end(), ext.violation_records.begin(),
                               ext.violation_records.end());
            }
            if (!w_violations.empty()) {
                std::string body;
                for (const auto& r : records) body += r.dump() + "\n";
                atomic_write(w_violations, body);
            }
            if (w_o.out.empty()) {
                std::cout << csv.str();
            } else {
                atomic_write(w_o.out, csv.str());
                write_metadata_sidecar(w_o.out, json{{"pmax", w_pmax}});
            }
            return total_violations == 0 ? 0 : 1;
        };
    });

    // ---- wlm -------------------------------------------------------------
    CommonOpts wl_o;
    std::string wl_K = "1:2";
    u32 wl_r = 1;
    bool wl_bad = false;
    auto* c_wlm = app.add_subcommand("wlm", "averaged moment of the cubic-argument sums");
    add_common(c_wlm, wl_o, false);
    c_wlm->add_option("--K", wl_K, "t interval start:length");
    c_wlm->add_option("--r", wl_r, "moment order r");
    c_wlm->add_flag("--bad-tuples", wl_bad, "count the tuples excluded from the Weil step");
    c_wlm->callback([&] {
        run = [&]() {
            auto fp = make_field(wl_o.p, 1, 0, true, wl_o.budget());
            u64 k = ChiSelector::parse(wl_o.chi).resolve(*fp);
            auto res = wlm_moment(wl_o.p, k, parse_interval(wl_K), wl_r, wl_o.budget());
            json j = res.to_json();
            j["p"] = wl_o.p;
            j["chi"] = k;
            j["r"] = wl_r;
            if (wl_bad) {
                u64 dd = fp->unit_count() / std::gcd(fp->unit_count(), k);
                j["bad_tuples"] =
                    wlm_bad_tuples(wl_o.p, dd, parse_interval(wl_K), wl_r, wl_o.budget()).to_json();
            }
            emit(j, wl_o.out);
            return 0;
        };
    });

    // ---- sweep -----------------------------------------------------------
    CommonOpts sw_o;
    std::string sw_config, sw_jsonl;
    std::vector<u64> sw_p;
    std::vector<double> sw_rho;
    std::string sw_mode = "all";
    auto* c_sweep = app.add_subcommand("sweep", "cancellation sweep over (p, rho) cells");
    add_common(c_sweep, sw_o);
    c_sweep->add_option("--config", sw_config, "JSON plan (overrides the flags)");
    c_sweep->add_option("--p-list", sw_p, "primes");
    c_sweep->add_option("--rho-list", sw_rho, "interval exponents");
    c_sweep->add_option("--omega", sw_mode, "all or sample:N");
    c_sweep->add_option("--jsonl", sw_jsonl, "append rows to this JSONL store");
    c_sweep->callback([&] {
        run = [&]() {
            SweepPlan plan;
            if (!sw_config.empty()) {
                std::ifstream is(sw_config);
                if (!is) fail_invalid("cannot read " + sw_config);
                plan = SweepPlan::from_json(json::parse(is));
            } else {
                plan.p_list = sw_p;
                plan.rho_list = sw_rho;
                plan.d = sw_o.d;
                plan.chi_selector = sw_o.chi;
                plan.omega_mode = sw_mode;
                plan.seed = sw_o.seed;
                plan.out_csv = sw_o.out;
                plan.out_jsonl = sw_jsonl;
                if (sw_o.budget_override) plan.budgets.max_enumeration = sw_o.budget_override;
            }
            auto res = run_and_store_sweep(plan);
            if (plan.out_csv.empty()) std::cout << res.csv_body;
            return 0;
        };
    });

    // ---- verify ----------------------------------------------------------
    std::string v_suite = "all";
    auto* c_verify = app.add_subcommand("verify", "named verification suites");
    c_verify->add_option("suite", v_suite,
                         "energy-identity|weil|parseval|forms|repcount|thresholds|all");
    c_verify->callback([&] {
        run = [&]() {
            std::vector<std::string> names;
            if (v_suite == "all")
                names = {"thresholds", "parseval", "energy-identity", "weil", "forms", "repcount"};
            else
                names = {v_suite};
            bool all_pass = true;
            for (const auto& name : names) {
                auto res = run_suite(name);
                std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.name << "\n";
                for (const auto& line : res.lines) std::cout << "       " << line << "\n";
                all_pass = all_pass && res.pass;
            }
            return all_pass ? 0 : 1;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run();
    } catch (const Error& e) {
        json err{{"error", errc_name(e.kind())}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        json err{{"error", "internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
