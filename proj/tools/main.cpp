// Command-line front end: config parsing, run orchestration, corpus
// generation, and report emission. Exit codes: 0 success, 1 failed checks or
// violated margins, 2 invalid input, 3 non-convergence.
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "suppflow/config.hpp"
#include "suppflow/functionals.hpp"
#include "suppflow/stationary.hpp"

using namespace suppflow;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    int jobs = 1;
    bool waive = false;
    int seed = -1;  // < 0 means keep the config's corpus.seed
};

void add_common(CLI::App* cmd, CommonOpts& opt) {
    cmd->add_option("--config", opt.config_path, "configuration file")->required();
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--jobs", opt.jobs, "max concurrent sweep cells")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--waive-checks", opt.waive, "run even when hypothesis checks fail");
    cmd->add_option("--seed", opt.seed, "override corpus.seed");
}

// Effective config: file contents plus command-line overrides, so the hash in
// every artifact header reflects exactly what ran.
KeyValues effective_config(const CommonOpts& opt) {
    KeyValues kv = load_key_values(opt.config_path);
    if (opt.seed >= 0) kv.set("corpus.seed", std::to_string(opt.seed));
    if (opt.waive) kv.set("flow.waive_checks", "true");
    return kv;
}

void write_artifact(const KeyValues& kv, const fs::path& dir, const std::string& name,
                    const std::string& content) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + (dir / name).string() + "'");
    out << artifact_header(kv) << content;
}

std::string kv_line(const std::string& key, const std::string& value) {
    return key + " = " + value + "\n";
}
std::string kv_line(const std::string& key, const char* value) {
    return kv_line(key, std::string(value));
}
std::string kv_line(const std::string& key, double value) {
    return kv_line(key, format_double(value));
}
std::string kv_line(const std::string& key, bool value) {
    return kv_line(key, value ? std::string("true") : std::string("false"));
}

const char* verdict_word(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

std::string status_word(FlowStatus s) {
    switch (s) {
        case FlowStatus::Converged: return "converged";
        case FlowStatus::Stalled: return "stalled";
        default: return "not_converged";
    }
}

std::string monitor_kv(const MonitorVerdicts& v) {
    std::string s;
    s += kv_line("monitor.sandwich", v.sandwich_pass);
    s += kv_line("monitor.sign_preserved", v.sign_preserved);
    s += kv_line("monitor.f_bounded", v.f_bounded);
    s += kv_line("monitor.roundness_applicable", v.roundness_applicable);
    s += kv_line("monitor.roundness_pass", v.roundness_pass);
    s += kv_line("monitor.decay_slope", v.decay_slope);
    s += kv_line("monitor.decay_r2", v.decay_r2);
    s += kv_line("monitor.final_asphericity", v.final_asphericity);
    return s;
}

// Returns false (and explains) when the forcing fails condition (i) and the
// run is not waived; recorded either way.
bool gate_checks(const FlowConfig& cfg, std::string& record) {
    ConditionIReport rep = check_condition_i(cfg.forcing, cfg.beta);
    record += kv_line("checks.condition_i", verdict_word(rep.verdict));
    record += kv_line("checks.waived", cfg.waive_checks);
    if (rep.verdict == Verdict::Fail && !cfg.waive_checks) {
        std::fprintf(stderr,
                     "condition (i) fails for this forcing; pass --waive-checks to run "
                     "anyway\n");
        return false;
    }
    return true;
}

int cmd_check(const CommonOpts& opt) {
    KeyValues kv = effective_config(opt);
    FlowConfig cfg = flow_config_from(kv);
    auto body = realize(cfg.initial, build_grid(cfg.grid_n, cfg.grid_m, cfg.grid_kind));

    ConditionIReport ci = check_condition_i(cfg.forcing, cfg.beta);
    ConditionIIReport cii = check_condition_ii(cfg.forcing, cfg.beta, body);
    bool iii_applicable = cfg.forcing.x_independent();
    ConditionIIIReport ciii;
    if (iii_applicable) ciii = check_condition_iii_decay(cfg.forcing, cfg.beta);
    UniquenessReport uq = check_uniqueness_condition(cfg.forcing, cfg.beta);
    ConcavityReport conc = inverse_concavity_probe(
        cfg.curvature, 500, static_cast<unsigned>(kv.get_int("corpus.seed", 0)));

    std::string report;
    report += kv_line("condition_i", verdict_word(ci.verdict));
    report += kv_line("condition_i.lower_bracket",
                      format_double(ci.lower_bracket[0]) + "," +
                          format_double(ci.lower_bracket[1]));
    report += kv_line("condition_i.upper_bracket",
                      format_double(ci.upper_bracket[0]) + "," +
                          format_double(ci.upper_bracket[1]));
    report += kv_line("condition_ii", cii.pass ? "pass" : "fail");
    report += kv_line("condition_ii.min_eigenvalue", cii.min_eigenvalue);
    report += kv_line("condition_iii",
                      iii_applicable ? (ciii.pass ? "pass" : "fail") : "not_applicable");
    if (iii_applicable) report += kv_line("condition_iii.worst_value", ciii.worst_value);
    report += kv_line("uniqueness", uq.pass ? "pass" : "fail");
    report += kv_line("uniqueness.worst_margin", uq.worst_margin);
    report += kv_line("inverse_concavity", conc.pass ? "pass" : "fail");
    report += kv_line("inverse_concavity.worst_violation", conc.worst_violation);

    std::fputs(report.c_str(), stdout);
    write_artifact(kv, opt.out_dir, "checks.kv", report);

    bool failed = ci.verdict == Verdict::Fail || !cii.pass ||
                  (iii_applicable && !ciii.pass) || !uq.pass || !conc.pass;
    return failed ? 1 : 0;
}

int run_flow_pipeline(const KeyValues& kv, const FlowConfig& cfg, const fs::path& dir,
                      std::string* status_out = nullptr, double* residual_out = nullptr) {
    std::string record;
    if (!gate_checks(cfg, record)) {
        record += kv_line("status", "checks_failed");
        write_artifact(kv, dir, "run.kv", record);
        if (status_out) *status_out = "checks_failed";
        return 1;
    }

    if (cfg.mode == FlowMode::Unnormalized) {
        double tau_end = kv.get_double("flow.tau_end", 3.0);
        RescalingReport rep = run_unnormalized_and_compare(cfg, tau_end);
        write_artifact(kv, dir, "trace.csv", rep.unnormalized.trace.to_csv());
        write_artifact(kv, dir, "trace_normalized.csv", rep.normalized.trace.to_csv());
        write_artifact(kv, dir, "final_body.csv", body_to_csv(rep.unnormalized.final_body));
        record += kv_line("status", status_word(rep.unnormalized.status));
        record += kv_line("c0", rep.c0);
        record += kv_line("max_discrepancy", rep.max_discrepancy);
        for (size_t i = 0; i < rep.t_checkpoints.size(); ++i)
            record += kv_line("discrepancy." + std::to_string(i),
                              format_double(rep.t_checkpoints[i]) + "," +
                                  format_double(rep.discrepancy[i]));
        write_artifact(kv, dir, "run.kv", record);
        if (status_out) *status_out = "unnormalized";
        return 0;
    }

    FlowResult res = run_normalized(cfg);
    write_artifact(kv, dir, "trace.csv", res.trace.to_csv());
    write_artifact(kv, dir, "final_body.csv", body_to_csv(res.final_body));
    record += kv_line("status", status_word(res.status));
    record += kv_line("residual", res.residual);
    record += kv_line("steps", static_cast<double>(res.steps));
    record += monitor_kv(monitor_suite(res.trace));
    write_artifact(kv, dir, "run.kv", record);
    if (status_out) *status_out = status_word(res.status);
    if (residual_out) *residual_out = res.residual;
    return res.status == FlowStatus::Converged ? 0 : 3;
}

int cmd_run(const CommonOpts& opt) {
    KeyValues kv = effective_config(opt);
    FlowConfig cfg = flow_config_from(kv);
    int rc = run_flow_pipeline(kv, cfg, opt.out_dir);
    std::printf("run: artifacts in %s (exit %d)\n", opt.out_dir.c_str(), rc);
    return rc;
}

int cmd_solve(const CommonOpts& opt) {
    KeyValues kv = effective_config(opt);
    FlowConfig cfg = flow_config_from(kv);
    std::string record;
    if (!gate_checks(cfg, record)) return 1;

    std::vector<BodyRecipe> seeds;
    if (kv.has("solve.seed_radii"))
        for (double r : kv.get_list("solve.seed_radii")) seeds.push_back(ball_recipe(r));
    StationaryResult res = solve_stationary(cfg, seeds);
    record += res.to_kv();
    RoundnessVerdict rv = roundness_certificate(res);
    record += kv_line("roundness", rv == RoundnessVerdict::Pass     ? "pass"
                                   : rv == RoundnessVerdict::Fail   ? "fail"
                                                                    : "not_applicable");
    write_artifact(kv, opt.out_dir, "solution.kv", record);
    write_artifact(kv, opt.out_dir, "final_body.csv", body_to_csv(res.final_body));
    for (size_t i = 0; i < res.seed_runs.size(); ++i)
        write_artifact(kv, opt.out_dir, "trace_seed" + std::to_string(i) + ".csv",
                       res.seed_runs[i].trace.to_csv());
    std::fputs(record.c_str(), stdout);
    return res.converged ? 0 : 3;
}

int cmd_functionals(const CommonOpts& opt) {
    KeyValues kv = effective_config(opt);
    FlowConfig cfg = flow_config_from(kv);
    auto grid = build_grid(cfg.grid_n, cfg.grid_m, cfg.grid_kind);
    auto body = realize(cfg.initial, grid);
    double eps_floor = cfg.eps_floor > 0.0 ? cfg.eps_floor : 0.05 * body.u.min();

    std::string record;
    if (divergence_free_eligible(cfg.curvature))
        record += kv_line("w_f", modified_quermassintegral(body, cfg.curvature));
    if (cfg.forcing.kind != ForcingKind::PsiURho)
        record += kv_line("u_potential",
                          u_potential(body, cfg.forcing, cfg.beta,
                                      cfg.curvature.functional_power(), eps_floor));
    if (cfg.forcing.kind == ForcingKind::Composite)
        record += kv_line("v_potential", v_potential(body, cfg.forcing, cfg.beta, eps_floor));
    for (double q : {1.0, 2.0, static_cast<double>(cfg.grid_n) + 1.0}) {
        std::string key = "dual_volume." + format_double(q);
        if (record.find(key + " ") == std::string::npos)
            record += kv_line(key, dual_volume(body, q));
    }

    if (kv.has("body_l.kind") || kv.has("body_l.radius")) {
        auto bodyL = realize(body_recipe_from(kv, "body_l"), grid);
        OrliczFunction phi1 = orlicz_from(kv, "orlicz.phi1");
        OrliczFunction phi2 = orlicz_from(kv, "orlicz.phi2");
        record += kv_line("orlicz_mixed", orlicz_mixed_quermassintegral(body, bodyL,
                                                                        cfg.curvature, phi1,
                                                                        phi2));
        std::vector<double> eps_list = {1e-2, 5e-3, 2.5e-3};
        if (kv.has("functionals.eps_list")) eps_list = kv.get_list("functionals.eps_list");
        auto rep = variational_check(body, bodyL, cfg.curvature, phi1, phi2, eps_list);
        record += kv_line("variational.integral", rep.integral);
        record += kv_line("variational.extrapolated", rep.extrapolated);
        record += kv_line("variational.order", rep.order);
        for (size_t i = 0; i < rep.eps_list.size(); ++i)
            record += kv_line("variational.quotient." + format_double(rep.eps_list[i]),
                              rep.quotients[i]);
    }
    write_artifact(kv, opt.out_dir, "functionals.kv", record);
    std::fputs(record.c_str(), stdout);
    return 0;
}

int cmd_inequalities(const CommonOpts& opt) {
    KeyValues kv = effective_config(opt);
    FlowConfig cfg = flow_config_from(kv);
    auto grid = build_grid(cfg.grid_n, cfg.grid_m, cfg.grid_kind);
    int count = kv.get_int("corpus.count", 20);
    std::mt19937 rng(static_cast<unsigned>(kv.get_int("corpus.seed", 0)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int k = cfg.curvature.functional_power();
    double p = kv.get_double("inequalities.p", k + 2.0);
    double p_dual = kv.get_double("inequalities.p_dual", cfg.grid_n + 2.0);

    std::ostringstream table;
    table << "name,index,margin,pass\n";
    bool all_pass = true;
    auto emit = [&](const MarginRow& row, int i) {
        table << row.name << "," << i << "," << format_double(row.margin) << ","
              << (row.pass ? "true" : "false") << "\n";
        all_pass = all_pass && row.pass;
    };
    for (int i = 0; i < count; ++i) {
        auto bodyK = realize(random_perturbed_ball(rng), grid);
        auto bodyL = realize(random_perturbed_ball(rng), grid);
        emit(lp_mixed_margin(bodyK, bodyL, cfg.curvature, p), i);
        emit(power_integral_margin(bodyK, cfg.curvature, p), i);
        double rK = 0.5 + 1.5 * unit(rng), rL = 0.5 + 1.5 * unit(rng);
        emit(lp_minkowski_margin(realize(ball_recipe(rK), grid), realize(ball_recipe(rL), grid),
                             p_dual),
             i);
    }
    write_artifact(kv, opt.out_dir, "margins.csv", table.str());
    std::string verdict = kv_line("all_pass", all_pass) + kv_line("pairs", double(count));
    write_artifact(kv, opt.out_dir, "inequalities.kv", verdict);
    std::fputs(verdict.c_str(), stdout);
    return all_pass ? 0 : 1;
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t a = tok.find_first_not_of(" \t");
        size_t b = tok.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(tok.substr(a, b - a + 1));
    }
    return out;
}

int cmd_sweep(const CommonOpts& opt) {
    KeyValues kv = effective_config(opt);
    // sweep.<key> = v1,v2,... declares the Cartesian axes over <key>
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    KeyValues base;
    for (const auto& [key, value] : kv.items) {
        if (key.rfind("sweep.", 0) == 0)
            axes.emplace_back(key.substr(6), split_tokens(value));
        else
            base.items.emplace_back(key, value);
    }
    if (axes.empty()) throw std::invalid_argument("sweep: no sweep.* axes configured");
    size_t cells = 1;
    for (const auto& [key, vals] : axes) {
        if (vals.empty()) throw std::invalid_argument("sweep: empty axis '" + key + "'");
        cells *= vals.size();
    }

    struct Cell {
        KeyValues kv;
        std::string label;
        std::string status;
        double residual = 0.0;
        int rc = 0;
    };
    std::vector<Cell> grid_cells(cells);
    for (size_t c = 0; c < cells; ++c) {
        Cell& cell = grid_cells[c];
        cell.kv = base;
        size_t rest = c;
        for (const auto& [key, vals] : axes) {
            const std::string& v = vals[rest % vals.size()];
            rest /= vals.size();
            cell.kv.set(key, v);
            if (!cell.label.empty()) cell.label += " ";
            cell.label += key + "=" + v;
        }
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) {
            Cell& cell = grid_cells[c];
            fs::path dir = fs::path(opt.out_dir) / ("cell_" + std::to_string(c));
            try {
                FlowConfig cfg = flow_config_from(cell.kv);
                cell.rc = run_flow_pipeline(cell.kv, cfg, dir, &cell.status, &cell.residual);
            } catch (const std::exception& e) {
                cell.rc = 2;
                cell.status = std::string("error: ") + e.what();
                fs::create_directories(dir);
                std::ofstream fail(dir / "failure.kv");
                fail << artifact_header(cell.kv) << kv_line("error", e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(cells)));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream summary;
    summary << "cell,parameters,status,residual,exit\n";
    int rc = 0;
    for (size_t c = 0; c < cells; ++c) {
        const Cell& cell = grid_cells[c];
        summary << c << "," << cell.label << "," << cell.status << ","
                << format_double(cell.residual) << "," << cell.rc << "\n";
        rc = std::max(rc, cell.rc);
    }
    write_artifact(kv, opt.out_dir, "summary.csv", summary.str());
    std::printf("sweep: %zu cells in %s\n", cells, opt.out_dir.c_str());
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic support-function flow toolkit"};
    app.require_subcommand(1);
    CommonOpts opt;
    auto* run = app.add_subcommand("run", "integrate one flow and write its trace");
    auto* check = app.add_subcommand("check", "evaluate the hypothesis checkers");
    auto* solve = app.add_subcommand("solve", "multi-seed stationary solve");
    auto* functionals = app.add_subcommand("functionals", "evaluate functionals on a body");
    auto* inequalities = app.add_subcommand("inequalities", "random-corpus margin table");
    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep of runs");
    for (auto* cmd : {run, check, solve, functionals, inequalities, sweep})
        add_common(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(opt);
        if (check->parsed()) return cmd_check(opt);
        if (solve->parsed()) return cmd_solve(opt);
        if (functionals->parsed()) return cmd_functionals(opt);
        if (inequalities->parsed()) return cmd_inequalities(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
