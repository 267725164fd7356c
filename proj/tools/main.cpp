#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fronttrack/config.hpp"
#include "fronttrack/errors.hpp"
#include "fronttrack/harness.hpp"
#include "fronttrack/stability.hpp"

namespace {

std::vector<double> split_numbers(const std::string& s) {
    std::vector<double> out;
    std::string token;
    for (char c : s) {
        if (c == ',' || c == ' ') {
            if (!token.empty()) {
                out.push_back(std::stod(token));
                token.clear();
            }
        } else {
            token += c;
        }
    }
    if (!token.empty()) out.push_back(std::stod(token));
    return out;
}

int cmd_simulate(const std::string& config_path) {
    auto start = std::chrono::steady_clock::now();
    fronttrack::RunConfig cfg = fronttrack::parse_config_file(config_path);
    fronttrack::RunOutputs ro = fronttrack::run_simulation(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count();

    bool completed = ro.status == fronttrack::RunStatus::Completed;
    std::cout << "status = " << (completed ? "completed" : "guard_tripped") << "\n";
    if (!completed) std::cout << "guard_reason = " << ro.guard_reason << "\n";
    std::cout << "events = " << ro.result.events.size() << "\n";
    std::cout << "J0 = " << fronttrack::g17(ro.result.series.front().J) << "\n";
    std::cout << "J_final = " << fronttrack::g17(ro.result.series.back().J) << "\n";
    std::cout << "nu_expected = " << fronttrack::g17(ro.fp.nu) << "\n";
    std::cout << "nu_hat = " << fronttrack::g17(ro.nu_hat) << "\n";
    std::cout << "monitors_pass = " << (ro.monitors.pass ? "true" : "false") << "\n";
    std::cout << "output_dir = " << ro.dir.string() << "\n";
    std::cout << "runtime_seconds = " << secs << "\n";
    return completed && ro.monitors.pass ? 0 : 1;
}

int cmd_analyze(const std::string& kspec, const std::string& lambdas, double delta,
                const std::string& model_name, double L) {
    auto kv = split_numbers(kspec);
    if (kv.size() != 4)
        throw fronttrack::ValidationError("k", "expected four numbers");
    fronttrack::Mat2 k{kv[0], kv[1], kv[2], kv[3]};
    auto lv = split_numbers(lambdas);
    if (lv.size() != 2)
        throw fronttrack::ValidationError("lambdas", "expected two numbers");

    std::cout << "rho1 = " << fronttrack::g17(fronttrack::rho1(k)) << "\n";
    std::cout << "rho_p1 = " << fronttrack::g17(fronttrack::rho_p(k, 1)) << "\n";
    std::cout << "rho_p2 = " << fronttrack::g17(fronttrack::rho_p(k, 2)) << "\n";
    std::cout << "rho_pinf = " << fronttrack::g17(fronttrack::rho_p(k, 0)) << "\n";
    std::cout << "rho0 = " << fronttrack::g17(fronttrack::rho0(k)) << "\n";

    fronttrack::Condition12 c12 = fronttrack::condition12(k);
    std::cout << "condition12_value = " << fronttrack::g17(c12.value) << "\n";
    std::cout << "condition12_satisfied = " << (c12.satisfied ? "true" : "false")
              << "\n";
    std::cout << "condition12_alpha = " << fronttrack::g17(c12.alpha_star) << "\n";

    int rc = 0;
    try {
        fronttrack::SpectralCheckResult sc =
            fronttrack::linear_spectral_check(lv[0], lv[1], k, delta);
        std::cout << "spectral_stable = " << (sc.stable ? "true" : "false") << "\n";
        if (sc.found_any) {
            std::cout << "worst_root_re = " << fronttrack::g17(sc.worst_root.real())
                      << "\n";
            std::cout << "worst_root_im = " << fronttrack::g17(sc.worst_root.imag())
                      << "\n";
            rc = 1;
        }
    } catch (const fronttrack::InconclusiveNearBoundary& e) {
        std::cout << "spectral_stable = inconclusive\n";
        std::cout << "near_boundary_root_re = " << fronttrack::g17(e.root_re) << "\n";
        std::cout << "near_boundary_root_im = " << fronttrack::g17(e.root_im) << "\n";
        rc = 3;
    }

    if (!model_name.empty()) {
        fronttrack::FluxModel model = fronttrack::make_model(model_name);
        try {
            fronttrack::FunctionalParams fp =
                fronttrack::select_parameters(model, k, L);
            std::cout << "delta0 = " << fronttrack::g17(fp.delta0) << "\n";
            std::cout << "gamma = " << fronttrack::g17(fp.gamma) << "\n";
            std::cout << "epsilon = " << fronttrack::g17(fp.epsilon) << "\n";
            std::cout << "c_star = " << fronttrack::g17(fp.c_star) << "\n";
            std::cout << "c0 = " << fronttrack::g17(fp.c0) << "\n";
            std::cout << "grid_max = " << fronttrack::g17(fp.grid_max) << "\n";
            std::cout << "feasible = true\n";
        } catch (const fronttrack::NoFeasibleParams& e) {
            std::cout << "feasible = false\n";
            std::cout << "rho1_reported = " << fronttrack::g17(e.rho1_reported)
                      << "\n";
            rc = rc == 0 ? 1 : rc;
        }
    }
    return rc;
}

int cmd_sweep(const std::string& config_path, const std::string& vary) {
    std::size_t eq = vary.find('=');
    if (eq == std::string::npos)
        throw fronttrack::ValidationError("vary", "expected key=v1,v2,...");
    std::string key = vary.substr(0, eq);
    std::vector<double> values = split_numbers(vary.substr(eq + 1));

    fronttrack::RunConfig base = fronttrack::parse_config_file(config_path);
    auto records = fronttrack::sweep(base, key, values);

    bool all_ok = true;
    for (const auto& r : records) {
        std::cout << r.key << " = " << fronttrack::g17(r.value) << " : ";
        if (!r.ok) {
            std::cout << "failed (" << r.error << ")\n";
            all_ok = false;
            continue;
        }
        bool completed = r.status == fronttrack::RunStatus::Completed;
        std::cout << (completed ? "completed" : "guard_tripped")
                  << ", monitors_pass = " << (r.monitors_pass ? "true" : "false")
                  << ", events = " << r.events
                  << ", J0 = " << fronttrack::g17(r.J0)
                  << ", J_final = " << fronttrack::g17(r.J_final)
                  << ", nu_hat = " << fronttrack::g17(r.nu_hat) << "\n";
        if (!completed || !r.monitors_pass) all_ok = false;
    }
    return all_ok ? 0 : 1;
}

int cmd_compare(const std::string& config_path, int cells) {
    fronttrack::RunConfig cfg = fronttrack::parse_config_file(config_path);
    fronttrack::CompareResult cr = fronttrack::compare_with_reference(cfg, cells);
    std::cout << "TVstar0 = " << fronttrack::g17(cr.tvstar0) << "\n";
    std::cout << "t,l1,l1_rel\n";
    for (const auto& row : cr.rows)
        std::cout << fronttrack::g17(row.t) << ',' << fronttrack::g17(row.l1) << ','
                  << fronttrack::g17(row.l1_rel) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-driven front tracking for 2x2 conservation laws with "
                 "linear boundary feedback"};
    app.require_subcommand(1);

    std::string sim_config;
    CLI::App* sim = app.add_subcommand("simulate", "run one config and write outputs");
    sim->add_option("config", sim_config, "config file")->required();

    std::string an_k, an_lambdas = "1,2", an_model;
    double an_delta = 0.05, an_L = 1.0;
    CLI::App* an = app.add_subcommand("analyze", "feedback matrix stability report");
    an->add_option("--k", an_k, "k11,k12,k21,k22")->required();
    an->add_option("--lambdas", an_lambdas, "frozen speeds l1,l2");
    an->add_option("--delta", an_delta, "stability margin for the root scan");
    an->add_option("--model", an_model, "also run parameter selection for a model");
    an->add_option("--L", an_L, "domain length for parameter selection");

    std::string sw_config, sw_vary;
    CLI::App* sw = app.add_subcommand("sweep", "repeat a config over one varied key");
    sw->add_option("config", sw_config, "base config file")->required();
    sw->add_option("--vary", sw_vary, "key=v1,v2,... (a, h, or amplitude)")
        ->required();

    std::string cmp_config;
    int cmp_cells = 256;
    CLI::App* cmp = app.add_subcommand("compare",
                                       "front tracking vs finite-volume reference");
    cmp->add_option("config", cmp_config, "config file")->required();
    cmp->add_option("--cells", cmp_cells, "reference grid cells (>= 16)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_config);
        if (an->parsed())
            return cmd_analyze(an_k, an_lambdas, an_delta, an_model, an_L);
        if (sw->parsed()) return cmd_sweep(sw_config, sw_vary);
        if (cmp->parsed()) return cmd_compare(cmp_config, cmp_cells);
    } catch (const fronttrack::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
