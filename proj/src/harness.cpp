#include "fronttrack/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "fronttrack/errors.hpp"
#include "fronttrack/wave_curves.hpp"

namespace fronttrack {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Mat2 uniform_feedback(double a) { return {a, a, a, a}; }

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
    std::filesystem::path out(cfg.output_dir);
    if (out.is_absolute()) return out;
    const char* root = std::getenv("FRONTTRACK_OUT");
    if (root && *root) return std::filesystem::path(root) / out;
    return out;
}

namespace {

void write_events_csv(const std::filesystem::path& path,
                      const std::vector<EventRecord>& events) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "t,x,type,family_in,sigma_in1,sigma_in2,sigma_out1,sigma_out2,V,Q,J\n";
    for (const EventRecord& e : events) {
        out << g17(e.t) << ',' << g17(e.x) << ',' << event_type_name(e.type) << ','
            << e.family_in << ',' << g17(e.sigma_in1) << ',' << g17(e.sigma_in2)
            << ',' << g17(e.sigma_out1) << ',' << g17(e.sigma_out2) << ','
            << g17(e.V) << ',' << g17(e.Q) << ',' << g17(e.J) << '\n';
    }
}

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<SeriesRow>& series) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "t,V,Q,J,TVstar,max_rarefaction,front_count\n";
    for (const SeriesRow& r : series) {
        out << g17(r.t) << ',' << g17(r.V) << ',' << g17(r.Q) << ',' << g17(r.J)
            << ',' << g17(r.TVstar) << ',' << g17(r.max_rarefaction) << ','
            << r.front_count << '\n';
    }
}

void write_snapshots(const std::filesystem::path& path,
                     const std::vector<std::pair<double, Piecewise>>& snaps) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& s : snaps) {
        out << "# t = " << g17(s.first) << '\n';
        out << "x,u1,u2\n";
        out << g17(0.0) << ',' << g17(s.second.left.u1) << ','
            << g17(s.second.left.u2) << '\n';
        for (const auto& br : s.second.breaks)
            out << g17(br.first) << ',' << g17(br.second.u1) << ','
                << g17(br.second.u2) << '\n';
    }
}

void write_summary(const std::filesystem::path& path, const RunConfig& cfg,
                   const RunOutputs& ro) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    const RunResult& rr = ro.result;
    const SeriesRow& first = rr.series.front();
    const SeriesRow& last = rr.series.back();
    out << "model = " << cfg.model_name << '\n';
    out << "k11 = " << g17(cfg.k.m11) << '\n';
    out << "k12 = " << g17(cfg.k.m12) << '\n';
    out << "k21 = " << g17(cfg.k.m21) << '\n';
    out << "k22 = " << g17(cfg.k.m22) << '\n';
    out << "L = " << g17(cfg.L) << '\n';
    out << "h = " << g17(cfg.h) << '\n';
    out << "t_final = " << g17(cfg.t_final) << '\n';
    out << "initial_data = " << cfg.initial_data << '\n';
    out << "delta0 = " << g17(ro.fp.delta0) << '\n';
    out << "gamma = " << g17(ro.fp.gamma) << '\n';
    out << "epsilon = " << g17(ro.fp.epsilon) << '\n';
    out << "c_star = " << g17(ro.fp.c_star) << '\n';
    out << "M = " << g17(ro.fp.M) << '\n';
    out << "C_delta = " << g17(ro.fp.C_delta) << '\n';
    out << "c0 = " << g17(ro.fp.c0) << '\n';
    out << "nu_expected = " << g17(ro.fp.nu) << '\n';
    out << "alpha_star = " << g17(ro.fp.alpha_star) << '\n';
    out << "grid_max = " << g17(ro.fp.grid_max) << '\n';
    out << "status = "
        << (ro.status == RunStatus::Completed ? "completed" : "guard_tripped")
        << '\n';
    if (ro.status != RunStatus::Completed)
        out << "guard_reason = " << ro.guard_reason << '\n';
    out << "events = " << rr.events.size() << '\n';
    out << "final_fronts = " << rr.final_state.fronts.size() << '\n';
    out << "t_end = " << g17(rr.t_end) << '\n';
    out << "V0 = " << g17(first.V) << '\n';
    out << "Q0 = " << g17(first.Q) << '\n';
    out << "J0 = " << g17(first.J) << '\n';
    out << "TVstar0 = " << g17(first.TVstar) << '\n';
    out << "V_final = " << g17(last.V) << '\n';
    out << "Q_final = " << g17(last.Q) << '\n';
    out << "J_final = " << g17(last.J) << '\n';
    out << "TVstar_final = " << g17(last.TVstar) << '\n';
    out << "max_rare_over_h = " << g17(rr.max_rare_over_h) << '\n';
    const DecayReport& m = ro.monitors;
    out << "events_checked = " << m.events_checked << '\n';
    out << "rate_violations = " << m.rate_violations << '\n';
    out << "interior_increases = " << m.interior_increases << '\n';
    out << "boundary_violations = " << m.boundary_violations << '\n';
    out << "increases_total = " << m.increases_total << '\n';
    out << "precondition_failures = " << m.precondition_failures << '\n';
    out << "worst_rate_margin = " << g17(m.worst_rate_margin) << '\n';
    out << "worst_event_margin = " << g17(m.worst_event_margin) << '\n';
    out << "worst_boundary_margin = " << g17(m.worst_boundary_margin) << '\n';
    out << "fitted_J_rate = " << g17(m.fitted_rate) << '\n';
    out << "nu_hat = " << g17(ro.nu_hat) << '\n';
    out << "nu_hat_ok = " << (ro.nu_hat_ok ? "true" : "false") << '\n';
    out << "monitors_pass = " << (m.pass ? "true" : "false") << '\n';
}

}  // namespace

RunOutputs run_simulation(const RunConfig& cfg_in, bool write_files) {
    RunConfig cfg = cfg_in;
    validate(cfg);
    FluxModel model = make_model(cfg.model_name);

    FunctionalParams fp = select_parameters(model, cfg.k, cfg.L);
    if (cfg.delta0) fp.delta0 = *cfg.delta0;
    if (cfg.gamma) fp.gamma = *cfg.gamma;
    if (cfg.epsilon) fp.epsilon = *cfg.epsilon;
    if (cfg.c_star) fp.c_star = *cfg.c_star;
    if (cfg.C_delta) fp.C_delta = *cfg.C_delta;
    fp.c0 = cfg.c0 ? *cfg.c0 : 2.0 * fp.C_delta * std::exp(2.0 * fp.gamma * cfg.L);
    fp.nu = fp.c_star * fp.gamma;

    RunParams rp;
    rp.fp = fp;
    rp.front_cap = cfg.front_cap;
    rp.event_cap = cfg.event_cap;
    rp.sigma_drop = cfg.sigma_drop;
    rp.snapshot_stride = cfg.snapshot_stride;
    rp.eps2 = cfg.eps2;

    Piecewise u0 = build_initial_data(cfg);
    RunOutputs ro;
    ro.fp = fp;
    ro.result = run(model, cfg.k, u0, cfg.h, cfg.t_final, rp);
    ro.status = ro.result.status;
    ro.guard_reason = ro.result.guard_reason;
    double noise = std::max(1e-14, 10.0 * cfg.sigma_drop);
    ro.monitors = monitor_decay(ro.result.events, fp, ro.result.t_end,
                                ro.result.series.back().J, false, noise);

    std::vector<std::pair<double, double>> tv_samples;
    tv_samples.reserve(ro.result.series.size());
    for (const SeriesRow& r : ro.result.series) tv_samples.emplace_back(r.t, r.TVstar);
    ro.nu_hat = fit_decay_rate(tv_samples, ro.nu_hat_ok);

    if (write_files) {
        std::filesystem::path dir = resolve_output_dir(cfg);
        std::filesystem::create_directories(dir);
        write_events_csv(dir / "events.csv", ro.result.events);
        write_series_csv(dir / "series.csv", ro.result.series);
        write_snapshots(dir / "snapshots.txt", ro.result.snapshots);
        write_summary(dir / "summary.txt", cfg, ro);
        ro.dir = dir;
    }
    return ro;
}

Vec2 riemann_state_at_zero(const FluxModel& model, Vec2 uL, Vec2 uR) {
    if (uL.u1 == uR.u1 && uL.u2 == uR.u2) return uL;
    RiemannSolution sol = solve_riemann(model, uL, uR);
    Vec2 m = sol.middle_state;

    // family-1 wave between uL and m
    if (sol.sigma1 < 0.0) {
        ShockResult sr = shock_curve(model, 1, sol.sigma1, uL);
        if (sr.speed > 0.0) return uL;
    } else if (sol.sigma1 > 0.0) {
        double l1, l2;
        eigenvalues(model, uL, l1, l2);
        if (l1 > 0.0) return uL;
        eigenvalues(model, m, l1, l2);
        if (l1 > 0.0) {
            // x/t = 0 lies inside the fan: bisect for lambda1 = 0
            double lo = 0.0, hi = sol.sigma1;
            Vec2 state = uL;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                state = rarefaction_curve(model, 1, mid, uL);
                eigenvalues(model, state, l1, l2);
                (l1 < 0.0 ? lo : hi) = mid;
            }
            return state;
        }
    }

    // family-2 wave between m and uR
    if (sol.sigma2 < 0.0) {
        ShockResult sr = shock_curve(model, 2, sol.sigma2, m);
        return sr.speed > 0.0 ? m : uR;
    }
    if (sol.sigma2 > 0.0) {
        double l1, l2;
        eigenvalues(model, m, l1, l2);
        if (l2 > 0.0) return m;
        eigenvalues(model, uR, l1, l2);
        if (l2 < 0.0) return uR;
        double lo = 0.0, hi = sol.sigma2;
        Vec2 state = m;
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            state = rarefaction_curve(model, 2, mid, m);
            eigenvalues(model, state, l1, l2);
            (l2 < 0.0 ? lo : hi) = mid;
        }
        return state;
    }
    return m;
}

std::vector<std::pair<double, Piecewise>> fv_reference(
    const FluxModel& model, const Mat2& k, const Piecewise& u0, double L,
    double t_final, int cells, const std::vector<double>& snap_times) {
    if (cells < 16) throw ValidationError("cells", "needs at least 16 cells");
    if (t_final < 0.0) throw ValidationError("t_final", "must be nonnegative");

    double dx = L / cells;
    std::vector<Vec2> u(cells);
    for (int i = 0; i < cells; ++i)
        u[i] = piecewise_average(u0, i * dx, (i + 1) * dx);

    std::vector<double> targets = snap_times;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    auto profile = [&](const std::vector<Vec2>& cellavg) {
        Piecewise pw;
        pw.length = L;
        pw.left = cellavg[0];
        for (int i = 1; i < cells; ++i)
            pw.breaks.emplace_back(L * i / cells, cellavg[i]);
        return pw;
    };

    std::vector<std::pair<double, Piecewise>> out;
    std::vector<Vec2> flux(cells + 1);
    double t = 0.0;
    for (double target : targets) {
        if (target < 0.0 || target > t_final + 1e-12) continue;
        while (t < target - 1e-15) {
            double maxspeed = 0.0;
            double l1, l2;
            for (const Vec2& s : u) {
                eigenvalues(model, s, l1, l2);  // also enforces positive speeds
                maxspeed = std::max(maxspeed, l2);
            }
            Vec2 ghost = k * u[cells - 1];
            eigenvalues(model, ghost, l1, l2);
            maxspeed = std::max(maxspeed, l2);

            double dt = 0.45 * dx / maxspeed;
            bool landing = false;
            if (t + dt >= target) {
                dt = target - t;
                landing = true;
            }
            if (dt < 1e-12) throw CFLViolation("time step collapsed");

            // all speeds positive: the interface state is the left state
            flux[0] = model.flux(ghost);
            for (int i = 1; i <= cells; ++i) flux[i] = model.flux(u[i - 1]);
            double r = dt / dx;
            for (int i = 0; i < cells; ++i) {
                u[i] = u[i] + r * (flux[i] - flux[i + 1]);
                if (inf_norm(u[i]) > model.delta)
                    throw CFLViolation("cell state left the flux domain at t = " +
                                       std::to_string(t));
            }
            t = landing ? target : t + dt;
        }
        out.emplace_back(target, profile(u));
    }
    return out;
}

CompareResult compare_with_reference(const RunConfig& cfg_in, int cells) {
    RunConfig cfg = cfg_in;
    validate(cfg);
    CompareResult cr;
    cr.ft = run_simulation(cfg, false);

    std::vector<double> times;
    times.reserve(cr.ft.result.snapshots.size());
    for (const auto& s : cr.ft.result.snapshots) times.push_back(s.first);

    FluxModel model = make_model(cfg.model_name);
    Piecewise u0 = build_initial_data(cfg);
    auto fv = fv_reference(model, cfg.k, u0, cfg.L, cr.ft.result.t_end, cells, times);

    cr.tvstar0 = cr.ft.result.series.front().TVstar;
    for (const auto& fvsnap : fv) {
        const Piecewise* ftpw = nullptr;
        for (const auto& s : cr.ft.result.snapshots)
            if (s.first == fvsnap.first) {
                ftpw = &s.second;
                break;
            }
        if (!ftpw) continue;
        CompareRow row;
        row.t = fvsnap.first;
        row.l1 = l1_distance(*ftpw, fvsnap.second);
        row.l1_rel = cr.tvstar0 > 0.0 ? row.l1 / cr.tvstar0 : row.l1;
        cr.rows.push_back(row);
    }
    return cr;
}

std::vector<SweepRecord> sweep(const RunConfig& base, const std::string& key,
                               const std::vector<double>& values,
                               bool write_files) {
    if (key != "a" && key != "h" && key != "amplitude")
        throw ValidationError("vary", "key must be a, h, or amplitude");
    if (values.empty()) throw ValidationError("vary", "no values given");

    std::vector<SweepRecord> records;
    records.reserve(values.size());
    for (double v : values) {
        RunConfig cfg = base;
        if (key == "a") {
            cfg.k = uniform_feedback(v);
            cfg.k_set = true;
        } else if (key == "h") {
            cfg.h = v;
        } else {
            cfg.amplitude = v;
        }
        char tag[64];
        std::snprintf(tag, sizeof tag, "%s_%g", key.c_str(), v);
        cfg.output_dir = base.output_dir + "/" + tag;

        SweepRecord rec;
        rec.key = key;
        rec.value = v;
        try {
            RunOutputs ro = run_simulation(cfg, write_files);
            rec.ok = true;
            rec.status = ro.status;
            rec.monitors_pass = ro.monitors.pass;
            rec.nu_hat = ro.nu_hat;
            rec.J0 = ro.result.series.front().J;
            rec.J_final = ro.result.series.back().J;
            rec.events = static_cast<long>(ro.result.events.size());
            rec.fp = ro.fp;
        } catch (const Error& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        records.push_back(rec);
    }
    return records;
}

}  // namespace fronttrack
