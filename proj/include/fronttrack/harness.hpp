#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fronttrack/config.hpp"
#include "fronttrack/flux_model.hpp"
#include "fronttrack/front_tracking.hpp"
#include "fronttrack/functionals.hpp"

namespace fronttrack {

struct RunOutputs {
    std::filesystem::path dir;  // empty when nothing was written
    RunStatus status = RunStatus::Completed;
    std::string guard_reason;
    FunctionalParams fp;
    DecayReport monitors;
    double nu_hat = 0.0;       // fitted decay rate of TV*
    bool nu_hat_ok = false;
    RunResult result;
};

// Output root: $FRONTTRACK_OUT when set, else the working directory; the
// config's output_dir is taken relative to it unless absolute.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

// Full pipeline for one validated config: parameter selection (with config
// overrides), the tracked run, decay monitoring, the TV* decay fit, and the
// four output files (events.csv, series.csv, snapshots.txt, summary.txt).
RunOutputs run_simulation(const RunConfig& cfg, bool write_files = true);

// The state the Riemann solution between uL and uR takes up along x/t = 0.
// With every characteristic speed positive this is uL; kept general and used
// to validate the upwind shortcut in the reference scheme.
Vec2 riemann_state_at_zero(const FluxModel& model, Vec2 uL, Vec2 uR);

// First-order Godunov reference on a uniform grid with the same feedback
// boundary (inflow ghost cell K u_N, free outflow), CFL 0.45 recomputed each
// step, landing exactly on the requested snapshot times.
std::vector<std::pair<double, Piecewise>> fv_reference(
    const FluxModel& model, const Mat2& k, const Piecewise& u0, double L,
    double t_final, int cells, const std::vector<double>& snap_times);

struct CompareRow {
    double t = 0.0;
    double l1 = 0.0;      // L1 distance between the two profiles
    double l1_rel = 0.0;  // scaled by TV*(u0h)
};

struct CompareResult {
    std::vector<CompareRow> rows;
    double tvstar0 = 0.0;
    RunOutputs ft;
};

CompareResult compare_with_reference(const RunConfig& cfg, int cells);

struct SweepRecord {
    std::string key;
    double value = 0.0;
    bool ok = false;          // run finished without throwing
    std::string error;
    RunStatus status = RunStatus::Completed;
    bool monitors_pass = false;
    double nu_hat = 0.0;
    double J0 = 0.0, J_final = 0.0;
    long events = 0;
    FunctionalParams fp;
};

// Runs the base config once per value of the varied key (a, h, or amplitude),
// sequentially and deterministically; failures are recorded, not fatal.
std::vector<SweepRecord> sweep(const RunConfig& base, const std::string& key,
                               const std::vector<double>& values,
                               bool write_files = true);

// a K_a feedback matrix: every entry equal to a.
Mat2 uniform_feedback(double a);

std::string g17(double v);  // shortest-faithful %.17g rendering

}  // namespace fronttrack
