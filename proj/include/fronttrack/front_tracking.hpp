#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fronttrack/flux_model.hpp"
#include "fronttrack/functional_params.hpp"
#include "fronttrack/piecewise.hpp"
#include "fronttrack/wave_curves.hpp"

namespace fronttrack {

struct Front {
    long id = 0;
    double x = 0.0;
    double speed = 0.0;
    int family = 0;       // 1 or 2
    bool is_shock = false;
    double sigma = 0.0;   // signed strength; < 0 iff shock
    Vec2 uL, uR;
    double birth_time = 0.0;
    double perturbed = 0.0;  // cumulative speed reduction applied so far
    double seg_t0 = 0.0;     // start of the current straight-line piece
    double seg_x0 = 0.0;
};

// A maximal straight-line piece of one front's trajectory; pieces end when the
// front dies, its speed is perturbed, or the run ends.
struct Segment {
    double t0 = 0.0, t1 = 0.0;
    double x0 = 0.0, speed = 0.0;
    int family = 0;
    double sigma = 0.0;
    Vec2 uL, uR;
};

// Fronts sorted by position; at the instant a stack of fronts is emitted from
// one point the positions tie and the stack is ordered by ascending speed.
// Consecutive side states are glued exactly: fronts[i].uR == fronts[i+1].uL.
struct SolutionState {
    double t = 0.0;
    Vec2 leftmost_state;  // u on [0, first front)
    std::vector<Front> fronts;
    double h = 0.0;
    long event_count = 0;
    long next_id = 0;
    bool track_segments = false;
    std::vector<Segment> closed_segments;  // finished trajectory pieces, when tracked
};

enum class EventType { Init, InteriorSameFamily, InteriorTransversal, BoundaryHit };

const char* event_type_name(EventType type);

struct EventRecord {
    double t = 0.0;
    double x = 0.0;
    EventType type = EventType::Init;
    int family_in = 0;        // family of the incoming front(s); 0 for mixed/init
    double sigma_in1 = 0.0;   // transversal: by family; same-family: left, right
    double sigma_in2 = 0.0;
    double sigma_out1 = 0.0;  // solved outgoing strengths by family (pre-drop)
    double sigma_out2 = 0.0;
    double V = 0.0;           // functional values just after the event
    double Q = 0.0;
    double J = 0.0;
    double J_before = 0.0;    // limits from the left at the event time
    double V_before = 0.0;
};

struct SeriesRow {
    double t = 0.0;
    double V = 0.0, Q = 0.0, J = 0.0, TVstar = 0.0;
    double max_rarefaction = 0.0;  // largest live rarefaction strength
    long front_count = 0;
};

enum class RunStatus { Completed, GuardTripped };

struct RunParams {
    FunctionalParams fp;
    long front_cap = 100000;
    long event_cap = 2000000;
    double sigma_drop = 1e-11;
    double snapshot_stride = 0.0;  // 0: snapshots only at t=0 and t_final
    double eps2 = 0.3;             // initial-data TV* threshold
    bool track_segments = false;   // keep the full trajectory (tests/diagnostics)
};

struct RunResult {
    RunStatus status = RunStatus::Completed;
    std::string guard_reason;
    SolutionState final_state;
    std::vector<EventRecord> events;
    std::vector<SeriesRow> series;
    std::vector<std::pair<double, Piecewise>> snapshots;
    std::vector<Segment> segments;
    double max_rare_over_h = 0.0;  // max over the run of rarefaction sigma / h
    double t_end = 0.0;
};

// Upcoming event: the soonest adjacent-pair collision or boundary arrival.
struct PendingEvent {
    double dt = 0.0;
    bool boundary = false;
    std::size_t index = 0;  // left front of the colliding pair, or the arriving front
};

// Riemann fans at every initial discontinuity plus the boundary Riemann
// problem between K u0h(L-) and u0h(0+); all rarefactions split into fans.
SolutionState initialize(const FluxModel& model, const Mat2& k, const Piecewise& u0h,
                         double h, const RunParams& params);

// sigma <= h: one front at speed lambda_k(u+). Otherwise p = ceil(sigma/h)
// fronts of strength sigma/p; front j travels at lambda_k of its right state.
std::vector<Front> build_fan(const FluxModel& model, int family, double sigma,
                             Vec2 u_minus, double h, double t, double x,
                             long& next_id);

// Soonest strictly-future event; throws NoEvent when no fronts remain.
// A collision candidate at dt == 0 (stacked pair with inverted speeds) is
// returned immediately and is exempt from tie handling.
PendingEvent next_event(const SolutionState& state, double L);

// All candidate events, soonest first (exposed for tie detection and tests).
std::vector<PendingEvent> event_candidates(const SolutionState& state, double L);

// Deterministic tie-breaking: reduces the speed of the front with the largest
// id among those involved in the tied soonest events by the smallest amount
// h 2^{-j}, j <= 40, that leaves a unique soonest event.
void perturb_speeds(SolutionState& state, double L, double h);

struct ApplyOutcome {
    EventRecord record;
    bool state_out_of_bounds = false;  // some new side state left |u| <= delta0
    double tv_star = 0.0;              // of the post-event state
    double max_rare = 0.0;
};

ApplyOutcome apply_interior_interaction(const FluxModel& model, const Mat2& k,
                                        SolutionState& state, const PendingEvent& ev,
                                        const RunParams& params);

ApplyOutcome apply_boundary_event(const FluxModel& model, const Mat2& k,
                                  SolutionState& state, const PendingEvent& ev,
                                  double L, const RunParams& params);

RunResult run(const FluxModel& model, const Mat2& k, const Piecewise& u0h, double h,
              double t_final, const RunParams& params);

// Piecewise-constant profile of the state at its current time.
Piecewise to_piecewise(const SolutionState& state, double L);

double max_rarefaction(const SolutionState& state);

inline bool check_lax_admissibility(const FluxModel& model, const Front& f) {
    return check_lax_admissibility(model, f.family, f.uL, f.uR, f.speed);
}

}  // namespace fronttrack
