// Unit tests for fan construction, initialization, event selection,
// deterministic tie-breaking, and the event-driven run loop.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fronttrack/errors.hpp"
#include "fronttrack/front_tracking.hpp"
#include "fronttrack/functionals.hpp"

using namespace fronttrack;

namespace {

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

FunctionalParams test_params() {
    FunctionalParams fp;
    fp.delta0 = 0.2;
    fp.c_star = 0.79;
    fp.gamma = 0.3;
    fp.epsilon = 0.1;
    fp.c0 = 1.0;
    fp.C_delta = 0.5;
    fp.nu = fp.c_star * fp.gamma;
    fp.M = 3.3;
    fp.L = 1.0;
    return fp;
}

Front make_front(long id, double x, double speed, int family = 1) {
    Front f;
    f.id = id;
    f.x = x;
    f.speed = speed;
    f.family = family;
    f.sigma = 0.01;
    f.seg_x0 = x;
    return f;
}

}  // namespace

TEST_CASE("build_fan: strengths at most h, one front per piece") {
    FluxModel m = make_decoupled_burgers();
    long id = 0;

    // sigma = 0.25, h = 0.1: three pieces of strength 1/12.
    auto fan = build_fan(m, 1, 0.25, {-0.125, 0.0}, 0.1, 0.0, 0.5, id);
    REQUIRE(fan.size() == 3);
    for (const Front& f : fan) {
        CHECK(close(f.sigma, 0.25 / 3.0, 1e-15));
        CHECK_FALSE(f.is_shock);
        CHECK(f.family == 1);
        CHECK(f.x == 0.5);
    }
    // Consecutive pieces share side states and speeds increase.
    CHECK(inf_norm(fan[0].uR - fan[1].uL) == 0.0);
    CHECK(inf_norm(fan[1].uR - fan[2].uL) == 0.0);
    CHECK(fan[0].speed < fan[1].speed);
    CHECK(fan[1].speed < fan[2].speed);

    // sigma <= h: a single front.
    auto one = build_fan(m, 1, 0.05, {0.0, 0.0}, 0.1, 0.0, 0.2, id);
    CHECK(one.size() == 1);
    CHECK(close(one[0].sigma, 0.05, 1e-15));

    CHECK_THROWS_AS(build_fan(m, 1, -0.1, {0.0, 0.0}, 0.1, 0.0, 0.2, id),
                    fronttrack::Error);
}

TEST_CASE("build_fan: decoupled fan speeds are the right-state eigenvalues") {
    FluxModel m = make_decoupled_burgers();
    long id = 0;
    auto fan = build_fan(m, 1, 0.2, {0.0, 0.0}, 0.1, 0.0, 0.3, id);
    REQUIRE(fan.size() == 2);
    CHECK(close(fan[0].speed, 1.1, 1e-10));  // lambda1(0.1, 0)
    CHECK(close(fan[1].speed, 1.2, 1e-10));  // lambda1(0.2, 0)
    CHECK(close(fan[0].uR.u1, 0.1, 1e-10));
    CHECK(close(fan[1].uR.u1, 0.2, 1e-10));
}

TEST_CASE("initialize: jump data produces the interior wave plus the boundary wave") {
    FluxModel m = make_decoupled_burgers();
    Mat2 k{};  // K = 0
    Piecewise u0;
    u0.left = {0.05, 0.0};
    u0.breaks.emplace_back(0.5, Vec2{-0.05, 0.0});

    RunParams params;
    params.fp = test_params();
    SolutionState st = initialize(m, k, u0, 0.1, params);

    REQUIRE(st.fronts.size() == 2);
    // Boundary wave first: the jump from K u(L-) = 0 up to u(0+) = (0.05, 0)
    // is a family-1 rarefaction of strength 0.05.
    CHECK(st.fronts[0].x == 0.0);
    CHECK(st.fronts[0].family == 1);
    CHECK_FALSE(st.fronts[0].is_shock);
    CHECK(close(st.fronts[0].sigma, 0.05, 1e-10));
    CHECK(close(st.fronts[0].speed, 1.05, 1e-10));
    // Interior wave: family-1 shock of strength -0.1 at speed 1.
    CHECK(st.fronts[1].x == 0.5);
    CHECK(st.fronts[1].is_shock);
    CHECK(close(st.fronts[1].sigma, -0.1, 1e-10));
    CHECK(close(st.fronts[1].speed, 1.0, 1e-10));

    // Exact gluing after initialization.
    CHECK(inf_norm(st.fronts[0].uR - st.fronts[1].uL) == 0.0);
    CHECK(inf_norm(st.leftmost_state - k * Vec2{-0.05, 0.0}) == 0.0);
    // The emitted right trace is snapped to the prescribed data bitwise.
    CHECK(st.fronts[1].uR.u1 == -0.05);
    CHECK(st.fronts[1].uR.u2 == 0.0);
}

TEST_CASE("initialize splits large initial rarefactions into fans") {
    FluxModel m = make_decoupled_burgers();
    Mat2 k{};
    Piecewise u0;
    u0.left = {-0.15, 0.0};
    u0.breaks.emplace_back(0.5, Vec2{0.15, 0.0});

    RunParams params;
    params.fp = test_params();
    params.eps2 = 0.6;  // this datum has TV* = 0.45
    SolutionState st = initialize(m, k, u0, 0.1, params);

    // Boundary shock (0 -> -0.15 is sigma = -0.15) plus a 3-piece fan.
    REQUIRE(st.fronts.size() == 4);
    CHECK(st.fronts[0].is_shock);
    CHECK(close(st.fronts[0].sigma, -0.15, 1e-10));
    for (int i = 1; i <= 3; ++i) {
        CHECK_FALSE(st.fronts[i].is_shock);
        CHECK(close(st.fronts[i].sigma, 0.1, 1e-10));
    }
    for (std::size_t i = 0; i + 1 < st.fronts.size(); ++i)
        CHECK(inf_norm(st.fronts[i].uR - st.fronts[i + 1].uL) == 0.0);
}

TEST_CASE("initialize rejects data with too much variation") {
    FluxModel m = make_decoupled_burgers();
    Mat2 k{};
    Piecewise u0;
    u0.left = {-0.15, 0.0};
    u0.breaks.emplace_back(0.5, Vec2{0.15, 0.0});
    RunParams params;
    params.fp = test_params();
    params.eps2 = 0.3;
    CHECK_THROWS_AS(initialize(m, k, u0, 0.1, params), DataTooLarge);
}

TEST_CASE("next_event: soonest interior collision") {
    SolutionState st;
    st.h = 0.1;
    st.fronts.push_back(make_front(0, 0.2, 2.0, 2));
    st.fronts.push_back(make_front(1, 0.5, 1.0, 1));
    PendingEvent ev = next_event(st, 1.0);
    CHECK_FALSE(ev.boundary);
    CHECK(ev.index == 0);
    CHECK(close(ev.dt, 0.3, 1e-15));  // gap 0.3 closes at relative speed 1
}

TEST_CASE("next_event: boundary arrival wins when sooner") {
    SolutionState st;
    st.h = 0.1;
    st.fronts.push_back(make_front(0, 0.5, 2.0));
    PendingEvent ev = next_event(st, 1.0);
    CHECK(ev.boundary);
    CHECK(ev.index == 0);
    CHECK(close(ev.dt, 0.25, 1e-15));
}

TEST_CASE("next_event: no fronts means no event") {
    SolutionState st;
    CHECK_THROWS_AS(next_event(st, 1.0), NoEvent);
}

TEST_CASE("next_event: a stacked pair with inverted speeds fires immediately") {
    SolutionState st;
    st.h = 0.1;
    st.fronts.push_back(make_front(0, 0.3, 2.0, 2));
    st.fronts.push_back(make_front(1, 0.3, 1.0, 1));
    PendingEvent ev = next_event(st, 1.0);
    CHECK_FALSE(ev.boundary);
    CHECK(ev.dt == 0.0);
}

TEST_CASE("event_candidates come back sorted by time") {
    SolutionState st;
    st.h = 0.1;
    st.fronts.push_back(make_front(0, 0.2, 2.0, 2));
    st.fronts.push_back(make_front(1, 0.5, 1.0, 1));
    st.fronts.push_back(make_front(2, 0.9, 3.0, 2));
    auto evs = event_candidates(st, 1.0);
    REQUIRE(evs.size() >= 2);
    for (std::size_t i = 0; i + 1 < evs.size(); ++i) CHECK(evs[i].dt <= evs[i + 1].dt);
}

TEST_CASE("perturb_speeds separates two simultaneous collisions deterministically") {
    SolutionState st;
    st.h = 0.1;
    st.fronts.push_back(make_front(0, 0.1, 2.0, 2));
    st.fronts.push_back(make_front(1, 0.2, 1.0, 1));
    st.fronts.push_back(make_front(2, 0.6, 2.0, 2));
    st.fronts.push_back(make_front(3, 0.7, 1.0, 1));

    auto before = event_candidates(st, 1.0);
    REQUIRE(before.size() >= 2);
    CHECK(close(before[0].dt, 0.1, 1e-15));
    CHECK(close(before[1].dt, 0.1, 1e-15));

    perturb_speeds(st, 1.0, st.h);

    // The front with the largest id among those involved was slowed, making
    // its pair's collision strictly soonest.
    CHECK(st.fronts[3].perturbed > 0.0);
    CHECK(st.fronts[3].speed < 1.0);
    auto after = event_candidates(st, 1.0);
    CHECK(after[0].dt < after[1].dt);
    PendingEvent ev = next_event(st, 1.0);
    CHECK_FALSE(ev.boundary);
    CHECK(ev.index == 2);
}

TEST_CASE("run: feedback-free jump flushes out and leaves a constant state") {
    FluxModel m = make_decoupled_burgers();
    Mat2 k{};  // K = 0
    Piecewise u0;
    u0.left = {0.05, 0.0};
    u0.breaks.emplace_back(0.5, Vec2{-0.05, 0.0});

    RunParams params;
    params.fp = test_params();
    RunResult rr = run(m, k, u0, 0.1, 1.6, params);

    CHECK(rr.status == RunStatus::Completed);
    CHECK(rr.t_end == 1.6);
    // Init record plus two boundary exits, nothing else.
    REQUIRE(rr.events.size() == 3);
    CHECK(rr.events[0].type == EventType::Init);
    CHECK(rr.events[1].type == EventType::BoundaryHit);
    CHECK(rr.events[2].type == EventType::BoundaryHit);
    CHECK(close(rr.events[1].t, 0.5, 1e-12));           // shock exit
    CHECK(close(rr.events[2].t, 1.0 / 1.05, 1e-9));     // rarefaction exit
    CHECK(rr.final_state.fronts.empty());

    // TV* starts at 0.15 and is exactly zero at the end.
    CHECK(close(rr.series.front().TVstar, 0.15, 1e-12));
    CHECK(rr.series.back().TVstar == 0.0);

    // With K = 0 every boundary arrival kills the wave: zero outgoing
    // strengths on both boundary records.
    CHECK(rr.events[1].sigma_out1 == 0.0);
    CHECK(rr.events[1].sigma_out2 == 0.0);

    // Snapshot bookkeeping with stride 0: exactly t = 0 and t = t_final.
    REQUIRE(rr.snapshots.size() == 2);
    CHECK(rr.snapshots.front().first == 0.0);
    CHECK(rr.snapshots.back().first == 1.6);
    // Final profile is identically zero.
    CHECK(inf_norm(piecewise_eval(rr.snapshots.back().second, 0.5)) == 0.0);
}

TEST_CASE("run: coupled feedback run stays glued and admissible") {
    FluxModel m = make_coupled_drift();
    Mat2 k{0.3, 0.3, 0.3, 0.3};
    Piecewise u0;
    u0.left = {0.01, 0.005};
    u0.breaks.emplace_back(0.4, Vec2{-0.012, -0.004});
    u0.breaks.emplace_back(0.7, Vec2{0.008, 0.002});

    RunParams params;
    params.fp = test_params();
    params.track_segments = true;
    RunResult rr = run(m, k, u0, 0.05, 2.0, params);

    CHECK(rr.status == RunStatus::Completed);
    CHECK(rr.events.size() > 3);

    // Side states stay exactly glued along the whole chain.
    const auto& fs = rr.final_state.fronts;
    for (std::size_t i = 0; i + 1 < fs.size(); ++i)
        CHECK(inf_norm(fs[i].uR - fs[i + 1].uL) == 0.0);
    if (!fs.empty())
        CHECK(inf_norm(rr.final_state.leftmost_state - fs.front().uL) == 0.0);

    // Every live shock is Lax-admissible; rarefaction pieces stay below h
    // within the documented factor.
    for (const Front& f : fs) {
        if (f.is_shock) CHECK(check_lax_admissibility(m, f));
    }
    CHECK(rr.max_rare_over_h <= 3.0);

    // Fronts are position-sorted.
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) CHECK(fs[i].x <= fs[i + 1].x);

    // Segment tracking covers the whole time span without gaps per front id.
    CHECK_FALSE(rr.segments.empty());
    for (const Segment& s : rr.segments) {
        CHECK(s.t1 >= s.t0);
        CHECK(s.family >= 1);
        CHECK(s.family <= 2);
    }
}

TEST_CASE("run twice gives bit-identical results") {
    FluxModel m = make_coupled_drift();
    Mat2 k{0.3, 0.3, 0.3, 0.3};
    Piecewise u0;
    u0.left = {0.01, 0.005};
    u0.breaks.emplace_back(0.5, Vec2{-0.01, -0.005});

    RunParams params;
    params.fp = test_params();
    RunResult a = run(m, k, u0, 0.05, 1.5, params);
    RunResult b = run(m, k, u0, 0.05, 1.5, params);

    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].t == b.events[i].t);
        CHECK(a.events[i].x == b.events[i].x);
        CHECK(a.events[i].J == b.events[i].J);
    }
    CHECK(a.series.back().J == b.series.back().J);
    CHECK(a.series.back().TVstar == b.series.back().TVstar);
}

TEST_CASE("run trips the front-count guard instead of growing unboundedly") {
    FluxModel m = make_decoupled_burgers();
    Mat2 k{};
    Piecewise u0;
    u0.left = {-0.15, 0.0};
    u0.breaks.emplace_back(0.5, Vec2{0.15, 0.0});

    RunParams params;
    params.fp = test_params();
    params.eps2 = 0.6;
    params.front_cap = 2;  // initialization already needs 4
    RunResult rr = run(m, k, u0, 0.1, 1.0, params);
    CHECK(rr.status == RunStatus::GuardTripped);
    CHECK_FALSE(rr.guard_reason.empty());
}

TEST_CASE("run honors the event cap") {
    FluxModel m = make_coupled_drift();
    Mat2 k{0.3, 0.3, 0.3, 0.3};
    Piecewise u0;
    u0.left = {0.01, 0.005};
    u0.breaks.emplace_back(0.5, Vec2{-0.01, -0.005});

    RunParams params;
    params.fp = test_params();
    params.event_cap = 3;
    RunResult rr = run(m, k, u0, 0.05, 5.0, params);
    CHECK(rr.status == RunStatus::GuardTripped);
    CHECK(rr.t_end < 5.0);
}

TEST_CASE("to_piecewise reproduces the side states of the front list") {
    FluxModel m = make_decoupled_burgers();
    Mat2 k{};
    Piecewise u0;
    u0.left = {0.05, 0.0};
    u0.breaks.emplace_back(0.5, Vec2{-0.05, 0.0});
    RunParams params;
    params.fp = test_params();
    SolutionState st = initialize(m, k, u0, 0.1, params);

    Piecewise pw = to_piecewise(st, 1.0);
    CHECK(inf_norm(pw.left - st.leftmost_state) == 0.0);
    CHECK(pw.breaks.size() == st.fronts.size());
    // Evaluation left of the first front gives the leftmost state, right of
    // the last front the final state.
    CHECK(inf_norm(piecewise_eval(pw, 0.25) - st.fronts[1].uL) == 0.0);
    CHECK(inf_norm(piecewise_eval(pw, 0.75) - st.fronts[1].uR) == 0.0);
}

TEST_CASE("snapshot stride produces interior profiles") {
    FluxModel m = make_decoupled_burgers();
    Mat2 k{};
    Piecewise u0;
    u0.left = {0.05, 0.0};
    u0.breaks.emplace_back(0.5, Vec2{-0.05, 0.0});
    RunParams params;
    params.fp = test_params();
    params.snapshot_stride = 0.25;
    RunResult rr = run(m, k, u0, 0.1, 1.0, params);
    // t = 0, 0.25, 0.5, 0.75, 1.0 plus the final profile.
    REQUIRE(rr.snapshots.size() >= 5);
    CHECK(rr.snapshots[0].first == 0.0);
    CHECK(close(rr.snapshots[1].first, 0.25, 1e-15));
    // Profiles advance: at t = 0.25 the shock sits at x = 0.75.
    const Piecewise& p1 = rr.snapshots[1].second;
    CHECK(inf_norm(piecewise_eval(p1, 0.74) - Vec2{0.05, 0.0}) <= 1e-12);
    CHECK(inf_norm(piecewise_eval(p1, 0.76) - Vec2{-0.05, 0.0}) <= 1e-12);
}

TEST_CASE("event records carry consistent functional values") {
    FluxModel m = make_coupled_drift();
    Mat2 k{0.3, 0.3, 0.3, 0.3};
    Piecewise u0;
    u0.left = {0.01, 0.005};
    u0.breaks.emplace_back(0.5, Vec2{-0.01, -0.005});
    RunParams params;
    params.fp = test_params();
    RunResult rr = run(m, k, u0, 0.05, 1.5, params);

    for (const EventRecord& e : rr.events) {
        CHECK(e.V >= 0.0);
        CHECK(e.Q >= 0.0);
        CHECK(close(e.J, e.V + params.fp.c0 * e.Q, 1e-12));
        CHECK(e.J_before >= 0.0);
    }
    // Series and events agree where they coincide (one row per event).
    REQUIRE(rr.series.size() >= rr.events.size());
    for (std::size_t i = 0; i < rr.events.size(); ++i) {
        CHECK(rr.series[i].J == rr.events[i].J);
        CHECK(rr.series[i].t == rr.events[i].t);
    }
}
