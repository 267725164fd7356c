#include "fronttrack/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "fronttrack/errors.hpp"
#include "fronttrack/functionals.hpp"

namespace fronttrack {

namespace {

constexpr double kTieRel = 1e-12;

void advance_positions(SolutionState& state, double dt) {
    for (Front& f : state.fronts) f.x += f.speed * dt;
    state.t += dt;
}

// Profile at an absolute time >= state.t, assuming no event occurs in between.
Piecewise profile_at(const SolutionState& state, double t_abs, double L) {
    Piecewise pw;
    pw.left = state.leftmost_state;
    pw.length = L;
    double dt = t_abs - state.t;
    pw.breaks.reserve(state.fronts.size());
    for (const Front& f : state.fronts)
        pw.breaks.emplace_back(std::min(f.x + f.speed * dt, L), f.uR);
    return pw;
}

void close_segment(SolutionState& state, const Front& f) {
    if (!state.track_segments) return;
    state.closed_segments.push_back(
        {f.seg_t0, state.t, f.seg_x0, f.speed, f.family, f.sigma, f.uL, f.uR});
}

struct EmitSpec {
    double s1 = 0.0, s2 = 0.0;  // solved strengths by family
    bool fan1 = false, fan2 = false;
};

// Chains the outgoing waves of a solved Riemann problem into fronts at (t, x),
// left state u_left. Waves at or below the drop threshold are folded away
// unless force_nonempty asks for the strongest one regardless (needed when no
// neighbour exists to absorb the residual jump).
std::vector<Front> emit_waves(const FluxModel& model, double t, double x, Vec2 u_left,
                              const EmitSpec& spec, double h, double drop,
                              long& next_id, bool force_nonempty) {
    double s[2] = {spec.s1, spec.s2};
    bool fan[2] = {spec.fan1, spec.fan2};
    bool keep[2] = {std::fabs(s[0]) > drop, std::fabs(s[1]) > drop};
    if (force_nonempty && !keep[0] && !keep[1]) {
        int m = std::fabs(s[0]) >= std::fabs(s[1]) ? 0 : 1;
        if (s[m] != 0.0) keep[m] = true;
    }
    std::vector<Front> out;
    Vec2 cur = u_left;
    for (int w = 0; w < 2; ++w) {
        if (!keep[w]) continue;
        int family = w + 1;
        double sigma = s[w];
        if (sigma < 0.0) {
            ShockResult sr = shock_curve(model, family, sigma, cur);
            out.push_back({next_id++, x, sr.speed, family, true, sigma, cur, sr.state,
                           t, 0.0, t, x});
            cur = sr.state;
        } else if (fan[w]) {
            auto pieces = build_fan(model, family, sigma, cur, h, t, x, next_id);
            cur = pieces.back().uR;
            out.insert(out.end(), pieces.begin(), pieces.end());
        } else {
            Vec2 nxt = rarefaction_curve(model, family, sigma, cur);
            double l1, l2;
            eigenvalues(model, nxt, l1, l2);
            out.push_back({next_id++, x, family == 1 ? l1 : l2, family, false, sigma,
                           cur, nxt, t, 0.0, t, x});
            cur = nxt;
        }
    }
    return out;
}

bool any_state_outside(const std::vector<Front>& fronts, double delta0) {
    if (delta0 <= 0.0) return false;  // guard disabled when parameters are unset
    for (const Front& f : fronts)
        if (inf_norm(f.uR) > delta0 || inf_norm(f.uL) > delta0) return true;
    return false;
}

}  // namespace

const char* event_type_name(EventType type) {
    switch (type) {
        case EventType::Init: return "init";
        case EventType::InteriorSameFamily: return "interior_same_family";
        case EventType::InteriorTransversal: return "interior_transversal";
        case EventType::BoundaryHit: return "boundary_hit";
    }
    return "unknown";
}

double max_rarefaction(const SolutionState& state) {
    double m = 0.0;
    for (const Front& f : state.fronts)
        if (!f.is_shock && f.sigma > m) m = f.sigma;
    return m;
}

Piecewise to_piecewise(const SolutionState& state, double L) {
    Piecewise pw;
    pw.left = state.leftmost_state;
    pw.length = L;
    pw.breaks.reserve(state.fronts.size());
    for (const Front& f : state.fronts) pw.breaks.emplace_back(f.x, f.uR);
    return pw;
}

std::vector<Front> build_fan(const FluxModel& model, int family, double sigma,
                             Vec2 u_minus, double h, double t, double x,
                             long& next_id) {
    if (sigma <= 0.0) throw Error("build_fan needs a positive strength");
    std::vector<Front> out;
    int p = sigma <= h ? 1 : static_cast<int>(std::ceil(sigma / h));
    double piece = sigma / p;
    Vec2 cur = u_minus;
    out.reserve(p);
    for (int j = 0; j < p; ++j) {
        Vec2 nxt = rarefaction_curve(model, family, piece, cur);
        double l1, l2;
        eigenvalues(model, nxt, l1, l2);
        out.push_back({next_id++, x, family == 1 ? l1 : l2, family, false, piece, cur,
                       nxt, t, 0.0, t, x});
        cur = nxt;
    }
    return out;
}

SolutionState initialize(const FluxModel& model, const Mat2& k, const Piecewise& u0h,
                         double h, const RunParams& params) {
    if (h <= 0.0) throw ValidationError("h", "must be positive");
    double tvs = tv_star(k, u0h);
    if (tvs > params.eps2)
        throw DataTooLarge("initial TV* = " + std::to_string(tvs) + " exceeds " +
                           std::to_string(params.eps2));
    double amp = inf_norm(u0h.left);
    for (const auto& br : u0h.breaks) amp = std::max(amp, inf_norm(br.second));
    if (params.fp.delta0 > 0.0 && amp > params.fp.delta0)
        throw DataTooLarge("initial data leaves |u| <= delta0 = " +
                           std::to_string(params.fp.delta0));

    SolutionState st;
    st.h = h;
    st.t = 0.0;
    st.leftmost_state = u0h.left;
    st.track_segments = params.track_segments;

    Vec2 cur = u0h.left;
    for (const auto& br : u0h.breaks) {
        const Vec2& v = br.second;
        if (v.u1 == cur.u1 && v.u2 == cur.u2) continue;
        RiemannSolution sol = solve_riemann(model, cur, v);
        auto waves = emit_waves(model, 0.0, br.first,
                                cur, {sol.sigma1, sol.sigma2, true, true}, h,
                                params.sigma_drop, st.next_id, true);
        if (!waves.empty()) {
            waves.back().uR = v;
            st.fronts.insert(st.fronts.end(), waves.begin(), waves.end());
        }
        cur = v;
    }

    // Boundary Riemann problem between K u(L-) and u(0+).
    Vec2 old_left = u0h.left;
    RiemannSolution bsol = solve_boundary_riemann(model, k, cur, old_left);
    st.leftmost_state = k * cur;
    auto bw = emit_waves(model, 0.0, 0.0, st.leftmost_state,
                         {bsol.sigma1, bsol.sigma2, true, true}, h, params.sigma_drop,
                         st.next_id, false);
    if (!bw.empty()) {
        bw.back().uR = old_left;
        st.fronts.insert(st.fronts.begin(), bw.begin(), bw.end());
    } else if (!st.fronts.empty()) {
        st.fronts.front().uL = st.leftmost_state;
    }

    std::stable_sort(st.fronts.begin(), st.fronts.end(),
                     [](const Front& a, const Front& b) { return a.x < b.x; });
    return st;
}

std::vector<PendingEvent> event_candidates(const SolutionState& state, double L) {
    std::vector<PendingEvent> evs;
    const auto& fs = state.fronts;
    evs.reserve(fs.size() * 2);
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
        double ds = fs[i].speed - fs[i + 1].speed;
        if (ds > 0.0) evs.push_back({(fs[i + 1].x - fs[i].x) / ds, false, i});
    }
    for (std::size_t i = 0; i < fs.size(); ++i)
        evs.push_back({(L - fs[i].x) / fs[i].speed, true, i});
    std::sort(evs.begin(), evs.end(), [](const PendingEvent& a, const PendingEvent& b) {
        if (a.dt != b.dt) return a.dt < b.dt;
        if (a.boundary != b.boundary) return !a.boundary;
        return a.index < b.index;
    });
    return evs;
}

PendingEvent next_event(const SolutionState& state, double L) {
    if (state.fronts.empty()) throw NoEvent("no fronts remain");
    return event_candidates(state, L).front();
}

namespace {

// Front indices taking part in a pending event.
void involved_fronts(const PendingEvent& ev, std::vector<std::size_t>& out) {
    out.push_back(ev.index);
    if (!ev.boundary) out.push_back(ev.index + 1);
}

// Number of candidates sharing the soonest time. An immediate (dt == 0)
// soonest event wins outright and counts as already separated.
std::size_t tie_count(const std::vector<PendingEvent>& evs) {
    if (evs.empty()) return 0;
    double dt1 = evs[0].dt;
    if (dt1 == 0.0) return 1;
    double tol = kTieRel * dt1 + 1e-15;
    std::size_t n = 1;
    while (n < evs.size() && evs[n].dt - dt1 <= tol) ++n;
    return n;
}

// Composite minimum over all pending candidates without materializing the
// sorted list (the full build-and-sort dominates run time otherwise). Returns
// the candidate a sort would place first; *second_dt gets the runner-up
// collision time for tie detection.
PendingEvent scan_next(const SolutionState& state, double L, double* second_dt) {
    const double inf = std::numeric_limits<double>::infinity();
    const auto& fs = state.fronts;
    PendingEvent best{inf, true, 0};
    double second = inf;
    auto offer = [&](double dt, bool boundary, std::size_t index) {
        bool better;
        if (dt != best.dt)
            better = dt < best.dt;
        else if (boundary != best.boundary)
            better = !boundary;
        else
            better = index < best.index;
        if (better) {
            second = best.dt;
            best = {dt, boundary, index};
        } else if (dt < second) {
            second = dt;
        }
    };
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
        double ds = fs[i].speed - fs[i + 1].speed;
        if (ds > 0.0) offer((fs[i + 1].x - fs[i].x) / ds, false, i);
    }
    for (std::size_t i = 0; i < fs.size(); ++i)
        offer((L - fs[i].x) / fs[i].speed, true, i);
    *second_dt = second;
    return best;
}

}  // namespace

void perturb_speeds(SolutionState& state, double L, double h) {
    for (int round = 0; round < 10000; ++round) {
        auto evs = event_candidates(state, L);
        std::size_t ties = tie_count(evs);
        if (ties <= 1) return;
        double dt1 = evs[0].dt;
        double tol = kTieRel * dt1 + 1e-15;

        std::vector<std::size_t> involved;
        for (const auto& e : evs) {
            if (e.dt - dt1 > tol) break;
            involved_fronts(e, involved);
        }
        std::sort(involved.begin(), involved.end());
        involved.erase(std::unique(involved.begin(), involved.end()), involved.end());
        // candidates by descending id
        std::sort(involved.begin(), involved.end(),
                  [&](std::size_t a, std::size_t b) {
                      return state.fronts[a].id > state.fronts[b].id;
                  });

        // One perturbation per round; a mass tie shrinks round by round.
        bool progressed = false;
        for (std::size_t idx : involved) {
            Front& f = state.fronts[idx];
            for (int j = 40; j >= 1 && !progressed; --j) {
                double amount = std::ldexp(h, -j);
                if (f.perturbed + amount > h) break;  // larger amounts fail too
                double old_speed = f.speed;
                if (old_speed - amount <= 0.0) break;
                close_segment(state, f);
                f.seg_t0 = state.t;
                f.seg_x0 = f.x;
                f.speed = old_speed - amount;
                auto evs2 = event_candidates(state, L);
                if (!evs2.empty() && tie_count(evs2) < ties) {
                    f.perturbed += amount;
                    progressed = true;
                } else {
                    f.speed = old_speed;
                    if (state.track_segments) state.closed_segments.pop_back();
                }
            }
            if (progressed) break;
        }
        if (!progressed)
            throw CannotSeparate("tie at t = " + std::to_string(state.t) +
                                 " resisted all speed perturbations");
    }
    throw CannotSeparate("tie resolution did not converge");
}

ApplyOutcome apply_interior_interaction(const FluxModel& model, const Mat2& k,
                                        SolutionState& state, const PendingEvent& ev,
                                        const RunParams& params) {
    std::size_t i = ev.index;
    if (ev.boundary || i + 1 >= state.fronts.size())
        throw Error("malformed interior event");

    double x_ev = state.fronts[i].x + state.fronts[i].speed * ev.dt;
    advance_positions(state, ev.dt);
    state.fronts[i].x = x_ev;
    state.fronts[i + 1].x = x_ev;

    FunctionalValues before = evaluate(model, state, k, params.fp);

    Front fl = state.fronts[i];
    Front fr = state.fronts[i + 1];
    bool same = fl.family == fr.family;
    if (same && !fl.is_shock && !fr.is_shock)
        throw Error("same-family rarefaction fronts collided at t = " +
                    std::to_string(state.t));
    if (!same && !(fl.family == 2 && fr.family == 1))
        throw Error("transversal collision with non-approaching families");

    Vec2 uL = fl.uL;
    Vec2 uR = fr.uR;
    RiemannSolution sol = solve_riemann(model, uL, uR);

    EmitSpec spec{sol.sigma1, sol.sigma2, false, false};
    if (same) {
        // the outgoing rarefaction of the colliding family stays a single
        // front; the other family's rarefaction is split into a fan
        spec.fan1 = fl.family != 1;
        spec.fan2 = fl.family != 2;
    }
    bool rightmost_pair = i + 2 == state.fronts.size();
    auto waves = emit_waves(model, state.t, x_ev, uL, spec, state.h,
                            params.sigma_drop, state.next_id, rightmost_pair);

    close_segment(state, fl);
    close_segment(state, fr);

    ApplyOutcome oc;
    oc.state_out_of_bounds = any_state_outside(waves, params.fp.delta0);

    if (!waves.empty()) {
        waves.back().uR = uR;
        auto it = state.fronts.erase(state.fronts.begin() + i,
                                     state.fronts.begin() + i + 2);
        state.fronts.insert(it, waves.begin(), waves.end());
    } else {
        if (i + 2 < state.fronts.size()) state.fronts[i + 2].uL = uL;
        state.fronts.erase(state.fronts.begin() + i, state.fronts.begin() + i + 2);
    }
    state.event_count += 1;

    FunctionalValues after = evaluate(model, state, k, params.fp);
    oc.record.t = state.t;
    oc.record.x = x_ev;
    oc.record.type = same ? EventType::InteriorSameFamily
                          : EventType::InteriorTransversal;
    oc.record.family_in = same ? fl.family : 0;
    if (same) {
        oc.record.sigma_in1 = fl.sigma;
        oc.record.sigma_in2 = fr.sigma;
    } else {
        oc.record.sigma_in1 = fr.sigma;  // family 1 arrives from the right
        oc.record.sigma_in2 = fl.sigma;
    }
    oc.record.sigma_out1 = sol.sigma1;
    oc.record.sigma_out2 = sol.sigma2;
    oc.record.V = after.V;
    oc.record.Q = after.Q;
    oc.record.J = after.J;
    oc.record.J_before = before.J;
    oc.record.V_before = before.V;
    oc.tv_star = after.TVstar;
    oc.max_rare = max_rarefaction(state);
    return oc;
}

ApplyOutcome apply_boundary_event(const FluxModel& model, const Mat2& k,
                                  SolutionState& state, const PendingEvent& ev,
                                  double L, const RunParams& params) {
    if (!ev.boundary || state.fronts.empty() || ev.index != state.fronts.size() - 1)
        throw Error("malformed boundary event");

    advance_positions(state, ev.dt);
    state.fronts.back().x = L;

    FunctionalValues before = evaluate(model, state, k, params.fp);

    Front dying = state.fronts.back();
    close_segment(state, dying);
    state.fronts.pop_back();

    Vec2 trace = dying.uL;  // new value at L-
    Vec2 old_left = state.leftmost_state;
    RiemannSolution sol = solve_boundary_riemann(model, k, trace, old_left);
    state.leftmost_state = k * trace;

    auto waves = emit_waves(model, state.t, 0.0, state.leftmost_state,
                            {sol.sigma1, sol.sigma2, true, true}, state.h,
                            params.sigma_drop, state.next_id, false);

    ApplyOutcome oc;
    oc.state_out_of_bounds = any_state_outside(waves, params.fp.delta0);

    if (!waves.empty()) {
        waves.back().uR = old_left;
        state.fronts.insert(state.fronts.begin(), waves.begin(), waves.end());
    } else if (!state.fronts.empty()) {
        state.fronts.front().uL = state.leftmost_state;
    }
    state.event_count += 1;

    FunctionalValues after = evaluate(model, state, k, params.fp);
    oc.record.t = state.t;
    oc.record.x = L;
    oc.record.type = EventType::BoundaryHit;
    oc.record.family_in = dying.family;
    oc.record.sigma_in1 = dying.sigma;
    oc.record.sigma_in2 = 0.0;
    oc.record.sigma_out1 = sol.sigma1;
    oc.record.sigma_out2 = sol.sigma2;
    oc.record.V = after.V;
    oc.record.Q = after.Q;
    oc.record.J = after.J;
    oc.record.J_before = before.J;
    oc.record.V_before = before.V;
    oc.tv_star = after.TVstar;
    oc.max_rare = max_rarefaction(state);
    return oc;
}

RunResult run(const FluxModel& model, const Mat2& k, const Piecewise& u0h, double h,
              double t_final, const RunParams& params) {
    if (t_final < 0.0) throw ValidationError("t_final", "must be nonnegative");
    double L = params.fp.L;

    RunResult rr;
    SolutionState state = initialize(model, k, u0h, h, params);

    FunctionalValues v0 = evaluate(model, state, k, params.fp);
    rr.series.push_back({0.0, v0.V, v0.Q, v0.J, v0.TVstar, max_rarefaction(state),
                         static_cast<long>(state.fronts.size())});
    rr.snapshots.emplace_back(0.0, to_piecewise(state, L));
    if (h > 0.0) rr.max_rare_over_h = max_rarefaction(state) / h;

    if (!state.fronts.empty()) {
        EventRecord init;
        init.t = 0.0;
        init.x = 0.0;
        init.type = EventType::Init;
        for (const Front& f : state.fronts) {
            if (f.family == 1)
                init.sigma_out1 += std::fabs(f.sigma);
            else
                init.sigma_out2 += std::fabs(f.sigma);
        }
        init.V = v0.V;
        init.Q = v0.Q;
        init.J = v0.J;
        init.J_before = v0.J;
        init.V_before = v0.V;
        rr.events.push_back(init);
    }

    double stride = params.snapshot_stride;
    double next_snap = stride > 0.0 ? stride : std::numeric_limits<double>::infinity();

    auto take_snapshots_until = [&](double t_cut) {
        // strides strictly before the next state change
        while (next_snap < t_cut && next_snap <= t_final) {
            rr.snapshots.emplace_back(next_snap, profile_at(state, next_snap, L));
            next_snap += stride;
        }
    };
    auto take_snapshots_now = [&]() {
        while (next_snap <= state.t && next_snap <= t_final) {
            rr.snapshots.emplace_back(next_snap, to_piecewise(state, L));
            next_snap += stride;
        }
    };

    rr.status = RunStatus::Completed;
    while (state.t < t_final) {
        if (state.fronts.empty()) {
            take_snapshots_until(t_final);
            state.t = t_final;
            break;
        }
        if (state.event_count >= params.event_cap) {
            rr.status = RunStatus::GuardTripped;
            rr.guard_reason = "event cap " + std::to_string(params.event_cap) +
                              " reached at t = " + std::to_string(state.t);
            break;
        }

        double second_dt;
        PendingEvent ev = scan_next(state, L, &second_dt);
        if (ev.dt > 0.0 && second_dt - ev.dt <= kTieRel * ev.dt + 1e-15) {
            perturb_speeds(state, L, h);
            ev = scan_next(state, L, &second_dt);
        }

        double t_next = state.t + ev.dt;
        if (t_next > t_final) {
            take_snapshots_until(t_final);
            advance_positions(state, t_final - state.t);
            state.t = t_final;
            break;
        }

        take_snapshots_until(t_next);
        ApplyOutcome oc = ev.boundary
                              ? apply_boundary_event(model, k, state, ev, L, params)
                              : apply_interior_interaction(model, k, state, ev, params);
        take_snapshots_now();

        rr.events.push_back(oc.record);
        rr.series.push_back({state.t, oc.record.V, oc.record.Q, oc.record.J,
                             oc.tv_star, oc.max_rare,
                             static_cast<long>(state.fronts.size())});
        if (h > 0.0 && oc.max_rare / h > rr.max_rare_over_h)
            rr.max_rare_over_h = oc.max_rare / h;

        if (oc.state_out_of_bounds) {
            rr.status = RunStatus::GuardTripped;
            rr.guard_reason = "state left |u| <= delta0 at t = " +
                              std::to_string(state.t);
            break;
        }
        if (static_cast<long>(state.fronts.size()) > params.front_cap) {
            rr.status = RunStatus::GuardTripped;
            rr.guard_reason = "front cap " + std::to_string(params.front_cap) +
                              " exceeded at t = " + std::to_string(state.t);
            break;
        }
    }

    if (rr.status == RunStatus::Completed) {
        FunctionalValues vf = evaluate(model, state, k, params.fp);
        rr.series.push_back({state.t, vf.V, vf.Q, vf.J, vf.TVstar,
                             max_rarefaction(state),
                             static_cast<long>(state.fronts.size())});
        if (rr.snapshots.empty() || rr.snapshots.back().first != state.t)
            rr.snapshots.emplace_back(state.t, to_piecewise(state, L));
    }

    if (params.track_segments) {
        for (const Front& f : state.fronts) close_segment(state, f);
        rr.segments = std::move(state.closed_segments);
        state.closed_segments.clear();
    }
    rr.t_end = state.t;
    rr.final_state = std::move(state);
    return rr;
}

}  // namespace fronttrack
