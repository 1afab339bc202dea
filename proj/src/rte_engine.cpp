#include "vesim/rte_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vesim {

namespace {

constexpr double kTieBreak = 1e-12;  // |T~| below this counts as recovered [K]

struct Segment {
    double p_tilde;   // applied power deviation [W]
    double duration;  // [s]
    double t_start;   // zone deviation entering the segment [K]
    Mode mode;        // charge (p~ > 0) or discharge (p~ < 0)
};

// Build the 2 n_cycles schedule segments and propagate T~ through them.
std::vector<Segment> schedule_segments(const ScheduleSpec& s, const VesCoefficients& v,
                                       const ChargeDischargeFlows& f) {
    const Mode first = s.phase == Phase::up_down ? Mode::charge : Mode::discharge;
    const Mode second = s.phase == Phase::up_down ? Mode::discharge : Mode::charge;
    std::vector<Segment> segs;
    segs.reserve(2 * static_cast<std::size_t>(s.n_cycles) + 1);
    double t_tilde = 0.0;
    for (int i = 0; i < s.n_cycles; ++i) {
        for (Mode m : {first, second}) {
            Segment seg;
            seg.mode = m;
            seg.p_tilde = m == Mode::charge ? s.delta_p : -s.delta_p;
            seg.duration = s.t_p;
            seg.t_start = t_tilde;
            t_tilde = lti_step(t_tilde, s.t_p, m, v, f);
            segs.push_back(seg);
        }
    }
    return segs;
}

// Trace + bookkeeping shared by the closed-form path. Samples every dt plus
// the exact final instant; segment boundaries are monotonicity extremes, so
// the comfort check walks them instead of the samples.
void emit_closed_form(const std::vector<Segment>& segs, const VesCoefficients& v,
                      const ChargeDischargeFlows& f, const DeviationFrame& frame,
                      const RunOptions& opts, AnalyticTrace& trace, RteResult& res) {
    double total = 0.0;
    for (const auto& seg : segs) total += seg.duration;

    res.e_charge = res.e_discharge = 0.0;
    res.t_c = res.t_d = 0.0;
    double end_t_tilde = 0.0;
    for (const auto& seg : segs) {
        if (seg.p_tilde > 0.0) {
            res.t_c += seg.duration;
            res.e_charge += seg.p_tilde * seg.duration;
        } else if (seg.p_tilde < 0.0) {
            res.t_d += seg.duration;
            res.e_discharge += -seg.p_tilde * seg.duration;
        }
        end_t_tilde = lti_step(seg.t_start, seg.duration, seg.mode, v, f);
        const auto check = [&](double x) {
            if (x < frame.lo() - 1e-12 || x > frame.hi() + 1e-12) {
                res.comfort_ok = false;
                if (opts.strict_comfort)
                    throw ComfortViolation("zone deviation " + std::to_string(x) +
                                           " K left the comfort band");
            }
        };
        check(seg.t_start);
        check(end_t_tilde);
    }

    if (!opts.with_trace) return;
    std::size_t seg_idx = 0;
    double seg_begin = 0.0;
    const auto sample = [&](double t) {
        while (seg_idx + 1 < segs.size() && t >= seg_begin + segs[seg_idx].duration) {
            seg_begin += segs[seg_idx].duration;
            ++seg_idx;
        }
        const Segment& seg = segs[seg_idx];
        TracePoint p;
        p.t = t;
        p.t_tilde = lti_step(seg.t_start, t - seg_begin, seg.mode, v, f);
        p.m_tilde = seg.p_tilde == 0.0 ? 0.0
                    : (seg.mode == Mode::charge ? f.delta_m_c : -f.delta_m_d);
        p.p_tilde = seg.p_tilde;
        p.soc = frame.soc(p.t_tilde);
        trace.points.push_back(p);
    };
    for (double t = 0.0; t < total; t += opts.dt) sample(t);
    sample(total);
}

}  // namespace

const char* to_string(RecoveryMode m) {
    switch (m) {
        case RecoveryMode::none: return "none";
        case RecoveryMode::charge: return "charge";
        case RecoveryMode::discharge: return "discharge";
    }
    return "?";
}

const char* to_string(Phase p) {
    return p == Phase::up_down ? "up_down" : "down_up";
}

double critical_half_period(const VesCoefficients& v, const ChargeDischargeFlows& f) {
    if (f.delta_m_d == f.delta_m_c) return 0.0;  // contrived symmetric flows
    return -std::log(f.delta_m_c / f.delta_m_d) / f.rate(Mode::charge, v);
}

RecoveryResult recovery_time(double t_end, const VesCoefficients& v,
                             const ChargeDischargeFlows& f) {
    RecoveryResult r;
    if (std::fabs(t_end) <= kTieBreak) return r;
    if (f.delta_p == 0.0)
        throw NoRecoveryPossible("zero-amplitude flows cannot steer the zone");
    if (t_end > 0.0) {
        // Warm zone: charge (extra cooling) toward t_c_ss < 0 until zero.
        const double arg = (t_end - f.t_c_ss) / (-f.t_c_ss);
        if (!(arg >= 1.0)) throw NoRecoveryPossible("charging cannot reach the warm deviation");
        r.t = std::log(arg) / f.rate(Mode::charge, v);
        r.mode = RecoveryMode::charge;
    } else {
        // Cool zone: discharge (less cooling) toward t_d_ss > 0 until zero.
        const double arg = (t_end - f.t_d_ss) / (-f.t_d_ss);
        if (!(arg >= 1.0)) throw NoRecoveryPossible("discharging cannot reach the cool deviation");
        r.t = std::log(arg) / f.rate(Mode::discharge, v);
        r.mode = RecoveryMode::discharge;
    }
    return r;
}

double max_recovery_time(const VesCoefficients& v, const ChargeDischargeFlows& f) {
    const double bound = temperature_bound(f);
    if (bound <= kTieBreak) return 0.0;
    return std::fmax(recovery_time(bound, v, f).t, recovery_time(-bound, v, f).t);
}

std::pair<AnalyticTrace, RteResult> run_square_wave(const ScheduleSpec& s,
                                                    const VesCoefficients& v,
                                                    const DeviationFrame& frame,
                                                    const RunOptions& opts) {
    s.validate();
    AnalyticTrace trace;
    RteResult res;
    if (s.delta_p == 0.0) {
        res.zero_energy = true;
        if (opts.with_trace) {
            const double total = 2.0 * s.t_p * s.n_cycles;
            for (double t = 0.0; t < total; t += opts.dt)
                trace.points.push_back({t, 0.0, 0.0, 0.0, frame.soc(0.0)});
            trace.points.push_back({total, 0.0, 0.0, 0.0, frame.soc(0.0)});
        }
        return {std::move(trace), res};
    }

    const ChargeDischargeFlows f = charge_discharge_flows(s.delta_p, v);
    auto segs = schedule_segments(s, v, f);
    const Segment& last = segs.back();
    res.t_tilde_end = lti_step(last.t_start, last.duration, last.mode, v, f);

    const RecoveryResult rec = recovery_time(res.t_tilde_end, v, f);
    res.t_recov = rec.t;
    res.recovery_mode = rec.mode;
    if (rec.mode != RecoveryMode::none) {
        Segment seg;
        seg.mode = rec.mode == RecoveryMode::charge ? Mode::charge : Mode::discharge;
        seg.p_tilde = rec.mode == RecoveryMode::charge ? s.delta_p : -s.delta_p;
        seg.duration = rec.t;
        seg.t_start = res.t_tilde_end;
        segs.push_back(seg);
    }

    emit_closed_form(segs, v, f, frame, opts, trace, res);
    res.eta_rt = res.t_d / res.t_c;
    res.eta_energy = res.e_discharge / res.e_charge;
    return {std::move(trace), res};
}

namespace {

// One RK4 step of dT~/dt = -alpha T~ - (beta + gamma T~) m~(p~, T~) with the
// airflow deviation re-solved at every stage (pointwise algebraic coupling).
double rk4_deviation_step(double t_tilde, double p_tilde, double h, const VesCoefficients& v) {
    const auto rhs = [&](double x) {
        const double m = airflow_for_power(p_tilde, x, v);
        return -v.alpha * x - v.beta * m - v.gamma * x * m;
    };
    const double k1 = rhs(t_tilde);
    const double k2 = rhs(t_tilde + 0.5 * h * k1);
    const double k3 = rhs(t_tilde + 0.5 * h * k2);
    const double k4 = rhs(t_tilde + h * k3);
    return t_tilde + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::pair<AnalyticTrace, RteResult> run_square_wave_numeric(const ScheduleSpec& s,
                                                            const VesCoefficients& v,
                                                            const DeviationFrame& frame,
                                                            const RunOptions& opts) {
    s.validate();
    if (!(opts.dt > 0.0)) throw ConfigError("integration step must be > 0");
    AnalyticTrace trace;
    RteResult res;
    if (s.delta_p == 0.0) {
        res.zero_energy = true;
        trace.points.push_back({0.0, 0.0, 0.0, 0.0, frame.soc(0.0)});
        return {std::move(trace), res};
    }

    double t_tilde = 0.0;
    double now = 0.0;
    const auto check_comfort = [&](double x) {
        if (x < frame.lo() - 1e-12 || x > frame.hi() + 1e-12) {
            res.comfort_ok = false;
            if (opts.strict_comfort)
                throw ComfortViolation("zone deviation " + std::to_string(x) +
                                       " K left the comfort band");
        }
    };
    const auto record = [&](double p_tilde) {
        if (!opts.with_trace) return;
        const double m = airflow_for_power(p_tilde, t_tilde, v);
        trace.points.push_back({now, t_tilde, m, p_tilde, frame.soc(t_tilde)});
    };

    // Integrate one constant-power segment with full dt steps plus remainder.
    const auto run_segment = [&](double p_tilde, double duration) {
        double done = 0.0;
        record(p_tilde);
        while (done < duration - 1e-9) {
            const double h = std::min(opts.dt, duration - done);
            t_tilde = rk4_deviation_step(t_tilde, p_tilde, h, v);
            if (!std::isfinite(t_tilde))
                throw NonFiniteState("deviation integration diverged at t = " + std::to_string(now));
            done += h;
            now += h;
            check_comfort(t_tilde);
            record(p_tilde);
        }
        if (p_tilde > 0.0) {
            res.t_c += duration;
            res.e_charge += p_tilde * duration;
        } else {
            res.t_d += duration;
            res.e_discharge += -p_tilde * duration;
        }
    };

    const Mode first = s.phase == Phase::up_down ? Mode::charge : Mode::discharge;
    for (int i = 0; i < s.n_cycles; ++i) {
        run_segment(first == Mode::charge ? s.delta_p : -s.delta_p, s.t_p);
        run_segment(first == Mode::charge ? -s.delta_p : s.delta_p, s.t_p);
    }
    res.t_tilde_end = t_tilde;

    if (std::fabs(t_tilde) > kTieBreak) {
        // Recover at the same amplitude until the deviation crosses zero;
        // the crossing instant is interpolated inside the final step.
        const double p_rec = t_tilde > 0.0 ? s.delta_p : -s.delta_p;
        res.recovery_mode = p_rec > 0.0 ? RecoveryMode::charge : RecoveryMode::discharge;
        const double cap = 5e7;  // [s]; generous, recovery is exponential
        double rec = 0.0;
        record(p_rec);
        while (true) {
            const double prev = t_tilde;
            t_tilde = rk4_deviation_step(t_tilde, p_rec, opts.dt, v);
            if (!std::isfinite(t_tilde))
                throw NonFiniteState("recovery integration diverged at t = " + std::to_string(now));
            if ((prev > 0.0) != (t_tilde > 0.0)) {
                const double frac = prev / (prev - t_tilde);
                rec += frac * opts.dt;
                now += frac * opts.dt;
                t_tilde = 0.0;
                record(p_rec);
                break;
            }
            rec += opts.dt;
            now += opts.dt;
            check_comfort(t_tilde);
            record(p_rec);
            if (rec > cap) throw NoConvergence("recovery did not reach zero deviation");
        }
        res.t_recov = rec;
        if (p_rec > 0.0) {
            res.t_c += rec;
            res.e_charge += p_rec * rec;
        } else {
            res.t_d += rec;
            res.e_discharge += -p_rec * rec;
        }
    }

    res.eta_rt = res.t_d / res.t_c;
    res.eta_energy = res.e_discharge / res.e_charge;
    return {std::move(trace), res};
}

std::vector<RtePoint> rte_vs_n(const ScheduleSpec& s, int n_max, const VesCoefficients& v,
                               const DeviationFrame& frame) {
    (void)frame;
    s.validate();
    if (n_max < 1) throw ConfigError("cycle sweep needs n_max >= 1");
    std::vector<RtePoint> out;
    out.reserve(static_cast<std::size_t>(n_max));
    if (s.delta_p == 0.0) {
        for (int n = 1; n <= n_max; ++n)
            out.push_back({static_cast<double>(n), 1.0, 0.0, RecoveryMode::none});
        return out;
    }
    const ChargeDischargeFlows f = charge_discharge_flows(s.delta_p, v);
    const Mode first = s.phase == Phase::up_down ? Mode::charge : Mode::discharge;
    const Mode second = s.phase == Phase::up_down ? Mode::discharge : Mode::charge;
    double t_tilde = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        t_tilde = lti_step(lti_step(t_tilde, s.t_p, first, v, f), s.t_p, second, v, f);
        const RecoveryResult rec = recovery_time(t_tilde, v, f);
        const double base = static_cast<double>(n) * s.t_p;
        const double t_c = base + (rec.mode == RecoveryMode::charge ? rec.t : 0.0);
        const double t_d = base + (rec.mode == RecoveryMode::discharge ? rec.t : 0.0);
        out.push_back({static_cast<double>(n), t_d / t_c, rec.t, rec.mode});
    }
    return out;
}

std::vector<RtePoint> rte_vs_tp(const ScheduleSpec& s, const std::vector<double>& tp_grid,
                                const VesCoefficients& v, const DeviationFrame& frame,
                                bool numeric, double dt) {
    if (tp_grid.empty()) throw ConfigError("half-period sweep grid is empty");
    std::vector<RtePoint> out;
    out.reserve(tp_grid.size());
    RunOptions opts;
    opts.dt = dt;
    opts.with_trace = false;
    for (double tp : tp_grid) {
        ScheduleSpec si = s;
        si.t_p = tp;
        const auto [trace, res] = numeric ? run_square_wave_numeric(si, v, frame, opts)
                                          : run_square_wave(si, v, frame, opts);
        out.push_back({tp, res.eta_rt, res.t_recov, res.recovery_mode});
    }
    return out;
}

std::vector<double> default_tp_grid() {
    std::vector<double> g;
    g.reserve(60);
    const double lo = 60.0, hi = 18000.0;
    for (int k = 0; k < 60; ++k)
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / 59.0));
    return g;
}

}  // namespace vesim
