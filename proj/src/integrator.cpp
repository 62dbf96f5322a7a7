#include "painleve/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace painleve {

const char* to_string(Termination termination) {
    switch (termination) {
        case Termination::Horizon: return "horizon";
        case Termination::PoleCap: return "pole-cap";
        case Termination::StepUnderflow: return "step-underflow";
    }
    return "unknown";
}

void IntegrationConfig::validate() const {
    auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (!(rel_tol > 0.0)) fail("rel_tol must be positive");
    if (!(abs_tol > 0.0)) fail("abs_tol must be positive");
    if (!(purity_tol > 0.0)) fail("purity_tol must be positive");
    if (!(min_step > 0.0)) fail("min_step must be positive");
    if (!(pole_trigger > 10.0)) fail("pole_trigger must exceed 10");
    if (!(max_step > min_step)) fail("max_step must exceed min_step");
    if (!(min_radius > 0.0 && max_radius >= min_radius)) fail("invalid detour radius clamp");
    if (!(radius_fraction > 0.0 && radius_fraction < 0.5)) fail("radius_fraction must lie in (0, 0.5)");
    if (max_poles < 0) fail("max_poles must be non-negative");
}

double default_horizon(const Equation& eq, Direction direction) {
    if (direction == Direction::NegativeT) return -60.0;
    return eq.kind() == EquationKind::ToyModel ? 50.0 : 30.0;
}

std::vector<State> Trajectory::real_samples() const {
    std::vector<State> out;
    for (const State& s : samples)
        if (s.t.imag() == 0.0) out.push_back(s);
    return out;
}

cplx estimate_pole(const Equation& eq, const State& s, double min_step) {
    const auto order = eq.pole_order();
    if (!order) throw Error(ErrorCode::InvalidArgument, "the toy model has no poles");
    if (std::abs(s.yp) < min_step * std::abs(s.y))
        throw Error(ErrorCode::DegenerateDerivative,
                    "cannot estimate pole location: derivative vanishes relative to y");
    return s.t + static_cast<double>(*order) * s.y / s.yp;
}

namespace {

using Vec = std::array<cplx, 2>;

// Near-pole tightening of rel_tol is capped at this factor (and at 1e-14).
constexpr double kMaxTightening = 100.0;

// The real parameter s maps to a point t(s) on the path; the ODE is carried
// over as du/ds = f(t(s), u) * t'(s).
struct AxisPath {
    cplx t(double s) const { return s; }
    cplx dt(double) const { return 1.0; }
};

struct ArcPath {
    double center;
    double radius;
    cplx t(double theta) const { return center + std::polar(radius, theta); }
    cplx dt(double theta) const { return cplx(0.0, 1.0) * std::polar(radius, theta); }
};

Vec field(const Equation& eq, cplx t, const Vec& u) {
    if (eq.kind() == EquationKind::ToyModel) return {rhs(eq, t, u[0]), 0.0};
    return {u[1], rhs(eq, t, u[0], u[1])};
}

State make_state(const Equation& eq, cplx t, const Vec& u) {
    if (eq.kind() == EquationKind::ToyModel) return {t, u[0], rhs(eq, t, u[0])};
    return {t, u[0], u[1]};
}

Vec axpy(const Vec& u, cplx h, std::initializer_list<std::pair<double, const Vec*>> terms) {
    Vec out = u;
    for (std::size_t i = 0; i < out.size(); ++i) {
        cplx acc = 0.0;
        for (const auto& [c, k] : terms) acc += c * (*k)[i];
        out[i] += h * acc;
    }
    return out;
}

enum class LegStatus { Reached, Stopped, Underflow };

struct LegResult {
    LegStatus status;
    double s;
    Vec u;
    double next_h;
};

// Dormand-Prince 5(4) with FSAL and a PI step-size controller.
template <class Path>
class Stepper {
public:
    Stepper(const Equation& eq, const Path& path, const IntegrationConfig& cfg)
        : eq_(eq), path_(path), cfg_(cfg),
          pole_exponent_(eq.pole_order() ? (2.0 * *eq.pole_order() + 2.0) / *eq.pole_order() : 0.0) {}

    Vec eval(double s, const Vec& u) const {
        const Vec f = field(eq_, path_.t(s), u);
        const cplx d = path_.dt(s);
        return {f[0] * d, f[1] * d};
    }

    // limit(s, u) bounds |h| in parameter units; on_accept(s, u) returns true
    // to end the leg after that step.
    template <class Limit, class Accept>
    LegResult run(double s, double s_end, Vec u, double h, Limit&& limit,
                  Accept&& on_accept) const {
        const double dir = s_end >= s ? 1.0 : -1.0;
        const double speed = std::abs(path_.dt(s));
        Vec k1 = eval(s, u);
        double err_prev = 1e-4;
        h = dir * std::abs(h);
        while (dir * (s_end - s) > 0.0) {
            double h_abs = std::min(std::abs(h), limit(s, u));
            bool last = false;
            if (h_abs >= dir * (s_end - s)) {
                h_abs = dir * (s_end - s);
                last = true;
            }
            if (h_abs * speed < cfg_.min_step && !last) return {LegStatus::Underflow, s, u, h};
            const double hs = dir * h_abs;

            const Vec k2 = eval(s + hs / 5.0, axpy(u, hs, {{1.0 / 5.0, &k1}}));
            const Vec k3 = eval(s + 3.0 * hs / 10.0,
                                axpy(u, hs, {{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}}));
            const Vec k4 = eval(s + 4.0 * hs / 5.0,
                                axpy(u, hs, {{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2},
                                             {32.0 / 9.0, &k3}}));
            const Vec k5 = eval(s + 8.0 * hs / 9.0,
                                axpy(u, hs, {{19372.0 / 6561.0, &k1}, {-25360.0 / 2187.0, &k2},
                                             {64448.0 / 6561.0, &k3}, {-212.0 / 729.0, &k4}}));
            const Vec k6 = eval(s + hs,
                                axpy(u, hs, {{9017.0 / 3168.0, &k1}, {-355.0 / 33.0, &k2},
                                             {46732.0 / 5247.0, &k3}, {49.0 / 176.0, &k4},
                                             {-5103.0 / 18656.0, &k5}}));
            const Vec u_new = axpy(u, hs, {{35.0 / 384.0, &k1}, {500.0 / 1113.0, &k3},
                                           {125.0 / 192.0, &k4}, {-2187.0 / 6784.0, &k5},
                                           {11.0 / 84.0, &k6}});
            const double s_new = last ? s_end : s + hs;
            const Vec k7 = eval(s_new, u_new);
            const Vec e = axpy(Vec{}, hs, {{71.0 / 57600.0, &k1}, {-71.0 / 16695.0, &k3},
                                           {71.0 / 1920.0, &k4}, {-17253.0 / 339200.0, &k5},
                                           {22.0 / 525.0, &k6}, {-1.0 / 40.0, &k7}});

            // Near a pole of order p, a relative error e in y shifts the
            // regular part of the solution by about e |y|^((2p+2)/p), so the
            // relative tolerance is tightened accordingly once |y| > 1.
            const double ymag = std::max(std::abs(u[0]), std::abs(u_new[0]));
            double rel = cfg_.rel_tol;
            if (ymag > 1.0 && pole_exponent_ > 0.0) {
                const double floor = std::max(cfg_.rel_tol / kMaxTightening, 1e-14);
                rel = std::max(rel * std::pow(ymag, -pole_exponent_), std::min(floor, rel));
            }
            double err = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double sc = cfg_.abs_tol + rel * std::max(std::abs(u[i]), std::abs(u_new[i]));
                const double r = std::abs(e[i]) / sc;
                err += r * r;
            }
            err = std::sqrt(err / static_cast<double>(u.size()));
            if (!std::isfinite(err)) err = 1e10;

            if (err <= 1.0) {
                constexpr double beta = 0.04;
                const double alpha = 0.2 - 0.75 * beta;
                double fac = 0.9 * std::pow(std::max(err, 1e-10), -alpha) *
                             std::pow(err_prev, beta);
                fac = std::clamp(fac, 0.2, 5.0);
                err_prev = std::max(err, 1e-4);
                s = s_new;
                u = u_new;
                k1 = k7;
                h = dir * h_abs * fac;
                if (on_accept(s, u) || last) {
                    const LegStatus st = last ? LegStatus::Reached : LegStatus::Stopped;
                    return {st, s, u, dir * std::max(std::abs(h), h_abs)};
                }
            } else {
                const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
                h = dir * h_abs * fac;
            }
        }
        return {LegStatus::Reached, s, u, h};
    }

private:
    const Equation& eq_;
    const Path& path_;
    const IntegrationConfig& cfg_;
    double pole_exponent_;
};

double exit_purity(const State& s) {
    const double py = std::abs(s.y.imag()) / std::max(1.0, std::abs(s.y));
    const double pyp = std::abs(s.yp.imag()) / std::max(1.0, std::abs(s.yp));
    return std::max(py, pyp);
}

}  // namespace

State detour(const Equation& eq, const State& s, cplx t0, double radius,
             const IntegrationConfig& cfg, std::vector<State>* arc) {
    if (eq.kind() == EquationKind::ToyModel)
        throw Error(ErrorCode::InvalidArgument, "the toy model has no poles");
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "detour radius must be positive");
    const double center = t0.real();
    const double offset = s.t.real() - center;
    if (s.t.imag() != 0.0 || std::abs(std::abs(offset) - radius) > 1e-9 * std::max(1.0, radius))
        throw Error(ErrorCode::InvalidArgument,
                    "detour entry must lie on the real axis at distance radius from the pole");

    // Entry to the right of the pole means we are travelling towards -inf.
    const bool from_right = offset > 0.0;
    double theta_a = from_right ? 0.0 : std::numbers::pi;
    double theta_b = 0.0;
    if (cfg.detour_side == DetourSide::Upper) {
        theta_b = from_right ? std::numbers::pi : 0.0;
    } else {
        theta_b = from_right ? -std::numbers::pi : 2.0 * std::numbers::pi;
    }

    const ArcPath path{center, radius};
    const Stepper<ArcPath> stepper(eq, path, cfg);
    const double h_max = std::min(std::numbers::pi / 16.0, cfg.max_step / radius);
    Vec u{s.y, s.yp};
    const LegResult res = stepper.run(
        theta_a, theta_b, u, std::numbers::pi / 64.0,
        [&](double, const Vec&) { return h_max; },
        [&](double theta, const Vec& v) {
            if (arc && theta != theta_b) arc->push_back(make_state(eq, path.t(theta), v));
            return false;
        });
    if (res.status == LegStatus::Underflow) {
        std::ostringstream msg;
        msg << "step size underflow on detour around t0=" << center << " (radius " << radius << ")";
        throw Error(ErrorCode::StepUnderflow, msg.str());
    }

    const double t_exit = from_right ? center - radius : center + radius;
    State out = make_state(eq, t_exit, res.u);
    const double purity = exit_purity(out);
    if (purity > cfg.purity_tol) {
        std::ostringstream msg;
        msg << "detour exit at t=" << t_exit << " has relative imaginary part " << purity
            << " > purity_tol " << cfg.purity_tol;
        throw Error(ErrorCode::PurityViolation, msg.str());
    }
    out.y = out.y.real();
    out.yp = out.yp.real();
    return out;
}

Trajectory integrate(const Equation& eq, const InitialData& init, Direction direction,
                     const IntegrationConfig& cfg) {
    cfg.validate();
    if (eq.kind() == EquationKind::ToyModel && direction != Direction::PositiveT)
        throw Error(ErrorCode::InvalidArgument, "the toy model is integrated towards +t only");
    if (eq.kind() == EquationKind::PainleveI && direction != Direction::NegativeT)
        throw Error(ErrorCode::InvalidArgument, "P-I is integrated towards -t only");
    if (init.t_start != 0.0) throw Error(ErrorCode::InvalidArgument, "t_start must be 0");

    const double dir = direction == Direction::NegativeT ? -1.0 : 1.0;
    const double horizon = cfg.t_horizon.value_or(default_horizon(eq, direction));
    if (!(dir * horizon > 0.0))
        throw Error(ErrorCode::InvalidArgument, "horizon lies on the wrong side of t = 0");

    const std::optional<int> order = eq.pole_order();
    const double p = order ? static_cast<double>(*order) : 0.0;
    auto progress = [dir](double t) { return dir * t; };

    // Estimated pole position, if the solution is heading into one.
    auto pole_ahead = [&](double t, const Vec& u) -> std::optional<double> {
        if (!order || u[1] == cplx(0.0)) return std::nullopt;
        const double t0 = (t + p * u[0] / u[1]).real();
        if (progress(t0) > progress(t)) return t0;
        return std::nullopt;
    };

    const AxisPath axis;
    const Stepper<AxisPath> stepper(eq, axis, cfg);

    Trajectory traj;
    Vec u{init.y0, init.slope0};
    if (eq.kind() == EquationKind::ToyModel) u[1] = 0.0;
    traj.samples.push_back(make_state(eq, 0.0, u));

    auto limit = [&](double t, const Vec& v) {
        double h = cfg.max_step;
        if (order && std::abs(v[0]) > 10.0) {
            if (const auto t0 = pole_ahead(t, v)) h = std::min(h, 0.25 * std::abs(*t0 - t));
        }
        return h;
    };
    auto record = [&](double t, const Vec& v) {
        traj.samples.push_back(make_state(eq, t, v));
        return false;
    };

    double t = 0.0;
    double h = std::min(cfg.max_step, 1e-2);
    // Real-axis point the next detour may not reach behind (previous exit or t = 0).
    double anchor = 0.0;

    while (true) {
        bool triggered = false;
        const LegResult leg = stepper.run(t, horizon, u, h, limit, [&](double s, const Vec& v) {
            record(s, v);
            if (order && std::abs(v[0]) >= cfg.pole_trigger && pole_ahead(s, v)) {
                triggered = true;
                return true;
            }
            return false;
        });
        t = leg.s;
        u = leg.u;
        h = leg.next_h;
        if (leg.status == LegStatus::Underflow) {
            traj.termination = Termination::StepUnderflow;
            break;
        }
        if (!triggered || leg.status == LegStatus::Reached) {
            traj.termination = Termination::Horizon;
            break;
        }
        if (static_cast<int>(traj.poles.size()) >= cfg.max_poles) {
            traj.termination = Termination::PoleCap;
            break;
        }

        const State trigger_state = traj.samples.back();
        const double center = estimate_pole(eq, trigger_state, cfg.min_step).real();
        const double spacing = std::abs(center - (traj.poles.empty() ? 0.0 : traj.poles.back().location));
        double radius = std::clamp(cfg.radius_fraction * spacing, cfg.min_radius, cfg.max_radius);
        radius = std::min(radius, 0.9 * std::abs(center - anchor));
        const double entry = center - dir * radius;

        // Move along the axis to the entry point, rewinding past samples that
        // already lie inside the detour circle.
        if (progress(t) > progress(entry)) {
            while (traj.samples.size() > 1 && progress(traj.samples.back().t.real()) > progress(entry))
                traj.samples.pop_back();
            const State& back = traj.samples.back();
            t = back.t.real();
            u = {back.y, eq.kind() == EquationKind::ToyModel ? cplx(0.0) : back.yp};
        }
        if (progress(entry) > progress(t)) {
            const LegResult approach = stepper.run(
                t, entry, u, std::min(std::abs(entry - t), 0.25 * radius),
                [&](double, const Vec&) { return cfg.max_step; }, record);
            if (approach.status == LegStatus::Underflow) {
                traj.termination = Termination::StepUnderflow;
                break;
            }
            u = approach.u;
            t = entry;
        }

        const State entry_state = make_state(eq, entry, u);
        const State exit = detour(eq, entry_state, center, radius, cfg, &traj.samples);
        traj.samples.push_back(exit);
        traj.poles.push_back({center, *order, radius, trigger_state.y.real()});
        t = exit.t.real();
        u = {exit.y, exit.yp};
        h = 0.25 * radius;
        anchor = t;
    }

    traj.terminal_t = traj.samples.back().t.real();
    return traj;
}

}  // namespace painleve
