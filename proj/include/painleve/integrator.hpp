#pragma once

// Adaptive Dormand-Prince 4(5) integration along the real t axis with
// semicircular detours into the complex t plane around movable poles.
//
// Because the Painleve transcendents are meromorphic, the solution is
// single-valued: continuing around a pole along either half-circle lands on
// the same (real) value on the far side. Reality of the exit state is checked,
// not assumed.

#include <optional>
#include <vector>

#include "painleve/core.hpp"

namespace painleve {

enum class DetourSide { Upper, Lower };

enum class Termination { Horizon, PoleCap, StepUnderflow };

const char* to_string(Termination termination);

struct IntegrationConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double pole_trigger = 1e3;
    /// Relative reality tolerance: |Im y| <= purity_tol * max(1, |y|) at a detour exit.
    double purity_tol = 1e-6;
    /// Endpoint of the real-axis leg. Empty means the per-equation default
    /// (-60 negative direction, +30 P-II positive, +50 toy model).
    std::optional<double> t_horizon;
    int max_poles = 200;
    double min_step = 1e-12;
    double max_step = 0.1;
    /// Detour radius is radius_fraction times the distance from the previous
    /// pole (or from t = 0), clamped to [min_radius, max_radius]. The trigger
    /// only detects the pole; the path is rewound to the entry point.
    double radius_fraction = 0.3;
    double min_radius = 1e-3;
    double max_radius = 0.5;
    DetourSide detour_side = DetourSide::Upper;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

double default_horizon(const Equation& eq, Direction direction);

struct PoleEvent {
    double location = 0.0;
    int order = 0;
    double detour_radius = 0.0;
    /// Real value of y at the detour entry point; its sign tells from which
    /// side the solution blew up.
    double entry_value = 0.0;
};

struct Trajectory {
    /// Every accepted point of the path in order, including detour arcs.
    /// Real-axis points have Im t == 0 exactly; Re t is strictly monotone.
    std::vector<State> samples;
    std::vector<PoleEvent> poles;
    double terminal_t = 0.0;
    Termination termination = Termination::Horizon;

    bool truncated() const { return termination != Termination::Horizon; }

    /// Samples with Im t == 0, in path order.
    std::vector<State> real_samples() const;
};

/// t0 = t + p * y / yp for a pole of order p. Exact on the leading Laurent term.
/// Throws DegenerateDerivative if |yp| < min_step * |y|.
cplx estimate_pole(const Equation& eq, const State& s, double min_step = 1e-12);

/// Integrates along the half-circle of `radius` centred on Re(t0), starting at
/// s (which must lie on the real axis at distance `radius` from the centre)
/// and ending on the real axis on the other side. Returns the exit state with
/// sub-tolerance imaginary parts removed. Intermediate arc points are appended
/// to `arc` when given.
State detour(const Equation& eq, const State& s, cplx t0, double radius,
             const IntegrationConfig& cfg, std::vector<State>* arc = nullptr);

Trajectory integrate(const Equation& eq, const InitialData& init, Direction direction,
                     const IntegrationConfig& cfg = {});

}  // namespace painleve
