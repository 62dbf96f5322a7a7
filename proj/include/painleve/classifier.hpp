#pragma once

#include <string>
#include <utility>

#include "painleve/integrator.hpp"

namespace painleve {

enum class SolutionTag {
    SeparatrixPlus,
    SeparatrixMinus,
    StableOscillation,
    PoleCascade,
    DecayToZero,
    DivergentPositive,
    DivergentNegative,
};

const char* to_string(SolutionTag tag);

/// Plus <-> Minus and DivergentPositive <-> DivergentNegative; other tags map to themselves.
SolutionTag mirrored(SolutionTag tag);

struct ClassifierConfig {
    /// Length (in |t|) of the trailing window the terminal behaviour is read from.
    double window = 10.0;
    /// Relative band |y - branch| <= separatrix_band * |branch| for a separatrix.
    double separatrix_band = 1e-3;
    /// Windowed mean of y within oscillation_band * |branch| of the stable centre.
    double oscillation_band = 0.25;
    /// |y| threshold for decay towards zero (P-II, positive direction).
    double decay_threshold = 1e-6;
};

struct SolutionClass {
    SolutionTag tag;
    int pole_count = 0;
    /// Range of t over which the tag was established, ordered (lower, upper).
    std::pair<double, double> confidence_window{0.0, 0.0};
};

/// Terminal behaviour of a P-I or P-II trajectory.
///
/// Negative direction: a pole inside the trailing window (or the pole cap)
/// means PoleCascade; otherwise y is compared with the unstable branches
/// (separatrix) and with the stable centre, -sqrt(-t/6) for P-I and 0 for
/// P-II (oscillation).
///
/// Positive direction (P-II): integration normally stops at a pole cap; the
/// tag is the sign of y on the way into the first pole past the cap, i.e.
/// the direction the solution escapes after `pole_count` poles. A trajectory
/// that reaches the horizon decaying below decay_threshold is DecayToZero;
/// one that still meets a pole inside the trailing window is PoleCascade.
///
/// Throws AmbiguousClassification when no criterion applies.
SolutionClass classify(const Equation& eq, const Trajectory& traj, Direction direction,
                       const ClassifierConfig& cfg = {});

/// Local maxima of y(t) on t > 0 for a toy-model trajectory, read from
/// + to - sign changes of y' between consecutive real samples.
int count_toy_maxima(const Trajectory& traj);

/// Copy of the trajectory cut at the first real sample at or beyond `t_end`
/// in the direction of integration.
Trajectory truncate_at(const Trajectory& traj, double t_end);

}  // namespace painleve
